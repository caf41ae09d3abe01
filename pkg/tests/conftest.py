import sys

import numpy as np
import pytest

import gen


@pytest.fixture
def rng():
    """Generator seeded from AIP_SEED (default fixed)."""
    return gen.rng()


def pytest_report_header(config):
    return f"AIP_SEED={gen.seed()}"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in mod.CRITERIA:
        if cid in mod.RESULTS:
            terminalreporter.write_line(mod.format_line(cid))
