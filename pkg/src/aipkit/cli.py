"""Command line front end: ``aip validate|solve|verify|oracle-check|sample``.

Problem files are JSON.  Complex numbers are ``[re, im]`` pairs (a bare
number is real), matrices are row-major nested lists, and a bare number or
pair stands for a 1 x 1 matrix.  Reports are JSON written with 17 significant
digits and a fixed key order, so identical inputs give identical bytes.

Exit status: 0 when every hard check passes, 1 on verification failures,
2 on input errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Annotated, Any, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, StrictFloat, StrictInt, ValidationError

from . import __version__
from . import matkit as mk
from . import problems as pr
from .aip import (
    AipDataSet,
    ThetaRealization,
    build_theta_auto,
    forced_parameter,
    lft_solve,
    make_data,
    theta_j_checks,
    validate_data,
)
from .errors import (
    AipError,
    InadmissibleParameter,
    ParseError,
    PoleAtPoint,
    ResonantSpectrum,
    SchemaVersionUnsupported,
    ShiftNotRegular,
    Singular,
)
from .matkit import DEFAULT_TOL, Tolerance
from .nevanlinna import (
    DEFAULT_GRID,
    ConstantPair,
    DiscreteMeasure,
    HerglotzFunction,
    NevanlinnaObject,
    membership_check,
)
from .oracle import (
    extension_for_parameter,
    kernel_factorization_residual,
    l_resolvent_direct,
    model_for_theta,
)
from .report import VerificationReport

SCHEMA_VERSION = "1.0"
SUPPORTED_VERSIONS = ("1.0",)
ORACLE_RTOL = 1e-8
INTERP_TOL = 1e-8
# errors caused by what the user asked for rather than by failed verification
INPUT_ERRORS = (ParseError, InadmissibleParameter, ResonantSpectrum, ShiftNotRegular)

# ---------------------------------------------------------------- schema

Num = Union[StrictInt, StrictFloat]
ComplexIn = Union[Num, tuple[Num, Num]]
MatrixIn = Union[Num, tuple[Num, Num], list[list[ComplexIn]]]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class NodeIn(_Model):
    lam: ComplexIn = Field(alias="lambda")
    multiplicity: int = Field(1, ge=1)


class TangentialIn(_Model):
    kind: Literal["tangential"]
    nodes: list[NodeIn] = Field(min_length=1)
    xi: MatrixIn
    eta: MatrixIn
    pick: Optional[MatrixIn] = None


class MomentIn(_Model):
    kind: Literal["truncated_moment"]
    moments: list[MatrixIn] = Field(min_length=1)


class RawIn(_Model):
    kind: Literal["raw_aip"]
    B1: MatrixIn
    B2: MatrixIn
    C1: MatrixIn
    C2: MatrixIn
    K: MatrixIn
    x0_basis: Optional[MatrixIn] = None
    ker_basis: Optional[MatrixIn] = None
    X: Optional[MatrixIn] = None
    V: Optional[MatrixIn] = None


class ConstantIn(_Model):
    kind: Literal["constant"]
    q: MatrixIn
    p: MatrixIn


class AffineIn(_Model):
    kind: Literal["affine"]
    alpha: MatrixIn
    beta: MatrixIn


class AtomIn(_Model):
    t: Num
    W: MatrixIn


class HerglotzIn(_Model):
    kind: Literal["herglotz"]
    atoms: list[AtomIn] = Field(default_factory=list)
    alpha: Optional[MatrixIn] = None
    beta: Optional[MatrixIn] = None


class ForcedIn(_Model):
    kind: Literal["forced"]


class TolIn(_Model):
    abs: Optional[float] = Field(None, ge=0)
    rel: Optional[float] = Field(None, ge=0)


ProblemIn = Annotated[Union[TangentialIn, MomentIn, RawIn], Field(discriminator="kind")]
ParamIn = Annotated[Union[ConstantIn, AffineIn, HerglotzIn, ForcedIn], Field(discriminator="kind")]


class ProblemFileIn(_Model):
    schema_version: str
    problem: ProblemIn
    parameters: list[ParamIn] = Field(default_factory=list)
    grid: Optional[list[ComplexIn]] = None
    tolerances: Optional[TolIn] = None
    mu: Optional[Num] = None


# ---------------------------------------------------------------- conversion


def to_complex(x) -> complex:
    if isinstance(x, (tuple, list)):
        return complex(float(x[0]), float(x[1]))
    return complex(float(x))


def to_matrix(x, where: str = "matrix") -> np.ndarray:
    if isinstance(x, (int, float)) or (isinstance(x, tuple) and len(x) == 2):
        return np.array([[to_complex(x)]])
    rows = [[to_complex(e) for e in row] for row in x]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ParseError(f"{where}: rows must be non-empty and of equal length")
    A = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise ParseError(f"{where}: non-finite entries")
    return A


def complex_out(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def matrix_out(A) -> list:
    """Matrix as nested ``[re, im]`` entries (real entries stay plain numbers)."""
    A = np.asarray(A, dtype=complex)
    if np.all(A.imag == 0):
        return [[float(v) for v in row] for row in A.real]
    return [[complex_out(v) for v in row] for row in A]


@dataclass
class Problem:
    """Parsed problem file."""

    kind: str
    spec: Any  # TangentialSpec, MomentSequence or dict of raw matrices
    parameters: list  # (kind, NevanlinnaObject or None for "forced")
    grid: tuple
    tol: Tolerance
    mu: float | None = None
    V: np.ndarray | None = None
    digest: str = ""
    explicit_grid: bool = False


def _format_validation(err: ValidationError) -> str:
    lines = []
    for e in err.errors()[:10]:
        loc = ".".join(str(p) for p in e["loc"])
        lines.append(f"{loc}: {e['msg']}")
    return "; ".join(lines)


def parse_problem(text: str, tol_abs: float | None = None, tol_rel: float | None = None) -> Problem:
    """Parse and validate the text of a problem file.

    Raises
    ------
    ParseError, SchemaVersionUnsupported
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError("top level must be a JSON object")
    if "schema_version" not in raw:
        raise ParseError("schema_version: field required")
    if raw["schema_version"] not in SUPPORTED_VERSIONS:
        raise SchemaVersionUnsupported(
            f"schema_version {raw['schema_version']!r} not supported (expected one of {SUPPORTED_VERSIONS})"
        )
    try:
        doc = ProblemFileIn.model_validate(raw)
    except ValidationError as exc:
        raise ParseError(_format_validation(exc)) from exc

    t = doc.tolerances or TolIn()
    a = tol_abs if tol_abs is not None else (t.abs if t.abs is not None else DEFAULT_TOL.abs)
    r = tol_rel if tol_rel is not None else (t.rel if t.rel is not None else DEFAULT_TOL.rel)
    try:
        tol = Tolerance(abs=a, rel=r)
    except ValueError as exc:
        raise ParseError(f"tolerances: {exc}") from exc

    P = doc.problem
    try:
        if isinstance(P, TangentialIn):
            nodes = [pr.Node(to_complex(n.lam), n.multiplicity) for n in P.nodes]
            pick = None if P.pick is None else to_matrix(P.pick, "problem.pick")
            spec = pr.TangentialSpec(nodes, to_matrix(P.xi, "problem.xi"),
                                     to_matrix(P.eta, "problem.eta"), pick)
            d = spec.d
        elif isinstance(P, MomentIn):
            spec = pr.MomentSequence(tuple(to_matrix(m, f"problem.moments.{k}")
                                           for k, m in enumerate(P.moments)))
            d = spec.d
        else:
            spec = {k: (None if getattr(P, k) is None else to_matrix(getattr(P, k), f"problem.{k}"))
                    for k in ("B1", "B2", "C1", "C2", "K", "x0_basis", "ker_basis", "X")}
            d = spec["C1"].shape[0]
    except ParseError:
        raise
    except (ValueError, AipError) as exc:
        raise ParseError(f"problem: {exc}") from exc

    V = None
    if isinstance(P, RawIn) and P.V is not None:
        V = to_matrix(P.V, "problem.V")
        if V.shape != (2 * d, 2 * d):
            raise ParseError(f"problem.V: expected shape {(2 * d, 2 * d)}, got {V.shape}")

    params = []
    for k, q in enumerate(doc.parameters):
        where = f"parameters.{k}"
        try:
            if isinstance(q, ConstantIn):
                obj = ConstantPair(to_matrix(q.q, where + ".q"), to_matrix(q.p, where + ".p"))
            elif isinstance(q, AffineIn):
                obj = HerglotzFunction(to_matrix(q.alpha, where + ".alpha"), to_matrix(q.beta, where + ".beta"))
            elif isinstance(q, HerglotzIn):
                zero = np.zeros((d, d))
                if q.atoms:
                    meas = DiscreteMeasure(np.array([float(a.t) for a in q.atoms]),
                                           np.array([to_matrix(a.W, where + ".W") for a in q.atoms]))
                else:
                    meas = DiscreteMeasure.empty(d)
                alpha = zero if q.alpha is None else to_matrix(q.alpha, where + ".alpha")
                beta = zero if q.beta is None else to_matrix(q.beta, where + ".beta")
                obj = HerglotzFunction(alpha, beta, meas)
            else:
                obj = None
        except ParseError:
            raise
        except (ValueError, AipError) as exc:
            raise ParseError(f"{where}: {exc}") from exc
        if obj is not None and obj.d != d:
            raise ParseError(f"{where}: parameter has size {obj.d}, problem has d = {d}")
        params.append((q.kind, obj))

    grid = DEFAULT_GRID if doc.grid is None else tuple(to_complex(z) for z in doc.grid)
    for z in grid:
        if z.imag == 0:
            raise ParseError("grid: points must be non-real")
    digest = "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()
    return Problem(P.kind, spec, params, tuple(grid), tol,
                   None if doc.mu is None else float(doc.mu), V, digest, doc.grid is not None)


def load_problem(path: str, tol_abs=None, tol_rel=None) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_problem(text, tol_abs, tol_rel)


def _param_to_dict(kind: str, obj: NevanlinnaObject | None) -> dict:
    if kind == "forced":
        return {"kind": "forced"}
    if isinstance(obj, ConstantPair):
        return {"kind": "constant", "q": matrix_out(obj.q), "p": matrix_out(obj.p)}
    if kind == "affine":
        return {"kind": "affine", "alpha": matrix_out(obj.alpha), "beta": matrix_out(obj.beta)}
    return {
        "kind": "herglotz",
        "atoms": [{"t": float(t), "W": matrix_out(W)} for t, W in zip(obj.measure.atoms, obj.measure.weights)],
        "alpha": matrix_out(obj.alpha),
        "beta": matrix_out(obj.beta),
    }


def problem_to_dict(problem: Problem) -> dict:
    """Inverse of `parse_problem` (up to the digest)."""
    s = problem.spec
    if problem.kind == "tangential":
        body = {
            "kind": "tangential",
            "nodes": [{"lambda": complex_out(n.lam), "multiplicity": n.multiplicity} for n in s.nodes],
            "xi": matrix_out(s.xi),
            "eta": matrix_out(s.eta),
        }
        if s.pick is not None:
            body["pick"] = matrix_out(s.pick)
    elif problem.kind == "truncated_moment":
        body = {"kind": "truncated_moment", "moments": [matrix_out(m) for m in s.s]}
    else:
        body = {"kind": "raw_aip"}
        for k in ("B1", "B2", "C1", "C2", "K", "x0_basis", "ker_basis", "X"):
            if s.get(k) is not None:
                body[k] = matrix_out(s[k])
        if problem.V is not None:
            body["V"] = matrix_out(problem.V)
    out = {
        "schema_version": SCHEMA_VERSION,
        "problem": body,
        "parameters": [_param_to_dict(k, o) for k, o in problem.parameters],
        "grid": [complex_out(z) for z in problem.grid],
        "tolerances": {"abs": problem.tol.abs, "rel": problem.tol.rel},
    }
    if problem.mu is not None:
        out["mu"] = problem.mu
    return out


# ---------------------------------------------------------------- output


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with 17 significant digits for floats."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps(complex_out(obj), indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_problem(problem: Problem) -> str:
    return dumps(problem_to_dict(problem)) + "\n"


def _fnum(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(header: Sequence[str], rows: Sequence[Sequence], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fnum(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _report_doc(command: str, problem: Problem, rep: VerificationReport, extra: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": f"aipkit {__version__}",
        "command": command,
        "input_digest": problem.digest,
        "problem_kind": problem.kind,
        "grid": [complex_out(z) for z in problem.grid],
        "tolerances": {"abs": problem.tol.abs, "rel": problem.tol.rel},
        "passed": rep.passed,
        "checks": [c.to_dict() for c in rep.checks],
    }
    if extra:
        doc.update(extra)
    return doc


# ---------------------------------------------------------------- numerics


def build_problem_data(problem: Problem) -> AipDataSet:
    s, tol = problem.spec, problem.tol
    if problem.kind == "tangential":
        return pr.build_tangential(s, tol)
    if problem.kind == "truncated_moment":
        return pr.build_truncated_moment(s, tol)
    try:
        return make_data(s["B1"], s["B2"], s["C1"], s["C2"], s["K"], x0_basis=s["x0_basis"],
                         ker_basis=s["ker_basis"], X=s["X"], tol=tol)
    except AipError:
        raise
    except ValueError as exc:
        raise ParseError(f"problem: {exc}") from exc


def build_problem_theta(problem: Problem, data: AipDataSet, canonical: bool = False) -> ThetaRealization:
    """Theta for the problem; the file's V replaces the computed one unless `canonical`."""
    theta = build_theta_auto(data, problem.mu, problem.tol)
    if problem.V is None or canonical:
        return theta
    S = theta.M @ mk.inverse(theta.V)
    return dataclasses.replace(theta, V=problem.V, M=S @ problem.V)


def resolve_parameter(problem: Problem, theta: ThetaRealization, k: int) -> NevanlinnaObject:
    if not 0 <= k < len(problem.parameters):
        raise ParseError(f"--param {k}: file has {len(problem.parameters)} parameter(s)")
    kind, obj = problem.parameters[k]
    if kind == "forced":
        return forced_parameter(theta.d, theta.nu)
    return obj


def _construction_failure(rep: VerificationReport, exc: Exception) -> None:
    rep.add("construction", "data set construction", math.inf, 0.0, False,
            detail=f"{type(exc).__name__}: {exc}")


def validation_report(problem: Problem) -> tuple[VerificationReport, AipDataSet | None]:
    rep = VerificationReport()
    tol = problem.tol
    if problem.kind == "truncated_moment":
        rep.extend(pr.hankel_exactness(problem.spec, tol), "hankel.")
    elif problem.kind == "tangential":
        spec = problem.spec
        P = spec.pick
        if P is None:
            P = mk.solve_lyapunov_pick(pr.jordan_matrix(spec.nodes), spec.xi, spec.eta, tol)
        _, lo = mk.psd_check(mk.hermitian_part(P), tol)
        rep.add("pick_psd", "Pick matrix nonnegative", max(0.0, -lo), tol.bound(mk.norm(P)))
    try:
        data = build_problem_data(problem)
    except INPUT_ERRORS:
        raise
    except AipError as exc:
        _construction_failure(rep, exc)
        return rep, None
    rep.extend(validate_data(data, tol), "data.")
    return rep, data


def _safe_value(sol: NevanlinnaObject, lam: complex):
    try:
        return sol.value(lam)
    except (PoleAtPoint, Singular):
        return None


def solution_report(problem: Problem, data: AipDataSet, theta: ThetaRealization,
                    sol, kind: str) -> VerificationReport:
    """Membership, J-property and problem-specific checks of one solution."""
    rep = VerificationReport()
    grid = problem.grid
    rep.extend(membership_check(sol, grid), "membership.")
    if problem.kind == "tangential":
        spec = problem.spec
        try:
            res = pr.interpolation_residual(spec, sol, data)
        except AipError as exc:
            rep.add("interpolation", "interpolation conditions", math.inf, INTERP_TOL, False, detail=str(exc))
        else:
            rep.add("interpolation", "interpolation conditions", res, INTERP_TOL)
        if spec.simple:
            try:
                M = pr.parseval_matrix(spec, sol)
                D = mk.hermitian_part(data.K - M)
                lo = float(np.linalg.eigvalsh(D)[0])
                rep.add("pick_parseval_defect", "Pick minus Parseval matrix nonnegative",
                        max(0.0, -lo), INTERP_TOL)
                rep.add("parseval_equality", "Parseval equality", mk.norm(D), INTERP_TOL, hard=False)
            except AipError as exc:
                rep.add("pick_parseval_defect", "Pick minus Parseval matrix nonnegative",
                        math.inf, INTERP_TOL, False, detail=str(exc))
    elif problem.kind == "truncated_moment":
        ms = problem.spec
        if kind in ("constant", "forced"):
            try:
                meas = pr.extract_measure(sol, grid)
            except (AipError, ValueError) as exc:
                rep.add("measure_extraction", "discrete measure of the solution", math.inf, 0.0, False,
                        detail=f"{type(exc).__name__}: {exc}")
            else:
                rep.add("measure_extraction", "discrete measure of the solution", 0.0, 0.0,
                        detail=f"{len(meas)} atom(s)")
                rep.extend(pr.verify_moments(meas, ms, problem.tol), "moments.")
        asym = pr.stieltjes_asymptotics_check(sol, ms)
        for c in asym.checks:
            c.hard = False
        rep.extend(asym, "asymptotics.")
    return rep


def _oracle_deviation(problem: Problem, theta, canonical, sol, param) -> float:
    model = model_for_theta(canonical)
    ext = extension_for_parameter(canonical, param)
    worst = 0.0
    for z in problem.grid:
        phi, psi = sol.pair(z)
        res = l_resolvent_direct(model, ext, z)
        scale = max(mk.norm(res.phi), mk.norm(res.psi))
        worst = max(worst, mk.norm(psi - res.psi) / scale)
    return worst


def oracle_report(problem: Problem, data: AipDataSet, theta: ThetaRealization) -> VerificationReport:
    rep = VerificationReport()
    canonical = build_problem_theta(problem, data, canonical=True)
    model = model_for_theta(canonical)
    grid = problem.grid
    for k, (kind, _) in enumerate(problem.parameters):
        name = f"param{k}."
        param = resolve_parameter(problem, theta, k)
        if not isinstance(param, ConstantPair):
            rep.add(name + "oracle_agreement", "L-resolvent agreement", 0.0, 0.0, True, hard=False,
                    detail="skipped: parameter is not constant")
            continue
        try:
            sol = lft_solve(theta, param)
            dev = _oracle_deviation(problem, theta, canonical, sol, param)
        except AipError as exc:
            rep.add(name + "oracle_agreement", "L-resolvent agreement", math.inf, ORACLE_RTOL, False,
                    detail=f"{type(exc).__name__}: {exc}")
            continue
        rep.add(name + "oracle_agreement", "L-resolvent agreement", dev, ORACLE_RTOL)
        ext = extension_for_parameter(canonical, param)
        worst = 0.0
        for a, b in zip(grid, grid[1:] + grid[:1]):
            worst = max(worst, kernel_factorization_residual(model, ext, a, b))
        rep.add(name + "kernel_factorization", "kernel factorization", worst, 1e-9)
    return rep


# ---------------------------------------------------------------- grids and segments


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t in ("j", "+j"):
        return 1j
    if t == "-j":
        return -1j
    try:
        return complex(t)
    except ValueError as exc:
        raise ParseError(f"cannot parse complex number {text!r}") from exc


def parse_segment(spec: str) -> list[complex]:
    """Points of a segment.

    ``imag:a:b:n[:log|lin]`` gives ``i R`` for n values of R in [a, b],
    ``real:a:b:n`` gives n real points and ``line:z0:z1:n`` joins two complex
    numbers.
    """
    parts = spec.split(":")
    try:
        kind = parts[0]
        if kind in ("imag", "real"):
            if len(parts) not in (4, 5):
                raise ValueError
            a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
            scale = parts[4] if len(parts) == 5 else "lin"
            if scale == "log":
                if a <= 0 or b <= 0:
                    raise ParseError(f"segment {spec!r}: log spacing needs positive bounds")
                vals = np.geomspace(a, b, n)
            elif scale == "lin":
                vals = np.linspace(a, b, n)
            else:
                raise ValueError
            return [complex(0, v) if kind == "imag" else complex(v) for v in vals]
        if kind == "line" and len(parts) == 4:
            z0, z1, n = parse_complex(parts[1]), parse_complex(parts[2]), int(parts[3])
            return [complex(z) for z in np.linspace(z0, z1, n)]
    except ParseError:
        raise
    except ValueError:
        pass
    raise ParseError(f"bad segment {spec!r}; use imag:a:b:n[:log|lin], real:a:b:n or line:z0:z1:n")


def parse_grid(spec: str | None, problem: Problem) -> tuple:
    if spec is None or spec == "default":
        return problem.grid
    if ":" in spec:
        return tuple(parse_segment(spec))
    return tuple(parse_complex(s) for s in spec.split(",") if s.strip())


# ---------------------------------------------------------------- sampling


def _entry_names(prefix: str, d1: int, d2: int) -> list[str]:
    out = []
    for a in range(d1):
        for b in range(d2):
            out += [f"re_{prefix}_{a}{b}", f"im_{prefix}_{a}{b}"]
    return out


def _entries(A, d1: int, d2: int) -> list[float]:
    if A is None:
        return [math.nan] * (2 * d1 * d2)
    out = []
    for v in np.asarray(A).reshape(d1, d2).ravel():
        out += [float(v.real), float(v.imag)]
    return out


def sample_rows(problem: Problem, theta: ThetaRealization, sol, points,
                with_theta: bool = False) -> tuple[list[str], list[list]]:
    """CSV header and rows for `sol` (and optionally Theta) at `points`.

    Pair-valued solutions (no function form at ``lam = i``) are written as the
    normalized pair (phi, psi).  Rows at poles carry ``pole = 1`` and NaNs.
    """
    d = theta.d
    pair_valued = _safe_value(sol, 1j) is None
    header = ["re_lambda", "im_lambda", "pole"]
    header += _entry_names("phi", d, d) + _entry_names("psi", d, d) if pair_valued else _entry_names("m", d, d)
    ms = problem.spec if problem.kind == "truncated_moment" else None
    if with_theta:
        header += _entry_names("theta", 2 * d, 2 * d)
    if ms is not None:
        header += [f"asym_{j}" for j in range(1, 2 * ms.n + 1)]
    rows = []
    for z in points:
        z = complex(z)
        pole = 0
        if pair_valued:
            try:
                phi, psi = sol.pair(z)
            except (PoleAtPoint, Singular):
                phi = psi = None
                pole = 1
            vals = _entries(phi, d, d) + _entries(psi, d, d)
            m = None
        else:
            m = _safe_value(sol, z)
            pole = int(m is None)
            vals = _entries(m, d, d)
        row = [z.real, z.imag, pole] + vals
        if with_theta:
            try:
                T = theta(z)
            except (PoleAtPoint, Singular):
                T = None
                row[2] = 1
            row += _entries(T, 2 * d, 2 * d)
        if ms is not None:
            for j in range(1, 2 * ms.n + 1):
                if m is None or z == 0:
                    row.append(math.nan)
                    continue
                tail = sum(ms.s[k] / z ** (k + 1) for k in range(j))
                row.append(mk.norm(m + tail) * abs(z) ** j)
        rows.append(row)
    return header, rows


def _value_samples(sol, points) -> list:
    out = []
    for z in points:
        m = _safe_value(sol, z)
        out.append({"lambda": complex_out(z), "m": None if m is None else matrix_out(m)})
    return out


# ---------------------------------------------------------------- commands


def _emit(doc: dict, path: str | None) -> None:
    text = dumps(doc) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    problem = load_problem(args.file, args.tol_abs, args.tol_rel)
    rep, _ = validation_report(problem)
    _emit(_report_doc("validate", problem, rep), args.report)
    return 0 if rep.passed else 1


def _prepare(args):
    problem = load_problem(args.file, args.tol_abs, args.tol_rel)
    rep, data = validation_report(problem)
    if data is None:
        return problem, rep, None, None
    try:
        theta = build_problem_theta(problem, data)
    except INPUT_ERRORS:
        raise
    except AipError as exc:
        _construction_failure(rep, exc)
        return problem, rep, data, None
    rep.extend(theta_j_checks(theta, problem.grid), "theta.")
    return problem, rep, data, theta


def cmd_solve(args) -> int:
    problem, rep, data, theta = _prepare(args)
    extra = {}
    if theta is not None:
        param = resolve_parameter(problem, theta, args.param)
        sol = lft_solve(theta, param)
        kind = problem.parameters[args.param][0]
        rep.extend(solution_report(problem, data, theta, sol, kind), f"param{args.param}.")
        points = parse_grid(args.grid, problem)
        extra["parameter_index"] = args.param
        extra["samples"] = _value_samples(sol, points)
        if args.out:
            header, rows = sample_rows(problem, theta, sol, points)
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                write_csv(header, rows, fh)
    _emit(_report_doc("solve", problem, rep, extra), args.report)
    return 0 if rep.passed else 1


def cmd_verify(args) -> int:
    problem, rep, data, theta = _prepare(args)
    if theta is not None:
        for k in range(len(problem.parameters)):
            param = resolve_parameter(problem, theta, k)
            try:
                sol = lft_solve(theta, param)
            except InadmissibleParameter as exc:
                rep.add(f"param{k}.admissible", "admissible parameter", math.inf, 0.0, False, detail=str(exc))
                continue
            rep.extend(solution_report(problem, data, theta, sol, problem.parameters[k][0]), f"param{k}.")
    _emit(_report_doc("verify", problem, rep), args.report)
    return 0 if rep.passed else 1


def cmd_oracle_check(args) -> int:
    problem, rep, data, theta = _prepare(args)
    if theta is not None:
        rep.extend(oracle_report(problem, data, theta))
    _emit(_report_doc("oracle-check", problem, rep), args.report)
    return 0 if rep.passed else 1


def cmd_sample(args) -> int:
    problem = load_problem(args.file, args.tol_abs, args.tol_rel)
    points = []
    for seg in args.segment:
        points += parse_segment(seg)
    data = build_problem_data(problem)
    theta = build_problem_theta(problem, data)
    param = resolve_parameter(problem, theta, args.param)
    sol = lft_solve(theta, param)
    header, rows = sample_rows(problem, theta, sol, points, args.theta)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(header, rows, fh)
    else:
        buf = io.StringIO()
        write_csv(header, rows, buf)
        sys.stdout.write(buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-abs", type=float, default=None, help="absolute tolerance override")
    common.add_argument("--tol-rel", type=float, default=None, help="relative tolerance override")
    common.add_argument("--report", default=None, help="write the JSON report here instead of stdout")

    ap = argparse.ArgumentParser(prog="aip", description="Matrix Nevanlinna interpolation problems.")
    ap.add_argument("--version", action="version", version=f"aipkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the problem data")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", parents=[common], help="solve for one parameter")
    p.add_argument("file")
    p.add_argument("--param", type=int, required=True, help="parameter index in the file")
    p.add_argument("--grid", default=None,
                   help="'default', comma separated points (e.g. 1j,2+1j) or a segment spec")
    p.add_argument("--out", default=None, help="CSV file for the samples")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="verify the solutions of every parameter")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle-check", parents=[common], help="compare with selfadjoint extensions")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("sample", parents=[common], help="sample a solution along segments")
    p.add_argument("file")
    p.add_argument("--segment", action="append", required=True,
                   help="imag:a:b:n[:log|lin], real:a:b:n or line:z0:z1:n (repeatable)")
    p.add_argument("--param", type=int, default=0)
    p.add_argument("--theta", action="store_true", help="add the entries of Theta")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    for name in ("tol_abs", "tol_rel"):
        v = getattr(args, name, None)
        if v is not None and not (v >= 0 and math.isfinite(v)):
            print(f"error: --{name.replace('_', '-')} must be a finite nonnegative number", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except AipError as exc:
        print(f"verification error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
