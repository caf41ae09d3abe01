import numpy as np
import pytest

import gen
from aipkit import aip, matkit as mk, oracle as orc, problems as pr
from aipkit.errors import BoundaryNotSelfadjoint
from aipkit.nevanlinna import DEFAULT_GRID, ConstantPair


@pytest.fixture
def regular():
    return pr.build_truncated_moment(pr.MomentSequence((1.0, 0.0, 1.0)))


def test_extension_spec_selfadjointness():
    orc.ExtensionSpec.graph([[2.0]]).check_selfadjoint()
    orc.ExtensionSpec.infinity(2).check_selfadjoint()
    with pytest.raises(BoundaryNotSelfadjoint):
        orc.ExtensionSpec.graph([[1j]]).check_selfadjoint()
    with pytest.raises(BoundaryNotSelfadjoint):
        orc.ExtensionSpec.general(np.zeros((1, 1)), np.zeros((1, 1))).check_selfadjoint()


def test_green_identity_on_adjoint(rng, regular):
    model = orc.AdjointRelationModel(regular)
    r, d = model.r, model.d
    for _ in range(5):
        f = model.element(gen.crandn(rng, r), gen.crandn(rng, d), gen.crandn(rng, d))
        g = model.element(gen.crandn(rng, r), gen.crandn(rng, d), gen.crandn(rng, d))
        assert model.adjoint_residual(f) < 1e-14
        assert orc.green_residual(model, f, g) < 1e-12


def test_symmetric_part_has_zero_boundary_values(rng):
    spec, _ = gen.tangential_from_function(rng, 2, 3)
    data = pr.build_tangential(spec)
    model = orc.AdjointRelationModel(data, mu=0.4)
    el = model.generator_of_A(gen.crandn(rng, model.r))
    g1, g2 = orc.boundary_map(model, el)
    assert mk.norm(g1) + mk.norm(g2) < 1e-12


def test_defect_dimension(regular):
    model = orc.AdjointRelationModel(regular)
    assert orc.defect_dimension(model, 1j) == 1


def test_weyl_function_of_graph_extension(regular):
    model = orc.AdjointRelationModel(regular)
    th = aip.build_theta(regular)
    for q, p, f in [(1.0, 0.0, lambda z: -1 / z), (0.0, 1.0, lambda z: z / (1 - z * z))]:
        ext = orc.extension_for_parameter(th, ConstantPair([[q]], [[p]]))
        for z in DEFAULT_GRID:
            assert orc.l_resolvent_direct(model, ext, z).m[0, 0] == pytest.approx(f(z), rel=1e-12)


def test_spectral_measure_of_relation_extension(regular):
    # (q, p) = (0, 1) gives a non-graph extension with measure (delta_1 + delta_-1) / 2
    model = orc.AdjointRelationModel(regular)
    th = aip.build_theta(regular)
    meas = orc.spectral_measure_direct(model, orc.extension_for_parameter(th, ConstantPair([[0.0]], [[1.0]])))
    assert np.allclose(meas.atoms, [-1.0, 1.0]) and np.allclose(meas.weights.ravel(), [0.5, 0.5])


def test_singular_case_spectral_measure():
    data = pr.build_truncated_moment(pr.MomentSequence((1.0, 1.0, 1.0)))
    th = aip.build_theta(data)
    model = orc.model_for_theta(th)
    meas = orc.spectral_measure_direct(model, orc.extension_for_parameter(th, aip.forced_parameter(1, th.nu)))
    assert np.allclose(meas.atoms, [1.0]) and np.allclose(meas.weights.ravel(), [1.0])


@pytest.mark.parametrize("mu", [0.0, 0.7, -1.3])
def test_shifted_dictionary_agrees_with_lft(rng, mu):
    spec, _ = gen.tangential_from_function(rng, 2, 3)
    th = aip.build_theta_shifted(pr.build_tangential(spec), mu)
    model = orc.model_for_theta(th)
    for _ in range(3):
        param = gen.random_function_parameter(rng, 2)
        sol = aip.lft_solve(th, param)
        ext = orc.extension_for_parameter(th, param)
        for z in DEFAULT_GRID:
            res = orc.l_resolvent_direct(model, ext, z)
            assert mk.norm(sol.pair(z)[1] - res.psi) <= 1e-10 * max(mk.norm(res.phi), 1.0)


def test_kernel_factorization(rng, regular):
    model = orc.AdjointRelationModel(regular)
    ext = orc.ExtensionSpec.graph([[0.3]])
    for a, b in [(1j, 2j), (1 + 1j, -1 - 2j), (-1j, 1 - 1j)]:
        assert orc.kernel_factorization_residual(model, ext, a, b) < 1e-12
