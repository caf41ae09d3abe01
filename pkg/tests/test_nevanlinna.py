import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aipkit import matkit as mk
from aipkit.errors import NonRealPole
from aipkit.nevanlinna import (
    AffineFunction,
    ConstantPair,
    DiscreteMeasure,
    HerglotzOfMeasure,
    NevanlinnaObject,
    herglotz_from_poles,
    kernel_value,
    membership_check,
    normalize,
)


class _Neg(NevanlinnaObject):
    """m(lam) = -lam, not a Nevanlinna function."""

    d = 1

    def pair(self, lam):
        return np.eye(1, dtype=complex), np.array([[-lam]])


def test_measure_moments_and_transform():
    mu = DiscreteMeasure([1.0, -1.0], np.array([[[0.5]], [[0.5]]]))
    assert list(mu.atoms) == [-1.0, 1.0]
    assert [mu.moment(j)[0, 0].real for j in range(4)] == [1.0, 0.0, 1.0, 0.0]
    lam = 0.3 + 1.1j
    assert mu.stieltjes(lam)[0, 0] == pytest.approx(lam / (1 - lam * lam))


def test_measure_merge_sums_close_atoms():
    mu = DiscreteMeasure([1.0, 1.0 + 1e-12, 2.0], np.array([[[1.0]], [[2.0]], [[1.0]]]))
    merged = mu.merged()
    assert len(merged) == 2 and merged.weights[0, 0, 0] == pytest.approx(3.0)


def test_measure_rejects_bad_weights():
    with pytest.raises(ValueError):
        DiscreteMeasure([0.0], np.array([[[-1.0]]])).validate()


def test_constant_pair_validation():
    ConstantPair([[1.0]], [[0.0]])
    with pytest.raises(ValueError):
        ConstantPair([[1j]], [[1.0]])  # q* p not Hermitian
    with pytest.raises(ValueError):
        ConstantPair([[0.0]], [[0.0]])  # p - lam q singular


def test_pair_convention():
    # Phi = p, Psi = q; the parameter returned for the LFT is (q, p)
    c = ConstantPair([[2.0]], [[3.0]])
    Phi, Psi = c.pair(1j)
    assert Phi[0, 0] == 3.0 and Psi[0, 0] == 2.0
    q, p = c.parameter(1j)
    assert q[0, 0] == 2.0 and p[0, 0] == 3.0


def test_affine_rejects_negative_beta():
    with pytest.raises(ValueError):
        AffineFunction([[0.0]], [[-1.0]])


def test_normalization():
    m = HerglotzOfMeasure(DiscreteMeasure([0.0], np.array([[[1.0]]])))
    for lam, (phi, psi) in zip([1j, 2 + 1j], normalize(m, [1j, 2 + 1j])):
        assert np.allclose(phi - lam * psi, np.eye(1))
        assert np.allclose(psi @ np.linalg.inv(phi), m.value(lam))


def test_kernel_diagonal_limit_matches_derivative():
    m = HerglotzOfMeasure(DiscreteMeasure([0.5, -1.0], np.array([[[1.0]], [[2.0]]])), [[0.1]], [[0.3]])
    z = 0.2 + 0.7j
    # lam = conj(omega): derivative branch
    k = kernel_value(m, z.conjugate(), z)
    direct = 0.3 + 1.0 / (0.5 - z.conjugate()) ** 2 + 2.0 / (-1.0 - z.conjugate()) ** 2
    assert k[0, 0] == pytest.approx(direct, rel=1e-9)


def test_membership_check_pass_and_fail():
    m = HerglotzOfMeasure(DiscreteMeasure([0.0, 1.0], np.array([[[1.0]], [[1.0]]])))
    assert membership_check(m).passed
    rep = membership_check(_Neg())
    assert not rep["kernel_psd"].passed


def test_membership_check_relation_valued_pair():
    # the pair {p, q} = {0, 1} is the relation {0} x C, still Nevanlinna
    assert membership_check(ConstantPair([[1.0]], [[0.0]])).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_random_herglotz_functions_are_members(d, k, seed):
    g = np.random.default_rng(seed)
    W = []
    for _ in range(k):
        G = g.normal(size=(d, d)) + 1j * g.normal(size=(d, d))
        W.append(G @ G.conj().T)
    A = g.normal(size=(d, d))
    m = HerglotzOfMeasure(DiscreteMeasure(g.uniform(-3, 3, k), np.array(W)), (A + A.T) / 2, np.eye(d) * 0.1)
    assert membership_check(m).passed


def test_herglotz_from_poles_rejects_nonreal():
    with pytest.raises(NonRealPole):
        herglotz_from_poles([(1j, np.eye(1))], lambda z: np.zeros((1, 1)), 1)


def test_herglotz_from_poles_recovers_affine_part():
    f = lambda z: np.array([[0.5 + 2 * z + 1 / (1 - z)]])
    h = herglotz_from_poles([(1.0 + 0j, np.eye(1))], f, 1)
    assert h.alpha[0, 0] == pytest.approx(0.5) and h.beta[0, 0] == pytest.approx(2.0)
    assert mk.norm(h.value(0.3 + 1j) - f(0.3 + 1j)) < 1e-12


def test_kernel_gram_across_half_planes_is_psd():
    # includes the pairs lam = conj(omega), which go through the derivative limit
    from aipkit.nevanlinna import DEFAULT_GRID, pair_kernel_gram

    m = HerglotzOfMeasure(DiscreteMeasure([0.5, -1.0, 2.0], np.array([[[1.0]], [[2.0]], [[0.5]]])),
                          [[0.1]], [[0.3]])
    G = mk.hermitian_part(pair_kernel_gram(m, DEFAULT_GRID))
    assert np.linalg.eigvalsh(G)[0] > -1e-9
