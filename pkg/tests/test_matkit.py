import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aipkit import matkit as mk
from aipkit.errors import NotHermitian, ResonantSpectrum, Singular


def test_tolerance_bound_and_validation():
    assert mk.Tolerance(1e-12, 1e-9).bound(10.0) == pytest.approx(1e-12 + 1e-8)
    with pytest.raises(ValueError):
        mk.Tolerance(0.0, 0.0)
    with pytest.raises(ValueError):
        mk.Tolerance(-1.0, 1e-9)


def test_j_matrix():
    J = mk.j_matrix(2)
    assert np.allclose(J, J.conj().T)
    assert np.allclose(J @ J, np.eye(4))
    assert J[0, 2] == -1j and J[2, 0] == 1j


def test_psd_check_and_rank():
    ok, lo = mk.psd_check(np.diag([1.0, 0.0]))
    assert ok and lo == 0.0
    ok, lo = mk.psd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not ok and lo == pytest.approx(-1.0)
    assert mk.psd_check(np.zeros((0, 0))) == (True, 0.0)
    assert mk.numeric_rank(np.array([[1.0, 1.0], [1.0, 1.0]])) == 1
    with pytest.raises(NotHermitian):
        mk.herm_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_null_space_and_range_are_orthonormal(rng):
    A = rng.normal(size=(4, 2)) @ rng.normal(size=(2, 5))
    N = mk.null_space(A)
    R = mk.range_basis(A)
    assert N.shape == (5, 3) and R.shape == (4, 2)
    assert mk.norm(A @ N) < 1e-12 * mk.norm(A)
    assert np.allclose(N.conj().T @ N, np.eye(3))
    assert np.allclose(R.conj().T @ R, np.eye(2))


def test_solve_linear_guard():
    x = mk.solve_linear(np.array([[2.0, 0.0], [0.0, 4.0]]), np.array([2.0, 4.0]))
    assert np.allclose(x, [1.0, 1.0]) and x.shape == (2,)
    with pytest.raises(Singular) as info:
        mk.solve_linear(np.array([[1.0, 1.0], [1.0, 1.0]]), np.eye(2))
    assert info.value.cond > 1e15


def test_lyapunov_pick_hand_value():
    # one node at i with xi = i, eta = 1: P = (1 * i - (-i) * 1) / (2i) = 1
    P = mk.solve_lyapunov_pick([[1j]], [[1j]], [[1.0]])
    assert P[0, 0] == pytest.approx(1.0)


def test_lyapunov_resonant():
    with pytest.raises(ResonantSpectrum):
        mk.solve_lyapunov_pick(np.diag([1j, -1j]), np.ones((1, 2)), np.ones((1, 2)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 4), st.integers(0, 2**31 - 1))
def test_moore_penrose_identities(m, n, r, seed):
    g = np.random.default_rng(seed)
    r = min(r, m, n)
    A = (g.normal(size=(m, r)) + 1j * g.normal(size=(m, r))) @ g.normal(size=(r, n))
    Ap = mk.moore_penrose(A)
    s = max(1.0, mk.norm(A)) * max(1.0, mk.norm(Ap))
    assert mk.norm(A @ Ap @ A - A) <= 1e-10 * s
    assert mk.norm(Ap @ A @ Ap - Ap) <= 1e-10 * s * max(1.0, mk.norm(Ap))
    assert mk.norm((A @ Ap) - (A @ Ap).conj().T) <= 1e-10 * s


def test_pencil_pole_residues_scalar():
    # m(lam) = 1 / (1 - lam): pole 1 with residue 1
    poles = mk.pencil_pole_residues([[1.0]], [[1.0]], [[1.0]], [[0.0]], [[1.0]])
    assert len(poles) == 1
    t, W = poles[0]
    assert t == pytest.approx(1.0) and W[0, 0] == pytest.approx(1.0)


def test_pencil_pole_residues_infinite_eigenvalue_dropped():
    # L1 singular: one infinite eigenvalue, one finite at 2
    poles = mk.pencil_pole_residues(np.diag([2.0, 1.0]), np.diag([1.0, 0.0]),
                                    np.eye(2), np.zeros((2, 2)), np.eye(2))
    assert len(poles) == 1 and poles[0][0] == pytest.approx(2.0)
