"""Dense complex linear algebra used by the rest of the package.

Everything here is a thin, checked layer over numpy/scipy: eigen-decompositions,
rank and PSD decisions with explicit tolerances, guarded linear solves, the
Sylvester solve behind the Pick matrix, and the Moore-Penrose inverse.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import NonFinite, NotHermitian, ResonantSpectrum, Singular

EPS = np.finfo(float).eps
# solves with reciprocal condition below this are refused
RCOND_GUARD = 10.0 * EPS


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair.

    Parameters
    ----------
    abs : float
        Absolute floor.
    rel : float
        Multiplier of a problem scale (usually a matrix norm).
    """

    abs: float = 1e-12
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs == 0 and self.rel == 0:
            raise ValueError("abs and rel tolerance cannot both be zero")

    def bound(self, scale: float) -> float:
        return self.abs + self.rel * float(scale)


DEFAULT_TOL = Tolerance()


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Return `M` as a finite 2-D complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    elif A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional")
    if not np.all(np.isfinite(A)):
        raise NonFinite(f"{name} has non-finite entries")
    return A


def norm(M) -> float:
    """Spectral norm (0 for empty matrices)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def j_matrix(d: int) -> np.ndarray:
    """The signature matrix J = [[0, -iI], [iI, 0]] of size 2d."""
    Z = np.zeros((d, d), dtype=complex)
    I = np.eye(d, dtype=complex)
    return np.block([[Z, -1j * I], [1j * I, Z]])


def _require_hermitian(M: np.ndarray, tol: Tolerance) -> None:
    if M.shape[0] != M.shape[1]:
        raise NotHermitian(f"matrix is not square: shape {M.shape}")
    res = norm(M - M.conj().T)
    if res > tol.bound(norm(M)):
        raise NotHermitian(f"symmetry residual {res:.3e} exceeds tolerance")


def herm_eig(M, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    w : ndarray
        Real eigenvalues in ascending order.
    U : ndarray
        Unitary matrix of eigenvectors, ``M = U diag(w) U*``.
    """
    A = as_matrix(M)
    _require_hermitian(A, tol)
    w, U = np.linalg.eigh(hermitian_part(A))
    return w, U


def psd_check(M, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """PSD verdict together with the smallest eigenvalue.

    An empty matrix is PSD with ``min_eig = 0``.
    """
    A = as_matrix(M)
    if A.size == 0:
        return True, 0.0
    w, _ = herm_eig(A, tol)
    min_eig = float(w[0])
    return min_eig >= -tol.bound(norm(A)), min_eig


def numeric_rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above ``tol.rel`` times the largest one."""
    A = as_matrix(M)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rel * s[0]))


def null_space(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical kernel (columns)."""
    A = as_matrix(M)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=complex)
    r = numeric_rank(A, tol)
    _, _, Vh = np.linalg.svd(A)
    return Vh[r:].conj().T


def range_basis(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical column space."""
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    r = numeric_rank(A, tol)
    U, _, _ = np.linalg.svd(A)
    return U[:, :r]


def solve_linear(A, B) -> np.ndarray:
    """Solve ``A X = B`` by LU with a condition-number guard.

    Raises
    ------
    Singular
        If the estimated reciprocal condition number is below the guard.
    """
    A = as_matrix(A, "A")
    Bm = np.asarray(B, dtype=complex)
    vec = Bm.ndim == 1
    Bm = as_matrix(Bm, "B")
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("A must be square")
    if n == 0:
        X = np.zeros((0, Bm.shape[1]), dtype=complex)
        return X.ravel() if vec else X
    with warnings.catch_warnings():
        # exact singularity is reported by the condition estimate below
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    anorm = np.linalg.norm(A, 1)
    if anorm == 0.0:
        raise Singular("zero matrix", float("inf"))
    gecon = sla.get_lapack_funcs("gecon", (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if not rcond > RCOND_GUARD:
        cond = float("inf") if rcond == 0 else 1.0 / rcond
        raise Singular(f"matrix is numerically singular (cond ~ {cond:.3e})", cond)
    X = sla.lu_solve((lu, piv), Bm, check_finite=False)
    return X.ravel() if vec else X


def inverse(A) -> np.ndarray:
    A = as_matrix(A)
    return solve_linear(A, np.eye(A.shape[0], dtype=complex))


def cond(A) -> float:
    A = as_matrix(A)
    if A.size == 0:
        return 1.0
    s = np.linalg.svd(A, compute_uv=False)
    return float("inf") if s[-1] == 0 else float(s[0] / s[-1])


def solve_lyapunov_pick(B2, C1, C2, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unique Hermitian solution of ``P B2 - B2* P = C2* C1 - C1* C2``.

    Raises
    ------
    ResonantSpectrum
        If some eigenvalue of `B2` equals the conjugate of another one, in which
        case the equation is not uniquely solvable.
    """
    B2 = as_matrix(B2, "B2")
    C1 = as_matrix(C1, "C1")
    C2 = as_matrix(C2, "C2")
    ev = np.linalg.eigvals(B2)
    gap = np.abs(ev[:, None] - ev.conj()[None, :])
    scale = 1.0 + np.max(np.abs(ev)) if ev.size else 1.0
    if ev.size and gap.min() <= 1e-10 * scale:
        raise ResonantSpectrum("spectra of B2 and B2* intersect; supply P explicitly")
    rhs = C2.conj().T @ C1 - C1.conj().T @ C2
    P = sla.solve_sylvester(-B2.conj().T, B2, rhs)
    return hermitian_part(P)


def moore_penrose(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse with the package rank cutoff."""
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=complex)
    return sla.pinv(A, atol=0.0, rtol=tol.rel)


def is_j_unitary_residual(V: np.ndarray) -> float:
    d = V.shape[0] // 2
    J = j_matrix(d)
    return norm(V.conj().T @ J @ V - J)


def pencil_pole_residues(L0, L1, O0, O1, Bin, cluster_rtol: float = 1e-8,
                         finite_rtol: float = 1e-11) -> list[tuple[complex, np.ndarray]]:
    """Poles and residues of ``m(lam) = (O0 + lam O1) (L0 - lam L1)^{-1} Bin``.

    The finite eigenvalues t of the pencil ``L0 - lam L1`` are grouped into
    clusters; for each cluster with right/left eigenvectors X, Y the
    coefficient of ``1 / (t - lam)`` is

        W = (O0 + t O1) X (Y* L1 X)^{-1} Y* Bin.

    Returns a list of ``(t, W)`` pairs, one per cluster, in the order of
    increasing real part.
    """
    L0 = as_matrix(L0)
    L1 = as_matrix(L1)
    O0 = as_matrix(O0)
    O1 = as_matrix(O1)
    Bin = as_matrix(Bin)
    if L0.shape[0] == 0:
        return []
    w, vl, vr = sla.eig(L0, L1, left=True, right=True, homogeneous_eigvals=True)
    a, b = w
    finite = np.abs(b) > finite_rtol * np.abs(a)
    idx = np.flatnonzero(finite)
    t_all = np.full(a.shape, np.inf, dtype=complex)
    t_all[idx] = a[idx] / b[idx]
    idx = idx[np.argsort(t_all[idx].real, kind="stable")]
    clusters: list[list[int]] = []
    for k in idx:
        for cl in clusters:
            t0 = t_all[cl[0]]
            if abs(t_all[k] - t0) <= cluster_rtol * (1 + abs(t0)):
                cl.append(k)
                break
        else:
            clusters.append([k])
    out = []
    for cl in clusters:
        t = complex(np.mean(t_all[cl]))
        X = vr[:, cl]
        Y = vl[:, cl]
        Mx = Y.conj().T @ L1 @ X
        core = np.linalg.lstsq(Mx, Y.conj().T @ Bin, rcond=1e-13)[0]
        W = (O0 + t * O1) @ X @ core
        out.append((t, W))
    return out
