"""Concrete interpolation problems and moment machinery.

Front-ends translate tangential Nevanlinna-Pick data and truncated Hamburger
moment sequences into `AipDataSet` values.  The moment side also provides
Hankel analysis, the shift-invariant reflexive inverse X used when the Hankel
matrix is singular, orthogonal and adjacent polynomials, the series form of
the resolvent matrix, and conversion of solutions to discrete measures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from . import matkit as mk
from .aip import AipDataSet, RationalQuotient, f_map, make_data
from .errors import (
    ExactnessFailure,
    HankelNotPsd,
    NoInvariantSupport,
    PickNotPsd,
    SingularHankel,
)
from .matkit import DEFAULT_TOL, Tolerance
from .nevanlinna import (
    DEFAULT_GRID,
    ConstantPair,
    DiscreteMeasure,
    HerglotzFunction,
    NevanlinnaObject,
    herglotz_from_poles,
)
from .report import VerificationReport

# ---------------------------------------------------------------- tangential


@dataclass(frozen=True)
class Node:
    lam: complex
    multiplicity: int = 1


@dataclass(frozen=True, eq=False)
class TangentialSpec:
    """Tangential problem ``m(lam_j) eta_j = xi_j`` (Jordan chains for multiplicities).

    ``xi`` and ``eta`` are d x n with ``n`` the sum of multiplicities; columns
    are grouped node by node.
    """

    nodes: tuple[Node, ...]
    xi: np.ndarray
    eta: np.ndarray
    pick: np.ndarray | None = None

    def __post_init__(self):
        nodes = tuple(n if isinstance(n, Node) else Node(*n) for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        xi = mk.as_matrix(self.xi, "xi")
        eta = mk.as_matrix(self.eta, "eta")
        n = sum(nd.multiplicity for nd in nodes)
        if xi.shape != eta.shape or xi.shape[1] != n:
            raise ValueError(f"xi and eta must be d x {n}")
        for nd in nodes:
            if nd.multiplicity < 1:
                raise ValueError("multiplicities must be positive")
            if complex(nd.lam).imag == 0:
                raise ValueError("interpolation nodes must be non-real")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)
        if self.pick is not None:
            object.__setattr__(self, "pick", mk.as_matrix(self.pick, "pick"))

    @property
    def d(self) -> int:
        return self.xi.shape[0]

    @property
    def n(self) -> int:
        return self.xi.shape[1]

    def node_blocks(self) -> list[tuple[complex, list[int]]]:
        out = []
        k = 0
        for nd in self.nodes:
            out.append((complex(nd.lam), list(range(k, k + nd.multiplicity))))
            k += nd.multiplicity
        return out

    @property
    def simple(self) -> bool:
        return all(nd.multiplicity == 1 for nd in self.nodes)


def jordan_matrix(nodes: Sequence[Node]) -> np.ndarray:
    """Block diagonal of upper Jordan cells ``lam I + (ones on the superdiagonal)``."""
    blocks = []
    for nd in nodes:
        k = nd.multiplicity
        blocks.append(complex(nd.lam) * np.eye(k) + np.eye(k, k=1))
    return sla.block_diag(*blocks).astype(complex)


def pick_matrix(spec: TangentialSpec) -> np.ndarray:
    """Entrywise Pick formula for simple nodes.

    ``P[a, b] = (eta_a* xi_b - xi_a* eta_b) / (lam_b - conj(lam_a))``.
    """
    lam = np.array([complex(nd.lam) for nd in spec.nodes])
    num = spec.eta.conj().T @ spec.xi - spec.xi.conj().T @ spec.eta
    return num / (lam[None, :] - lam.conj()[:, None])


def build_tangential(spec: TangentialSpec, tol: Tolerance = DEFAULT_TOL) -> AipDataSet:
    """Data set ``B1 = I``, ``B2`` Jordan, ``C1 = xi``, ``C2 = eta``, ``K = P``.

    Raises
    ------
    ResonantSpectrum
        No Pick matrix supplied and the Lyapunov equation is not uniquely solvable.
    PickNotPsd
        The Pick matrix has a negative eigenvalue.
    """
    n = spec.n
    B2 = jordan_matrix(spec.nodes)
    if spec.pick is not None:
        P = spec.pick
        res = mk.norm(P @ B2 - B2.conj().T @ P - (spec.eta.conj().T @ spec.xi - spec.xi.conj().T @ spec.eta))
        if mk.norm(P - P.conj().T) > tol.bound(mk.norm(P)) or res > tol.bound(
            mk.norm(P) * mk.norm(B2) + mk.norm(spec.xi) * mk.norm(spec.eta)
        ):
            raise ValueError("supplied Pick matrix is not a Hermitian solution of the Lyapunov equation")
        P = mk.hermitian_part(P)
    else:
        P = mk.solve_lyapunov_pick(B2, spec.xi, spec.eta, tol)
    ok, lo = mk.psd_check(P, tol)
    if not ok:
        raise PickNotPsd(f"Pick matrix is not PSD (min eigenvalue {lo:.6g})")
    return make_data(np.eye(n, dtype=complex), B2, spec.xi, spec.eta, P, tol=tol)


def interpolation_residual(spec: TangentialSpec, sol: NevanlinnaObject,
                           data: AipDataSet | None = None) -> float:
    """Largest violation of the interpolation conditions.

    Simple nodes: ``max_j ||m(lam_j) eta_j - xi_j||``, with m evaluated at the
    node itself.  Nodes with multiplicity: the image ``F e_k`` of each basis
    vector of the node's chain must be holomorphic at the node, measured by
    its Laurent coefficients of negative order (trapezoidal contour integrals).
    """
    worst = 0.0
    if spec.simple:
        for j, nd in enumerate(spec.nodes):
            m = sol.value(complex(nd.lam))
            worst = max(worst, float(np.linalg.norm(m @ spec.eta[:, j] - spec.xi[:, j])))
        return worst
    if data is None:
        data = build_tangential(spec)
    lam_all = [complex(nd.lam) for nd in spec.nodes]
    for lam0, idx in spec.node_blocks():
        others = [abs(lam0 - l) for l in lam_all if l != lam0]
        rad = min([abs(lam0.imag)] + others) / 3.0
        npts = 64
        th = 2 * np.pi * np.arange(npts) / npts
        for k in idx:
            h = np.zeros(spec.n, dtype=complex)
            h[k] = 1.0
            vals = [f_map(data, sol, h, lam0 + rad * np.exp(1j * t)) for t in th]
            for p in range(len(idx)):
                # (1 / 2 pi i) * integral of F(z) (z - lam0)^p dz
                c = sum(v * (rad * np.exp(1j * t)) ** (p + 1) for v, t in zip(vals, th)) / npts
                worst = max(worst, float(np.linalg.norm(c)))
    return worst


def parseval_matrix(spec: TangentialSpec, sol: NevanlinnaObject) -> np.ndarray:
    """``M[a, b] = eta_a* (m(lam_b) - m(lam_a)*) / (lam_b - conj(lam_a)) eta_b`` (simple nodes)."""
    if not spec.simple:
        raise ValueError("parseval_matrix needs simple nodes")
    lam = [complex(nd.lam) for nd in spec.nodes]
    ms = [sol.value(l) for l in lam]
    n = len(lam)
    M = np.zeros((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            num = ms[b] - ms[a].conj().T
            M[a, b] = spec.eta[:, a].conj() @ num @ spec.eta[:, b] / (lam[b] - lam[a].conjugate())
    return M


# ---------------------------------------------------------------- moments


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Moments ``s_0 .. s_{2n}`` (Hermitian d x d) of a truncated Hamburger problem."""

    s: tuple

    def __post_init__(self):
        s = [mk.as_matrix(x, "moment") for x in self.s]
        if len(s) % 2 != 1:
            raise ValueError("a truncated moment sequence has 2n + 1 terms")
        d = s[0].shape[0]
        for x in s:
            if x.shape != (d, d):
                raise ValueError("moments must all be d x d")
            if mk.norm(x - x.conj().T) > 1e-12 * max(mk.norm(x), 1.0):
                raise ValueError("moments must be Hermitian")
        object.__setattr__(self, "s", tuple(mk.hermitian_part(x) for x in s))

    @property
    def d(self) -> int:
        return self.s[0].shape[0]

    @property
    def n(self) -> int:
        return (len(self.s) - 1) // 2

    def hankel(self, k: int | None = None) -> np.ndarray:
        """Block Hankel matrix ``S_k = (s_{i+j})_{i,j=0..k}``."""
        k = self.n if k is None else k
        if k < 0:
            return np.zeros((0, 0), dtype=complex)
        return np.block([[self.s[i + j] for j in range(k + 1)] for i in range(k + 1)])

    @classmethod
    def from_measure(cls, measure: DiscreteMeasure, n: int) -> "MomentSequence":
        return cls(tuple(measure.moment(j) for j in range(2 * n + 1)))


def shift_matrix(n: int, d: int) -> np.ndarray:
    """Block upper shift T with ``(T h)_j = h_{j+1}`` on ``(n+1)`` blocks."""
    return np.kron(np.eye(n + 1, k=1), np.eye(d)).astype(complex)


def moment_operators(ms: MomentSequence):
    """``(T, C1, C2)`` with ``C1 = [0, s_0, .., s_{n-1}]`` and ``C2 = [-I, 0, .., 0]``."""
    n, d = ms.n, ms.d
    T = shift_matrix(n, d)
    C1 = np.hstack([np.zeros((d, d), dtype=complex)] + [ms.s[j] for j in range(n)])
    C2 = np.hstack([-np.eye(d, dtype=complex)] + [np.zeros((d, d), dtype=complex)] * n)
    return T, C1, C2


def hankel_exactness(ms: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> VerificationReport:
    """PSD test of S_n and the range inclusion ``ran[s_{n+1}; ..; s_{2n}] in ran S_{n-1}``."""
    rep = VerificationReport()
    S = ms.hankel()
    _, lo = mk.psd_check(S, tol)
    rep.add("hankel_psd", "Hankel matrix nonnegative", max(0.0, -lo), tol.bound(mk.norm(S)))
    n = ms.n
    if n == 0:
        rep.add("hankel_range_inclusion", "Hankel range inclusion", 0.0, 0.0)
        return rep
    S1 = ms.hankel(n - 1)
    col = np.vstack([ms.s[j] for j in range(n + 1, 2 * n + 1)])
    Z = mk.moore_penrose(S1, tol) @ col
    res = mk.norm(S1 @ Z - col)
    rep.add("hankel_range_inclusion", "Hankel range inclusion", res,
            tol.bound(max(mk.norm(col), mk.norm(S1))))
    return rep


def _coordinate_sets(n: int, d: int, r: int):
    """T-invariant coordinate subsets of size r, leading-principal choice first."""
    q, rem = divmod(r, d)
    lead = tuple(q + 1 if a < rem else q for a in range(d))
    seen = set()
    if all(k <= n + 1 for k in lead):
        seen.add(lead)
        yield lead
    for ks in itertools.product(range(n + 1, -1, -1), repeat=d):
        if sum(ks) == r and ks not in seen:
            seen.add(ks)
            yield ks


def hankel_pseudo_x(ms: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Hermitian X with ``X S X = X``, ``S X S = S`` and ``T ran X in ran X``.

    Candidate supports are unions of leading segments of the d scalar shift
    chains (these are the T-invariant coordinate subspaces); the first one on
    which S has an invertible principal compression gives
    ``X = E (E* S E)^{-1} E*``.
    """
    S = ms.hankel()
    n, d = ms.n, ms.d
    N = S.shape[0]
    r = mk.numeric_rank(S, tol)
    if r == 0:
        return np.zeros((N, N), dtype=complex)
    if r == N:
        return mk.hermitian_part(mk.inverse(S))
    scale = max(mk.norm(S), 1.0)
    best = None
    for ks in _coordinate_sets(n, d, r):
        idx = sorted(j * d + a for a in range(d) for j in range(ks[a]))
        Sc = S[np.ix_(idx, idx)]
        if mk.numeric_rank(Sc, tol) < r:
            continue
        X = np.zeros((N, N), dtype=complex)
        X[np.ix_(idx, idx)] = mk.inverse(Sc)
        X = mk.hermitian_part(X)
        sx = max(mk.norm(X), 1.0) ** 2 * scale ** 2
        res = max(mk.norm(X @ S @ X - X), mk.norm(S @ X @ S - S)) / sx
        if res <= 1e-10:
            return X
        best = res if best is None else min(best, res)
    raise NoInvariantSupport(
        f"no shift-invariant coordinate support of size {r} reproduces S "
        f"(best scaled residual {best}); check the range-inclusion criterion"
    )


def pseudo_x_residuals(ms: MomentSequence, X: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> dict:
    S = ms.hankel()
    T = shift_matrix(ms.n, ms.d)
    R = mk.range_basis(X, tol)
    inv = mk.norm(T @ R - R @ (R.conj().T @ T @ R)) if R.size else 0.0
    return {
        "XSX": mk.norm(X @ S @ X - X),
        "SXS": mk.norm(S @ X @ S - S),
        "shift_invariance": inv,
        "hermitian": mk.norm(X - X.conj().T),
        "rank_gap": abs(mk.numeric_rank(X, tol) - mk.numeric_rank(S, tol)),
    }


def build_truncated_moment(ms: MomentSequence, tol: Tolerance = DEFAULT_TOL) -> AipDataSet:
    """Data set ``B1 = T``, ``B2 = I``, ``C1 = [0, s_0, ..]``, ``C2 = [-I, 0, ..]``, ``K = S_n``.

    Raises
    ------
    HankelNotPsd, ExactnessFailure
    """
    S = ms.hankel()
    ok, lo = mk.psd_check(S, tol)
    if not ok:
        raise HankelNotPsd(f"Hankel matrix is not PSD (min eigenvalue {lo:.6g})")
    T, C1, C2 = moment_operators(ms)
    N = S.shape[0]
    if mk.numeric_rank(S, tol) == N:
        return make_data(T, np.eye(N), C1, C2, S, tol=tol)
    rep = hankel_exactness(ms, tol)
    if not rep["hankel_range_inclusion"].passed:
        raise ExactnessFailure("moments violate the range-inclusion criterion")
    X = hankel_pseudo_x(ms, tol)
    # the support of X is a coordinate set; use those coordinate vectors as X0
    support = [k for k in range(N) if mk.norm(X[k]) > 0]
    x0 = np.eye(N, dtype=complex)[:, support]
    return make_data(T, np.eye(N), C1, C2, S, x0_basis=x0, X=X, tol=tol)


def indeterminacy_diagnostic(ms: MomentSequence) -> list[float]:
    """Smallest eigenvalue of ``S_k`` for ``k = 0 .. n`` (no verdict is drawn)."""
    return [float(np.linalg.eigvalsh(ms.hankel(k))[0]) for k in range(ms.n + 1)]


# ---------------------------------------------------------------- orthogonal polynomials


@dataclass(frozen=True, eq=False)
class OrthogonalSystem:
    """Orthonormal matrix polynomials and their adjacent polynomials.

    ``coeffs[k]`` has shape ``(k + 1, d, d)`` (ascending powers) and
    ``adj_coeffs[k]`` has shape ``(max(k, 1), d, d)``.
    """

    coeffs: list
    adj_coeffs: list
    d: int

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def _horner(c: np.ndarray, lam: complex) -> np.ndarray:
        out = np.zeros(c.shape[1:], dtype=complex)
        for a in c[::-1]:
            out = out * lam + a
        return out

    def P(self, k: int, lam: complex) -> np.ndarray:
        return self._horner(self.coeffs[k], lam)

    def Padj(self, k: int, lam: complex) -> np.ndarray:
        return self._horner(self.adj_coeffs[k], lam)


def orthogonal_polynomials(ms: MomentSequence, gauge: Sequence[np.ndarray] | None = None) -> OrthogonalSystem:
    """Block Gram-Schmidt of the monomials under ``K(h, g) = sum g_k* s_{j+k} h_j``.

    Leading coefficients are upper triangular with positive diagonal; an
    optional list of unitaries ``gauge[k]`` replaces ``P_k`` by ``P_k U_k``.
    """
    S = ms.hankel()
    n, d = ms.n, ms.d
    try:
        L = np.linalg.cholesky(mk.hermitian_part(S))
    except np.linalg.LinAlgError as exc:
        raise SingularHankel("Hankel matrix is not positive definite") from exc
    if mk.cond(L) > 1e12:
        raise SingularHankel("Hankel matrix is numerically singular")
    Cm = sla.solve_triangular(L.conj().T, np.eye(S.shape[0]), lower=False)
    coeffs, adj = [], []
    for k in range(n + 1):
        A = np.array([Cm[m * d:(m + 1) * d, k * d:(k + 1) * d] for m in range(k + 1)])
        if gauge is not None:
            A = A @ gauge[k]
        coeffs.append(A)
        # adjacent polynomial: coefficient of lam^e is sum_{m > e} s_{m-1-e} A_m
        if k == 0:
            adj.append(np.zeros((1, d, d), dtype=complex))
        else:
            adj.append(np.array([sum(ms.s[m - 1 - e] @ A[m] for m in range(e + 1, k + 1))
                                 for e in range(k)]))
    return OrthogonalSystem(coeffs, adj, d)


def orthonormality_residual(ms: MomentSequence, osys: OrthogonalSystem) -> float:
    S = ms.hankel()
    n, d = ms.n, ms.d
    Cm = np.zeros(((n + 1) * d, (n + 1) * d), dtype=complex)
    for k, A in enumerate(osys.coeffs):
        for m in range(k + 1):
            Cm[m * d:(m + 1) * d, k * d:(k + 1) * d] = A[m]
    return mk.norm(Cm.conj().T @ S @ Cm - np.eye(Cm.shape[0]))


@dataclass(frozen=True, eq=False)
class SeriesTheta:
    """Resolvent matrix of a regular truncated moment problem as polynomial sums."""

    osys: OrthogonalSystem

    @property
    def d(self) -> int:
        return self.osys.d

    def __call__(self, lam: complex) -> np.ndarray:
        o = self.osys
        d = o.d
        I = np.eye(d, dtype=complex)
        s11 = s12 = s21 = s22 = np.zeros((d, d), dtype=complex)
        for k in range(o.n + 1):
            Pl, Pt = o.P(k, lam), o.Padj(k, lam)
            P0, Pt0 = o.P(k, 0.0).conj().T, o.Padj(k, 0.0).conj().T
            s11 = s11 + Pt @ P0
            s12 = s12 + Pt @ Pt0
            s21 = s21 + Pl @ P0
            s22 = s22 + Pl @ Pt0
        return np.block([[I + lam * s11, lam * s12], [-lam * s21, I - lam * s22]])


def theta_series(ms: MomentSequence, gauge=None) -> SeriesTheta:
    return SeriesTheta(orthogonal_polynomials(ms, gauge))


def lft_matrix(Theta: np.ndarray, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``(th11 q + th12 p)(th21 q + th22 p)^{-1}`` for a sampled Theta."""
    d = q.shape[0]
    num = Theta[:d, :d] @ q + Theta[:d, d:] @ p
    den = Theta[d:, :d] @ q + Theta[d:, d:] @ p
    return mk.solve_linear(den.T, num.T).T


# ---------------------------------------------------------------- measures


def herglotz_representation(sol: RationalQuotient) -> HerglotzFunction:
    """``m = alpha + beta lam + sum_k W_k / (t_k - lam)`` for a constant-parameter solution.

    Poles are the finite eigenvalues of the linear pencil obtained by
    bordering the realization of Theta with the parameter columns.
    """
    if not isinstance(sol, RationalQuotient) or not isinstance(sol.param, ConstantPair):
        raise TypeError("measure extraction needs a solution from a constant parameter")
    th = sol.theta
    d = th.d
    qp = th.M @ np.vstack([sol.param.q, sol.param.p])
    qm, pm = qp[:d], qp[d:]
    Z = th.Rcore @ qp
    C1, C2 = th.Ccore[:d], th.Ccore[d:]
    n = th.E.shape[0]
    zn = np.zeros((n, d), dtype=complex)
    L0 = np.block([[th.E, -Z], [th.f0 * C2, pm]])
    L1 = np.block([[th.F, zn], [-th.f1 * C2, np.zeros((d, d))]])
    O0 = np.hstack([th.f0 * C1, qm])
    O1 = np.hstack([th.f1 * C1, np.zeros((d, d))])
    Bin = np.vstack([zn, np.eye(d)])
    poles = mk.pencil_pole_residues(L0, L1, O0, O1, Bin)
    return herglotz_from_poles(poles, sol.value, d)


def extract_measure(sol: RationalQuotient | HerglotzFunction, grid=DEFAULT_GRID,
                    rtol: float = 1e-8) -> DiscreteMeasure:
    """Discrete measure of a constant-parameter solution of a moment problem.

    A `HerglotzFunction` is accepted as well and only checked for a vanishing
    affine part.

    Raises
    ------
    ValueError
        If the solution has a nonzero affine part or the Stieltjes transform of
        the measure does not reproduce the solution on `grid`.
    """
    h = sol if isinstance(sol, HerglotzFunction) else herglotz_representation(sol)
    worst = 0.0
    for z in grid:
        m = sol.value(z)
        worst = max(worst, mk.norm(m - h.value(z)) / max(mk.norm(m), 1e-300))
    if worst > rtol:
        raise ValueError(f"Stieltjes transform of the measure misses the solution by {worst:.3e}")
    wscale = max([mk.norm(W) for W in h.measure.weights] + [1.0])
    if mk.norm(h.alpha) + mk.norm(h.beta) > rtol * wscale:
        raise ValueError("solution has an affine part and is not a Stieltjes transform")
    return h.measure


def verify_moments(measure: DiscreteMeasure, ms: MomentSequence,
                   tol: Tolerance = DEFAULT_TOL) -> VerificationReport:
    """Moment equalities up to ``2n - 1`` and the inequality at ``2n``."""
    rep = VerificationReport()
    n = ms.n
    scale = max(mk.norm(x) for x in ms.s)
    worst = 0.0
    for j in range(2 * n):
        worst = max(worst, mk.norm(measure.moment(j) - ms.s[j]))
    rep.add("moments_match", "moment equalities", worst, tol.bound(scale))
    defect = ms.s[2 * n] - measure.moment(2 * n)
    _, lo = mk.psd_check(mk.hermitian_part(defect), Tolerance(abs=1.0, rel=0.0))
    rep.add("top_moment_defect_psd", "top moment inequality", max(0.0, -lo), tol.bound(scale))
    rep.add("exact", "equality at the top moment", mk.norm(defect), tol.bound(scale), hard=False)
    return rep


def stieltjes_asymptotics_check(sol: NevanlinnaObject, ms: MomentSequence,
                                radii: Sequence[float] | None = None) -> VerificationReport:
    """Decay of ``||m(iR) + sum_{k<j} s_k / (iR)^{k+1}|| R^j`` along the imaginary axis.

    For each order ``j = 1 .. 2n`` the scaled remainder must shrink by at least
    a factor 2 between the smallest and the largest radius, or already be at
    roundoff level.  This is a sampled diagnostic, not a proof.
    """
    rep = VerificationReport()
    n = ms.n
    if radii is None:
        rho = 1.0
        s0 = mk.norm(ms.s[0])
        if n >= 1 and s0 > 0:
            rho = max(rho, np.sqrt(mk.norm(ms.s[2]) / s0))
        radii = [4 * rho * 2 ** k for k in range(4)]
    scale = max(mk.norm(x) for x in ms.s)
    for j in range(1, 2 * n + 1 if n else 2):
        errs = []
        for R in radii:
            lam = 1j * R
            tail = sum(ms.s[k] / lam ** (k + 1) for k in range(j))
            errs.append(mk.norm(sol.value(lam) + tail) * R ** j)
        floor = 1e-8 * scale
        ok = errs[-1] <= floor or errs[-1] <= 0.5 * errs[0]
        rep.add(f"asymptotics_order_{j}", "moment asymptotics", errs[-1], max(0.5 * errs[0], floor), ok)
    return rep


def random_measure(rng: np.random.Generator, d: int, k: int, rank: int | None = None,
                   spread: float = 2.0) -> DiscreteMeasure:
    """Random measure with k atoms in [-spread, spread] and PSD weights of given rank."""
    rank = d if rank is None else rank
    t = np.sort(rng.uniform(-spread, spread, k))
    W = []
    for _ in range(k):
        G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
        W.append(G @ G.conj().T / rank)
    return DiscreteMeasure(t, np.array(W))
