"""Matrix-valued Nevanlinna functions and pairs in closed form.

A pair ``{Phi, Psi}`` generalizes the graph ``{I, m}`` of a function.  The
parameter pairs ``{p, q}`` used by the linear-fractional parametrization are
pairs in this sense with ``Phi = p`` and ``Psi = q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matkit as mk
from .errors import NonRealPole, NormalizationSingular, PoleAtPoint, ResidueNotPsd
from .matkit import Tolerance
from .report import VerificationReport

DEFAULT_GRID = (1j, 2j, 1 + 1j, -1 + 2j, -1j, -2j, 1 - 1j, -1 - 2j)
KERNEL_TOL = Tolerance(abs=1e-10, rel=1e-12)

# contour derivative: points on a circle of radius |Im z| / _DERIV_RATIO
_DERIV_POINTS = 32
_DERIV_RATIO = 4.0


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite sum of point masses ``sum_k W_k delta_{t_k}`` with PSD weights."""

    atoms: np.ndarray  # (k,) real
    weights: np.ndarray  # (k, d, d)

    def __post_init__(self):
        t = np.asarray(self.atoms, dtype=float).reshape(-1)
        W = np.asarray(self.weights, dtype=complex)
        if W.ndim == 2 and t.size == 1:
            W = W[None]
        if W.ndim != 3 or W.shape[0] != t.size or W.shape[1] != W.shape[2]:
            raise ValueError("weights must have shape (k, d, d) matching the atoms")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(W))):
            raise mk.NonFinite("measure has non-finite entries")
        order = np.argsort(t, kind="stable")
        object.__setattr__(self, "atoms", t[order])
        object.__setattr__(self, "weights", W[order])

    @classmethod
    def empty(cls, d: int) -> "DiscreteMeasure":
        return cls(np.zeros(0), np.zeros((0, d, d), dtype=complex))

    @property
    def d(self) -> int:
        return self.weights.shape[1]

    def __len__(self) -> int:
        return self.atoms.size

    def validate(self, tol: Tolerance = mk.DEFAULT_TOL) -> None:
        if self.atoms.size > 1 and np.min(np.diff(self.atoms)) <= 0:
            raise ValueError("atom locations must be distinct")
        for W in self.weights:
            ok, lo = mk.psd_check(W, tol)
            if not ok:
                raise ValueError(f"atom weight is not PSD (min eig {lo:.3e})")

    def moment(self, j: int) -> np.ndarray:
        """``sum_k t_k^j W_k``."""
        if self.atoms.size == 0:
            return np.zeros((self.d, self.d), dtype=complex)
        return np.einsum("k,kab->ab", self.atoms.astype(complex) ** j, self.weights)

    def stieltjes(self, lam: complex) -> np.ndarray:
        """``sum_k W_k / (t_k - lam)``."""
        if self.atoms.size == 0:
            return np.zeros((self.d, self.d), dtype=complex)
        den = self.atoms - lam
        if np.any(np.abs(den) == 0):
            raise PoleAtPoint(f"point {lam} is an atom")
        return np.einsum("k,kab->ab", 1.0 / den, self.weights)

    def merged(self, rtol: float = 1e-8) -> "DiscreteMeasure":
        """Merge atoms closer than ``rtol * (1 + |t|)``, summing weights."""
        if self.atoms.size == 0:
            return self
        groups: list[list[int]] = [[0]]
        for k in range(1, self.atoms.size):
            t0 = self.atoms[groups[-1][0]]
            if abs(self.atoms[k] - t0) <= rtol * (1 + abs(t0)):
                groups[-1].append(k)
            else:
                groups.append([k])
        t = []
        W = []
        for g in groups:
            w = self.weights[g].sum(axis=0)
            wt = np.array([np.real(np.trace(self.weights[k])) for k in g])
            t.append(float(np.average(self.atoms[g], weights=wt)) if wt.sum() > 0 else self.atoms[g[0]])
            W.append(mk.hermitian_part(w))
        return DiscreteMeasure(np.array(t), np.array(W))


class NevanlinnaObject:
    """Base class: a pair ``{Phi, Psi}`` evaluable at non-real points."""

    d: int
    is_function: bool = True

    def pair(self, lam: complex) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def value(self, lam: complex) -> np.ndarray:
        """Function value ``m(lam) = Psi Phi^{-1}``."""
        Phi, Psi = self.pair(lam)
        try:
            return mk.solve_linear(Phi.T, Psi.T).T
        except mk.Singular as exc:
            raise PoleAtPoint(f"Phi is singular at {lam}") from exc

    def parameter(self, lam: complex) -> tuple[np.ndarray, np.ndarray]:
        """Values ``(q, p) = (Psi, Phi)`` used as an LFT parameter."""
        Phi, Psi = self.pair(lam)
        return Psi, Phi

    def pair_derivative(self, lam: complex) -> tuple[np.ndarray, np.ndarray]:
        """Derivatives of ``(Phi, Psi)`` by a trapezoidal Cauchy integral."""
        lam = complex(lam)
        if lam.imag == 0:
            raise PoleAtPoint("derivative requested on the real line")
        r = abs(lam.imag) / _DERIV_RATIO
        th = 2 * np.pi * np.arange(_DERIV_POINTS) / _DERIV_POINTS
        dPhi = 0
        dPsi = 0
        for t in th:
            e = np.exp(1j * t)
            Phi, Psi = self.pair(lam + r * e)
            dPhi = dPhi + Phi / e
            dPsi = dPsi + Psi / e
        return dPhi / (r * _DERIV_POINTS), dPsi / (r * _DERIV_POINTS)

    def kernel_diagonal(self, omega: complex) -> np.ndarray | None:
        """Analytic kernel value at ``lam = omega`` when available."""
        return None


@dataclass(frozen=True, eq=False)
class ConstantPair(NevanlinnaObject):
    """Constant pair ``{p, q}``; ``Phi = p`` and ``Psi = q``.

    Requires ``q* p`` Hermitian and ``p - lam q`` invertible at ``lam = +-i``.
    """

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = mk.as_matrix(self.q, "q")
        p = mk.as_matrix(self.p, "p")
        if q.shape != p.shape or q.shape[0] != q.shape[1]:
            raise ValueError("q and p must be square of equal size")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        H = q.conj().T @ p
        scale = mk.norm(q) * mk.norm(p)
        if mk.norm(H - H.conj().T) > 1e-10 * max(scale, 1.0):
            raise ValueError("constant pair requires q* p Hermitian")
        for lam in (1j, -1j):
            if mk.cond(p - lam * q) > 1e12:
                raise ValueError("constant pair requires p - lam q invertible off the real line")

    @property
    def d(self) -> int:
        return self.q.shape[0]

    @property
    def is_function(self) -> bool:
        return mk.cond(self.p) < 1e12

    def pair(self, lam):
        return self.p.copy(), self.q.copy()

    def pair_derivative(self, lam):
        Z = np.zeros_like(self.p)
        return Z, Z.copy()


@dataclass(frozen=True, eq=False)
class HerglotzFunction(NevanlinnaObject):
    """``m(lam) = alpha + beta lam + sum_k W_k / (t_k - lam)``."""

    alpha: np.ndarray
    beta: np.ndarray
    measure: DiscreteMeasure | None = None

    def __post_init__(self):
        a = mk.as_matrix(self.alpha, "alpha")
        b = mk.as_matrix(self.beta, "beta")
        if a.shape != b.shape or a.shape[0] != a.shape[1]:
            raise ValueError("alpha and beta must be square of equal size")
        if mk.norm(a - a.conj().T) > 1e-12 * max(mk.norm(a), 1.0):
            raise ValueError("alpha must be Hermitian")
        ok, lo = mk.psd_check(b)
        if not ok:
            raise ValueError(f"beta must be PSD (min eig {lo:.3e})")
        object.__setattr__(self, "alpha", mk.hermitian_part(a))
        object.__setattr__(self, "beta", mk.hermitian_part(b))
        meas = self.measure if self.measure is not None else DiscreteMeasure.empty(a.shape[0])
        if meas.d != a.shape[0]:
            raise ValueError("measure dimension does not match alpha")
        meas.validate()
        object.__setattr__(self, "measure", meas)

    @property
    def d(self) -> int:
        return self.alpha.shape[0]

    def value(self, lam):
        return self.alpha + self.beta * lam + self.measure.stieltjes(lam)

    def pair(self, lam):
        return np.eye(self.d, dtype=complex), self.value(lam)

    def pair_derivative(self, lam):
        t = self.measure.atoms
        dm = self.beta.astype(complex).copy()
        if t.size:
            dm = dm + np.einsum("k,kab->ab", 1.0 / (t - lam) ** 2, self.measure.weights)
        return np.zeros((self.d, self.d), dtype=complex), dm

    def kernel_diagonal(self, omega):
        t = self.measure.atoms
        val = self.beta.astype(complex).copy()
        if t.size:
            val = val + np.einsum("k,kab->ab", 1.0 / np.abs(t - omega) ** 2, self.measure.weights)
        return val


def AffineFunction(alpha, beta) -> HerglotzFunction:
    """``m(lam) = alpha + beta lam``."""
    return HerglotzFunction(alpha, beta, None)


def HerglotzOfMeasure(measure: DiscreteMeasure, alpha=None, beta=None) -> HerglotzFunction:
    d = measure.d
    alpha = np.zeros((d, d)) if alpha is None else alpha
    beta = np.zeros((d, d)) if beta is None else beta
    return HerglotzFunction(alpha, beta, measure)


def evaluate(obj: NevanlinnaObject, lam: complex) -> tuple[np.ndarray, np.ndarray]:
    """``(Phi(lam), Psi(lam))``; a function m is returned as ``(I, m(lam))``."""
    return obj.pair(complex(lam))


def normalize(obj: NevanlinnaObject, grid: Sequence[complex]) -> list[tuple[np.ndarray, np.ndarray]]:
    """Normalized pair values ``(phi, psi) = (Phi D^{-1}, Psi D^{-1})``, ``D = Phi - lam Psi``.

    Raises
    ------
    NormalizationSingular
        If ``Phi - lam Psi`` is singular at some grid point.
    """
    out = []
    for lam in grid:
        lam = complex(lam)
        Phi, Psi = obj.pair(lam)
        D = Phi - lam * Psi
        try:
            Dinv = mk.inverse(D)
        except mk.Singular as exc:
            raise NormalizationSingular(f"Phi - lam Psi is singular at {lam}") from exc
        out.append((Phi @ Dinv, Psi @ Dinv))
    return out


def kernel_value(obj: NevanlinnaObject, lam: complex, omega: complex) -> np.ndarray:
    """Matrix kernel ``(Psi(lam~)* Phi(omega~) - Phi(lam~)* Psi(omega~)) / (lam - omega~)``.

    ``~`` denotes complex conjugation of the argument.
    """
    lam = complex(lam)
    omega = complex(omega)
    if lam == omega:
        diag = obj.kernel_diagonal(omega)
        if diag is not None:
            return diag
    PhiL, PsiL = obj.pair(lam.conjugate())
    den = lam - omega.conjugate()
    if abs(den) <= 1e-13 * (1 + abs(lam)):
        # lam equals conj(omega): the numerator vanishes and the limit is a derivative
        dPhi, dPsi = obj.pair_derivative(lam)
        return PhiL.conj().T @ dPsi - PsiL.conj().T @ dPhi
    PhiW, PsiW = obj.pair(omega.conjugate())
    return (PsiL.conj().T @ PhiW - PhiL.conj().T @ PsiW) / den


def pair_kernel_gram(
    obj: NevanlinnaObject,
    points: Sequence[complex],
    directions: Sequence[np.ndarray] | None = None,
) -> np.ndarray:
    """Gram matrix ``G[k, j] = v_k* N_{w_j}(w_k) v_j``.

    With ``directions=None`` every standard basis vector is used at every
    point, giving a block Gram matrix of size ``len(points) * d``.
    """
    points = [complex(z) for z in points]
    if directions is None:
        blocks = [[kernel_value(obj, wk, wj) for wj in points] for wk in points]
        return np.block(blocks) if points else np.zeros((0, 0), dtype=complex)
    if len(directions) != len(points):
        raise ValueError("one direction per point is required")
    vs = [np.asarray(v, dtype=complex).reshape(-1) for v in directions]
    n = len(points)
    G = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for j in range(n):
            G[k, j] = vs[k].conj() @ kernel_value(obj, points[k], points[j]) @ vs[j]
    return G


def membership_check(
    obj: NevanlinnaObject,
    grid: Sequence[complex] = DEFAULT_GRID,
    tol: Tolerance = KERNEL_TOL,
) -> VerificationReport:
    """Sampled check of the three defining conditions of a Nevanlinna pair."""
    rep = VerificationReport()
    grid = [complex(z) for z in grid]
    upper = [z for z in grid if z.imag > 0]
    lower = [z for z in grid if z.imag < 0]
    worst = 0.0
    bound = tol.abs
    try:
        for half in (upper, lower):
            if not half:
                continue
            G = mk.hermitian_part(pair_kernel_gram(obj, half))
            _, lo = mk.psd_check(G, tol)
            worst = max(worst, -lo)
            bound = max(bound, tol.bound(mk.norm(G)))
        rep.add("kernel_psd", "nonnegative kernel", worst, bound)
    except PoleAtPoint as exc:
        rep.add("kernel_psd", "nonnegative kernel", np.inf, bound, False, detail=str(exc))
    sym = 0.0
    sym_tol = 0.0
    inv = 0.0
    for z in grid:
        try:
            Phi, Psi = obj.pair(z)
            PhiC, PsiC = obj.pair(z.conjugate())
        except PoleAtPoint:
            sym = np.inf
            continue
        R = PsiC.conj().T @ Phi - PhiC.conj().T @ Psi
        sym = max(sym, mk.norm(R))
        sym_tol = max(sym_tol, tol.bound(mk.norm(Phi) * mk.norm(Psi) + mk.norm(PhiC) * mk.norm(PsiC)))
        inv = max(inv, mk.cond(Phi - z * Psi))
    rep.add("pair_symmetry", "symmetry of the pair", sym, max(sym_tol, tol.abs))
    rep.add("pair_invertibility", "Phi - lam Psi invertible", inv, 1e12)
    return rep


def herglotz_from_poles(poles, mfun, d: int) -> HerglotzFunction:
    """Herglotz representation from poles/residues of a rational Nevanlinna function.

    Residues with negligible norm are treated as cancelled poles.  The affine
    part ``alpha + beta lam`` is recovered from two evaluations of `mfun`.

    Raises
    ------
    NonRealPole, ResidueNotPsd
    """
    scale = max([mk.norm(W) for _, W in poles] + [1.0])
    atoms, weights = [], []
    for t, W in poles:
        wn = mk.norm(W)
        if wn <= 1e-11 * scale:
            continue  # cancelled pole
        if abs(t.imag) > 1e-8 * (1 + abs(t)):
            raise NonRealPole(f"pole at non-real point {t} with residue norm {wn:.3e}")
        Wh = mk.hermitian_part(W)
        ok, lo = mk.psd_check(Wh, Tolerance(abs=1e-10, rel=1e-8))
        if not ok:
            raise ResidueNotPsd(f"residue at {t.real} is not PSD (min eig {lo:.3e})")
        atoms.append(t.real)
        weights.append(Wh)
    meas = DiscreteMeasure(np.array(atoms), np.array(weights).reshape(-1, d, d)).merged()
    # project weights onto the PSD cone to remove roundoff-level negative parts
    fixed = []
    for W in meas.weights:
        w, U = np.linalg.eigh(W)
        fixed.append((U * np.clip(w, 0, None)) @ U.conj().T)
    meas = DiscreteMeasure(meas.atoms, np.array(fixed).reshape(-1, d, d))
    r1 = mfun(1j) - meas.stieltjes(1j)
    r2 = mfun(2j) - meas.stieltjes(2j)
    beta = mk.hermitian_part((r2 - r1) / 1j)
    alpha = mk.hermitian_part(r1 - 1j * beta)
    cut = 1e-9 * max(mk.norm(r1), mk.norm(r2), 1.0)
    if mk.norm(beta) <= cut:
        beta = np.zeros((d, d), dtype=complex)
    else:
        w, U = np.linalg.eigh(beta)
        beta = (U * np.clip(w, 0, None)) @ U.conj().T
    if mk.norm(alpha) <= cut:
        alpha = np.zeros((d, d), dtype=complex)
    return HerglotzFunction(alpha, beta, meas)
