"""Abstract interpolation problem core.

A data set ``(B1, B2, C1, C2, K)`` on a coefficient space X = C^N with a
scale space L = C^d satisfies the form identity

    B1* K B2 - B2* K B1 = C2* C1 - C1* C2,

with K Hermitian PSD.  From such data this module builds the resolvent matrix
Theta(lam), the J-unitary corrector V used when K is singular, and the
linear-fractional transform that maps parameter pairs ``{p, q}`` to solutions.

Theta is stored as a realization

    Theta(lam) = (I + f(lam) C (E - lam F)^{-1} R) M,   f(lam) = f0 + f1 lam,

and every evaluation is a fresh linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matkit as mk
from .errors import (
    AssumptionViolated,
    DenominatorSingular,
    DimensionExceeded,
    InadmissibleParameter,
    NotNeutral,
    PoleAtPoint,
    ShiftNotRegular,
    SingularK,
)
from .matkit import DEFAULT_TOL, Tolerance
from .nevanlinna import (
    DEFAULT_GRID,
    KERNEL_TOL,
    ConstantPair,
    HerglotzFunction,
    NevanlinnaObject,
)
from .report import VerificationReport

U_SAMPLE_POINTS = (1j, 2j, -1j, -2j)
REAL_SAMPLE_POINTS = (-1.5, 0.5, 2.0)


@dataclass(frozen=True, eq=False)
class AipDataSet:
    """Data of an abstract interpolation problem.

    Attributes
    ----------
    B1, B2 : (N, N) arrays
    C1, C2 : (d, N) arrays
    K : (N, N) Hermitian PSD array
    ker_basis : (N, nu0) array
        Basis of ker K (possibly empty).
    x0_basis : (N, r) array
        Basis of a complement X0 of ker K invariant under B1 and B2.
    X : (N, N) array or None
        Reflexive generalized inverse used for K-adjoints when K is singular;
        ``None`` means K is inverted directly.
    """

    B1: np.ndarray
    B2: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    K: np.ndarray
    ker_basis: np.ndarray
    x0_basis: np.ndarray
    X: np.ndarray | None = None

    @property
    def N(self) -> int:
        return self.K.shape[0]

    @property
    def d(self) -> int:
        return self.C1.shape[0]

    @property
    def regular(self) -> bool:
        return self.ker_basis.shape[1] == 0

    @property
    def kadj(self) -> str:
        return "regular" if self.X is None else "pseudo"


def make_data(B1, B2, C1, C2, K, *, x0_basis=None, ker_basis=None, X=None,
              tol: Tolerance = DEFAULT_TOL) -> AipDataSet:
    """Assemble an `AipDataSet`, deriving missing splitting data.

    When K is singular and no `x0_basis` is given, ``ran X`` is used if `X` is
    supplied and ``ran K`` otherwise; `validate_data` reports whether the
    choice is invariant.
    """
    B1 = mk.as_matrix(B1, "B1")
    B2 = mk.as_matrix(B2, "B2")
    C1 = mk.as_matrix(C1, "C1")
    C2 = mk.as_matrix(C2, "C2")
    K = mk.hermitian_part(mk.as_matrix(K, "K"))
    N = K.shape[0]
    if B1.shape != (N, N) or B2.shape != (N, N):
        raise ValueError("B1 and B2 must be N x N with N = size of K")
    if C1.shape[1] != N or C2.shape != C1.shape:
        raise ValueError("C1 and C2 must both be d x N")
    if ker_basis is None:
        ker_basis = mk.null_space(K, tol) if N else np.zeros((0, 0), dtype=complex)
    ker_basis = np.asarray(ker_basis, dtype=complex).reshape(N, -1)
    if x0_basis is None:
        if ker_basis.shape[1] == 0:
            x0_basis = np.eye(N, dtype=complex)
        elif X is not None:
            x0_basis = mk.range_basis(X, tol)
        else:
            x0_basis = mk.range_basis(K, tol)
    x0_basis = np.asarray(x0_basis, dtype=complex).reshape(N, -1)
    if X is not None:
        X = mk.hermitian_part(mk.as_matrix(X, "X"))
    elif ker_basis.shape[1] > 0 and x0_basis.shape[1] > 0:
        Q = x0_basis
        X = Q @ mk.inverse(Q.conj().T @ K @ Q) @ Q.conj().T
        X = mk.hermitian_part(X)
    elif ker_basis.shape[1] > 0:
        X = np.zeros((N, N), dtype=complex)
    return AipDataSet(B1, B2, C1, C2, K, ker_basis, x0_basis, X)


@dataclass(frozen=True)
class Compressed:
    """The data restricted to X0 in the coordinates of ``x0_basis``.

    ``G = Q* K Q`` is the Gram matrix of the coordinates; K-adjoints become
    ``A+ = G^{-1} A* G`` and ``C+ = G^{-1} C*``.
    """

    Q: np.ndarray
    G: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    C1: np.ndarray
    C2: np.ndarray

    @property
    def r(self) -> int:
        return self.Q.shape[1]

    def adj_op(self, A: np.ndarray) -> np.ndarray:
        return mk.solve_linear(self.G, A.conj().T @ self.G)

    def adj_col(self, C: np.ndarray) -> np.ndarray:
        return mk.solve_linear(self.G, C.conj().T)


def compress(data: AipDataSet) -> Compressed:
    Q = data.x0_basis
    r = Q.shape[1]
    if r == 0:
        Z = np.zeros((0, 0), dtype=complex)
        z = np.zeros((data.d, 0), dtype=complex)
        return Compressed(Q, Z, Z, Z, z, z)
    G = mk.hermitian_part(Q.conj().T @ data.K @ Q)
    B1h = np.linalg.lstsq(Q, data.B1 @ Q, rcond=None)[0]
    B2h = np.linalg.lstsq(Q, data.B2 @ Q, rcond=None)[0]
    return Compressed(Q, G, B1h, B2h, data.C1 @ Q, data.C2 @ Q)


def x0_coordinates(data: AipDataSet, h) -> np.ndarray:
    """Coordinates in ``x0_basis`` of the X0 component of h (projection along ker K)."""
    h = np.asarray(h, dtype=complex)
    vec = h.ndim == 1
    H = h.reshape(data.N, -1)
    basis = np.hstack([data.x0_basis, data.ker_basis])
    coef = mk.solve_linear(basis, H)
    a = coef[: data.x0_basis.shape[1]]
    return a.ravel() if vec else a


def form_identity_residual(data: AipDataSet) -> tuple[float, float]:
    """Residual and scale of ``B1* K B2 - B2* K B1 = C2* C1 - C1* C2``."""
    B1, B2, C1, C2, K = data.B1, data.B2, data.C1, data.C2, data.K
    lhs = B1.conj().T @ K @ B2 - B2.conj().T @ K @ B1
    rhs = C2.conj().T @ C1 - C1.conj().T @ C2
    scale = 2 * mk.norm(K) * mk.norm(B1) * mk.norm(B2) + 2 * mk.norm(C1) * mk.norm(C2)
    return mk.norm(lhs - rhs), max(scale, 1.0)


def validate_data(data: AipDataSet, tol: Tolerance = DEFAULT_TOL) -> VerificationReport:
    """Report on the structural assumptions of a data set."""
    rep = VerificationReport()
    res, scale = form_identity_residual(data)
    rep.add("form_identity", "form identity A1", res, tol.bound(scale))

    _, lo = mk.psd_check(data.K, tol)
    rep.add("K_psd", "K nonnegative", max(0.0, -lo), tol.bound(mk.norm(data.K)))

    N = data.N
    Q, U = data.x0_basis, data.ker_basis
    kres = mk.norm(data.K @ U) if U.size else 0.0
    rep.add("kernel_basis", "K annihilates ker basis", kres, tol.bound(mk.norm(data.K)))
    split_rank = mk.numeric_rank(np.hstack([Q, U]), tol) if N else 0
    ok = split_rank == N and Q.shape[1] + U.shape[1] == N
    rep.add("splitting", "X0 direct sum ker K", N - split_rank, 0, ok)

    inv = 0.0
    if Q.size:
        for B in (data.B1, data.B2):
            BQ = B @ Q
            coef = np.linalg.lstsq(Q, BQ, rcond=None)[0]
            inv = max(inv, mk.norm(Q @ coef - BQ))
    rep.add("x0_invariance", "B1, B2 leave X0 invariant", inv,
            tol.bound(max(mk.norm(data.B1), mk.norm(data.B2)) * max(mk.norm(Q), 1.0)))

    if data.X is not None:
        X, K = data.X, data.K
        sx = max(mk.norm(X), 1.0) ** 2 * max(mk.norm(K), 1.0) ** 2
        rep.add("pseudo_XKX", "X K X = X", mk.norm(X @ K @ X - X), tol.bound(sx))
        rep.add("pseudo_KXK", "K X K = K", mk.norm(K @ X @ K - K), tol.bound(sx))
        R = mk.range_basis(X, tol)
        inv_x = 0.0
        if R.size:
            BR = data.B1 @ R
            inv_x = mk.norm(BR - R @ (R.conj().T @ BR))
        rep.add("pseudo_invariance", "B1 ran X in ran X", inv_x, tol.bound(mk.norm(data.B1)))

    # sampled invertibility of the pencil, one good point per half-plane suffices
    worst = 0.0
    for half in ((1j, 2j), (-1j, -2j)):
        best = min(mk.cond(data.B2 - z * data.B1) for z in half) if N else 1.0
        worst = max(worst, best)
    rep.add("pencil_invertibility", "B2 - lam B1 invertible", worst, 1e12)

    r = mk.numeric_rank(data.C2 @ Q, tol) if Q.size else 0
    rep.add("C2_surjectivity", "C2 onto L (function-valued solutions)", data.d - r, 0,
            r == data.d, hard=False)
    return rep


def k_adjoint(data: AipDataSet, C) -> np.ndarray:
    """K-adjoint ``C+`` of a map ``C: X -> C^d``: ``K^{-1} C*`` or ``X C*``."""
    C = mk.as_matrix(C, "C")
    if data.X is None:
        try:
            return mk.solve_linear(data.K, C.conj().T)
        except mk.Singular as exc:
            raise SingularK("K is singular; a generalized inverse X is required") from exc
    return data.X @ C.conj().T


@dataclass(frozen=True)
class GammaSubspace:
    """Image of the ker K generators under the boundary map, as a 2d x nu basis."""

    basis: np.ndarray

    @property
    def nu(self) -> int:
        return self.basis.shape[1]

    @property
    def d(self) -> int:
        return self.basis.shape[0] // 2


def gamma_of_kernel(data: AipDataSet, tol: Tolerance = DEFAULT_TOL) -> GammaSubspace:
    """Span of ``(-C1 u, C2 u)`` over ``u`` in ker K."""
    U = data.ker_basis
    d = data.d
    if U.shape[1] == 0:
        return GammaSubspace(np.zeros((2 * d, 0), dtype=complex))
    S = np.vstack([-data.C1 @ U, data.C2 @ U])
    if mk.norm(S) <= tol.abs:
        return GammaSubspace(np.zeros((2 * d, 0), dtype=complex))
    return GammaSubspace(mk.range_basis(S, tol))


def sigma(basis: np.ndarray) -> np.ndarray:
    """Sign involution ``(x, y) -> (-x, y)`` applied to columns."""
    d = basis.shape[0] // 2
    out = basis.copy()
    out[:d] = -out[:d]
    return out


def build_corrector_V(gamma: GammaSubspace, d: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """J-unitary V whose columns ``d .. d+nu-1`` span ``sigma(gamma)``.

    If the p-components of the neutral subspace sit in the first nu
    coordinates, V is chosen of the simple form ``[[I, H], [0, I]]`` with H
    Hermitian.  Otherwise the neutral basis is completed to a Lagrangian
    subspace and paired with its dual.
    """
    nu = gamma.nu
    if nu > d:
        raise DimensionExceeded(f"nu = {nu} exceeds d = {d}")
    J = mk.j_matrix(d)
    if nu == 0:
        return np.eye(2 * d, dtype=complex)
    Nb = sigma(gamma.basis)
    neutral = mk.norm(Nb.conj().T @ J @ Nb)
    if neutral > 1e-10 * max(mk.norm(Nb) ** 2, 1.0):
        raise NotNeutral(f"subspace is not J-neutral (residual {neutral:.3e})")
    Nq, Np = Nb[:d], Nb[d:]
    Np1 = Np[:nu]
    if mk.norm(Np[nu:]) <= tol.abs + 1e-12 * mk.norm(Np) and mk.cond(Np1) < 1e10:
        H1 = Nq @ mk.inverse(Np1)  # d x nu, top block Hermitian
        H = np.zeros((d, d), dtype=complex)
        H[:, :nu] = H1
        H[:nu, nu:] = H1[nu:].conj().T
        H[:nu, :nu] = mk.hermitian_part(H1[:nu])
        V = np.eye(2 * d, dtype=complex)
        V[:d, d:] = H
        return V
    # general case: Lagrangian completion
    Bn, _ = np.linalg.qr(Nb)
    comp = mk.null_space(Bn.conj().T @ J, tol)  # J-orthogonal complement, dim 2d - nu
    # remove the neutral part itself
    W = comp - Bn @ (Bn.conj().T @ comp)
    W = mk.range_basis(W, tol)
    if W.shape[1]:
        w, U = np.linalg.eigh(mk.hermitian_part(W.conj().T @ J @ W))
        pos = [k for k in range(len(w)) if w[k] > 0][::-1]
        neg = [k for k in range(len(w)) if w[k] < 0]
        ext = []
        for a, b in zip(pos, neg):
            ext.append(U[:, a] / np.sqrt(w[a]) + U[:, b] / np.sqrt(-w[b]))
        ext = W @ np.array(ext).T if ext else np.zeros((2 * d, 0), dtype=complex)
        Bl = np.hstack([Bn, ext])
    else:
        Bl = Bn
    if Bl.shape[1] != d:
        raise NotNeutral("could not complete the neutral subspace to a Lagrangian one")
    A = J @ Bl @ (1j * mk.inverse(Bl.conj().T @ Bl))
    return np.hstack([A, Bl])


@dataclass(frozen=True, eq=False)
class ThetaRealization:
    """Realization ``Theta(lam) = (I + f(lam) C (E - lam F)^{-1} R) M``.

    ``M = V`` for the regular and singular forms and ``M = [[I, 0], [mu, I]] V``
    for the shifted form.
    """

    d: int
    form: str  # "regular", "singular" or "shifted"
    E: np.ndarray
    F: np.ndarray
    Ccore: np.ndarray
    Rcore: np.ndarray
    f0: complex
    f1: complex
    M: np.ndarray
    V: np.ndarray
    nu: int
    mu: float | None = None
    data: AipDataSet | None = field(default=None, repr=False)

    def resolvent_term(self, lam: complex) -> np.ndarray:
        lam = complex(lam)
        try:
            Y = mk.solve_linear(self.E - lam * self.F, self.Rcore)
        except mk.Singular as exc:
            raise PoleAtPoint(f"Theta has a pole at {lam}") from exc
        return (self.f0 + self.f1 * lam) * (self.Ccore @ Y)

    def bracket(self, lam: complex) -> np.ndarray:
        return np.eye(2 * self.d, dtype=complex) + self.resolvent_term(lam)

    def __call__(self, lam: complex) -> np.ndarray:
        return self.bracket(lam) @ self.M

    @property
    def base_point(self) -> float:
        """Point where the bracket equals I (0, or mu for the shifted form)."""
        return 0.0 if self.mu is None else float(self.mu)


def _shift_factor(d: int, mu: float) -> np.ndarray:
    S = np.eye(2 * d, dtype=complex)
    S[d:, :d] = mu * np.eye(d)
    return S


def build_theta(data: AipDataSet, tol: Tolerance = DEFAULT_TOL) -> ThetaRealization:
    """Resolvent matrix for data with ``B2 = I``.

    ``Theta(lam) = (I - lam [C1; C2] (I - lam B1)^{-1} [C2+, -C1+]) V``.
    """
    N, d = data.N, data.d
    if mk.norm(data.B2 - np.eye(N)) > tol.bound(1.0):
        raise AssumptionViolated("B2 must be the identity; use build_theta_shifted")
    R = np.hstack([k_adjoint(data, data.C2), -k_adjoint(data, data.C1)])
    gamma = gamma_of_kernel(data, tol)
    V = build_corrector_V(gamma, d, tol)
    form = "regular" if data.regular else "singular"
    return ThetaRealization(
        d=d, form=form, E=np.eye(N, dtype=complex), F=data.B1.copy(),
        Ccore=np.vstack([data.C1, data.C2]), Rcore=R, f0=0.0, f1=-1.0,
        M=V, V=V, nu=gamma.nu, mu=None, data=data,
    )


def build_theta_shifted(data: AipDataSet, mu: float = 0.0,
                        tol: Tolerance = DEFAULT_TOL) -> ThetaRealization:
    """Resolvent matrix for data with ``B2 - mu B1`` invertible on X0.

    Bracket ``I + i(lam - mu) C (B2 - lam B1)^{-1} (B2+ - mu B1+)^{-1} C+ J``
    in X0 coordinates, followed by ``[[I, 0], [mu, I]] V``.
    """
    mu = float(mu)
    d = data.d
    c = compress(data)
    if mk.cond(c.B2 - mu * c.B1) > 1e12:
        raise ShiftNotRegular(f"B2 - mu B1 is singular for mu = {mu}")
    Cc = np.vstack([c.C1, c.C2])
    Cplus = c.adj_col(Cc) if c.r else np.zeros((0, 2 * d), dtype=complex)
    if c.r:
        Apl = c.adj_op(c.B2) - mu * c.adj_op(c.B1)
        R = mk.solve_linear(Apl, Cplus @ mk.j_matrix(d))
    else:
        R = np.zeros((0, 2 * d), dtype=complex)
    gamma = gamma_of_kernel(data, tol)
    V = build_corrector_V(gamma, d, tol)
    return ThetaRealization(
        d=d, form="shifted", E=c.B2, F=c.B1, Ccore=Cc, Rcore=R,
        f0=-1j * mu, f1=1j, M=_shift_factor(d, mu) @ V, V=V, nu=gamma.nu, mu=mu, data=data,
    )


def build_theta_auto(data: AipDataSet, mu: float | None = None,
                     tol: Tolerance = DEFAULT_TOL) -> ThetaRealization:
    """`build_theta` when ``B2 = I`` and no shift is requested, else the shifted form."""
    if mu is None and mk.norm(data.B2 - np.eye(data.N)) <= tol.bound(1.0):
        return build_theta(data, tol)
    return build_theta_shifted(data, 0.0 if mu is None else mu, tol)


def _blocks_zero(A: np.ndarray, nu: int, atol: float) -> bool:
    return (mk.norm(A[:nu, :]) <= atol) and (mk.norm(A[:, :nu]) <= atol)


def admissible_parameter(param: NevanlinnaObject, nu: int, atol: float = 1e-12) -> bool:
    """Whether `param` has the block form ``q = diag(0, q1)``, ``p = diag(I, p1)``."""
    if nu == 0:
        return True
    d = param.d
    if nu > d:
        return False
    if isinstance(param, ConstantPair):
        q, p = param.q, param.p
        scale = max(mk.norm(q), mk.norm(p), 1.0)
        a = atol * scale
        if mk.norm(q[:nu, :]) > a or mk.norm(q[:, :nu]) > a:
            return False
        if mk.norm(p[:nu, :nu] - np.eye(nu)) > a:
            return False
        if mk.norm(p[:nu, nu:]) > a or mk.norm(p[nu:, :nu]) > a:
            return False
        if nu == d:
            return True
        try:
            ConstantPair(q[nu:, nu:], p[nu:, nu:])
        except ValueError:
            return False
        return True
    if isinstance(param, HerglotzFunction):
        a = atol * max(mk.norm(param.alpha), mk.norm(param.beta), 1.0)
        if not (_blocks_zero(param.alpha, nu, a) and _blocks_zero(param.beta, nu, a)):
            return False
        return all(_blocks_zero(W, nu, a) for W in param.measure.weights)
    return False


def required_block_form(nu: int, d: int) -> str:
    return (f"parameter must have q = diag(0_{nu}, q1) and p = diag(I_{nu}, p1) "
            f"with a {d - nu}x{d - nu} Nevanlinna pair {{p1, q1}}")


class RationalQuotient(NevanlinnaObject):
    """Solution ``Theta(lam)[q; p]`` of the linear-fractional transform.

    The pair is evaluated through a bordered linear system so that poles of
    Theta that cancel in the quotient (for instance at interpolation nodes)
    are harmless.
    """

    def __init__(self, theta: ThetaRealization, param: NevanlinnaObject):
        self.theta = theta
        self.param = param

    @property
    def d(self) -> int:
        return self.theta.d

    def _solve(self, lam: complex, normalized: bool):
        th = self.theta
        d = th.d
        lam = complex(lam)
        q, p = self.param.parameter(lam)
        qp = th.M @ np.vstack([q, p])
        qm, pm = qp[:d], qp[d:]
        Z = th.Rcore @ qp
        f = th.f0 + th.f1 * lam
        C1, C2 = th.Ccore[:d], th.Ccore[d:]
        n = th.E.shape[0]
        if normalized:
            A21 = f * (C2 - lam * C1)
            A22 = pm - lam * qm
        else:
            A21 = f * C2
            A22 = pm
        A = np.block([[th.E - lam * th.F, -Z], [A21, A22]])
        rhs = np.vstack([np.zeros((n, d), dtype=complex), np.eye(d, dtype=complex)])
        try:
            sol = mk.solve_linear(A, rhs)
        except mk.Singular as exc:
            raise DenominatorSingular(f"LFT denominator is singular at {lam}") from exc
        x, w = sol[:n], sol[n:]
        top = f * (C1 @ x) + qm @ w
        bot = f * (C2 @ x) + pm @ w
        return top, bot

    def pair(self, lam):
        """Normalized pair ``(phi, psi)`` with ``phi - lam psi = I``."""
        psi, phi = self._solve(lam, True)
        return phi, psi

    def value(self, lam):
        """Function form ``m = (th11 q + th12 p)(th21 q + th22 p)^{-1}``."""
        top, _ = self._solve(lam, False)
        return top


def lft_solve(theta: ThetaRealization, param: NevanlinnaObject) -> RationalQuotient:
    """Solution of the interpolation problem attached to a parameter pair."""
    if param.d != theta.d:
        raise InadmissibleParameter(f"parameter has size {param.d}, expected {theta.d}")
    if not admissible_parameter(param, theta.nu):
        raise InadmissibleParameter(required_block_form(theta.nu, theta.d))
    return RationalQuotient(theta, param)


def forced_parameter(d: int, nu: int) -> ConstantPair:
    """Admissible constant parameter with trailing block ``(q1, p1) = (0, I)``."""
    p = np.eye(d, dtype=complex)
    q = np.zeros((d, d), dtype=complex)
    return ConstantPair(q, p)


def f_map(data: AipDataSet, solution: NevanlinnaObject, h, lam: complex,
          form: str = "function") -> np.ndarray:
    """Value at `lam` of the image of ``h`` under F.

    ``form="function"`` gives ``[I, -m(lam)] G(lam) h0`` and ``form="pair"``
    gives ``[phi(lam), -psi(lam)] G(lam) h0``, where
    ``G(lam) = [C1; C2] (B2 - lam B1)^{-1}`` on X0 and ``h0`` is the X0
    component of h.
    """
    lam = complex(lam)
    c = compress(data)
    a = x0_coordinates(data, h)
    if c.r == 0:
        return np.zeros(data.d, dtype=complex)
    try:
        y = mk.solve_linear(c.B2 - lam * c.B1, a)
    except mk.Singular as exc:
        raise PoleAtPoint(f"B2 - lam B1 is singular at {lam}") from exc
    g1, g2 = c.C1 @ y, c.C2 @ y
    if form == "function":
        return g1 - solution.value(lam) @ g2
    if form == "pair":
        phi, psi = solution.pair(lam)
        return phi @ g1 - psi @ g2
    raise ValueError("form must be 'function' or 'pair'")


def potapov_kernel(theta: ThetaRealization, lam: complex) -> np.ndarray:
    """``(J - Theta J Theta*) / (-i (lam - conj(lam)))``, Hermitian for non-real lam."""
    J = mk.j_matrix(theta.d)
    T = theta(lam)
    return (J - T @ J @ T.conj().T) / (2 * complex(lam).imag)


def theta_j_checks(theta: ThetaRealization, grid=DEFAULT_GRID, tol: Tolerance = KERNEL_TOL,
                   real_points=REAL_SAMPLE_POINTS) -> VerificationReport:
    """J-unitarity of V, base value of Theta, and the Potapov J-property."""
    rep = VerificationReport()
    J = mk.j_matrix(theta.d)
    rep.add("V_j_unitary", "J-unitary corrector", mk.is_j_unitary_residual(theta.V),
            1e-10 * max(1.0, mk.norm(theta.V) ** 2))
    base = theta(theta.base_point)
    rep.add("theta_base_value", "Theta at base point", mk.norm(base - theta.M), 0.0)
    worst = 0.0
    bound = tol.abs
    for z in grid:
        z = complex(z)
        if z.imag == 0:
            continue
        try:
            P = mk.hermitian_part(potapov_kernel(theta, z))
        except PoleAtPoint:
            continue
        _, lo = mk.psd_check(P, tol)
        worst = max(worst, -lo)
        bound = max(bound, tol.bound(mk.norm(P)))
    rep.add("potapov_kernel_psd", "J-property off the real line", worst, bound)
    real_res = 0.0
    real_bound = tol.abs
    for x in real_points:
        try:
            T = theta(float(x))
        except PoleAtPoint:
            continue
        real_res = max(real_res, mk.norm(J - T @ J @ T.conj().T))
        real_bound = max(real_bound, tol.bound(mk.norm(T) ** 2))
    rep.add("j_unitary_on_real_line", "J-unitary on the real line", real_res, real_bound)
    return rep
