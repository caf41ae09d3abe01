"""Independent ground truth built from canonical selfadjoint extensions.

The symmetric relation A generated by the data is never touched through Theta.
Instead the adjoint relation

    A+ = {((g, v), (g', v')) : g = B1+ g' + C1+ v' - C2+ v}

is written down explicitly on X0 (in the coordinates of ``x0_basis`` with the
Gram matrix ``G = Q* K Q``), together with the boundary maps

    Gamma1 = -v + C1 g',   Gamma2 = v' - C2 g'.

A constant boundary condition selects a selfadjoint extension, and its
L-resolvent, gamma-field and spectral measure come from direct linear solves.

Data with ``B2 != I`` are first rewritten as data of the relation ``A - mu``
(``B2 - mu B1`` invertible), which has ``B2 = I``; resolvents are then taken
at ``lam - mu``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkit as mk
from .aip import AipDataSet, ThetaRealization, compress
from .errors import (
    BoundaryNotSelfadjoint,
    NotInAdjoint,
    RelationNotGraph,
    ShiftNotRegular,
    SystemSingular,
)
from .matkit import DEFAULT_TOL, Tolerance
from .nevanlinna import DEFAULT_GRID, ConstantPair, DiscreteMeasure, HerglotzFunction, herglotz_from_poles


@dataclass(frozen=True)
class ExtensionSpec:
    """Constant boundary condition selecting a canonical extension.

    ``kind`` is ``"graph"`` (Gamma1 = tau Gamma2), ``"infinity"`` (Gamma2 = 0)
    or ``"general"`` ((Gamma1, Gamma2) in ran[-q0; p0]).
    """

    kind: str
    tau: np.ndarray | None = None
    q0: np.ndarray | None = None
    p0: np.ndarray | None = None
    d: int = 1

    @classmethod
    def graph(cls, tau) -> "ExtensionSpec":
        tau = mk.as_matrix(tau, "tau")
        return cls("graph", tau=tau, d=tau.shape[0])

    @classmethod
    def infinity(cls, d: int) -> "ExtensionSpec":
        return cls("infinity", d=d)

    @classmethod
    def general(cls, q0, p0) -> "ExtensionSpec":
        q0 = mk.as_matrix(q0, "q0")
        p0 = mk.as_matrix(p0, "p0")
        return cls("general", q0=q0, p0=p0, d=q0.shape[0])

    def rows(self) -> tuple[np.ndarray, np.ndarray]:
        """Matrices (P, Q) such that the condition reads ``P Gamma1 + Q Gamma2 = 0``."""
        d = self.d
        I = np.eye(d, dtype=complex)
        if self.kind == "graph":
            return I, -self.tau
        if self.kind == "infinity":
            return np.zeros((d, d), dtype=complex), I
        return self.p0.conj().T, self.q0.conj().T

    def check_selfadjoint(self) -> None:
        P, Q = self.rows()
        # the condition describes ker[P, Q]; selfadjoint iff ran[Q*; ... ] is Lagrangian
        A = np.hstack([P, Q])
        if mk.numeric_rank(A) != self.d:
            raise BoundaryNotSelfadjoint("boundary condition does not have full rank")
        H = P @ Q.conj().T
        if mk.norm(H - H.conj().T) > 1e-10 * max(mk.norm(P) * mk.norm(Q), 1.0):
            raise BoundaryNotSelfadjoint("boundary condition is not symmetric")


@dataclass(frozen=True)
class LResolvent:
    """Direct solution at one point: L-resolvent and derived quantities."""

    lam: complex
    psi: np.ndarray
    phi: np.ndarray
    m: np.ndarray | None
    gamma: np.ndarray


class AdjointRelationModel:
    """Explicit adjoint relation of the data set on X0.

    Parameters
    ----------
    data : AipDataSet
    mu : float, optional
        Real shift used when ``B2`` is not the identity (default 0).
    """

    def __init__(self, data: AipDataSet, mu: float | None = None, tol: Tolerance = DEFAULT_TOL):
        self.data = data
        self.tol = tol
        c = compress(data)
        self.c = c
        self.r = c.r
        self.d = data.d
        if mu is None and (c.r == 0 or mk.norm(c.B2 - np.eye(c.r)) <= tol.bound(1.0)):
            self.mu = 0.0
            self.shifted = False
            B1, C1, C2 = c.B1, c.C1, c.C2
        else:
            self.mu = 0.0 if mu is None else float(mu)
            self.shifted = True
            Delta = c.B2 - self.mu * c.B1
            if mk.cond(Delta) > 1e12:
                raise ShiftNotRegular(f"B2 - mu B1 is singular for mu = {self.mu}")
            Di = mk.inverse(Delta)
            B1 = c.B1 @ Di
            C1 = c.C1 @ Di
            C2 = (c.C2 - self.mu * c.C1) @ Di
        self.B1, self.C1, self.C2 = B1, C1, C2
        self.G = c.G
        if self.r:
            self.B1p = c.adj_op(B1)
            self.C1p = c.adj_col(C1)
            self.C2p = c.adj_col(C2)
        else:
            self.B1p = np.zeros((0, 0), dtype=complex)
            self.C1p = np.zeros((0, self.d), dtype=complex)
            self.C2p = np.zeros((0, self.d), dtype=complex)

    # elements are tuples (g, v, g', v') of the shifted relation A+ - mu

    def element(self, gp, v, vp) -> tuple[np.ndarray, ...]:
        gp = np.asarray(gp, dtype=complex)
        v = np.asarray(v, dtype=complex)
        vp = np.asarray(vp, dtype=complex)
        g = self.B1p @ gp + self.C1p @ vp - self.C2p @ v
        return g, v, gp, vp

    def adjoint_residual(self, element) -> float:
        g, v, gp, vp = element
        return mk.norm(g - (self.B1p @ gp + self.C1p @ vp - self.C2p @ v))

    def inner(self, x, y) -> complex:
        """H + L inner product ``(x, y)``, linear in x."""
        (xg, xv), (yg, yv) = x, y
        return complex(np.vdot(yg, self.G @ xg) + np.vdot(yv, xv))

    def generator_of_A(self, h) -> tuple[np.ndarray, ...]:
        """Element ((B1 h, C1 h), (h, C2 h)) of A - mu, for h in X0 coordinates."""
        h = np.asarray(h, dtype=complex)
        return self.B1 @ h, self.C1 @ h, h, self.C2 @ h

    def kernel_generator(self, u) -> tuple[np.ndarray, ...]:
        """Element of A - mu generated by ``u`` in ker K (H-components vanish or project to X0)."""
        d = self.data
        u = np.asarray(u, dtype=complex)
        Q = d.x0_basis
        basis = np.hstack([Q, d.ker_basis])

        def x0(vec):
            return mk.solve_linear(basis, vec)[: Q.shape[1]]

        Bu1 = d.B1 @ u
        Bu2 = d.B2 @ u - self.mu * Bu1
        return x0(Bu1), d.C1 @ u, x0(Bu2), d.C2 @ u - self.mu * (d.C1 @ u)


def boundary_map(model: AdjointRelationModel, element, check: bool = True):
    """``(Gamma1, Gamma2) = (-v + C1 g', v' - C2 g')`` of an element of the adjoint."""
    g, v, gp, vp = element
    if check:
        res = model.adjoint_residual(element)
        scale = max(1.0, mk.norm(np.concatenate([np.ravel(x) for x in element])))
        if res > 1e-10 * scale:
            raise NotInAdjoint(f"element is not in the adjoint relation (residual {res:.3e})")
    return -v + model.C1 @ gp, vp - model.C2 @ gp


def green_residual(model: AdjointRelationModel, f, g) -> float:
    """Residual of ``(f', g) - (f, g') = (G1 f, G2 g) - (G2 f, G1 g)``."""
    fg, fv, fgp, fvp = f
    gg, gv, ggp, gvp = g
    lhs = model.inner((fgp, fvp), (gg, gv)) - model.inner((fg, fv), (ggp, gvp))
    f1, f2 = boundary_map(model, f, check=False)
    g1, g2 = boundary_map(model, g, check=False)
    rhs = np.vdot(g2, f1) - np.vdot(g1, f2)
    return abs(lhs - rhs)


def _system(model: AdjointRelationModel, ext: ExtensionSpec, lam: complex):
    """Matrix and right side of the resolvent system in the unknowns (g, v)."""
    ext.check_selfadjoint()
    r, d = model.r, model.d
    ls = complex(lam) - model.mu
    P, Q = ext.rows()
    I_r = np.eye(r, dtype=complex)
    A11 = I_r - ls * model.B1p
    A12 = -(ls * model.C1p - model.C2p)
    # P(-v + ls C1 g) + Q(ls v + u - ls C2 g) = 0
    A21 = ls * (P @ model.C1 - Q @ model.C2)
    A22 = -P + ls * Q
    A = np.block([[A11, A12], [A21, A22]])
    rhs = np.vstack([model.C1p, -Q])
    return A, rhs


def l_resolvent_direct(model: AdjointRelationModel, ext: ExtensionSpec, lam: complex) -> LResolvent:
    """L-resolvent ``psi(lam) = P_L (A~ - lam)^{-1}|_L`` of a canonical extension."""
    lam = complex(lam)
    if lam.imag == 0:
        raise SystemSingular("resolvent requested on the real line")
    A, rhs = _system(model, ext, lam)
    try:
        sol = mk.solve_linear(A, rhs)
    except mk.Singular as exc:
        raise SystemSingular(f"lam = {lam} is in the spectrum of the extension") from exc
    gamma, psi = sol[: model.r], sol[model.r:]
    phi = np.eye(model.d, dtype=complex) + lam * psi
    try:
        m = mk.solve_linear(phi.T, psi.T).T
    except mk.Singular:
        m = None
    return LResolvent(lam, psi, phi, m, gamma)


def weyl_pair(model: AdjointRelationModel, ext: ExtensionSpec, grid=DEFAULT_GRID):
    """Normalized pair ``(phi, psi)`` of the extension at each grid point."""
    out = []
    for z in grid:
        res = l_resolvent_direct(model, ext, z)
        out.append((res.phi, res.psi))
    return out


def gamma_field(model: AdjointRelationModel, ext: ExtensionSpec, lam: complex) -> np.ndarray:
    """H-component ``P_H (A~ - lam)^{-1}|_L`` in X0 coordinates."""
    return l_resolvent_direct(model, ext, lam).gamma


def kernel_factorization_residual(model: AdjointRelationModel, ext: ExtensionSpec,
                                  lam: complex, omega: complex) -> float:
    """Residual of ``N_omega(lam) = gamma(conj lam)* gamma(conj omega)`` in the K-metric."""
    lam = complex(lam)
    omega = complex(omega)
    psl = l_resolvent_direct(model, ext, lam).psi
    psw = l_resolvent_direct(model, ext, omega).psi
    lhs = (psl - psw.conj().T) / (lam - omega.conjugate()) - psl @ psw.conj().T
    gl = gamma_field(model, ext, lam.conjugate())
    gw = gamma_field(model, ext, omega.conjugate())
    rhs = gl.conj().T @ model.G @ gw
    return mk.norm(lhs - rhs)


def extension_relation(model: AdjointRelationModel, ext: ExtensionSpec):
    """Basis of the extension as matrices (Dom, Ran) of size (r + d) x (r + d).

    Columns are elements ((g, v), (g', v')) of the unshifted extension.
    """
    ext.check_selfadjoint()
    r, d = model.r, model.d
    P, Q = ext.rows()
    # free variables (g', v, v'); constraint P(-v + C1 g') + Q(v' - C2 g') = 0
    cons = np.hstack([P @ model.C1 - Q @ model.C2, -P, Q])
    Nb = mk.null_space(cons, model.tol)
    gp, v, vp = Nb[:r], Nb[r:r + d], Nb[r + d:]
    g = model.B1p @ gp + model.C1p @ vp - model.C2p @ v
    Dom = np.vstack([g, v])
    Ran = np.vstack([gp, vp]) + model.mu * Dom
    return Dom, Ran


def herglotz_direct(model: AdjointRelationModel, ext: ExtensionSpec,
                    tol: Tolerance = DEFAULT_TOL) -> HerglotzFunction:
    """Representation ``m = alpha + beta lam + sum W_k / (t_k - lam)`` of the extension.

    ``m(lam) v' = v`` whenever ((g, v), (lam g, v')) lies in the extension, so
    m is the transfer function of the pencil ``Ran - lam [Dom_H; 0]``; its
    poles and residues give the atoms and weights.
    """
    r, d = model.r, model.d
    Dom, Ran = extension_relation(model, ext)
    L1 = np.vstack([Dom[:r], np.zeros((d, r + d), dtype=complex)])
    out = np.vstack([np.zeros((r, d), dtype=complex), np.eye(d, dtype=complex)])
    det_probe = [mk.cond(Ran - z * L1) for z in (0.3j + 0.7, -1.1j + 0.2)]
    if min(det_probe) > 1e13:
        raise RelationNotGraph("extension pencil is singular; use residue extraction on m")
    poles = mk.pencil_pole_residues(Ran, L1, Dom[r:], np.zeros_like(Dom[r:]), out)
    return herglotz_from_poles(poles, lambda z: l_resolvent_direct(model, ext, z).m, d)


def spectral_measure_direct(model: AdjointRelationModel, ext: ExtensionSpec,
                            tol: Tolerance = DEFAULT_TOL) -> DiscreteMeasure:
    """Spectral measure of the extension's L-resolvent function m."""
    return herglotz_direct(model, ext, tol).measure


def extension_for_parameter(theta: ThetaRealization, param: ConstantPair) -> ExtensionSpec:
    """Extension matched to a constant parameter.

    The boundary condition is ``(Gamma1, Gamma2) in ran[-q~; p~]`` with
    ``[q~; p~] = V [q; p]``, in the boundary maps of the model built with the
    same shift as `theta` (see `model_for_theta`).  The factor
    ``[[I, 0], [mu, I]]`` of the shifted form is not applied here: it is
    absorbed by the change from A to ``A - mu``.
    """
    d = theta.d
    qp = theta.V @ np.vstack([param.q, param.p])
    return ExtensionSpec.general(qp[:d], qp[d:])


def model_for_theta(theta: ThetaRealization) -> AdjointRelationModel:
    """Oracle model using the same shift as `theta`."""
    return AdjointRelationModel(theta.data, mu=theta.mu)


def defect_dimension(model: AdjointRelationModel, lam: complex) -> int:
    """Dimension of {(g, v): ((g, v), (lam g, lam v)) in A+} at a non-real point."""
    ls = complex(lam) - model.mu
    A = np.hstack([np.eye(model.r) - ls * model.B1p, -(ls * model.C1p - model.C2p)])
    if model.r == 0:
        return model.d
    return model.r + model.d - mk.numeric_rank(A, model.tol)
