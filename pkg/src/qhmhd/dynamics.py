"""State representations and right-hand sides for quasi-homogeneous ideal MHD.

Three equivalent formulations of the same dynamics are provided:

- primitive (R, u, b):
    dR/dt = -div(R u)
    du/dt = -P[ div(u x u - b x b) + R C u ]
    db/dt = -div(u x b - b x u)
- symmetrized (R, alpha, beta) with alpha = u + b, beta = u - b:
    dR/dt     = -1/2 div(R (alpha + beta))
    dalpha/dt = -P div(beta x alpha) - 1/2 P[R C (alpha + beta)]
    dbeta/dt  = -P div(alpha x beta) - 1/2 P[R C (alpha + beta)]
- scalar-curl (R, X, Y) with X = curl(alpha), Y = curl(beta), plus the
  spatial means of alpha and beta (on the torus the means evolve by the
  average of the coupling force, and the curl determines a field only up
  to its mean):
    dX/dt = -div(beta X) + L(grad alpha, grad beta) - 1/2 curl(R C (alpha+beta))
    dY/dt = -div(alpha Y) - L(grad alpha, grad beta) - 1/2 curl(R C (alpha+beta))

Here P is the divergence-free projection, C a constant 2x2 coupling
matrix, and L the bilinear form

    L(grad a, grad b) = d1 a1 (d1 b2 + d2 b1) + d2 b2 (d1 a2 + d2 a1),

which is skew-symmetric in its two arguments for divergence-free fields
(so L(grad f, grad f) = 0, and the Y equation uses -L).  All quadratic
terms are dealiased by the 2/3 rule; with dealiased states the three
right-hand sides are exactly conjugate under the linear changes of
variables, which the tests assert.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import (
    FourierGrid,
    GridError,
    SpectralField,
    VectorField,
    biot_savart,
    curl2d,
    dealias_product,
    derivative,
    divergence,
    leray_project,
)


@dataclass(frozen=True)
class CouplingMatrix:
    """Constant 2x2 real matrix of the density-velocity coupling force."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.float64)
        if e.shape != (2, 2):
            raise ValueError(f"coupling matrix must be 2x2, got shape {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def rotation(cls) -> "CouplingMatrix":
        """The rotation coupling [[0, -1], [1, 0]] (skew-symmetric)."""
        return cls(np.array([[0.0, -1.0], [1.0, 0.0]]))

    @classmethod
    def zero(cls) -> "CouplingMatrix":
        return cls(np.zeros((2, 2)))

    def is_skew_symmetric(self, tol: float = 0.0) -> bool:
        return bool(np.abs(self.entries + self.entries.T).max() <= tol)

    def opnorm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))

    def apply_values(self, wx: np.ndarray, wy: np.ndarray):
        c = self.entries
        return c[0, 0] * wx + c[0, 1] * wy, c[1, 0] * wx + c[1, 1] * wy


@dataclass(frozen=True)
class MhdState:
    time: float
    R: SpectralField
    u: VectorField
    b: VectorField

    @property
    def grid(self) -> FourierGrid:
        return self.R.grid

    def lincomb(self, coeff_states) -> "MhdState":
        R = u = b = None
        for c, s in coeff_states:
            R = c * s.R if R is None else R + c * s.R
            u = c * s.u if u is None else u + c * s.u
            b = c * s.b if b is None else b + c * s.b
        return MhdState(time=self.time, R=R, u=u, b=b)

    def with_time(self, t: float) -> "MhdState":
        return replace(self, time=t)

    def is_finite(self) -> bool:
        return self.R.is_finite() and self.u.is_finite() and self.b.is_finite()


@dataclass(frozen=True)
class ElsasserState:
    time: float
    R: SpectralField
    alpha: VectorField
    beta: VectorField

    @property
    def grid(self) -> FourierGrid:
        return self.R.grid

    def lincomb(self, coeff_states) -> "ElsasserState":
        R = a = b = None
        for c, s in coeff_states:
            R = c * s.R if R is None else R + c * s.R
            a = c * s.alpha if a is None else a + c * s.alpha
            b = c * s.beta if b is None else b + c * s.beta
        return ElsasserState(time=self.time, R=R, alpha=a, beta=b)

    def with_time(self, t: float) -> "ElsasserState":
        return replace(self, time=t)

    def is_finite(self) -> bool:
        return self.R.is_finite() and self.alpha.is_finite() and self.beta.is_finite()


@dataclass(frozen=True)
class VorticityState:
    """Scalar curls of the symmetrized fields plus their spatial means.

    X and Y are mean-free (curls of periodic fields); the means of alpha
    and beta are carried separately, as the low-frequency content the curl
    cannot see.
    """

    time: float
    R: SpectralField
    X: SpectralField
    Y: SpectralField
    mean_alpha: np.ndarray
    mean_beta: np.ndarray

    @property
    def grid(self) -> FourierGrid:
        return self.R.grid

    def lincomb(self, coeff_states) -> "VorticityState":
        R = X = Y = ma = mb = None
        for c, s in coeff_states:
            R = c * s.R if R is None else R + c * s.R
            X = c * s.X if X is None else X + c * s.X
            Y = c * s.Y if Y is None else Y + c * s.Y
            ma = c * s.mean_alpha if ma is None else ma + c * s.mean_alpha
            mb = c * s.mean_beta if mb is None else mb + c * s.mean_beta
        return VorticityState(time=self.time, R=R, X=X, Y=Y, mean_alpha=ma, mean_beta=mb)

    def with_time(self, t: float) -> "VorticityState":
        return replace(self, time=t)

    def is_finite(self) -> bool:
        return (self.R.is_finite() and self.X.is_finite() and self.Y.is_finite()
                and bool(np.all(np.isfinite(self.mean_alpha)))
                and bool(np.all(np.isfinite(self.mean_beta))))


@dataclass(frozen=True)
class PressureFields:
    """Total pressure pi and hydrodynamic part Pi = pi - |b|^2 / 2."""

    pi: SpectralField
    Pi: SpectralField


# -- changes of variables ----------------------------------------------------


def to_elsasser(s: MhdState) -> ElsasserState:
    return ElsasserState(time=s.time, R=s.R, alpha=s.u + s.b, beta=s.u - s.b)


def from_elsasser(e: ElsasserState) -> MhdState:
    return MhdState(time=e.time, R=e.R,
                    u=0.5 * (e.alpha + e.beta), b=0.5 * (e.alpha - e.beta))


def to_vorticity(e: ElsasserState) -> VorticityState:
    return VorticityState(
        time=e.time, R=e.R, X=curl2d(e.alpha), Y=curl2d(e.beta),
        mean_alpha=e.alpha.mean(), mean_beta=e.beta.mean(),
    )


def from_vorticity(v: VorticityState) -> ElsasserState:
    return ElsasserState(
        time=v.time, R=v.R,
        alpha=biot_savart(v.X, v.mean_alpha),
        beta=biot_savart(v.Y, v.mean_beta),
    )


def state_as_mhd(state) -> MhdState:
    """Reconstruct primitive variables from any formulation's state."""
    if isinstance(state, MhdState):
        return state
    if isinstance(state, ElsasserState):
        return from_elsasser(state)
    if isinstance(state, VorticityState):
        return from_elsasser(from_vorticity(state))
    raise TypeError(f"not a state: {type(state)!r}")


def state_as_vorticity(state) -> VorticityState:
    if isinstance(state, VorticityState):
        return state
    if isinstance(state, MhdState):
        state = to_elsasser(state)
    return to_vorticity(state)


# -- the bilinear vorticity source -------------------------------------------


@dataclass(frozen=True)
class VectorGradient:
    """Real-space Jacobian entries of a vector field; d_ij = d_i (component j)."""

    grid: FourierGrid
    d11: np.ndarray
    d12: np.ndarray
    d21: np.ndarray
    d22: np.ndarray

    @classmethod
    def of(cls, v: VectorField) -> "VectorGradient":
        return cls(
            grid=v.grid,
            d11=derivative(v.x, 1).values,
            d12=derivative(v.y, 1).values,
            d21=derivative(v.x, 2).values,
            d22=derivative(v.y, 2).values,
        )


def l_operator(grad_a: VectorGradient, grad_b: VectorGradient) -> SpectralField:
    """Bilinear curl-equation source, the 2-D scalar form; dealiased.

    The output has zero spatial mean analytically (it is the curl of the
    advective flux defect); the mean mode is zeroed explicitly so that
    round-off cannot leak into the mean-free curl unknowns over long runs.
    """
    vals = (grad_a.d11 * (grad_b.d12 + grad_b.d21)
            + grad_b.d22 * (grad_a.d12 + grad_a.d21))
    out = SpectralField.from_values(grad_a.grid, vals).dealiased()
    coeffs = out.coeffs.copy()
    coeffs[0, 0] = 0.0
    return SpectralField(grad_a.grid, coeffs)


def l_identity_check(u: VectorField, b: VectorField) -> float:
    """Max residual of L(grad(u+b), grad(u-b)) + 2 L(grad u, grad b)."""
    lhs = l_operator(VectorGradient.of(u + b), VectorGradient.of(u - b))
    rhs = l_operator(VectorGradient.of(u), VectorGradient.of(b))
    return float(np.abs(lhs.values + 2.0 * rhs.values).max())


# -- right-hand sides ---------------------------------------------------------


def _coupling_force(R: SpectralField, w: VectorField, C: CouplingMatrix) -> VectorField:
    """Dealiased product R * (C w)."""
    cx, cy = C.apply_values(w.x.values, w.y.values)
    g = R.grid
    fx = SpectralField.from_values(g, R.values * cx).dealiased()
    fy = SpectralField.from_values(g, R.values * cy).dealiased()
    return VectorField(fx, fy)


def _tensor_divergence(a: VectorField, c: VectorField) -> VectorField:
    """div(a x c) with the divergence over the first slot: d_j (a_j c_k)."""
    t1 = dealias_product(a.x, c.x)
    t2 = dealias_product(a.x, c.y)
    t3 = dealias_product(a.y, c.x)
    t4 = dealias_product(a.y, c.y)
    return VectorField(derivative(t1, 1) + derivative(t3, 2),
                       derivative(t2, 1) + derivative(t4, 2))


def rhs_primitive(s: MhdState, C: CouplingMatrix) -> MhdState:
    uu_bb = _tensor_divergence(s.u, s.u) - _tensor_divergence(s.b, s.b)
    force = _coupling_force(s.R, s.u, C)
    du = -1.0 * leray_project(uu_bb + force)
    db = -1.0 * (_tensor_divergence(s.u, s.b) - _tensor_divergence(s.b, s.u))
    Ru = VectorField(dealias_product(s.R, s.u.x), dealias_product(s.R, s.u.y))
    dR = -1.0 * divergence(Ru)
    return MhdState(time=s.time, R=dR, u=du, b=db)


def rhs_elsasser(e: ElsasserState, C: CouplingMatrix) -> ElsasserState:
    w = e.alpha + e.beta
    force = _coupling_force(e.R, w, C)
    p_force = leray_project(force)
    da = -1.0 * leray_project(_tensor_divergence(e.beta, e.alpha)) - 0.5 * p_force
    db = -1.0 * leray_project(_tensor_divergence(e.alpha, e.beta)) - 0.5 * p_force
    Rw = VectorField(dealias_product(e.R, w.x), dealias_product(e.R, w.y))
    dR = -0.5 * divergence(Rw)
    return ElsasserState(time=e.time, R=dR, alpha=da, beta=db)


def rhs_vorticity(v: VorticityState, C: CouplingMatrix) -> VorticityState:
    alpha = biot_savart(v.X, v.mean_alpha)
    beta = biot_savart(v.Y, v.mean_beta)
    w = alpha + beta
    force = _coupling_force(v.R, w, C)
    curl_force = curl2d(force)
    lab = l_operator(VectorGradient.of(alpha), VectorGradient.of(beta))
    bX = VectorField(dealias_product(beta.x, v.X), dealias_product(beta.y, v.X))
    aY = VectorField(dealias_product(alpha.x, v.Y), dealias_product(alpha.y, v.Y))
    dX = -1.0 * divergence(bX) + lab - 0.5 * curl_force
    dY = -1.0 * divergence(aY) - 1.0 * lab - 0.5 * curl_force
    Rw = VectorField(dealias_product(v.R, w.x), dealias_product(v.R, w.y))
    dR = -0.5 * divergence(Rw)
    dmean = -0.5 * np.array([force.x.mean(), force.y.mean()])
    return VorticityState(time=v.time, R=dR, X=dX, Y=dY,
                          mean_alpha=dmean.copy(), mean_beta=dmean.copy())


def rhs(state, C: CouplingMatrix):
    """Dispatch to the formulation the state belongs to."""
    if isinstance(state, MhdState):
        return rhs_primitive(state, C)
    if isinstance(state, ElsasserState):
        return rhs_elsasser(state, C)
    if isinstance(state, VorticityState):
        return rhs_vorticity(state, C)
    raise TypeError(f"not a state: {type(state)!r}")


def mhd_pressure(s: MhdState, C: CouplingMatrix) -> PressureFields:
    """Recover the pressures from the elliptic balance of the momentum system.

    Solves  -Lap(pi) = div[(beta . grad) alpha + 1/2 R C (alpha + beta)]
    on the mean-free modes, fixes the gauge mean(pi) = 0, and returns
    Pi = pi - |b|^2 / 2.
    """
    e = to_elsasser(s)
    F = _tensor_divergence(e.beta, e.alpha) + 0.5 * _coupling_force(e.R, e.alpha + e.beta, C)
    g = s.grid
    divF = divergence(F).coeffs
    with np.errstate(divide="ignore", invalid="ignore"):
        pi_coeffs = np.where(g.k2 > 0, divF / g.k2, 0.0)
    pi = SpectralField(g, pi_coeffs)
    b2 = (dealias_product(s.b.x, s.b.x) + dealias_product(s.b.y, s.b.y))
    Pi = pi - 0.5 * b2
    return PressureFields(pi=pi, Pi=Pi)


def project_state(state):
    """Re-impose the divergence-free invariant on the vector unknowns."""
    if isinstance(state, MhdState):
        return replace(state, u=leray_project(state.u), b=leray_project(state.b))
    if isinstance(state, ElsasserState):
        return replace(state, alpha=leray_project(state.alpha),
                       beta=leray_project(state.beta))
    if isinstance(state, VorticityState):
        return state
    raise TypeError(f"not a state: {type(state)!r}")


def check_divergence_free(v: VectorField, tol: float = 1e-10) -> None:
    d = v.divergence_defect()
    if d > tol:
        raise GridError(f"field is not divergence-free: spectral defect {d:.3e}")
