"""Closed-form residual checks for spatially uniform flows on the plane.

The time-dependent uniform flow u = (f(t), 0) with R = b = 0 solves the
momentum system once the pressure gradient -f'(t) e1 is supplied, but it
does *not* solve the projected system, whose residual is exactly
(f'(t), 0).  The same mechanism makes the symmetrized pair
alpha = (f, 0) = -beta, with opposite pressures, a valid solution whose
reconstructed magnetic field b = (f, 0) fails the magnetic equation by
(f'(t), 0).  These computations live on the plane, in closed form: the
linear-in-x pressures are not periodic, so a grid realization would
misrepresent them.

Everything is evaluated with sympy; the divergence-free projection is the
composition-of-operators reading (w -> w + grad (-Lap)^-1 div w, applied
in that order), which on these fields never has to invert the Laplacian on
a nonzero input.  Projecting a field whose divergence does not vanish
identically is refused: on the plane the inverse Laplacian of a
non-decaying symbol carries exactly the ambiguity these examples exhibit.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

T, X1, X2 = sp.symbols("t x1 x2", real=True)


class SymbolicProjectionError(ValueError):
    """Projection requested for a field with non-vanishing divergence."""


def _div_vec(w) -> sp.Expr:
    return sp.simplify(sp.diff(w[0], X1) + sp.diff(w[1], X2))


def _grad(phi) -> tuple:
    return (sp.diff(phi, X1), sp.diff(phi, X2))


def _div_tensor(tensor) -> tuple:
    # divergence over the first slot: (div T)_k = d_j T[j][k]
    return (
        sp.simplify(sp.diff(tensor[0][0], X1) + sp.diff(tensor[1][0], X2)),
        sp.simplify(sp.diff(tensor[0][1], X1) + sp.diff(tensor[1][1], X2)),
    )


def _outer(a, b) -> tuple:
    return ((a[0] * b[0], a[0] * b[1]), (a[1] * b[0], a[1] * b[1]))


def symbolic_leray(w) -> tuple:
    """Composition-order projection: requires div(w) = 0, then acts as identity."""
    if _div_vec(w) != 0:
        raise SymbolicProjectionError(
            "divergence does not vanish; the inverse Laplacian of a non-decaying "
            "field is ambiguous on the plane"
        )
    return (sp.simplify(w[0]), sp.simplify(w[1]))


def _advect(v, w) -> tuple:
    """(v . grad) w"""
    return (
        sp.simplify(v[0] * sp.diff(w[0], X1) + v[1] * sp.diff(w[0], X2)),
        sp.simplify(v[0] * sp.diff(w[1], X1) + v[1] * sp.diff(w[1], X2)),
    )


def _dt(w) -> tuple:
    return (sp.diff(w[0], T), sp.diff(w[1], T))


def _add(*vecs) -> tuple:
    return (sp.simplify(sum(v[0] for v in vecs)), sp.simplify(sum(v[1] for v in vecs)))


def _simp(vec) -> tuple:
    return (sp.simplify(vec[0]), sp.simplify(vec[1]))


@dataclass(frozen=True)
class CounterexampleReport:
    """Symbolic residuals and their values at t = 1.

    unprojected_residual: momentum residual of the uniform flow with the
        matching pressure (zero).
    projected_residual: residual of the projected momentum equation
        (equals (f'(t), 0)).
    projected_pressure_gradient: the projection of the pressure gradient
        computed in composition order, the exact term the projected system
        is missing.
    elsasser_residual_alpha / _beta: residuals of the symmetrized system
        with opposite pressures (zero).
    magnetic_residual: residual of the magnetic equation for the
        reconstructed b (equals (f'(t), 0)).
    """

    f: sp.Expr
    unprojected_residual: tuple
    projected_residual: tuple
    projected_pressure_gradient: tuple
    elsasser_residual_alpha: tuple
    elsasser_residual_beta: tuple
    magnetic_residual: tuple

    def at(self, t_value: float) -> dict:
        sub = {T: t_value}
        def ev(vec):
            return (sp.simplify(vec[0].subs(sub)), sp.simplify(vec[1].subs(sub)))
        return {
            "unprojected_residual": ev(self.unprojected_residual),
            "projected_residual": ev(self.projected_residual),
            "projected_pressure_gradient": ev(self.projected_pressure_gradient),
            "elsasser_residual_alpha": ev(self.elsasser_residual_alpha),
            "elsasser_residual_beta": ev(self.elsasser_residual_beta),
            "magnetic_residual": ev(self.magnetic_residual),
        }

    def to_json_dict(self, t_value: float = 1.0) -> dict:
        vals = self.at(t_value)
        out = {"f": str(self.f), "t": t_value}
        for key, vec in vals.items():
            out[key] = [float(vec[0]), float(vec[1])]
        return out


def uniform_flow_report(f: sp.Expr | None = None) -> CounterexampleReport:
    """Evaluate all residuals for u = (f(t), 0), default f(t) = t."""
    if f is None:
        f = T
    f = sp.sympify(f)
    u = (f, sp.Integer(0))
    zero = (sp.Integer(0), sp.Integer(0))

    # (a) original momentum equation with pressure pi = -f'(t) x1
    pi = -sp.diff(f, T) * X1
    div_uu = _div_tensor(_outer(u, u))
    unprojected = _add(_dt(u), div_uu, _grad(pi))

    # (b) projected momentum equation: no pressure, project the fluxes
    projected = _add(_dt(u), symbolic_leray(div_uu))

    # (c) the projection of the pressure gradient, composition order:
    # div(grad pi) = Lap(pi) = 0, so the projection acts as the identity
    p_grad_pi = symbolic_leray(_grad(pi))

    # (d) symmetrized counterpart: alpha = (f, 0) = -beta, R = 0,
    # pressures pi1 = -f'(t) x1 and pi2 = -pi1
    alpha = u
    beta = (-f, sp.Integer(0))
    pi1 = pi
    pi2 = -pi
    res_alpha = _add(_dt(alpha), _advect(beta, alpha), _grad(pi1))
    res_beta = _add(_dt(beta), _advect(alpha, beta), _grad(pi2))

    # (e) reconstructed physical fields: u_rec = 0, b_rec = (f, 0); the
    # magnetic equation db/dt + (u.grad)b - (b.grad)u = 0 fails by (f', 0)
    u_rec = _simp(_add(alpha, beta))
    u_rec = (u_rec[0] / 2, u_rec[1] / 2)
    b_rec = ((alpha[0] - beta[0]) / 2, (alpha[1] - beta[1]) / 2)
    magnetic = _add(_dt(b_rec), _advect(u_rec, b_rec),
                    tuple(-c for c in _advect(b_rec, u_rec)))

    return CounterexampleReport(
        f=f,
        unprojected_residual=_simp(unprojected),
        projected_residual=_simp(projected),
        projected_pressure_gradient=_simp(p_grad_pi),
        elsasser_residual_alpha=_simp(res_alpha),
        elsasser_residual_beta=_simp(res_beta),
        magnetic_residual=_simp(magnetic),
    )
