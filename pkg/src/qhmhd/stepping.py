"""Explicit time stepping with CFL control and blow-up monitoring.

The classical 4-stage explicit integrator advances any of the three state
formulations through its own right-hand side; after each step the
divergence-free invariant is re-imposed on the vector unknowns (floating
point drift would otherwise violate what the equations assume exactly).

The step size follows the advective CFL restriction of the chosen
formulation: primitive states use cfl * dx / (||u||_inf + ||b||_inf);
the symmetrized and curl formulations, whose transport speeds are the
fields alpha and beta themselves, use max(||alpha||_inf, ||beta||_inf).

integrate() accumulates the continuation integrand
||grad u||_inf + ||grad b||_inf by the trapezoid rule and stops on one of:
horizon reached, instantaneous integrand past the blow-up threshold,
accumulated integral past the cap, or non-finite values ("nan").
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .diagnostics import DiagnosticsRecord, record_row
from .dynamics import (
    CouplingMatrix,
    ElsasserState,
    MhdState,
    VorticityState,
    project_state,
    rhs,
    state_as_mhd,
)
from .dyadic import LPFilterBank, build_filter_bank
from .grid import grad_linf

FORMULATIONS = ("primitive", "elsasser", "vorticity")

STOP_HORIZON = "horizon"
STOP_THRESHOLD = "threshold"
STOP_CRITERION_CAP = "criterion_cap"
STOP_NAN = "nan"


class BlowupError(RuntimeError):
    """Non-finite values appeared during a step."""

    def __init__(self, time: float):
        super().__init__(f"numerical blow-up at t={time:.6g}")
        self.time = time


@dataclass(frozen=True)
class StepController:
    """Step-size and stopping policy for integrate().

    criterion_cap bounds the accumulated integral of
    ||grad u||_inf + ||grad b||_inf; blowup_threshold bounds its
    instantaneous value.
    """

    cfl: float = 0.4
    dt_min: float = 1e-9
    t_end: float = 1.0
    blowup_threshold: float = 1e6
    criterion_cap: float = 1e6
    velocity_floor: float = 1e-3
    sample_interval: float = 0.05

    def __post_init__(self):
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.dt_min <= 0.0:
            raise ValueError(f"dt_min must be positive, got {self.dt_min}")


def cfl_speed(state) -> float:
    """The formulation's advective speed scale entering the CFL bound."""
    if isinstance(state, MhdState):
        return state.u.linf() + state.b.linf()
    if isinstance(state, ElsasserState):
        return max(state.alpha.linf(), state.beta.linf())
    if isinstance(state, VorticityState):
        from .dynamics import from_vorticity

        e = from_vorticity(state)
        return max(e.alpha.linf(), e.beta.linf())
    raise TypeError(f"not a state: {type(state)!r}")


def adaptive_dt(state, ctrl: StepController) -> float:
    """CFL step clamped to [dt_min, t_end - t]."""
    speed = max(cfl_speed(state), ctrl.velocity_floor)
    dt = ctrl.cfl * (2.0 * 3.141592653589793 / state.grid.n) / speed
    remaining = ctrl.t_end - state.time
    return min(max(dt, ctrl.dt_min), remaining)


def rk4_step(state, dt: float, C: CouplingMatrix, formulation: str | None = None):
    """One classical 4-stage explicit step; re-projects the result."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    t = state.time
    k1 = rhs(state, C)
    k2 = rhs(state.lincomb([(1.0, state), (0.5 * dt, k1)]).with_time(t + 0.5 * dt), C)
    k3 = rhs(state.lincomb([(1.0, state), (0.5 * dt, k2)]).with_time(t + 0.5 * dt), C)
    k4 = rhs(state.lincomb([(1.0, state), (dt, k3)]).with_time(t + dt), C)
    new = state.lincomb([
        (1.0, state), (dt / 6.0, k1), (dt / 3.0, k2), (dt / 3.0, k3), (dt / 6.0, k4),
    ]).with_time(t + dt)
    new = project_state(new)
    if not new.is_finite():
        raise BlowupError(t + dt)
    return new


def _criterion_integrand(state) -> float:
    m = state_as_mhd(state)
    return grad_linf(m.u) + grad_linf(m.b)


def integrate(
    state,
    ctrl: StepController,
    C: CouplingMatrix,
    formulation: str | None = None,
    observers: tuple[Callable, ...] = (),
    bank: Optional[LPFilterBank] = None,
    stop_condition: Optional[Callable] = None,
):
    """Advance until the horizon or a stopping event.

    Returns (final state, DiagnosticsRecord, stop reason).  Diagnostics
    rows are appended at t = 0 and then every sample_interval (and at the
    final time); observers(state, record) are invoked after every step.
    stop_condition(state, record) may return an extra reason string to end
    the run early (used by the sweep scenario); it is consulted at sample
    times, where the record's norms are fresh.
    """
    if bank is None:
        bank = build_filter_bank(state.grid)
    record = DiagnosticsRecord()
    reason = STOP_HORIZON
    integrand = _criterion_integrand(state)
    criterion = 0.0
    next_sample = 0.0

    def sample(s):
        nonlocal next_sample
        record.append(record_row(s, bank, criterion))
        next_sample = s.time + ctrl.sample_interval

    def notify(s):
        for obs in observers:
            obs(s, record)

    sample(state)
    notify(state)
    if integrand >= ctrl.blowup_threshold:
        return state, record, STOP_THRESHOLD
    if stop_condition is not None:
        early = stop_condition(state, record)
        if early:
            return state, record, early

    while state.time < ctrl.t_end - 1e-14:
        dt = adaptive_dt(state, ctrl)
        dt = min(dt, max(next_sample - state.time, ctrl.dt_min))
        try:
            state = rk4_step(state, dt, C)
        except BlowupError as err:
            state = state.with_time(err.time)
            record.append(record_row(None, bank, criterion, t=err.time))
            return state, record, STOP_NAN
        new_integrand = _criterion_integrand(state)
        criterion += 0.5 * dt * (integrand + new_integrand)
        integrand = new_integrand
        at_sample = state.time >= next_sample - 1e-12
        if at_sample or state.time >= ctrl.t_end - 1e-14:
            sample(state)
        notify(state)
        if integrand >= ctrl.blowup_threshold:
            reason = STOP_THRESHOLD
            break
        if criterion >= ctrl.criterion_cap:
            reason = STOP_CRITERION_CAP
            break
        if stop_condition is not None and at_sample:
            early = stop_condition(state, record)
            if early:
                reason = early
                break
    if record.rows and record.rows[-1][0] < state.time - 1e-14:
        record.append(record_row(state, bank, criterion))
    return state, record, reason
