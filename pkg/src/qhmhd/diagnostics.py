"""Observables, norm functionals, bound evaluators and estimate probes.

Everything here is a pure computation over states or recorded time series:

- quadratic energies and their symmetrized-variable expression
- the time-series record written by the integrator (fixed CSV schema)
- a-posteriori checks of the energy law, with conservation in the
  skew-symmetric coupling case and the exponential bound otherwise, and of
  the sup-norm invariance of the transported density
- the low/high regularity functionals E(t) and H(t) built from L^2 norms
  of the fields and block-sum norms of their curls
- lifespan lower-bound evaluators: the argsinh formula valid in any
  dimension, and the 2-D iterated-logarithm formula with 3, 4 or 5
  compositions depending on the structure of the data and coupling
- measurement probes: the linear-growth transport estimate, and per-shell
  transport-commutator constants

The probes report measured constants; they never assert inequalities whose
constants the theory leaves unspecified.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .dyadic import BesovSpec, LPFilterBank, besov_norm, besov_norm_pair
from .dynamics import (
    ElsasserState,
    MhdState,
    state_as_mhd,
    state_as_vorticity,
    to_elsasser,
)
from .grid import (
    SpectralField,
    VectorField,
    dealias_product,
    derivative,
    grad_linf,
)

CSV_COLUMNS = (
    "t", "energy", "elsasser_energy", "linf_R", "grad_linf_u", "grad_linf_b",
    "criterion_integral", "besov_E", "besov_H",
    "mean_alpha_x", "mean_alpha_y", "mean_beta_x", "mean_beta_y",
)


@dataclass
class DiagnosticsRecord:
    """Per-sample rows of the observables, in the fixed CSV column order."""

    rows: list = field(default_factory=list)

    def append(self, row: tuple) -> None:
        if self.rows and row[0] <= self.rows[-1][0]:
            raise ValueError("sample times must be strictly increasing")
        if len(self.rows) >= 1 and row[6] < self.rows[-1][6] - 1e-12:
            raise ValueError("criterion integral must be nondecreasing")
        self.rows.append(tuple(row))

    def column(self, name: str) -> np.ndarray:
        i = CSV_COLUMNS.index(name)
        return np.array([r[i] for r in self.rows])

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in self.rows:
                w.writerow([repr(float(v)) for v in r])

    @classmethod
    def read_csv(cls, path) -> "DiagnosticsRecord":
        rec = cls()
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            if tuple(header) != CSV_COLUMNS:
                raise ValueError(f"unexpected CSV header {header}")
            for row in r:
                rec.rows.append(tuple(float(v) for v in row))
        return rec


def energy(s: MhdState) -> float:
    """||u||_L2^2 + ||b||_L2^2 by spectral quadrature."""
    return s.u.l2() ** 2 + s.b.l2() ** 2


def elsasser_energy(e: ElsasserState) -> float:
    """(||alpha||^2 + ||beta||^2) / 2; equals energy() by the parallelogram law."""
    return 0.5 * (e.alpha.l2() ** 2 + e.beta.l2() ** 2)


def besov_E(state, bank: LPFilterBank) -> float:
    """Low-regularity functional ||(alpha,beta)||_L2 + ||(X,Y)||_(B0inf1)."""
    v = state_as_vorticity(state)
    e = to_elsasser(state_as_mhd(state))
    l2 = math.sqrt(e.alpha.l2() ** 2 + e.beta.l2() ** 2)
    return l2 + besov_norm_pair(v.X, v.Y, BesovSpec(0.0, np.inf, 1), bank)


def besov_H(state, bank: LPFilterBank) -> float:
    """Higher functional ||R||_(B2inf1) + ||(alpha,beta)||_L2 + ||(X,Y)||_(B1inf1)."""
    v = state_as_vorticity(state)
    e = to_elsasser(state_as_mhd(state))
    l2 = math.sqrt(e.alpha.l2() ** 2 + e.beta.l2() ** 2)
    return (besov_norm(v.R, BesovSpec(2.0, np.inf, 1), bank) + l2
            + besov_norm_pair(v.X, v.Y, BesovSpec(1.0, np.inf, 1), bank))


def record_row(state, bank: LPFilterBank, criterion_integral: float,
               t: float | None = None) -> tuple:
    """One diagnostics row; with state=None emits a NaN row at time t."""
    if state is None:
        return (t,) + (float("nan"),) * (len(CSV_COLUMNS) - 1)
    m = state_as_mhd(state)
    e = to_elsasser(m)
    v = state_as_vorticity(state)
    ma = np.atleast_1d(v.mean_alpha).astype(float)
    mb = np.atleast_1d(v.mean_beta).astype(float)
    return (
        m.time,
        energy(m),
        elsasser_energy(e),
        m.R.linf(),
        grad_linf(m.u),
        grad_linf(m.b),
        criterion_integral,
        besov_E(v, bank),
        besov_H(v, bank),
        ma[0], ma[1], mb[0], mb[1],
    )


# -- a-posteriori law checks --------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    max_defect: float
    first_violation_t: Optional[float] = None
    detail: str = ""


def energy_bound_check(rec: DiagnosticsRecord, *, skew: bool,
                       coupling_norm: float = 1.0, linf_R0: float = 0.0,
                       tol: float = 1e-6) -> CheckReport:
    """Check the energy law along a recorded run.

    skew=True: relative drift of the quadratic energy stays below tol.
    skew=False: sqrt-energy obeys the exponential bound
    (||u||+||b||)(t) <= (||u0||+||b0||) exp(c ||R0||_inf t) (1+tol) with
    c = coupling_norm.
    """
    t = rec.column("t")
    en = rec.column("energy")
    if skew:
        defect = np.abs(en - en[0]) / max(en[0], 1e-300)
        bad = np.nonzero(defect > tol)[0]
        return CheckReport(
            name="energy-conservation", passed=bad.size == 0,
            max_defect=float(defect.max()),
            first_violation_t=float(t[bad[0]]) if bad.size else None,
            detail=f"relative drift tol={tol:g}",
        )
    # the record stores the quadratic energy; the bound is stated for
    # ||u|| + ||b||, and sqrt(en) <= ||u|| + ||b|| <= sqrt(2 en), so check
    # the recorded sum column if present, else the sqrt-energy surrogate
    lhs = np.sqrt(en)
    rhs = lhs[0] * np.exp(coupling_norm * linf_R0 * t) * (1.0 + tol)
    defect = lhs / np.maximum(rhs, 1e-300)
    bad = np.nonzero(lhs > rhs)[0]
    return CheckReport(
        name="energy-exponential-bound", passed=bad.size == 0,
        max_defect=float(defect.max()),
        first_violation_t=float(t[bad[0]]) if bad.size else None,
        detail=f"c={coupling_norm:g}, ||R0||_inf={linf_R0:g}, tol={tol:g}",
    )


def energy_sum_bound_check(times: Sequence[float], sums: Sequence[float], *,
                           coupling_norm: float, linf_R0: float,
                           tol: float = 1e-6) -> CheckReport:
    """Literal exponential bound on a recorded ||u|| + ||b|| series."""
    t = np.asarray(times)
    lhs = np.asarray(sums)
    rhs = lhs[0] * np.exp(coupling_norm * linf_R0 * t) * (1.0 + tol)
    bad = np.nonzero(lhs > rhs)[0]
    return CheckReport(
        name="energy-exponential-bound", passed=bad.size == 0,
        max_defect=float((lhs / np.maximum(rhs, 1e-300)).max()),
        first_violation_t=float(t[bad[0]]) if bad.size else None,
        detail=f"c={coupling_norm:g}, ||R0||_inf={linf_R0:g}, tol={tol:g}",
    )


def linf_R_check(rec: DiagnosticsRecord, tol: float = 1e-3) -> CheckReport:
    """Sup norm of the transported density stays within tol of its start."""
    t = rec.column("t")
    linf = rec.column("linf_R")
    scale = max(linf[0], 1e-300)
    defect = np.abs(linf - linf[0]) / scale if linf[0] > 0 else np.abs(linf)
    bad = np.nonzero(defect > tol)[0]
    return CheckReport(
        name="density-sup-invariance", passed=bad.size == 0,
        max_defect=float(defect.max()),
        first_violation_t=float(t[bad[0]]) if bad.size else None,
        detail=f"tol={tol:g}",
    )


# -- lifespan lower-bound evaluators ------------------------------------------


@dataclass(frozen=True)
class LifespanBoundInputs:
    """Norms of the initial data feeding the lower-bound formulas.

    The *_Bs entries are taken at the working regularity (s = 2 in the 2-D
    evaluator).  C and c are tunable constants defaulting to 1: the theory
    proves such constants exist but never gives values, so the evaluators
    are formula calculators, not truth claims.
    """

    norm_R0_Bs: float = 0.0
    norm_uv0_Bs_L2: float = 0.0
    norm_R0_Linf: float = 0.0
    norm_Rb0_B1: float = 0.0
    norm_ub0_B1_L2: float = 0.0
    norm_ub0_B2_L2: float = 0.0
    C: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("norm_R0_Bs", "norm_uv0_Bs_L2", "norm_R0_Linf",
                     "norm_Rb0_B1", "norm_ub0_B1_L2", "norm_ub0_B2_L2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.C <= 0 or self.c <= 0:
            raise ValueError("constants C and c must be positive")


def lifespan_inputs_from_state(s: MhdState, bank: LPFilterBank,
                               C: float = 1.0, c: float = 1.0) -> LifespanBoundInputs:
    """Measure the required initial-data norms on a primitive state."""
    def vec_besov(v: VectorField, spec: BesovSpec) -> float:
        return besov_norm_pair(v.x, v.y, spec, bank)

    b1 = BesovSpec(1.0, np.inf, 1)
    b2 = BesovSpec(2.0, np.inf, 1)
    ub_l2 = math.sqrt(s.u.l2() ** 2 + s.b.l2() ** 2)
    ub_b1 = max(vec_besov(s.u, b1), vec_besov(s.b, b1))
    ub_b2 = max(vec_besov(s.u, b2), vec_besov(s.b, b2))
    rb_b1 = max(besov_norm(s.R, b1, bank), vec_besov(s.b, b1))
    return LifespanBoundInputs(
        norm_R0_Bs=besov_norm(s.R, b2, bank),
        norm_uv0_Bs_L2=max(ub_b2, ub_l2),
        norm_R0_Linf=s.R.linf(),
        norm_Rb0_B1=rb_b1,
        norm_ub0_B1_L2=max(ub_b1, ub_l2),
        norm_ub0_B2_L2=max(ub_b2, ub_l2),
        C=C, c=c,
    )


def lifespan_bound_general(inputs: LifespanBoundInputs) -> float:
    """Dimension-independent lower bound:
    (1/||R0||_inf) argsinh(C ||R0||_inf / (||R0||_Bs + ||(u0,b0)||_(Bs^L2))),
    with the continuous limit C/denominator as ||R0||_inf -> 0."""
    denom = inputs.norm_R0_Bs + inputs.norm_uv0_Bs_L2
    if denom <= 0.0:
        raise ValueError("all-zero initial norms: lifespan bound undefined")
    r = inputs.norm_R0_Linf
    if r == 0.0:
        return inputs.C / denom
    return math.asinh(inputs.C * r / denom) / r


def _iterated_log(z: float, C: float, n: int) -> float:
    for _ in range(n):
        z = math.log1p(C * z)
    return z


def lifespan_bound_2d(inputs: LifespanBoundInputs, iterations: int, *,
                      r_zero: bool = False, skew: bool = False) -> float:
    """2-D iterated-logarithm lower bound.

    iterations = 5 always applies; 4 needs a skew-symmetric coupling;
    3 needs vanishing initial density variation.
    """
    if iterations not in (3, 4, 5):
        raise ValueError(f"iterations must be 3, 4 or 5, got {iterations}")
    if iterations == 3 and not r_zero:
        raise ValueError("the 3-fold bound requires vanishing initial density (r_zero)")
    if iterations == 4 and not (skew or r_zero):
        raise ValueError("the 4-fold bound requires a skew-symmetric coupling")
    if inputs.norm_Rb0_B1 <= 0.0:
        raise ValueError("degenerate: classical Euler regime")
    denom = inputs.norm_R0_Bs + inputs.norm_ub0_B2_L2
    if denom <= 0.0:
        raise ValueError("zero higher-regularity norms: bound undefined")
    ratio = inputs.norm_ub0_B1_L2 / inputs.norm_Rb0_B1
    return (inputs.C / denom) * _iterated_log(ratio, inputs.C, iterations)


# -- probes -------------------------------------------------------------------


@dataclass(frozen=True)
class VishikProbeReport:
    rows: tuple            # (t, ratio, b0_norm, b1_norm)
    max_ratio: float
    grad_integral: float


def _transport_rhs(f: SpectralField, v: VectorField) -> SpectralField:
    return -1.0 * (dealias_product(v.x, derivative(f, 1))
                   + dealias_product(v.y, derivative(f, 2)))


def vishik_probe(velocity: Callable[[float], VectorField], f0: SpectralField,
                 bank: LPFilterBank, *, t_end: float, dt: float,
                 sample_dt: float = 0.05) -> VishikProbeReport:
    """Passive transport of f0 by a divergence-free velocity, recording
    ||f(t)||_(B0inf1) / (||f0||_(B0inf1) (1 + int ||grad v||_inf)).

    Samples land on multiples of sample_dt (dt is refined to divide it), so
    the recorded ratio curve is comparable across grid resolutions.  The
    same run also records the B1inf1 norm of f for contrast; the report
    carries measurements, not assertions.
    """
    spec0 = BesovSpec(0.0, np.inf, 1)
    spec1 = BesovSpec(1.0, np.inf, 1)
    base = besov_norm(f0, spec0, bank)
    if base <= 0:
        raise ValueError("probe needs a nonzero transported field")
    steps_per_sample = max(1, math.ceil(sample_dt / dt))
    dt = sample_dt / steps_per_sample
    n_samples = max(1, round(t_end / sample_dt))
    f = f0
    t = 0.0
    grad_int = 0.0
    rows = [(0.0, 1.0 / (1.0 + 0.0), base, besov_norm(f0, spec1, bank))]
    for i in range(n_samples * steps_per_sample):
        v0 = velocity(t)
        vh = velocity(t + 0.5 * dt)
        v1 = velocity(t + dt)
        k1 = _transport_rhs(f, v0)
        k2 = _transport_rhs(f + (0.5 * dt) * k1, vh)
        k3 = _transport_rhs(f + (0.5 * dt) * k2, vh)
        k4 = _transport_rhs(f + dt * k3, v1)
        f = f + (dt / 6.0) * k1 + (dt / 3.0) * k2 + (dt / 3.0) * k3 + (dt / 6.0) * k4
        grad_int += 0.5 * dt * (grad_linf(v0) + grad_linf(v1))
        t += dt
        if (i + 1) % steps_per_sample == 0:
            ratio = besov_norm(f, spec0, bank) / (base * (1.0 + grad_int))
            rows.append((t, ratio, besov_norm(f, spec0, bank),
                         besov_norm(f, spec1, bank)))
    return VishikProbeReport(rows=tuple(rows),
                             max_ratio=max(r[1] for r in rows),
                             grad_integral=grad_int)


def transport_field(velocity: Callable[[float], VectorField], f0: SpectralField,
                    *, t_end: float, dt: float) -> SpectralField:
    """Plain passive transport (used by the reversibility test)."""
    f = f0
    t = 0.0
    n_steps = int(round(t_end / dt))
    for _ in range(n_steps):
        v0 = velocity(t)
        vh = velocity(t + 0.5 * dt)
        v1 = velocity(t + dt)
        k1 = _transport_rhs(f, v0)
        k2 = _transport_rhs(f + (0.5 * dt) * k1, vh)
        k3 = _transport_rhs(f + (0.5 * dt) * k2, vh)
        k4 = _transport_rhs(f + dt * k3, v1)
        f = f + (dt / 6.0) * k1 + (dt / 3.0) * k2 + (dt / 3.0) * k3 + (dt / 6.0) * k4
        t += dt
    return f


@dataclass(frozen=True)
class CommutatorProbeReport:
    rows: tuple            # (j, c_j)
    l1_sum: float
    denominator: float


def commutator_probe(v: VectorField, f: SpectralField, bank: LPFilterBank,
                     s: float = 1.0) -> CommutatorProbeReport:
    """Per-shell measured constants of the transport-commutator estimate:
    c_j = 2^(j(s-1)) ||[v.grad, Delta_j] f||_inf / denominator with
    denominator = ||grad v||_inf ||f||_(B^(s-1)) + ||grad v||_(B^(s-1)) ||f||_inf."""
    from .dyadic import transport_commutator_block

    spec = BesovSpec(s - 1.0, np.inf, 1)
    gv = grad_linf(v)
    gv_besov = max(
        besov_norm_pair(derivative(v.x, 1), derivative(v.y, 1), spec, bank),
        besov_norm_pair(derivative(v.x, 2), derivative(v.y, 2), spec, bank),
    )
    denom = gv * besov_norm(f, spec, bank) + gv_besov * f.linf()
    rows = []
    for j in range(-1, bank.j_max + 1):
        comm = transport_commutator_block(v, f, j, bank)
        cj = 2.0 ** (j * (s - 1.0)) * comm.linf() / denom if denom > 0 else 0.0
        rows.append((j, cj))
    return CommutatorProbeReport(rows=tuple(rows),
                                 l1_sum=float(sum(r[1] for r in rows)),
                                 denominator=denom)


def skew_energy_production(s: MhdState, coupling) -> float:
    """Instantaneous production integral R (C u) . u dx; zero for skew C."""
    cux, cuy = coupling.apply_values(s.u.x.values, s.u.y.values)
    integrand = s.R.values * (cux * s.u.x.values + cuy * s.u.y.values)
    return float(np.sum(integrand) * s.grid.cell_area)
