"""2-D periodic pseudo-spectral quasi-homogeneous ideal MHD toolkit."""

from .grid import (
    FourierGrid,
    SpectralField,
    VectorField,
    biot_savart,
    curl2d,
    dealias_product,
    derivative,
    fft_roundtrip,
    leray_project,
    make_grid,
)
from .dyadic import (
    BesovSpec,
    LPFilterBank,
    bernstein_ratio,
    besov_norm,
    block,
    build_filter_bank,
    lowpass,
    paraproduct,
    remainder,
    transport_commutator_block,
)
from .dynamics import (
    CouplingMatrix,
    ElsasserState,
    MhdState,
    PressureFields,
    VectorGradient,
    VorticityState,
    from_elsasser,
    l_identity_check,
    l_operator,
    mhd_pressure,
    rhs_elsasser,
    rhs_primitive,
    rhs_vorticity,
    to_elsasser,
)
from .presets import make_initial
from .stepping import StepController, adaptive_dt, integrate, rk4_step
from .diagnostics import (
    DiagnosticsRecord,
    LifespanBoundInputs,
    besov_E,
    besov_H,
    energy,
    lifespan_bound_2d,
    lifespan_bound_general,
)
from .scenarios import ExperimentConfig, run_scenario

__version__ = "0.1.0"
