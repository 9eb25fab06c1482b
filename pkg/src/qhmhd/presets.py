"""Named initial-condition presets.

All presets return a primitive-variable state with divergence-free,
dealiased vector fields.  Formulas (x, y on [0, 2pi)):

- taylor-green:
    u = A (-cos x sin y,  sin x cos y),  b = 0,  R = 0
  (a steady solution of the 2-D incompressible Euler equations)
- orszag-tang (the classic vortex adapted to (u, b)):
    u = A (-sin y,  sin x)
    b = A eps (-sin y,  sin 2x)
    R = A r_amplitude cos(x + y)
- small-b: taylor-green velocity with a small magnetic field and density
  bump riding on it:
    b = eps A (-sin y, sin 2x),  R = eps A (cos x + sin y)
- random-band: seeded random fields, spectrally supported in the integer
  band k_lo <= max(|k1|, |k2|) <= k_hi, velocity and magnetic parts
  projected divergence-free, R mean-free; amplitudes are normalized so
  ||u||_inf = A, ||b||_inf = A eps, ||R||_inf = A r_amplitude.

The sweep scenario scales (R0, b0) by its own epsilon on top of these.
"""

from __future__ import annotations

import numpy as np

from .dynamics import MhdState
from .grid import FourierGrid, SpectralField, VectorField, leray_project

PRESET_NAMES = ("taylor-green", "orszag-tang", "small-b", "random-band")


class PresetError(ValueError):
    """Unknown preset or invalid preset parameters."""


def _clean_vector(v: VectorField) -> VectorField:
    return leray_project(v.dealiased())


def _band_mask(grid: FourierGrid, k_lo: int, k_hi: int) -> np.ndarray:
    kmax = np.maximum(np.abs(grid.kx), np.abs(grid.ky))
    return (kmax >= k_lo) & (kmax <= k_hi) & grid.dealias_mask


def _random_scalar(grid: FourierGrid, rng: np.random.Generator,
                   k_lo: int, k_hi: int) -> SpectralField:
    raw = SpectralField.from_values(grid, rng.standard_normal((grid.n, grid.n)))
    f = SpectralField(grid, raw.coeffs * _band_mask(grid, k_lo, k_hi))
    amp = f.linf()
    if amp == 0.0:
        raise PresetError(f"random band [{k_lo}, {k_hi}] is empty on n={grid.n}")
    return (1.0 / amp) * f


def _random_divfree(grid: FourierGrid, rng: np.random.Generator,
                    k_lo: int, k_hi: int) -> VectorField:
    v = VectorField(_random_scalar(grid, rng, k_lo, k_hi),
                    _random_scalar(grid, rng, k_lo, k_hi))
    v = leray_project(v)
    amp = v.linf()
    if amp == 0.0:
        raise PresetError("projected random band field vanished")
    return (1.0 / amp) * v


def make_initial(preset: str, grid: FourierGrid, *, amplitude: float = 1.0,
                 epsilon: float = 0.1, r_amplitude: float = 0.0,
                 seed: int = 0, band: tuple[int, int] = (1, 4)) -> MhdState:
    """Build the named preset on the given grid."""
    A = amplitude
    x, y = grid.x, grid.y
    if preset == "taylor-green":
        u = VectorField.from_values(grid, -A * np.cos(x) * np.sin(y),
                                    A * np.sin(x) * np.cos(y))
        b = VectorField.zero(grid)
        R = SpectralField.zero(grid)
    elif preset == "orszag-tang":
        u = VectorField.from_values(grid, -A * np.sin(y), A * np.sin(x))
        b = VectorField.from_values(grid, -A * epsilon * np.sin(y),
                                    A * epsilon * np.sin(2 * x))
        R = SpectralField.from_values(grid, A * r_amplitude * np.cos(x + y))
    elif preset == "small-b":
        u = VectorField.from_values(grid, -A * np.cos(x) * np.sin(y),
                                    A * np.sin(x) * np.cos(y))
        b = VectorField.from_values(grid, -epsilon * A * np.sin(y),
                                    epsilon * A * np.sin(2 * x))
        R = SpectralField.from_values(grid, epsilon * A * (np.cos(x) + np.sin(y)))
    elif preset == "random-band":
        rng = np.random.default_rng(seed)
        k_lo, k_hi = band
        u = A * _random_divfree(grid, rng, k_lo, k_hi)
        b = (A * epsilon) * _random_divfree(grid, rng, k_lo, k_hi)
        R = (A * r_amplitude) * _random_scalar(grid, rng, k_lo, k_hi)
        R = SpectralField(grid, R.coeffs * (grid.k2 > 0))  # mean-free
    else:
        raise PresetError(f"unknown preset {preset!r} (choose from {PRESET_NAMES})")
    return MhdState(time=0.0, R=R.dealiased(), u=_clean_vector(u), b=_clean_vector(b))
