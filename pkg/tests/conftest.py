import numpy as np
import pytest

from qhmhd.grid import SpectralField, VectorField, leray_project, make_grid
from qhmhd.dyadic import build_filter_bank


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64)


@pytest.fixture(scope="session")
def bank64(grid64):
    return build_filter_bank(grid64)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def random_field(grid, rng, dealias=True):
    f = SpectralField.from_values(grid, rng.standard_normal((grid.n, grid.n)))
    return f.dealiased() if dealias else f


def random_divfree(grid, rng, mean_free=False):
    v = leray_project(VectorField(random_field(grid, rng), random_field(grid, rng)))
    if mean_free:
        cx = v.x.coeffs.copy()
        cy = v.y.coeffs.copy()
        cx[0, 0] = 0.0
        cy[0, 0] = 0.0
        v = VectorField(SpectralField(grid, cx), SpectralField(grid, cy))
    return v


def bandlimit(field, kmax):
    g = field.grid
    m = np.maximum(np.abs(g.kx), np.abs(g.ky)) <= kmax
    return SpectralField(g, field.coeffs * m)


def embed_spectrum(field, big_grid):
    """Place a small grid's coefficients onto a finer grid (same wavenumbers)."""
    n_small = field.grid.n
    out = np.zeros((big_grid.n, big_grid.n), dtype=complex)
    ks = np.fft.fftfreq(n_small, d=1.0 / n_small).astype(int)
    idx = [int(k) % big_grid.n for k in ks]
    for i, ki in enumerate(idx):
        out[ki, idx] = field.coeffs[i, :]
    return SpectralField(big_grid, out)
