"""Periodic 2-D Fourier grid and spectral field primitives.

The domain is the square torus [0, 2pi)^2, discretized with n points per
axis (n a power of two, n >= 8).  Fields are stored as complex Fourier
amplitudes on the integer wavenumber lattice k in {-n/2, ..., n/2-1}^2, in
the convention

    f(x) = sum_k  coeffs[k] * exp(i k . x),

so that coeffs = fft2(samples) / n^2.  A real-space mirror is cached
lazily.  All operations are pure: they return new field objects and never
mutate their inputs.

Provided operations:
- forward/inverse transforms and a roundtrip self test
- spectral derivatives d/dx1, d/dx2 (exact on band-limited data)
- scalar curl of a 2-D vector field, curl(v) = d1 v2 - d2 v1
- reconstruction of a divergence-free vector field from its curl and its
  spatial mean (stream-function inversion)
- Helmholtz-Leray projection onto divergence-free fields (identity on the
  k = 0 mode)
- 2/3-rule dealiased pointwise products
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DOMAIN_LENGTH = 2.0 * np.pi


class GridError(ValueError):
    """Invalid grid construction or incompatible grid usage."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class FourierGrid:
    """Square periodic grid with precomputed wavenumber arrays.

    Attributes:
        n: points per axis (power of two, >= 8); domain side is fixed to 2pi
        kx, ky: integer wavenumber meshes, shape (n, n), axis 1 is x
        k2: |k|^2 mesh
        dealias_mask: True where a mode survives the 2/3 rule, i.e. exactly
            where max(|k1|, |k2|) <= n/3
    """

    n: int
    kx: np.ndarray
    ky: np.ndarray
    k2: np.ndarray
    dealias_mask: np.ndarray
    x: np.ndarray
    y: np.ndarray

    @classmethod
    def create(cls, n: int) -> "FourierGrid":
        if n < 8 or not _is_power_of_two(n):
            raise GridError(f"grid size must be a power of two >= 8, got {n}")
        k1 = np.fft.fftfreq(n, d=1.0 / n)  # integers 0..n/2-1, -n/2..-1
        kx, ky = np.meshgrid(k1, k1, indexing="ij")
        k2 = kx**2 + ky**2
        mask = np.maximum(np.abs(kx), np.abs(ky)) <= n / 3.0
        x1 = np.arange(n) * (DOMAIN_LENGTH / n)
        x, y = np.meshgrid(x1, x1, indexing="ij")
        for a in (kx, ky, k2, mask, x, y):
            a.setflags(write=False)
        return cls(n=n, kx=kx, ky=ky, k2=k2, dealias_mask=mask, x=x, y=y)

    @property
    def dx(self) -> float:
        return DOMAIN_LENGTH / self.n

    @property
    def cell_area(self) -> float:
        return self.dx * self.dx

    def __eq__(self, other) -> bool:
        return isinstance(other, FourierGrid) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("FourierGrid", self.n))


@lru_cache(maxsize=8)
def make_grid(n: int) -> FourierGrid:
    """Cached grid factory; grids are immutable and freely shared."""
    return FourierGrid.create(n)


class SpectralField:
    """One scalar field on the periodic grid, stored as Fourier amplitudes.

    Real-valued fields keep Hermitian symmetry coeffs(-k) = conj(coeffs(k));
    constructing from real samples guarantees it, and all multipliers used
    here preserve it.
    """

    __slots__ = ("grid", "coeffs", "_values")

    def __init__(self, grid: FourierGrid, coeffs: np.ndarray):
        if coeffs.shape != (grid.n, grid.n):
            raise GridError(
                f"coefficient array shape {coeffs.shape} does not match grid n={grid.n}"
            )
        coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
        coeffs.setflags(write=False)
        self.grid = grid
        self.coeffs = coeffs
        self._values: np.ndarray | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_values(cls, grid: FourierGrid, values: np.ndarray) -> "SpectralField":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (grid.n, grid.n):
            raise GridError(
                f"sample array shape {values.shape} does not match grid n={grid.n}"
            )
        coeffs = np.fft.fft2(values) / grid.n**2
        f = cls(grid, coeffs)
        f._values = values.copy()
        f._values.setflags(write=False)
        return f

    @classmethod
    def from_coeffs(cls, grid: FourierGrid, coeffs: np.ndarray) -> "SpectralField":
        return cls(grid, coeffs)

    @classmethod
    def zero(cls, grid: FourierGrid) -> "SpectralField":
        return cls(grid, np.zeros((grid.n, grid.n), dtype=np.complex128))

    # -- representations --------------------------------------------------

    @property
    def values(self) -> np.ndarray:
        """Real-space samples (real part; imaginary residue is round-off)."""
        if self._values is None:
            v = np.fft.ifft2(self.coeffs).real * self.grid.n**2
            v.setflags(write=False)
            self._values = v
        return self._values

    def hermitian_defect(self) -> float:
        """Max |Im f(x)| over samples; ~1e-16 for genuinely real fields."""
        v = np.fft.ifft2(self.coeffs) * self.grid.n**2
        return float(np.abs(v.imag).max())

    # -- norms -------------------------------------------------------------

    def linf(self) -> float:
        return float(np.abs(self.values).max())

    def l2(self) -> float:
        """L2 norm by quadrature with cell weight (2pi/n)^2."""
        return float(np.sqrt(np.sum(self.values**2) * self.grid.cell_area))

    def mean(self) -> float:
        return float(self.coeffs[0, 0].real)

    # -- arithmetic (spectral, exact) ---------------------------------------

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)

    def dealiased(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * self.grid.dealias_mask)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))


class VectorField:
    """Pair of scalar fields forming a 2-D vector field (x, y components)."""

    __slots__ = ("x", "y")

    def __init__(self, x: SpectralField, y: SpectralField):
        if x.grid != y.grid:
            raise GridError("vector components live on different grids")
        self.x = x
        self.y = y

    @property
    def grid(self) -> FourierGrid:
        return self.x.grid

    @classmethod
    def from_values(cls, grid: FourierGrid, vx: np.ndarray, vy: np.ndarray) -> "VectorField":
        return cls(SpectralField.from_values(grid, vx), SpectralField.from_values(grid, vy))

    @classmethod
    def zero(cls, grid: FourierGrid) -> "VectorField":
        return cls(SpectralField.zero(grid), SpectralField.zero(grid))

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.x - other.x, self.y - other.y)

    def __mul__(self, scalar: float) -> "VectorField":
        return VectorField(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "VectorField":
        return VectorField(-self.x, -self.y)

    def dealiased(self) -> "VectorField":
        return VectorField(self.x.dealiased(), self.y.dealiased())

    def linf(self) -> float:
        """Sup over samples of the Euclidean magnitude |v(x)|."""
        return float(np.sqrt(self.x.values**2 + self.y.values**2).max())

    def l2(self) -> float:
        return float(np.sqrt(self.x.l2() ** 2 + self.y.l2() ** 2))

    def mean(self) -> np.ndarray:
        return np.array([self.x.mean(), self.y.mean()])

    def divergence_defect(self) -> float:
        """Max spectral magnitude of k . v_hat(k); 0 for divergence-free."""
        g = self.grid
        d = g.kx * self.x.coeffs + g.ky * self.y.coeffs
        return float(np.abs(d).max())

    def is_divergence_free(self, tol: float = 1e-12) -> bool:
        """Whether the spectral divergence defect is below tol * field scale."""
        scale = max(float(np.abs(self.x.coeffs).max()),
                    float(np.abs(self.y.coeffs).max()), 1e-300)
        return self.divergence_defect() <= tol * max(1.0, scale)

    def is_finite(self) -> bool:
        return self.x.is_finite() and self.y.is_finite()


# -- operations -------------------------------------------------------------


def fft_roundtrip(f: SpectralField) -> SpectralField:
    """inverse(forward(f)); self-test entry point for the transform pair."""
    return SpectralField.from_values(f.grid, f.values.copy())


def derivative(f: SpectralField, axis: int) -> SpectralField:
    """Spectral partial derivative along axis 1 (x) or 2 (y)."""
    if axis == 1:
        k = f.grid.kx
    elif axis == 2:
        k = f.grid.ky
    else:
        raise GridError(f"axis must be 1 or 2, got {axis}")
    return SpectralField(f.grid, 1j * k * f.coeffs)


def gradient(f: SpectralField) -> VectorField:
    return VectorField(derivative(f, 1), derivative(f, 2))


def divergence(v: VectorField) -> SpectralField:
    return derivative(v.x, 1) + derivative(v.y, 2)


def curl2d(v: VectorField) -> SpectralField:
    """Scalar curl of a 2-D vector field: d1 v2 - d2 v1."""
    return derivative(v.y, 1) - derivative(v.x, 2)


def grad_linf(v: VectorField) -> float:
    """Sup over samples of the Frobenius norm of the Jacobian of v."""
    d = (derivative(v.x, 1).values ** 2 + derivative(v.x, 2).values ** 2
         + derivative(v.y, 1).values ** 2 + derivative(v.y, 2).values ** 2)
    return float(np.sqrt(d.max()))


def scalar_grad_linf(f: SpectralField) -> float:
    """Sup over samples of |grad f| (Euclidean magnitude)."""
    d = derivative(f, 1).values ** 2 + derivative(f, 2).values ** 2
    return float(np.sqrt(d.max()))


def biot_savart(omega: SpectralField, mean=(0.0, 0.0)) -> VectorField:
    """Divergence-free v with curl2d(v) = omega and spatial mean = mean.

    Realized as v = grad_perp(psi) + mean with Delta psi = omega; requires a
    mean-free omega (the curl of a periodic field always is).
    """
    g = omega.grid
    scale = max(1.0, float(np.abs(omega.coeffs).max()))
    if abs(omega.coeffs[0, 0]) > 1e-12 * scale:
        raise GridError("curl field must be mean-free")
    with np.errstate(divide="ignore", invalid="ignore"):
        psi = np.where(g.k2 > 0, -omega.coeffs / g.k2, 0.0)
    vx = -1j * g.ky * psi
    vy = 1j * g.kx * psi
    vx[0, 0] = mean[0]
    vy[0, 0] = mean[1]
    return VectorField(SpectralField(g, vx), SpectralField(g, vy))


def leray_project(v: VectorField) -> VectorField:
    """Fourier-multiplier projection onto divergence-free fields.

    Mode k != 0 is mapped by (Id - k k^T / |k|^2); the k = 0 mode, where the
    symbol is undefined, is left unchanged by convention.
    """
    g = v.grid
    with np.errstate(divide="ignore", invalid="ignore"):
        kdotv = np.where(g.k2 > 0, (g.kx * v.x.coeffs + g.ky * v.y.coeffs) / g.k2, 0.0)
    return VectorField(
        SpectralField(g, v.x.coeffs - g.kx * kdotv),
        SpectralField(g, v.y.coeffs - g.ky * kdotv),
    )


def dealias_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pointwise real-space product with the 2/3-rule mask applied."""
    if f.grid != g.grid:
        raise GridError("product of fields on different grids")
    prod = SpectralField.from_values(f.grid, f.values * g.values)
    return prod.dealiased()
