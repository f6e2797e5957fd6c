"""Uniform periodic grids, continuum-normalized transforms and dyadic projections.

The discrete transform mimics the continuum convention

    f_hat(xi) = integral of exp(-i x xi) f(x) dx

by multiplying the FFT by ``dx`` (and by the phase of the grid origin), and the
inverse divides by ``L``.  With this normalization grid norms converge to their
continuum counterparts under refinement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

PHYSICAL = "physical"
FREQUENCY = "frequency"


class StructuralError(ValueError):
    """Raised when array shapes or domain tags do not match a grid."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid ``x_j = origin + j*dx`` with ``dx = L/n``."""

    n: int
    L: float
    origin: float = 0.0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not _is_power_of_two(int(self.n)) or self.n < 8:
            raise StructuralError(f"grid size must be a power of two >= 8, got {self.n}")
        if not self.L > 0:
            raise StructuralError(f"grid length must be positive, got {self.L}")

    @property
    def dx(self) -> float:
        return self.L / self.n

    @property
    def points(self) -> np.ndarray:
        return self.origin + self.dx * np.arange(self.n)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in FFT order, covering m in [-n/2, n/2)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.L

    def index_of(self, x: float) -> int:
        """Index of the grid point closest to ``x``."""
        return int(np.rint((x - self.origin) / self.dx)) % self.n


@dataclass(frozen=True)
class SpaceTimeGrid:
    space: Grid1D
    time: Grid1D

    @property
    def shape(self) -> tuple[int, int]:
        return (self.time.n, self.space.n)


@dataclass
class Field1D:
    grid: Grid1D
    values: np.ndarray
    domain_tag: str = PHYSICAL

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.n,):
            raise StructuralError(f"expected {self.grid.n} samples, got shape {self.values.shape}")


@dataclass
class Field2D:
    """Samples of a function of (t, x); row index is time, column index is space."""

    grid: SpaceTimeGrid
    values: np.ndarray
    domain_tag: str = PHYSICAL

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.shape:
            raise StructuralError(f"expected shape {self.grid.shape}, got {self.values.shape}")


@dataclass(frozen=True)
class DyadicBlock:
    k: int
    j: int

    def __post_init__(self):
        if self.k < 0 or self.j < 0:
            raise StructuralError("dyadic indices are nonnegative")


Field = Union[Field1D, Field2D]


# ---------------------------------------------------------------- transforms

def fft_x(values: np.ndarray, grid: Grid1D, axis: int = -1) -> np.ndarray:
    """Continuum-normalized forward transform of raw samples along ``axis``."""
    phase = np.exp(-1j * grid.wavenumbers * grid.origin)
    shape = [1] * np.ndim(values)
    shape[axis] = grid.n
    return np.fft.fft(values, axis=axis) * grid.dx * phase.reshape(shape)


def ifft_x(values: np.ndarray, grid: Grid1D, axis: int = -1) -> np.ndarray:
    phase = np.exp(1j * grid.wavenumbers * grid.origin)
    shape = [1] * np.ndim(values)
    shape[axis] = grid.n
    return np.fft.ifft(values * phase.reshape(shape), axis=axis) / grid.dx


def forward_transform(f: Field) -> Field:
    if f.domain_tag != PHYSICAL:
        raise StructuralError("forward transform expects a physical-domain field")
    if isinstance(f, Field1D):
        return Field1D(f.grid, fft_x(f.values, f.grid), FREQUENCY)
    out = fft_x(f.values, f.grid.space, axis=1)
    out = fft_x(out, f.grid.time, axis=0)
    return Field2D(f.grid, out, FREQUENCY)


def inverse_transform(f: Field) -> Field:
    if f.domain_tag != FREQUENCY:
        raise StructuralError("inverse transform expects a frequency-domain field")
    if isinstance(f, Field1D):
        return Field1D(f.grid, ifft_x(f.values, f.grid), PHYSICAL)
    out = ifft_x(f.values, f.grid.time, axis=0)
    out = ifft_x(out, f.grid.space, axis=1)
    return Field2D(f.grid, out, PHYSICAL)


def l2_physical(f: Field) -> float:
    """Quadrature L2 norm with dx (and dt) weights."""
    w = f.grid.dx if isinstance(f, Field1D) else f.grid.space.dx * f.grid.time.dx
    return float(np.sqrt(w * np.sum(np.abs(f.values) ** 2)))


def l2_frequency(f: Field) -> float:
    """L2 norm of a spectrum with d(xi)/(2 pi) = 1/L weights."""
    if isinstance(f, Field1D):
        w = 1.0 / f.grid.L
    else:
        w = 1.0 / (f.grid.space.L * f.grid.time.L)
    return float(np.sqrt(w * np.sum(np.abs(f.values) ** 2)))


# ------------------------------------------------------------ dyadic pieces

def _exp_neg_inv(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=float)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(u) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, e(u)/(e(u)+e(1-u)) between."""
    u = np.asarray(u, dtype=float)
    a = _exp_neg_inv(u)
    b = _exp_neg_inv(1.0 - u)
    return a / (a + b)


def eta0(xi) -> np.ndarray:
    """Even bump equal to 1 on [-1, 1] and vanishing outside [-2, 2]."""
    return smooth_step(2.0 - np.abs(np.asarray(xi, dtype=float)))


def chi(k: int, xi) -> np.ndarray:
    """Littlewood-Paley multiplier; chi_0 = eta0 and the rest telescope."""
    if k < 0:
        raise ValueError("dyadic index must be nonnegative")
    xi = np.asarray(xi, dtype=float)
    if k == 0:
        return eta0(xi)
    return eta0(xi / 2.0**k) - eta0(xi / 2.0 ** (k - 1))


def dyadic_interval(k: int) -> tuple[float, float]:
    """Closed range of |xi| on which chi_k may be nonzero."""
    return (0.0, 2.0) if k == 0 else (2.0 ** (k - 1), 2.0 ** (k + 1))


def dyadic_count(max_abs: float) -> int:
    """Smallest K with eta0(xi/2^K) = 1 for |xi| <= max_abs; chi_0..chi_K then sum to one."""
    if max_abs <= 1.0:
        return 0
    return int(np.ceil(np.log2(max_abs)))


def _spectral(f: Field) -> tuple[np.ndarray, bool]:
    if f.domain_tag == FREQUENCY:
        return f.values, False
    return forward_transform(f).values, True


def _rebuild(f: Field, hat: np.ndarray, was_physical: bool) -> Field:
    out = type(f)(f.grid, hat, FREQUENCY)
    return inverse_transform(out) if was_physical else out


def lp_project(f: Field, k: int) -> Field:
    """Apply P_k (multiplier chi_k in the spatial frequency)."""
    hat, phys = _spectral(f)
    xi = f.grid.wavenumbers if isinstance(f, Field1D) else f.grid.space.wavenumbers
    return _rebuild(f, hat * chi(k, xi), phys)


def modulation_symbol(grid: SpaceTimeGrid) -> np.ndarray:
    """tau - xi^5 on the (tau, xi) frequency grid (rows tau, columns xi)."""
    tau = grid.time.wavenumbers[:, None]
    xi = grid.space.wavenumbers[None, :]
    return tau - xi**5


def modulation_project(f: Field2D, j: int) -> Field2D:
    """Apply Q_j (multiplier chi_j(tau - xi^5))."""
    hat, phys = _spectral(f)
    return _rebuild(f, hat * chi(j, modulation_symbol(f.grid)), phys)


def spectral_derivative(values: np.ndarray, grid: Grid1D, order: int = 1, axis: int = -1) -> np.ndarray:
    """d^order/dx^order of periodic samples via the FFT."""
    xi = grid.wavenumbers
    sym = (1j * xi) ** order
    if order % 2 == 1:
        sym[grid.n // 2] = 0.0
    shape = [1] * np.ndim(values)
    shape[axis] = grid.n
    return np.fft.ifft(np.fft.fft(values, axis=axis) * sym.reshape(shape), axis=axis)


def evaluate_at(values: np.ndarray, grid: Grid1D, x: float, order: int = 0, axis: int = -1) -> np.ndarray:
    """Trigonometric interpolant (or its derivative) of periodic samples at a point ``x``."""
    xi = grid.wavenumbers.copy()
    hat = np.fft.fft(values, axis=axis) / grid.n
    sym = (1j * xi) ** order * np.exp(1j * xi * (x - grid.origin))
    nyq = grid.n // 2
    # the Nyquist mode is split evenly between +/- so the interpolant stays real
    sym[nyq] = (1j * xi[nyq]) ** order * np.cos(xi[nyq] * (x - grid.origin)) if order % 2 == 0 else 0.0
    shape = [1] * np.ndim(values)
    shape[axis] = grid.n
    return np.sum(hat * sym.reshape(shape), axis=axis)


def wrap_contamination(values: np.ndarray, margin_fraction: float = 0.125) -> float:
    """Fraction of the sup norm found within ``margin_fraction`` of either grid edge."""
    v = np.abs(np.asarray(values))
    if v.size == 0 or v.max() == 0:
        return 0.0
    n = v.shape[-1]
    m = max(1, int(n * margin_fraction))
    edge = max(v[..., :m].max(), v[..., -m:].max())
    return float(edge / v.max())
