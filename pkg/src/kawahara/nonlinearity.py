"""The quadratic-nonlocal and cubic nonlinearities, resonance functions and the scaling map."""

from __future__ import annotations

import enum
import warnings

import numpy as np

from .spectral import Field1D, Field2D, Grid1D, SpaceTimeGrid


class NonlinearityKind(str, enum.Enum):
    QUADRATIC = "quadratic-nonlocal"
    CUBIC = "cubic"

    @property
    def degree(self) -> int:
        return 2 if self is NonlinearityKind.QUADRATIC else 3

    @property
    def dealias_fraction(self) -> float:
        """Retained fraction of the Nyquist band: the 2/3 rule for squares, 1/2 for cubes."""
        return 2.0 / 3.0 if self is NonlinearityKind.QUADRATIC else 0.5


class AliasingWarning(UserWarning):
    pass


def japanese(xi) -> np.ndarray:
    return np.sqrt(1.0 + np.asarray(xi, dtype=float) ** 2)


def nonlinear_symbol(xi: np.ndarray, kind: NonlinearityKind) -> np.ndarray:
    """i xi <xi> for the quadratic-nonlocal map, i xi for the cubic one."""
    kind = NonlinearityKind(kind)
    return 1j * xi * japanese(xi) if kind is NonlinearityKind.QUADRATIC else 1j * xi


def _band_mask(n: int, fraction: float) -> np.ndarray:
    m = np.abs(np.fft.fftfreq(n) * n)
    return m <= fraction * (n // 2)


def nonlinear_term(values: np.ndarray, grid: Grid1D, kind, axis: int = -1) -> tuple[np.ndarray, float]:
    """F(u) along ``axis`` with dealiasing.  Returns (F(u), aliasing energy fraction of the input)."""
    kind = NonlinearityKind(kind)
    v = np.asarray(values)
    mask = _band_mask(grid.n, kind.dealias_fraction)
    shape = [1] * v.ndim
    shape[axis] = grid.n
    mask = mask.reshape(shape)
    hat = np.fft.fft(v, axis=axis)
    total = float(np.sum(np.abs(hat) ** 2))
    alias = float(np.sum(np.abs(hat * ~mask) ** 2)) / total if total > 0 else 0.0
    u = np.fft.ifft(hat * mask, axis=axis)
    if not np.iscomplexobj(v):
        u = np.real(u)
    prod = np.fft.fft(u ** kind.degree, axis=axis) * mask
    sym = nonlinear_symbol(grid.wavenumbers, kind)
    sym[grid.n // 2] = 0.0
    out = np.fft.ifft(prod * sym.reshape(shape), axis=axis)
    if not np.iscomplexobj(v):
        out = np.real(out)
    return out, alias


def apply_F(u: Field1D, kind) -> Field1D:
    """Physical-domain F(u); warns when the input carries energy outside the dealiased band."""
    vals = u.values
    scale = np.max(np.abs(vals)) if vals.size else 0.0
    if np.max(np.abs(np.imag(vals)), initial=0.0) > 1e-10 * max(scale, 1.0):
        raise ValueError("apply_F expects a real-valued field")
    out, alias = nonlinear_term(np.real(vals), u.grid, kind)
    if alias > 1e-6:
        warnings.warn(f"aliasing energy fraction {alias:.2e}", AliasingWarning, stacklevel=2)
    return Field1D(u.grid, out)


# ------------------------------------------------------------- resonances

def resonance_H_expanded(x1, x2):
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    return (x1 + x2) ** 5 - x1**5 - x2**5


def resonance_H_factored(x1, x2):
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    s = x1 + x2
    return 2.5 * x1 * x2 * s * (x1**2 + x2**2 + s**2)


def resonance_H(x1, x2):
    return resonance_H_factored(x1, x2)


def resonance_G_expanded(x1, x2, x3):
    x1, x2, x3 = (np.asarray(v, dtype=float) for v in (x1, x2, x3))
    return (x1 + x2 + x3) ** 5 - x1**5 - x2**5 - x3**5


def resonance_G_factored(x1, x2, x3):
    x1, x2, x3 = (np.asarray(v, dtype=float) for v in (x1, x2, x3))
    s = x1 + x2 + x3
    return 2.5 * (x1 + x2) * (x2 + x3) * (x3 + x1) * (x1**2 + x2**2 + x3**2 + s**2)


def resonance_G(x1, x2, x3):
    return resonance_G_factored(x1, x2, x3)


def resonance_gradient_H(x1, x2):
    """(dH/dx1, dH/dx2)."""
    s4 = (np.asarray(x1) + np.asarray(x2)) ** 4
    return 5 * (s4 - np.asarray(x1) ** 4), 5 * (s4 - np.asarray(x2) ** 4)


# --------------------------------------------------------------- scaling

def scaled_grid(grid: SpaceTimeGrid, lam: float) -> SpaceTimeGrid:
    """Grid on which samples of u_lam coincide with lam^2 times samples of u."""
    sp, tm = grid.space, grid.time
    return SpaceTimeGrid(Grid1D(sp.n, sp.L / lam, sp.origin / lam), Grid1D(tm.n, tm.L / lam**5, tm.origin / lam**5))


def scaling_map(u: Field2D, lam: float) -> Field2D:
    """u_lam(t, x) = lam^2 u(lam^5 t, lam x), sampled exactly on the rescaled grid."""
    if not lam > 0:
        raise ValueError("scaling parameter must be positive")
    return Field2D(scaled_grid(u.grid, lam), lam**2 * u.values, u.domain_tag)


def scale_initial(values: np.ndarray, grid: Grid1D, lam: float) -> tuple[np.ndarray, Grid1D]:
    return lam**2 * np.asarray(values), Grid1D(grid.n, grid.L / lam, grid.origin / lam)


def homogeneous_sobolev(values: np.ndarray, grid: Grid1D, s: float) -> float:
    """||u||_{dot H^s} with the continuum normalization (zero mode excluded)."""
    from .spectral import fft_x

    hat = fft_x(values, grid)
    xi = np.abs(grid.wavenumbers)
    nz = xi > 0
    return float(np.sqrt(np.sum(xi[nz] ** (2 * s) * np.abs(hat[nz]) ** 2) / grid.L))
