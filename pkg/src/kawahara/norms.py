"""Discrete Bourgain-type norms and the composite solution-space norm.

All norms use the continuum-normalized transform of :mod:`kawahara.spectral`,
so a spectral sample at (tau, xi) carries measure 1/(L_x L_t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import (
    Field1D,
    Field2D,
    Grid1D,
    chi,
    dyadic_count,
    fft_x,
    forward_transform,
    modulation_symbol,
    spectral_derivative,
)


class NormDomainError(ValueError):
    pass


@dataclass(frozen=True)
class SobolevIndex:
    s: float
    b: float
    alpha: float

    def in_solver_window(self) -> bool:
        return 0 < self.b < 0.5 < self.alpha < 1 - self.b

    def require_solver_window(self) -> None:
        if not self.in_solver_window():
            raise NormDomainError(f"need 0 < b < 1/2 < alpha < 1 - b, got b={self.b}, alpha={self.alpha}")


def _bracket(v) -> np.ndarray:
    return np.sqrt(1.0 + np.asarray(v, dtype=float) ** 2)


def _spectrum(f: Field2D) -> np.ndarray:
    return f.values if f.domain_tag == "frequency" else forward_transform(f).values


def _measure(f: Field2D) -> float:
    return 1.0 / (f.grid.space.L * f.grid.time.L)


def xsb_norm(f: Field2D, s: float, b: float) -> float:
    spec = _spectrum(f)
    xi = f.grid.space.wavenumbers[None, :]
    w = _bracket(xi) ** (2 * s) * _bracket(modulation_symbol(f.grid)) ** (2 * b)
    return float(np.sqrt(_measure(f) * np.sum(w * np.abs(spec) ** 2)))


def ysb_norm(f: Field2D, s: float, b: float) -> float:
    spec = _spectrum(f)
    tau = f.grid.time.wavenumbers[:, None]
    w = _bracket(tau) ** (2 * s / 5) * _bracket(modulation_symbol(f.grid)) ** (2 * b)
    return float(np.sqrt(_measure(f) * np.sum(w * np.abs(spec) ** 2)))


def dalpha_norm(f: Field2D, alpha: float) -> float:
    spec = _spectrum(f)
    tau = f.grid.time.wavenumbers[:, None]
    low = (np.abs(f.grid.space.wavenumbers) <= 1.0)[None, :]
    w = _bracket(tau) ** (2 * alpha) * low
    return float(np.sqrt(_measure(f) * np.sum(w * np.abs(spec) ** 2)))


def xsb_dyadic(f: Field2D, s: float, b: float) -> float:
    """sqrt(sum_k sum_j 2^(2sk) 2^(2bj) ||chi_j(tau - xi^5) chi_k(xi) f~||^2)."""
    spec = _spectrum(f)
    xi = f.grid.space.wavenumbers
    mod = modulation_symbol(f.grid)
    K = dyadic_count(np.abs(xi).max())
    J = dyadic_count(np.abs(mod).max())
    total = 0.0
    for k in range(K + 1):
        ck = chi(k, xi)[None, :]
        if not np.any(ck):
            continue
        for j in range(J + 1):
            piece = chi(j, mod) * ck * spec
            total += 2.0 ** (2 * s * k + 2 * b * j) * np.sum(np.abs(piece) ** 2)
    return float(np.sqrt(_measure(f) * total))


def hs_norm(f: Field1D, s: float) -> float:
    spec = f.values if f.domain_tag == "frequency" else fft_x(f.values, f.grid)
    w = _bracket(f.grid.wavenumbers) ** (2 * s)
    return float(np.sqrt(np.sum(w * np.abs(spec) ** 2) / f.grid.L))


def zero_extension(f: Field1D) -> Field1D:
    vals = np.where(f.grid.points >= 0, f.values, 0.0)
    return Field1D(f.grid, vals)


def hs0_halfline_norm(f: Field1D, s: float) -> float:
    """H^s norm of the zero extension of the restriction to x >= 0; needs |s| < 1/2."""
    if not abs(s) < 0.5:
        raise NormDomainError("the zero extension defines the half-line norm only for |s| < 1/2")
    return hs_norm(zero_extension(f), s)


def time_sobolev_columns(values: np.ndarray, time: Grid1D, s: float) -> np.ndarray:
    """H^s_t norm of every column of a (t, x) array, treating time as periodic."""
    spec = fft_x(values, time, axis=0)
    w = _bracket(time.wavenumbers) ** (2 * s)
    return np.sqrt(np.sum(w[:, None] * np.abs(spec) ** 2, axis=0) / time.L)


@dataclass(frozen=True)
class ZNormReport:
    energy: float
    traces: tuple
    bourgain: float
    xsb: float
    dalpha: float

    @property
    def total(self) -> float:
        return self.energy + sum(self.traces) + self.bourgain


def z_norm_report(u: Field2D, s: float, b: float, alpha: float, ell: int = 1,
                  columns: np.ndarray | None = None) -> ZNormReport:
    """Components of sup_t ||u||_{H^s} + sum_j sup_x ||d_x^j u||_{H^((s+2-j)/5)} + max(X^{s,b}, D^alpha).

    ``columns`` optionally restricts the sup over x to a subset of column indices.
    """
    if ell not in (1, 2):
        raise NormDomainError("the trace part of the norm uses ell = 1 or 2")
    g = u.grid
    vals = u.values
    spec_x = fft_x(vals, g.space, axis=1)
    w = _bracket(g.space.wavenumbers) ** (2 * s)
    energy = float(np.sqrt(np.max(np.sum(w[None, :] * np.abs(spec_x) ** 2, axis=1)) / g.space.L))
    traces = []
    for j in range(ell + 1):
        dj = vals if j == 0 else spectral_derivative(vals, g.space, j, axis=1)
        if columns is not None:
            dj = dj[:, columns]
        traces.append(float(np.max(time_sobolev_columns(dj, g.time, (s + 2 - j) / 5))))
    x = xsb_norm(u, s, b)
    d = dalpha_norm(u, alpha)
    return ZNormReport(energy, tuple(traces), max(x, d), x, d)


def z_norm(u: Field2D, s: float, b: float, alpha: float, ell: int = 1) -> float:
    return z_norm_report(u, s, b, alpha, ell).total
