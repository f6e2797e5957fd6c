"""Riemann-Liouville fractional integration of sampled signals supported in t >= 0.

Positive orders use product integration: the signal is replaced by its
piecewise-linear interpolant and the moments of (t - s)^(alpha - 1) against
{1, s} are integrated exactly panel by panel.  The resulting weights depend
only on n - j away from the first sample, so the whole history sum is one
FFT convolution.

Negative orders move derivatives onto the signal, I_alpha f = I_(alpha+k) f^(k),
which is legitimate because the signal and its derivatives vanish at t = 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gamma


class FractionalDomainError(ValueError):
    pass


class AccuracyWarning(UserWarning):
    pass


@dataclass
class HalfLineSignal:
    """Samples f(j*dt), j = 0..n-1, of a signal vanishing for t <= 0."""

    dt: float
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if not self.dt > 0:
            raise FractionalDomainError("time step must be positive")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.values.shape[0])

    def check_support(self, tol: float = 1e-14) -> None:
        if self.values.shape[0] and np.max(np.abs(self.values[0])) > tol * (1 + np.max(np.abs(self.values))):
            raise FractionalDomainError("signal does not vanish at t = 0")


def product_weights(alpha: float, n: int) -> np.ndarray:
    """Toeplitz weights c_m, m = 0..n-1, of the piecewise-linear product rule.

    c_0 = 1 and c_m = (m+1)^(a+1) - 2 m^(a+1) + (m-1)^(a+1); the sum over the
    history is scaled by dt^a / Gamma(a + 2).
    """
    m = np.arange(n, dtype=float)
    a1 = alpha + 1.0
    c = np.empty(n)
    c[0] = 1.0
    if n > 1:
        mm = m[1:]
        c[1:] = (mm + 1) ** a1 - 2 * mm**a1 + (mm - 1) ** a1
    return c


def _first_sample_correction(alpha: float, n: int) -> np.ndarray:
    """Extra weight on f_0: a_(0,n) - c_n with a_(0,n) = (n-1)^(a+1) - (n-a-1) n^a."""
    m = np.arange(n, dtype=float)
    out = np.zeros(n)
    if n > 1:
        mm = m[1:]
        a0 = (mm - 1) ** (alpha + 1) - (mm - alpha - 1) * mm**alpha
        c = product_weights(alpha, n)[1:]
        out[1:] = a0 - c
    return out


def rl_integrate(values: np.ndarray, alpha: float, dt: float, axis: int = 0) -> np.ndarray:
    """I_alpha along ``axis`` for alpha > 0 on samples starting at t = 0."""
    if not alpha > 0:
        raise FractionalDomainError("positive order required; use rl_apply for alpha <= 0")
    v = np.moveaxis(np.asarray(values), axis, 0)
    n = v.shape[0]
    c = product_weights(alpha, n).reshape((n,) + (1,) * (v.ndim - 1))
    hist = fftconvolve(v, c, axes=0)[:n]
    corr = _first_sample_correction(alpha, n).reshape(c.shape) * v[:1]
    out = (hist + corr) * dt**alpha / gamma(alpha + 2.0)
    out[0] = 0.0
    if not np.iscomplexobj(values):
        out = np.real(out)
    return np.moveaxis(out, 0, axis)


def rl_integrate_reverse(values: np.ndarray, alpha: float, dx: float, axis: int = -1) -> np.ndarray:
    """(1/Gamma(a)) integral_x^(x_end) (y - x)^(a-1) v(y) dy on a uniform grid.

    This is the right-sided (Weyl-type) integral truncated at the last sample.
    """
    v = np.flip(np.asarray(values), axis=axis)
    return np.flip(rl_integrate(v, alpha, dx, axis=axis), axis=axis)


def spectral_time_derivative(values: np.ndarray, dt: float, order: int, axis: int = 0) -> np.ndarray:
    """Periodic spectral derivative; valid for signals compactly supported inside the grid."""
    v = np.asarray(values)
    n = v.shape[axis]
    w = 2 * np.pi * np.fft.fftfreq(n, d=dt)
    sym = (1j * w) ** order
    if order % 2 == 1 and n % 2 == 0:
        sym[n // 2] = 0.0
    shape = [1] * v.ndim
    shape[axis] = n
    out = np.fft.ifft(np.fft.fft(v, axis=axis) * sym.reshape(shape), axis=axis)
    return out if np.iscomplexobj(v) else np.real(out)


def spectral_tail_fraction(values: np.ndarray, axis: int = 0, band: float = 0.125) -> float:
    """Energy fraction in the top ``band`` of the resolved frequencies."""
    spec = np.abs(np.fft.fft(np.asarray(values), axis=axis)) ** 2
    n = spec.shape[axis]
    k = np.abs(np.fft.fftfreq(n))
    sel = k >= 0.5 * (1 - band)
    total = spec.sum()
    if total == 0:
        return 0.0
    return float(np.take(spec, np.where(sel)[0], axis=axis).sum() / total)


def fornberg_weights(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights for derivatives 0..m at ``z`` on nodes ``x`` (Fornberg 1988)."""
    n = len(x)
    c = np.zeros((n, m + 1))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def fd_time_derivative(values: np.ndarray, dt: float, order: int, axis: int = 0, width: int = 10) -> np.ndarray:
    """High-order finite differences for signals vanishing to all orders at t = 0.

    Zeros are padded on the left (the signal is identically zero for t < 0);
    the right end uses one-sided stencils of the same width.
    """
    v = np.moveaxis(np.asarray(values), axis, 0)
    n = v.shape[0]
    half = width // 2
    padded = np.concatenate([np.zeros((half,) + v.shape[1:], dtype=v.dtype), v], axis=0)
    out = np.zeros_like(v, dtype=np.result_type(v.dtype, float))
    centre = fornberg_weights(0.0, np.arange(-half, half + 1, dtype=float), order)
    interior = n - half
    for s, w in enumerate(centre):
        out[:interior] += w * padded[s:s + interior]
    stencil = np.arange(n - width - 1, n)
    for i in range(max(interior, 0), n):
        w = fornberg_weights(float(i), stencil.astype(float), order)
        out[i] = np.tensordot(w, v[stencil], axes=(0, 0))
    return np.moveaxis(out / dt**order, 0, axis)


def is_compact(values: np.ndarray, axis: int = 0, tol: float = 1e-10) -> bool:
    """True when the signal is negligible on the last tenth of the grid."""
    return _edge_fraction(values, axis) <= tol


def _edge_fraction(values: np.ndarray, axis: int, margin: float = 0.1) -> float:
    v = np.abs(np.moveaxis(np.asarray(values), axis, 0))
    n = v.shape[0]
    m = max(1, int(margin * n))
    top = v.max()
    return 0.0 if top == 0 else float(v[-m:].max() / top)


def time_derivative(values: np.ndarray, dt: float, order: int, axis: int = 0, method: str = "auto") -> np.ndarray:
    if method == "auto":
        method = "spectral" if is_compact(values, axis) else "fd"
    if method == "spectral":
        return spectral_time_derivative(values, dt, order, axis)
    return fd_time_derivative(values, dt, order, axis)


def rl_apply(values: np.ndarray, alpha: float, dt: float, axis: int = 0, method: str = "auto") -> np.ndarray:
    """I_alpha for any real alpha > -5 (alpha = 0 is the identity).

    For alpha < 0 the derivative count is k = ceil(-alpha) + 1.  Derivatives
    are spectral when the input is compactly supported inside the grid and
    high-order finite differences otherwise.
    """
    if alpha > 0:
        return rl_integrate(values, alpha, dt, axis)
    if alpha == 0:
        return np.array(values, copy=True)
    if alpha <= -5:
        raise FractionalDomainError("orders at or below -5 are not supported")
    if float(alpha).is_integer():
        return time_derivative(values, dt, int(-alpha), axis, method)
    k = math.ceil(-alpha) + 1
    deriv = time_derivative(values, dt, k, axis, method)
    return rl_integrate(deriv, alpha + k, dt, axis)


def riemann_liouville(f: HalfLineSignal, alpha: float) -> HalfLineSignal:
    """I_alpha f for alpha > 0."""
    if not alpha > 0:
        raise FractionalDomainError("riemann_liouville needs alpha > 0; use riemann_liouville_neg")
    f.check_support()
    return HalfLineSignal(f.dt, rl_integrate(f.values, alpha, f.dt), {"order": alpha})


def riemann_liouville_neg(f: HalfLineSignal, alpha: float) -> HalfLineSignal:
    """I_alpha f for -5 < alpha < 0; flags under-resolved or non-compact input in ``meta``."""
    if not alpha < 0:
        raise FractionalDomainError("riemann_liouville_neg needs alpha < 0")
    f.check_support()
    meta = {"order": alpha}
    tail = spectral_tail_fraction(f.values)
    meta["derivative_route"] = "spectral" if is_compact(f.values) else "finite-difference"
    if tail > 1e-6:
        meta["accuracy_warning"] = f"spectral tail {tail:.2e} of total energy"
        warnings.warn(meta["accuracy_warning"], AccuracyWarning, stacklevel=2)
    return HalfLineSignal(f.dt, rl_apply(f.values, alpha, f.dt), meta)


def halfline_power_transform(alpha: float, tau) -> np.ndarray:
    """Fourier transform of t_+^(alpha-1)/Gamma(alpha) at tau != 0."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau == 0):
        raise FractionalDomainError("transform is singular at tau = 0")
    mag = np.abs(tau) ** (-alpha)
    return np.where(tau > 0, np.exp(-0.5j * np.pi * alpha), np.exp(0.5j * np.pi * alpha)) * mag
