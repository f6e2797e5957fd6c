"""Boundary forcing operators: L0, the family L^lambda_(+/-), trace constants and the 2x2 matching system.

Two independent routes produce L0:

* ``kernel``: M * int_0^t B(x (t-t')^(-1/5)) h(t') (t-t')^(-1/5) dt' with
  h = I_(-4/5) f, evaluated by quadrature against the tabulated kernel.
* ``spectral``: M * int_0^t exp((t-t') d_x^5) delta_0 h(t') dt', i.e. the
  exponential Duhamel rule applied to a flat spectrum on the periodic grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gamma

from .fractional import HalfLineSignal, rl_apply, rl_integrate, rl_integrate_reverse
from .kernel import MINUS, PLUS, closed_form_at_zero, default_table, mellin_B
from .propagator import duhamel_spectral
from .spectral import Field2D, Grid1D, SpaceTimeGrid, ifft_x, spectral_derivative


class ForcingDomainError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


@lru_cache(maxsize=1)
def forcing_constant() -> float:
    """M = 1 / (B(0) Gamma(4/5))."""
    return 1.0 / (closed_form_at_zero(0) * gamma(0.8))


def _check_side(side: str) -> str:
    if side not in (PLUS, MINUS):
        raise ForcingDomainError(f"side must be {PLUS!r} or {MINUS!r}, got {side!r}")
    return side


def _time_grid(n: int, dt: float) -> Grid1D:
    return Grid1D(n, n * dt, 0.0)


# ------------------------------------------------------------------ L0 routes

def boundary_density(f: HalfLineSignal, lam: float = 0.0) -> np.ndarray:
    """h = I_(-4/5 - lam/5) f, the density driving L^lam."""
    f.check_support()
    return rl_apply(f.values, -0.8 - lam / 5.0, f.dt)


def l0_spectral_from_density(h: np.ndarray, dt: float, grid: Grid1D) -> np.ndarray:
    """M * Duhamel(h(t) delta_0) on the periodic grid; rows are times."""
    nt = h.shape[0]
    xi = grid.wavenumbers
    w_hat = forcing_constant() * np.repeat(np.asarray(h, dtype=complex)[:, None], grid.n, axis=1)
    w_hat[:, grid.n // 2] = 0.0
    v_hat = duhamel_spectral(w_hat, xi**5, dt)
    return np.real(ifft_x(v_hat, grid, axis=1))


def _y_nodes(x: float, t_max: float, q: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes in y = |x| sigma^(-1/4): log panels near the lower end, uniform panels after."""
    lo = abs(x) * t_max ** (-0.2)
    if x > 0:
        hi = 30.0
    else:
        # |x|^4 Y^(-4.375) <= 1e-9 bounds the neglected oscillatory tail
        hi = max(60.0, (abs(x) ** 4 * 1e9) ** (1 / 4.375))
    if lo >= hi:
        return np.zeros(0), np.zeros(0)
    g, w = np.polynomial.legendre.leggauss(q)
    nodes, weights = [], []
    mid = min(max(lo, 8.0), hi)
    if mid > lo:
        panels = max(4, int(np.ceil(np.log(mid / lo) / 0.04)))
        edges = np.exp(np.linspace(np.log(lo), np.log(mid), panels + 1))
        for a, b in zip(edges[:-1], edges[1:]):
            nodes.append(0.5 * (a + b) + 0.5 * (b - a) * g)
            weights.append(0.5 * (b - a) * w)
    if hi > mid:
        # about two radians of kernel phase per panel
        panels = max(4, int(np.ceil((hi - mid) * max(1.0, (hi / 5.0) ** 0.25) / 2.0)))
        edges = np.linspace(mid, hi, panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            nodes.append(0.5 * (a + b) + 0.5 * (b - a) * g)
            weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def l0_kernel_from_density(h: np.ndarray, dt: float, xs, table=None) -> np.ndarray:
    """Kernel-form L0 at the points ``xs`` for every sample time; shape (nt, len(xs)).

    At x = 0 the substitution sigma = (t - t')^(4/5) turns the integral into
    (5M/4) B(0) int_0^(t^(4/5)) h(t - sigma^(5/4)) dsigma.  Away from 0 the
    further substitution y = |x| sigma^(-1/4) gives
    5M |x|^4 int B(sign(x) y) h(t - |x|^5 / y^5) y^(-5) dy, whose integrand is
    smooth and decays like y^(-5) or faster.
    """
    table = table or default_table()
    M = forcing_constant()
    h = np.asarray(h, dtype=float)
    nt = h.shape[0]
    times = dt * np.arange(nt)
    spline = CubicSpline(times, h)

    def h_at(s):
        out = np.zeros_like(s)
        m = s > 0
        out[m] = spline(s[m])
        return out

    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.zeros((nt, xs.size))
    t_max = max(times[-1], dt)
    g, w = np.polynomial.legendre.leggauss(24)
    for j, x in enumerate(xs):
        if x == 0.0:
            b0 = closed_form_at_zero(0)
            for m, t in enumerate(times[1:], start=1):
                top = t**0.8
                panels = max(2, int(np.ceil(top / (4 * dt) ** 0.8)))
                edges = np.linspace(0.0, top, panels + 1)
                sig = (0.5 * (edges[1:] + edges[:-1])[:, None] + 0.5 * np.diff(edges)[:, None] * g).ravel()
                wt = (0.5 * np.diff(edges)[:, None] * w).ravel()
                out[m, j] = 1.25 * M * b0 * np.sum(wt * h_at(t - sig**1.25))
            continue
        y, wy = _y_nodes(x, t_max)
        if y.size == 0:
            continue
        kern = table(np.sign(x) * y) * wy * y**-5.0
        shift = abs(x) ** 5 / y**5
        vals = h_at(times[:, None] - shift[None, :])
        out[:, j] = 5 * M * abs(x) ** 4 * (vals @ kern)
    return out


def L0(f: HalfLineSignal, grid: Grid1D, method: str = "kernel", xs=None, table=None) -> Field2D:
    """Boundary forcing field L0 f on (t, x).

    ``method="spectral"`` fills the whole periodic grid.  ``method="kernel"``
    evaluates the kernel form at ``xs`` (default: every grid point) and is the
    reference route; it is exact on the whole line, with no periodic wrap.
    """
    h = boundary_density(f)
    nt = h.shape[0]
    tg = _time_grid(nt, f.dt)
    if method == "spectral":
        vals = l0_spectral_from_density(h, f.dt, grid)
    elif method == "kernel":
        pts = grid.points if xs is None else np.asarray(xs)
        vals = l0_kernel_from_density(h, f.dt, pts, table)
        if xs is not None:
            return vals
    else:
        raise ForcingDomainError(f"unknown L0 route {method!r}")
    return Field2D(SpaceTimeGrid(grid, tg), vals)


# --------------------------------------------------------------- L^lambda

LAMBDA_WINDOW = (-4.0, 0.5)


def _x_convolve(W: np.ndarray, lam: float, side: str, grid: Grid1D, cut: float | None) -> np.ndarray:
    """x_(-/+)^(lam-1)/Gamma(lam) * W along axis 1 for any lam in the window.

    Negative orders move m = ceil(-lam) derivatives onto W, which carries
    (-d_x)^m on the plus side and d_x^m on the minus side.
    """
    field = np.array(W, dtype=float, copy=True)
    x = grid.points
    if side == PLUS and cut is not None:
        field[:, x > cut] = 0.0
    if side == MINUS and cut is not None:
        field[:, x < -cut] = 0.0
    if lam == 0:
        return field
    m = 0 if lam > 0 else math.ceil(-lam)
    if m:
        sign = (-1.0) ** m if side == PLUS else 1.0
        field = sign * spectral_derivative(field, grid, m, axis=1)
        if side == PLUS and cut is not None:
            field[:, x > cut] = 0.0
        if side == MINUS and cut is not None:
            field[:, x < -cut] = 0.0
    order = lam + m
    if order == 0:
        return field
    if side == PLUS:
        return rl_integrate_reverse(field, order, grid.dx, axis=1)
    return rl_integrate(field, order, grid.dx, axis=1)


def L_lambda(f: HalfLineSignal, lam: float, side: str, grid: Grid1D, cut: float | None = None) -> Field2D:
    """L^lam_(side) f = x_(-/+)^(lam-1)/Gamma(lam) * L0(I_(-lam/5) f) on the periodic grid.

    The x-convolution runs over the grid, so the plus side integrates from x to
    the right edge and the minus side from the left edge to x.  ``cut`` zeroes
    the L0 field beyond |x| > cut on the far side, where periodic wrap of the
    slowly decaying left tail would otherwise enter; by default it is a quarter
    of the period.
    """
    side = _check_side(side)
    lo, hi = LAMBDA_WINDOW
    if not lo < lam < hi:
        raise ForcingDomainError(f"order {lam} outside ({lo}, {hi})")
    if cut is None:
        cut = grid.L / 4
    h = boundary_density(f, lam)
    W = l0_spectral_from_density(h, f.dt, grid)
    vals = _x_convolve(W, lam, side, grid, cut)
    return Field2D(SpaceTimeGrid(grid, _time_grid(h.shape[0], f.dt)), vals)


def integer_order_reference(f: HalfLineSignal, k: int, grid: Grid1D) -> Field2D:
    """d_x^k L0(I_(k/5) f) computed spectrally."""
    g = HalfLineSignal(f.dt, rl_integrate(f.values, k / 5.0, f.dt))
    W = l0_spectral_from_density(boundary_density(g), f.dt, grid)
    return Field2D(SpaceTimeGrid(grid, _time_grid(W.shape[0], f.dt)), spectral_derivative(W, grid, k, axis=1))


def source_profile(x, lam: float, side: str) -> np.ndarray:
    """x_(-/+)^(lam-1)/Gamma(lam) pointwise away from 0 (the forcing's spatial profile)."""
    side = _check_side(side)
    x = np.asarray(x, dtype=float)
    z = -x if side == PLUS else x
    out = np.zeros_like(x)
    m = z > 0
    out[m] = z[m] ** (lam - 1.0) / gamma(lam) if lam not in (0, -1, -2, -3) else 0.0
    return out


@dataclass(frozen=True)
class WeakResidual:
    pairing: float
    source: float
    residual: float
    relative: float


def forced_equation_residual(field: Field2D, f: HalfLineSignal, lam: float, side: str,
                             t_window: tuple[float, float], x_window: tuple[float, float]) -> WeakResidual:
    """Pair (d_t - d_x^5) L^lam f - M x_(-/+)^(lam-1)/Gamma(lam) I_(-4/5-lam/5) f with a smooth test function.

    The test function is a product of bumps supported in the given windows;
    the operator is moved onto it, <W, -phi_t + phi_xxxxx>, so only the field
    itself is sampled.
    """
    grid = field.grid
    t = grid.time.points
    x = grid.space.points

    def bump(z, a, b):
        u = (z - a) / (b - a)
        out = np.zeros_like(z)
        m = (u > 0) & (u < 1)
        out[m] = np.exp(-1.0 / (u[m] * (1 - u[m])))
        return out

    a_t = bump(t, *t_window)
    # time derivative of the bump by its exact formula
    u = (t - t_window[0]) / (t_window[1] - t_window[0])
    da = np.zeros_like(t)
    m = (u > 0) & (u < 1)
    da[m] = a_t[m] * (1 - 2 * u[m]) / (u[m] * (1 - u[m])) ** 2 / (t_window[1] - t_window[0])
    b_x = bump(x, *x_window)
    d5b = spectral_derivative(b_x, grid.space, 5)
    W = np.real(field.values)
    d5b = np.real(d5b)
    dt, dx = grid.time.dx, grid.space.dx
    pairing = float(np.sum(W * (-da[:, None] * b_x[None, :] + a_t[:, None] * d5b[None, :])) * dt * dx)
    dens = rl_apply(f.values, -0.8 - lam / 5.0, f.dt)
    prof = source_profile(x, lam, side)
    source = float(forcing_constant() * np.sum(dens * a_t) * dt * np.sum(prof * b_x) * dx)
    resid = pairing - source
    # scale: the pairing with every term taken in absolute value
    absolute = np.sum(np.abs(W) * np.abs(-da[:, None] * b_x[None, :] + a_t[:, None] * d5b[None, :])) * dt * dx
    scale = max(float(absolute), abs(source), 1e-300)
    return WeakResidual(pairing, source, resid, abs(resid) / scale)


# ------------------------------------------------------------ trace constants

def trace_constant(lam: float, side: str = PLUS) -> float:
    """L^lam_(side) f(t, 0) / f(t) in closed form."""
    side = _check_side(side)
    if not lam > -4:
        raise ForcingDomainError("trace constants need lambda > -4")
    den = math.sin((1.0 - lam) * math.pi / 5.0)
    if abs(den) < 1e-14:
        raise ForcingDomainError(f"sine factor vanishes at lambda = {lam}")
    num = math.cos((1 + 4 * lam) * math.pi / 10) if side == PLUS else math.cos((1 - 6 * lam) * math.pi / 10)
    return forcing_constant() * num / (5.0 * den)


def trace_constant_from_mellin(lam: float, side: str = PLUS) -> float:
    """Second route: M Gamma((lam+4)/5) / Gamma(lam) * int_0^inf y^(lam-1) B(+/-y) dy.

    The Mellin integral is evaluated by quadrature where it converges (lam > 0
    on the plus side, 0 < lam < 3/8 on the minus side, away from 0) and by its Gamma-function
    continuation elsewhere.
    """
    side = _check_side(side)
    # near lam = 0 the y^(lam-1) weight is too singular for the quadrature; the continuation is exact there
    converges = lam > 0.05 if side == PLUS else 0.05 < lam < 3 / 8
    if converges:
        return forcing_constant() * mellin_B(lam, side).quadrature * gamma((lam + 4.0) / 5.0) / gamma(lam)
    cosarg = (1 + 4 * lam) if side == PLUS else (1 - 6 * lam)
    regular = gamma(0.2 - lam / 5) / (5 * np.pi) * np.cos(cosarg * np.pi / 10)
    return forcing_constant() * regular * gamma((lam + 4.0) / 5.0)


@dataclass(frozen=True)
class StepReport:
    right_limit: float
    left_limit: float
    jump: float
    expected_jump: float


def fourth_derivative_limits() -> StepReport:
    """One-sided limits of d_x^4 L0 f(t, x) at x = 0, per unit I_(-4/5) f(t).

    From B'''' = -x B / 5 the limits are -M int_0^inf B and M int_0^inf B(-y) dy;
    both integrals are measured by quadrature, so the jump M is a check.
    """
    M = forcing_constant()
    right = -M * mellin_B(1.0, PLUS).quadrature
    left = M * mellin_B(1.0, MINUS).quadrature
    return StepReport(right, left, left - right, M)


# ------------------------------------------------------------ matching system

def in_lambda_window(lam: float, s: float) -> bool:
    return max(s - 2.0, -3.0) < lam < min(0.5, s + 0.5)


def default_lambda_pair(s: float) -> tuple[float, float]:
    lo, hi = max(s - 2.0, -3.0), min(0.5, s + 0.5)
    return (max(s / 2 - 0.45, lo + 0.05), min(0.4, s / 2 + 0.3, hi - 0.05))


@dataclass(frozen=True)
class ForcingConfig:
    lam1: float
    lam2: float
    s: float
    a: tuple[float, float]
    b: tuple[float, float]
    side: str = "right"

    @property
    def matrix(self) -> np.ndarray:
        """[[a1, a2], [b1, b2]] with b_j = a(lambda_j - 1)."""
        return np.array([[self.a[0], self.a[1]], [self.b[0], self.b[1]]])

    @property
    def effective_matrix(self) -> np.ndarray:
        """Matrix mapping (gamma1, gamma2) to (u(t,0), I_(1/5) u_x(t,0)) for the forcing part.

        d_x L^lam_+ g = -L^(lam-1)_+ (I_(-1/5) g), so the second row carries -b_j.
        """
        return np.array([[self.a[0], self.a[1]], [-self.b[0], -self.b[1]]])

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


def build_matrix(lam1: float, lam2: float, s: float = 0.0) -> ForcingConfig:
    for lam in (lam1, lam2):
        if not in_lambda_window(lam, s):
            raise ConfigurationError(f"lambda = {lam} outside ({max(s - 2, -3)}, {min(0.5, s + 0.5)}) for s = {s}")
    diff = (lam1 - lam2) / 5.0
    if abs(diff - round(diff)) < 1e-12:
        raise ConfigurationError(f"lambda pair ({lam1}, {lam2}) differs by a multiple of 5")
    a = (trace_constant(lam1, PLUS), trace_constant(lam2, PLUS))
    b = (trace_constant(lam1 - 1.0, PLUS), trace_constant(lam2 - 1.0, PLUS))
    cfg = ForcingConfig(lam1, lam2, s, a, b)
    if abs(cfg.det) <= 1e-10:
        raise ConfigurationError(f"matrix singular for lambda pair ({lam1}, {lam2}), det = {cfg.det:.3e}")
    return cfg


def solve_gamma(f: HalfLineSignal, g: HalfLineSignal, F_trace: HalfLineSignal, Fx_trace: HalfLineSignal,
                cfg: ForcingConfig, convention: str = "derived") -> tuple[np.ndarray, np.ndarray]:
    """Pointwise 2x2 solve for the forcing densities.

    rhs = [f - F(t,0); I_(1/5) g - I_(1/5) d_x F(t,0)].  ``convention="derived"``
    uses ``cfg.effective_matrix`` (the one that actually reproduces the
    boundary data); ``"as-stated"`` uses ``cfg.matrix``.
    """
    n = f.values.shape[0]
    for sig in (g, F_trace, Fx_trace):
        if sig.values.shape[0] != n or abs(sig.dt - f.dt) > 1e-15 * f.dt:
            raise ConfigurationError("boundary signals must share one time grid")
    A = cfg.effective_matrix if convention == "derived" else cfg.matrix
    if abs(np.linalg.det(A)) <= 1e-10:
        raise ConfigurationError("singular matching matrix")
    top = np.real(f.values - F_trace.values)
    diff = np.real(g.values - Fx_trace.values)
    bottom = rl_integrate(diff, 0.2, f.dt) if np.any(diff) else np.zeros(n)
    rhs = np.vstack([top, bottom])
    gam = np.linalg.solve(A, rhs)
    return gam[0], gam[1]
