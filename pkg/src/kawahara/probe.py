"""Multilinear functionals J2/J3 and empirical probes of the dyadic block estimates.

Two evaluation layers live here.

* Lattice functions: values on a symmetric (zeta, xi) lattice.  J2/J3 are
  computed by direct summation with linear interpolation in the shifted zeta
  argument, and independently by Plancherel (a convolution of the functions
  transported onto the (tau, xi) lattice).
* Dyadic bumps: separable Gaussian-mixture profiles A(zeta) B(xi) placed inside
  a block I_j x I_k.  The zeta integrals of J2/J3 are then Gaussian and done in
  closed form; the remaining xi integrals use Gauss-Legendre panels whose
  breakpoints are the real roots of the resonance quartic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import ndtr

from .nonlinearity import NonlinearityKind, resonance_G, resonance_H

LATTICE_J2_LIMIT = 64 * 64
LATTICE_J3_LIMIT = 16 * 16
SUPPORT_RADIUS = 5.5  # profile hull in widths; squared-mass leakage below 1e-14
QUAD_RADIUS = 8.5  # integration hull in widths


class ProbeCostError(ValueError):
    pass


class BlockDomainError(ValueError):
    pass


# =============================================================== lattices

@dataclass(frozen=True)
class LatticeFunction:
    """Samples f(zeta_a, xi_b) on zeta = dz (a - cz), xi = dxi (b - cx), both axes odd and centred."""

    values: np.ndarray
    dz: float = 1.0
    dxi: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] % 2 == 0 or v.shape[1] % 2 == 0:
            raise ValueError("lattice values need odd sizes on both axes")
        object.__setattr__(self, "values", v)

    @property
    def zeta(self) -> np.ndarray:
        n = self.values.shape[0]
        return self.dz * (np.arange(n) - n // 2)

    @property
    def xi(self) -> np.ndarray:
        n = self.values.shape[1]
        return self.dxi * (np.arange(n) - n // 2)

    def star(self) -> "LatticeFunction":
        """f*(zeta, xi) = f(-zeta, -xi)."""
        return LatticeFunction(self.values[::-1, ::-1].copy(), self.dz, self.dxi)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2) * self.dz * self.dxi))


def _same_lattice(fs: Sequence[LatticeFunction]) -> None:
    ref = fs[0]
    for f in fs[1:]:
        if f.values.shape != ref.values.shape or f.dz != ref.dz or f.dxi != ref.dxi:
            raise ValueError("all arguments must share one lattice")


def _interp_zeta(h: LatticeFunction, z: np.ndarray, col: np.ndarray) -> np.ndarray:
    """Linear interpolation of h(., xi_col) at zeta = z, zero off the lattice."""
    nz = h.values.shape[0]
    pos = z / h.dz + nz // 2
    i0 = np.floor(pos).astype(np.int64)
    frac = pos - i0
    ok_col = (col >= 0) & (col < h.values.shape[1])
    c = np.where(ok_col, col, 0)
    lo_ok = ok_col & (i0 >= 0) & (i0 < nz)
    hi_ok = ok_col & (i0 + 1 >= 0) & (i0 + 1 < nz)
    lo = np.where(lo_ok, h.values[np.clip(i0, 0, nz - 1), c], 0.0)
    hi = np.where(hi_ok, h.values[np.clip(i0 + 1, 0, nz - 1), c], 0.0)
    return (1.0 - frac) * lo + frac * hi


def _xi_index(f: LatticeFunction, xi: np.ndarray) -> np.ndarray:
    """Column index of xi, -1 when xi is not on the lattice."""
    pos = xi / f.dxi + f.values.shape[1] // 2
    idx = np.rint(pos).astype(np.int64)
    return np.where(np.abs(pos - idx) < 1e-9, idx, -1)


def j2_direct(f: LatticeFunction, g: LatticeFunction, h: LatticeFunction, sign: int = 1) -> float:
    """sum f(z1, x1) g(z2, x2) h(z1 + z2 + sign H(x1, x2), x1 + x2) dz^2 dxi^2."""
    _same_lattice([f, g, h])
    if f.values.size > LATTICE_J2_LIMIT:
        raise ProbeCostError(f"J2 direct summation is limited to {LATTICE_J2_LIMIT} points per factor")
    z, x = f.zeta, f.xi
    zz = np.add.outer(z, z)
    total = 0.0
    for b1, x1 in enumerate(x):
        if not np.any(f.values[:, b1]):
            continue
        Hs = sign * resonance_H(x1, x)
        col = _xi_index(h, x1 + x)
        arg = zz[None, :, :] + Hs[:, None, None]
        hv = _interp_zeta(h, arg, np.broadcast_to(col[:, None, None], arg.shape))
        fg = f.values[:, b1][None, :, None] * g.values.T[:, None, :]
        total += float(np.sum(fg * hv))
    return total * (f.dz * f.dxi) ** 2


def j3_direct(f1: LatticeFunction, f2: LatticeFunction, f3: LatticeFunction, f4: LatticeFunction,
              sign: int = 1) -> float:
    """sum f1 f2 f3 f4(z1 + z2 + z3 + sign G(x1, x2, x3), x1 + x2 + x3) over the lattice."""
    _same_lattice([f1, f2, f3, f4])
    if f1.values.size > LATTICE_J3_LIMIT:
        raise ProbeCostError(f"J3 direct summation is limited to {LATTICE_J3_LIMIT} points per factor")
    z, x = f1.zeta, f1.xi
    zzz = z[:, None, None] + z[None, :, None] + z[None, None, :]
    total = 0.0
    for b1, x1 in enumerate(x):
        for b2, x2 in enumerate(x):
            a12 = np.multiply.outer(f1.values[:, b1], f2.values[:, b2])
            if not np.any(a12):
                continue
            Gs = sign * resonance_G(x1, x2, x)
            col = _xi_index(f4, x1 + x2 + x)
            arg = zzz[None] + Gs[:, None, None, None]
            hv = _interp_zeta(f4, arg, np.broadcast_to(col[:, None, None, None], arg.shape))
            w = a12[None, :, :, None] * f3.values.T[:, None, None, :]
            total += float(np.sum(w * hv))
    return total * (f1.dz * f1.dxi) ** 3


def _to_tau(f: LatticeFunction, sign: int, pad: int) -> np.ndarray:
    """f_flat(tau, xi) = f(tau + sign xi^5, xi) on a tau lattice widened by ``pad`` cells each side."""
    shifts = sign * f.xi**5 / f.dz
    steps = np.rint(shifts).astype(np.int64)
    if np.max(np.abs(shifts - steps), initial=0.0) > 1e-9:
        raise ValueError("Plancherel route needs xi^5 on the zeta lattice")
    nz, nx = f.values.shape
    out = np.zeros((nz + 2 * pad, nx))
    for b in range(nx):
        # tau index = zeta index - shift
        start = pad - steps[b]
        out[start:start + nz, b] = f.values[:, b]
    return out


def j2_plancherel(f: LatticeFunction, g: LatticeFunction, h: LatticeFunction, sign: int = 1) -> float:
    """The same pairing computed as sum (f_flat * g_flat) h_flat on the (tau, xi) lattice."""
    _same_lattice([f, g, h])
    pad = int(np.max(np.abs(np.rint(f.xi**5 / f.dz)))) if f.xi.size else 0
    F, Gf, Hf = (_to_tau(v, sign, pad) for v in (f, g, h))
    conv = fftconvolve(F, Gf)
    nt, nx = F.shape
    # index of (tau1 + tau2) in the full convolution is i1 + i2; tau origin sits at nt // 2
    sub = conv[nt // 2: nt // 2 + nt, nx // 2: nx // 2 + nx]
    return float(np.sum(sub * Hf)) * (f.dz * f.dxi) ** 2


def j3_plancherel(f1, f2, f3, f4, sign: int = 1) -> float:
    _same_lattice([f1, f2, f3, f4])
    pad = int(np.max(np.abs(np.rint(f1.xi**5 / f1.dz)))) if f1.xi.size else 0
    A, B, C, D = (_to_tau(v, sign, pad) for v in (f1, f2, f3, f4))
    nt, nx = A.shape
    conv = fftconvolve(fftconvolve(A, B), C)
    sub = conv[2 * (nt // 2): 2 * (nt // 2) + nt, 2 * (nx // 2): 2 * (nx // 2) + nx]
    return float(np.sum(sub * D)) * (f1.dz * f1.dxi) ** 3


def random_lattice_function(rng: np.random.Generator, nz: int = 21, nx: int = 5,
                            fill: float = 0.6) -> LatticeFunction:
    """Nonnegative random samples with a random sparsity pattern, unit spacing."""
    v = rng.random((nz, nx)) * (rng.random((nz, nx)) < fill)
    return LatticeFunction(v)


# =========================================================== dyadic blocks

def block_intervals(k: int) -> list[tuple[float, float]]:
    """I_0 = [-2, 2]; I_k = {2^(k-1) <= |x| <= 2^(k+1)} split into its two sides."""
    if k < 0:
        raise BlockDomainError("block indices are nonnegative")
    if k == 0:
        return [(-2.0, 2.0)]
    lo, hi = 2.0 ** (k - 1), 2.0 ** (k + 1)
    return [(-hi, -lo), (lo, hi)]


def block_of(x: float) -> int:
    """Block whose interior holds x with the widest margin."""
    a = abs(x)
    return 0 if a < math.sqrt(2.0) else int(round(math.log2(a)))


def _side(k: int, x: float) -> tuple[float, float]:
    for lo, hi in block_intervals(k):
        if lo <= x <= hi:
            return lo, hi
    raise BlockDomainError(f"{x} is not inside block {k}")


@dataclass(frozen=True)
class GaussianProfile:
    """sum_c w_c N(x; mu_c, sd_c^2) with nonnegative weights."""

    weights: np.ndarray
    centers: np.ndarray
    widths: np.ndarray

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)[..., None]
        z = (x - self.centers) / self.widths
        return np.sum(self.weights / (math.sqrt(2 * math.pi) * self.widths) * np.exp(-0.5 * z * z), axis=-1)

    def hull(self, radius: float = SUPPORT_RADIUS) -> tuple[float, float]:
        return float(np.min(self.centers - radius * self.widths)), float(np.max(self.centers + radius * self.widths))

    def scaled(self, c: float) -> "GaussianProfile":
        return GaussianProfile(self.weights * c, self.centers, self.widths)

    def _pairs(self):
        v = self.widths[:, None] ** 2 + self.widths[None, :] ** 2
        d = self.centers[:, None] - self.centers[None, :]
        amp = self.weights[:, None] * self.weights[None, :] * np.exp(-0.5 * d * d / v) / np.sqrt(2 * np.pi * v)
        w2 = self.widths**2
        m = (self.centers[:, None] * w2[None, :] + self.centers[None, :] * w2[:, None]) / v
        s = np.sqrt(np.outer(w2, w2) / v)
        return amp, m, s

    def l2_squared(self) -> float:
        amp, _, _ = self._pairs()
        return float(np.sum(amp))

    def mass_outside(self, lo: float, hi: float) -> float:
        """integral of the squared profile outside [lo, hi], in closed form."""
        amp, m, s = self._pairs()
        inside = ndtr((hi - m) / s) - ndtr((lo - m) / s)
        return float(np.sum(amp * (1.0 - inside)))

    def weighted_l2_squared(self, weight: Callable[[np.ndarray], np.ndarray], panels: int = 24) -> float:
        lo, hi = self.hull(QUAD_RADIUS)
        x, w = _panel_nodes(lo, hi, panels, 16)
        return float(np.sum(w * weight(x) * self(x) ** 2))


@lru_cache(maxsize=None)
def _gl(q: int):
    return np.polynomial.legendre.leggauss(q)


def _panel_nodes(lo: float, hi: float, panels: int, q: int):
    x, w = _gl(q)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def random_profile(rng: np.random.Generator, center: float, lo: float, hi: float,
                   ncomp: int = 2, fill: float | None = None) -> GaussianProfile:
    """Cluster of Gaussians around ``center`` whose 5.5-width hull stays inside [lo, hi]."""
    room = min(center - lo, hi - center)
    if room <= 0:
        raise BlockDomainError("profile centre must lie strictly inside its interval")
    fill = rng.uniform(0.4, 0.9) if fill is None else fill
    sd0 = fill * room / (SUPPORT_RADIUS + 1.0)
    centers = center + sd0 * rng.uniform(-1.0, 1.0, ncomp)
    widths = sd0 * rng.uniform(0.7, 1.0, ncomp)
    weights = rng.uniform(0.5, 1.0, ncomp)
    return GaussianProfile(weights, centers, widths)


@dataclass(frozen=True)
class DyadicBump:
    """f(zeta, xi) = A(zeta) B(xi), nonnegative, unit L2 norm, living in I_j x I_k."""

    k: int
    j: int
    xi_profile: GaussianProfile
    zeta_profile: GaussianProfile

    @classmethod
    def build(cls, k: int, j: int, xi_profile: GaussianProfile, zeta_profile: GaussianProfile) -> "DyadicBump":
        a = xi_profile.scaled(1.0 / math.sqrt(xi_profile.l2_squared()))
        b = zeta_profile.scaled(1.0 / math.sqrt(zeta_profile.l2_squared()))
        return cls(k, j, a, b)

    @classmethod
    def random(cls, rng: np.random.Generator, k: int, j: int, xi_center: float | None = None,
               zeta_center: float | None = None, ncomp: int = 2, xi_fill: float | None = None,
               zeta_fill: float | None = None) -> "DyadicBump":
        xc = _random_point(rng, k) if xi_center is None else xi_center
        zc = _random_point(rng, j) if zeta_center is None else zeta_center
        B = random_profile(rng, xc, *_side(k, xc), ncomp=ncomp, fill=xi_fill)
        A = random_profile(rng, zc, *_side(j, zc), ncomp=ncomp, fill=zeta_fill)
        return cls.build(k, j, B, A)

    def __call__(self, zeta, xi) -> np.ndarray:
        return self.zeta_profile(zeta) * self.xi_profile(xi)

    def norm(self) -> float:
        return math.sqrt(self.xi_profile.l2_squared() * self.zeta_profile.l2_squared())

    def leakage(self) -> float:
        """Fraction of the squared mass outside I_j x I_k."""
        def outside(p, idx):
            total = p.l2_squared()
            inside = sum(total - p.mass_outside(lo, hi) for lo, hi in block_intervals(idx))
            return max(0.0, 1.0 - inside / total)
        ox, oz = outside(self.xi_profile, self.k), outside(self.zeta_profile, self.j)
        return ox + oz - ox * oz

    def star(self) -> "DyadicBump":
        flip = lambda p: GaussianProfile(p.weights, -p.centers, p.widths)  # noqa: E731
        return DyadicBump(self.k, self.j, flip(self.xi_profile), flip(self.zeta_profile))


def _random_point(rng: np.random.Generator, k: int) -> float:
    if k == 0:
        return float(rng.uniform(-1.0, 1.0))
    return float(rng.choice([-1.0, 1.0]) * 2.0**k * 2.0 ** rng.uniform(-0.4, 0.4))


# ======================================================= continuum J2 / J3

ZetaWeight = Callable[[np.ndarray, np.ndarray], np.ndarray]

_HERMITE = np.polynomial.hermite_e.hermegauss(8)


def _modulation_kernel(inputs: Sequence[GaussianProfile], last: GaussianProfile):
    """Gaussian components of Phi(s) = int prod A_i(z_i) A_last(sum z_i + s).

    Returns amplitude, mean, variance of every component together with the
    data needed for the posterior of the last argument.
    """
    amps = np.ones(1)
    mean = np.zeros(1)
    var = np.zeros(1)
    for p in inputs:
        amps = np.multiply.outer(amps, p.weights).ravel()
        mean = np.add.outer(mean, p.centers).ravel()
        var = np.add.outer(var, p.widths**2).ravel()
    a = np.multiply.outer(amps, last.weights).ravel()
    m_in = np.repeat(mean, last.weights.size)
    v_in = np.repeat(var, last.weights.size)
    mu_l = np.tile(last.centers, amps.size)
    v_l = np.tile(last.widths**2, amps.size)
    return a, m_in, v_in, mu_l, v_l


def _phi_eval(s: np.ndarray, kern, weight: ZetaWeight | None, xi_out: np.ndarray | None) -> np.ndarray:
    """Phi(s) (optionally with the last argument weighted by weight(zeta, xi_out))."""
    a, m_in, v_in, mu_l, v_l = kern
    V = v_in + v_l
    d = (mu_l - m_in)[None, :] - s[:, None]
    dens = a * np.exp(-0.5 * d * d / V) / np.sqrt(2 * np.pi * V)
    if weight is None:
        return dens.sum(axis=1)
    post_m = (mu_l * v_in + (m_in[None, :] + s[:, None]) * v_l) / V
    post_s = np.sqrt(v_in * v_l / V)
    nodes, wts = _HERMITE
    acc = np.zeros_like(dens)
    xo = np.broadcast_to(xi_out[:, None], dens.shape)
    for t, wt in zip(nodes, wts):
        acc += wt * weight(post_m + post_s * t, xo)
    return np.sum(dens * acc / math.sqrt(2 * math.pi), axis=1)


def _phi_range(kern) -> tuple[float, float]:
    a, m_in, v_in, mu_l, v_l = kern
    c = mu_l - m_in
    sd = np.sqrt(v_in + v_l)
    return float(np.min(c - 9.5 * sd)), float(np.max(c + 9.5 * sd))


def _h_roots(a: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Real roots x of H(a, x) = target, rows padded with NaN (shape (n, 4))."""
    n = a.size
    out = np.full((n, 4), np.nan)
    ok = np.abs(a) > 1e-300
    if not np.any(ok):
        return out
    aa = a[ok]
    c0 = -target[ok] / aa**5
    # 5y^4 + 10y^3 + 10y^2 + 5y + c0 = 0 with x = a y; companion of the monic quartic
    comp = np.zeros((aa.size, 4, 4))
    comp[:, 0, :] = -np.array([2.0, 2.0, 1.0, 0.0])[None, :]
    comp[:, 0, 3] = -c0 / 5.0
    comp[:, 1, 0] = comp[:, 2, 1] = comp[:, 3, 2] = 1.0
    ev = np.linalg.eigvals(comp)
    real = np.abs(ev.imag) <= 1e-7 * np.maximum(1.0, np.abs(ev.real))
    y = np.where(real, ev.real, np.nan)
    out[ok] = y * aa[:, None]
    return out


def _inner_integral(a: np.ndarray, offset: np.ndarray, sign: int, lo: np.ndarray, hi: np.ndarray,
                    s_lo: float, s_hi: float, integrand: Callable, panels: int, q: int) -> np.ndarray:
    """For each row r: integral over x in [lo_r, hi_r] of integrand(r, x), restricted to
    the set where sign (H(a_r, x) + offset_r) lies in [s_lo, s_hi].

    Breakpoints are the interval ends, the real roots of the two level equations
    and the fold at x = -a/2, so the resonance is monotone on every piece.
    """
    n = a.size
    valid = hi > lo
    t_lo = sign * s_lo - offset if sign > 0 else -s_hi - offset
    t_hi = sign * s_hi - offset if sign > 0 else -s_lo - offset
    pts = np.concatenate([
        lo[:, None], hi[:, None],
        _h_roots(a, t_lo), _h_roots(a, t_hi),
        (-0.5 * a)[:, None],
    ], axis=1)
    pts = np.where(np.isnan(pts), hi[:, None], pts)
    pts = np.clip(pts, lo[:, None], hi[:, None])
    pts.sort(axis=1)
    left, right = pts[:, :-1], pts[:, 1:]
    mid = 0.5 * (left + right)
    res_mid = sign * (resonance_H(a[:, None], mid) + offset[:, None])
    keep = valid[:, None] & (right > left) & (res_mid >= s_lo) & (res_mid <= s_hi)
    rows, segs = np.nonzero(keep)
    if rows.size == 0:
        return np.zeros(n)
    L, R = left[rows, segs], right[rows, segs]
    gx, gw = _gl(q)
    edges = L[:, None] + (R - L)[:, None] * np.linspace(0.0, 1.0, panels + 1)[None, :]
    half = 0.5 * np.diff(edges, axis=1)
    mids = 0.5 * (edges[:, 1:] + edges[:, :-1])
    x = (mids[:, :, None] + half[:, :, None] * gx).reshape(rows.size, -1)
    w = (half[:, :, None] * gw).reshape(rows.size, -1)
    r = np.broadcast_to(rows[:, None], x.shape)
    vals = integrand(r.ravel(), x.ravel()).reshape(x.shape)
    out = np.zeros(n)
    np.add.at(out, rows, np.sum(w * vals, axis=1))
    return out


@dataclass(frozen=True)
class Quadrature:
    outer_panels: int = 24
    outer_q: int = 10
    inner_panels: int = 3
    inner_q: int = 10


DEFAULT_QUADRATURE = Quadrature()
TRILINEAR_QUADRATURE = Quadrature(8, 8, 3, 8)
FINE_QUADRATURE = Quadrature(64, 12, 6, 12)


def _gap_from_zero(fs: Sequence[DyadicBump]) -> float:
    """Distance from 0 of the Minkowski sum of the frequency hulls."""
    lo = sum(f.xi_profile.hull(QUAD_RADIUS)[0] for f in fs)
    hi = sum(f.xi_profile.hull(QUAD_RADIUS)[1] for f in fs)
    return max(lo, -hi, 0.0)


def j2_bumps(f1: DyadicBump, f2: DyadicBump, f3: DyadicBump, sign: int = 1,
             weight: ZetaWeight | None = None, xi_weight: Callable | None = None,
             quad: Quadrature = DEFAULT_QUADRATURE) -> float:
    """J2 for separable Gaussian bumps; f3 is taken at zeta1 + zeta2 + sign H.

    ``weight(zeta, xi)`` multiplies the third argument inside the modulation
    integral, ``xi_weight(xi)`` multiplies it in frequency.
    """
    if _gap_from_zero([f2]) > _gap_from_zero([f1]):
        f1, f2 = f2, f1  # the outer frequency should stay away from the zero set of H
    kern = _modulation_kernel([f1.zeta_profile, f2.zeta_profile], f3.zeta_profile)
    s_lo, s_hi = _phi_range(kern)
    B1, B2, B3 = f1.xi_profile, f2.xi_profile, f3.xi_profile
    x1, w1 = _panel_nodes(*B1.hull(QUAD_RADIUS), quad.outer_panels, quad.outer_q)
    b1 = B1(x1)
    lo2, hi2 = B2.hull(QUAD_RADIUS)
    lo3, hi3 = B3.hull(QUAD_RADIUS)
    lo = np.maximum(lo2, lo3 - x1)
    hi = np.minimum(hi2, hi3 - x1)

    def integrand(r, x2):
        a = x1[r]
        xo = a + x2
        val = B2(x2) * B3(xo)
        if xi_weight is not None:
            val = val * xi_weight(xo)
        return val * _phi_eval(sign * resonance_H(a, x2), kern, weight, xo)

    inner = _inner_integral(x1, np.zeros_like(x1), sign, lo, hi, s_lo, s_hi, integrand,
                            quad.inner_panels, quad.inner_q)
    return float(np.sum(w1 * b1 * inner))


def j3_bumps(f1: DyadicBump, f2: DyadicBump, f3: DyadicBump, f4: DyadicBump, sign: int = 1,
             weight: ZetaWeight | None = None, xi_weight: Callable | None = None,
             quad: Quadrature = TRILINEAR_QUADRATURE) -> float:
    """J3 for separable Gaussian bumps; f4 is taken at zeta1 + zeta2 + zeta3 + sign G.

    With a = xi1 + xi2, G = H(a, xi3) + a^5 - xi1^5 - xi2^5, so the inner xi3
    integral reuses the bilinear root breakpoints.
    """
    # J3 is symmetric in its first three arguments; put outside the pair whose sum avoids zero
    trio = [f1, f2, f3]
    p, q = max(((0, 1), (0, 2), (1, 2)), key=lambda pq: _gap_from_zero([trio[pq[0]], trio[pq[1]]]))
    f1, f2, f3 = trio[p], trio[q], trio[3 - p - q]
    kern = _modulation_kernel([f1.zeta_profile, f2.zeta_profile, f3.zeta_profile], f4.zeta_profile)
    s_lo, s_hi = _phi_range(kern)
    B1, B2, B3, B4 = f1.xi_profile, f2.xi_profile, f3.xi_profile, f4.xi_profile
    x1, w1 = _panel_nodes(*B1.hull(QUAD_RADIUS), quad.outer_panels, quad.outer_q)
    x2, w2 = _panel_nodes(*B2.hull(QUAD_RADIUS), quad.outer_panels, quad.outer_q)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    X1, X2 = X1.ravel(), X2.ravel()
    W = np.outer(w1 * B1(x1), w2 * B2(x2)).ravel()
    live = W > 1e-300 * np.max(W)
    X1, X2, W = X1[live], X2[live], W[live]
    a = X1 + X2
    offset = a**5 - X1**5 - X2**5
    lo3, hi3 = B3.hull(QUAD_RADIUS)
    lo4, hi4 = B4.hull(QUAD_RADIUS)
    lo = np.maximum(lo3, lo4 - a)
    hi = np.minimum(hi3, hi4 - a)

    def integrand(r, x3):
        aa = a[r]
        xo = aa + x3
        val = B3(x3) * B4(xo)
        if xi_weight is not None:
            val = val * xi_weight(xo)
        return val * _phi_eval(sign * (resonance_H(aa, x3) + offset[r]), kern, weight, xo)

    total = 0.0
    step = 2048
    for c in range(0, a.size, step):
        sl = slice(c, c + step)

        def part(r, x3, _c=c):
            return integrand(r + _c, x3)

        inner = _inner_integral(a[sl], offset[sl], sign, lo[sl], hi[sl], s_lo, s_hi, part,
                                quad.inner_panels, quad.inner_q)
        total += float(np.sum(W[sl] * inner))
    return total


def j2_bumps_dense(f1: DyadicBump, f2: DyadicBump, f3: DyadicBump, sign: int = 1, n: int = 1200) -> float:
    """Reference J2 by a plain tensor rule in (xi1, xi2), for wide modulation profiles only."""
    kern = _modulation_kernel([f1.zeta_profile, f2.zeta_profile], f3.zeta_profile)
    x1, w1 = _panel_nodes(*f1.xi_profile.hull(QUAD_RADIUS), n // 12, 12)
    x2, w2 = _panel_nodes(*f2.xi_profile.hull(QUAD_RADIUS), n // 12, 12)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    vals = f1.xi_profile(X1) * f2.xi_profile(X2) * f3.xi_profile(X1 + X2)
    phi = _phi_eval(sign * resonance_H(X1.ravel(), X2.ravel()), kern, None, None).reshape(X1.shape)
    return float(np.einsum("i,j,ij->", w1, w2, vals * phi))


# ==================================================== support property

@dataclass(frozen=True)
class SupportReport:
    compliant: bool
    reason: str
    value: float
    norms: float
    vanishes: bool


def _resonance_range(ks: Sequence[int]) -> tuple[float, float]:
    """Bounds for |H| (two inputs) or |G| (three inputs) over the frequency blocks."""
    lo = [0.0 if k == 0 else 2.0 ** (k - 1) for k in ks]
    hi = [2.0 ** (k + 1) for k in ks]
    if len(ks) == 3:
        # |H| = 5/2 |x1 x2 x3| (x1^2 + x2^2 + x3^2) with x3 = x1 + x2
        return 2.5 * np.prod(lo) * sum(v * v for v in lo), 2.5 * np.prod(hi) * sum(v * v for v in hi)
    # trilinear: G vanishes on the pair-sum planes, so only the upper bound is useful
    s_hi = sum(hi[:3])
    pairs = (hi[0] + hi[1]) * (hi[1] + hi[2]) * (hi[2] + hi[0])
    return 0.0, 2.5 * pairs * (sum(v * v for v in hi[:3]) + s_hi**2)


def support_violation(blocks: Sequence[tuple[int, int]]) -> str:
    """Empty string when the blocks are compatible, otherwise the violated condition."""
    ks = [k for k, _ in blocks]
    js = [j for _, j in blocks]
    if len(blocks) not in (3, 4):
        raise ValueError("support checks take three (bilinear) or four (trilinear) blocks")
    srt = sorted(ks, reverse=True)
    if srt[0] >= srt[1] + 3:
        return "frequency: 2^k_max is not comparable to the next largest frequency"
    h_lo, h_hi = _resonance_range(ks)
    jsr = sorted(js, reverse=True)
    others = sum(2.0 ** (j + 1) for j in jsr[1:])
    if 2.0 ** (jsr[0] - 1) > others + h_hi:
        return "modulation: 2^j_max exceeds the other modulations plus the resonance"
    if h_lo > len(js) * 2.0 ** (jsr[0] + 1):
        return "modulation: the resonance exceeds every available modulation"
    return ""


def support_property_check(blocks: Sequence[tuple[int, int]], seed: int = 0, samples: int = 3,
                           tol: float = 1e-10) -> SupportReport:
    """Evaluate J on random bumps in the given blocks; incompatible blocks must give |J| <= tol."""
    reason = support_violation(blocks)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        fs = [DyadicBump.random(rng, k, j) for k, j in blocks]
        val = j2_bumps(*fs) if len(fs) == 3 else j3_bumps(*fs)
        worst = max(worst, abs(val))
    norms = 1.0
    return SupportReport(reason == "", reason, worst, norms, worst <= tol * norms)


# ========================================================= block bounds

VARIANTS = ("L2a", "L2b", "L2c", "L3a", "L3b1", "L3b2")


def block_bound_rhs(variant: str, ks: Sequence[int], js: Sequence[int], index: int | None = None) -> float:
    """Right-hand side of the dyadic L2 block estimate, without its absolute constant.

    Bilinear variants take three (k, j) pairs, trilinear ones four.  ``index``
    selects i in the L2b bound; by default the smallest admissible value is used.
    """
    ks, js = list(map(int, ks)), list(map(int, js))
    if any(v < 0 for v in ks + js):
        raise BlockDomainError("block indices are nonnegative")
    bil = variant.startswith("L2")
    if variant not in VARIANTS:
        raise BlockDomainError(f"unknown variant {variant!r}")
    if len(ks) != (3 if bil else 4) or len(js) != len(ks):
        raise BlockDomainError(f"{variant} takes {3 if bil else 4} blocks")
    ksr = sorted(ks)
    jsr = sorted(js)
    k_max, k_min = ksr[-1], ksr[0]
    j_max, j_min = jsr[-1], jsr[0]
    if variant == "L2a":
        if k_max - k_min > 5:
            raise BlockDomainError("L2a needs |k_max - k_min| <= 5")
        return 2.0 ** (j_min / 2 + jsr[1] / 4 - 0.75 * k_max)
    if variant == "L2b":
        k_med = ksr[1]
        if not (k_med - k_min >= 3 and k_max - k_med <= 2):
            raise BlockDomainError("L2b needs 2^k_min << 2^k_med ~ 2^k_max (k_med - k_min >= 3, k_max - k_med <= 2)")
        base = 2.0 ** (sum(js) / 2 - 1.5 * k_max)
        terms = [2.0 ** (-(ks[i] + js[i]) / 2) for i in range(3)]
        return base * (terms[index] if index is not None else min(terms))
    if variant == "L2c":
        return 2.0 ** (j_min / 2 + k_min / 2)
    k_thd = ksr[1]
    j_thd = jsr[1]
    if variant == "L3a":
        return 2.0 ** ((j_min + j_thd) / 2 + (k_min + k_thd) / 2)
    if k_thd > k_max - 10:
        raise BlockDomainError("L3b needs k_thd <= k_max - 10")
    hit = any(ks[i] == k_thd and js[i] == j_max for i in range(4))
    if variant == "L3b1":
        if not hit:
            raise BlockDomainError("L3b1 needs (k_i, j_i) = (k_thd, j_max) for some i")
        return 2.0 ** (sum(js) / 2 - 2 * k_max + k_thd / 2 - j_max / 2)
    if hit:
        raise BlockDomainError("L3b2 needs (k_i, j_i) != (k_thd, j_max) for every i")
    return 2.0 ** (sum(js) / 2 - 2 * k_max + k_min / 2 - j_max / 2)


# ============================================================== reports

@dataclass
class ProbeReport:
    name: str
    seed: int
    ensemble: int
    levels: list
    ratios: dict  # level -> list of ratios (per class when classes are used)
    max_ratio: dict
    slope: float
    skipped: int = 0
    classes: dict = field(default_factory=dict)  # class -> (max per level, slope)
    meta: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        def clean(v):
            if isinstance(v, dict):
                return {str(k): clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, (np.floating, float)):
                return float(v)
            if isinstance(v, np.integer):
                return int(v)
            return v
        return clean({
            "name": self.name, "seed": self.seed, "ensemble": self.ensemble, "levels": self.levels,
            "max_ratio": self.max_ratio, "slope": self.slope, "skipped": self.skipped,
            "classes": self.classes, "meta": self.meta, "ratios": self.ratios,
        })


def fit_log_slope(levels: Sequence[int], values: Sequence[float]) -> float:
    """Least-squares slope of log2(value) against level, over positive values."""
    lv = np.asarray(levels, dtype=float)
    vv = np.asarray(values, dtype=float)
    ok = vv > 0
    if np.count_nonzero(ok) < 2:
        return 0.0
    return float(np.polyfit(lv[ok], np.log2(vv[ok]), 1)[0])


# ======================================================== block probes

def _evaluate(bumps, quad: Quadrature | None, **kw) -> float:
    if len(bumps) == 3:
        return j2_bumps(*bumps, quad=quad or DEFAULT_QUADRATURE, **kw)
    return j3_bumps(*bumps, quad=quad or TRILINEAR_QUADRATURE, **kw)


def _member_rng(seed: int, member: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(member)])


@dataclass(frozen=True)
class _Draw:
    """Normalized parameters of one ensemble member, reused at every level."""

    signs: np.ndarray
    offsets: np.ndarray  # frequency level offsets (nonnegative)
    jitter: np.ndarray  # log2 jitter of frequency centres
    jfrac: np.ndarray  # modulation levels as fractions of the resonance level
    zsigns: np.ndarray
    zjitter: np.ndarray
    determined: int
    seed: int


def _draw(rng: np.random.Generator, n_in: int, variant: str) -> _Draw:
    signs = rng.choice([-1.0, 1.0], n_in)
    if variant in ("L2a", "L3a"):
        offsets = rng.integers(0, 3, n_in)
    elif variant == "L2b":
        offsets = np.array([0, rng.integers(4, 7)])
    else:
        offsets = rng.integers(0, 6, n_in)
    offsets[rng.integers(n_in)] = 0
    if variant == "L2a":
        signs[:] = signs[0]  # no cancellation, so the output stays within five levels
    return _Draw(
        signs=signs, offsets=offsets, jitter=rng.uniform(-0.3, 0.3, n_in),
        jfrac=rng.uniform(0.0, 1.0, n_in + 1), zsigns=rng.choice([-1.0, 1.0], n_in + 1),
        zjitter=rng.uniform(-0.3, 0.3, n_in + 1), determined=int(rng.integers(n_in + 1)),
        seed=int(rng.integers(2**62)),
    )


def _realize(d: _Draw, level: int, n_in: int, fixed_xi: Sequence[float] | None = None):
    """Bumps for one member at one level; the determined function closes the resonance relation."""
    rng = np.random.default_rng(d.seed)
    if fixed_xi is None:
        xc = [d.signs[i] * 2.0 ** (max(level - d.offsets[i], 0) + d.jitter[i]) for i in range(n_in)]
    else:
        xc = list(fixed_xi)
    xo = float(sum(xc))
    if abs(xo) < 1e-3:
        return None
    xcs = xc + [xo]
    res = float(resonance_H(*xc) if n_in == 2 else resonance_G(*xc))
    top = max(0.0, math.log2(abs(res) + 1.0)) + 1.0
    zc = [d.zsigns[i] * 2.0 ** (d.jfrac[i] * top + d.zjitter[i]) for i in range(n_in + 1)]
    det = d.determined
    # sum of inputs + res = output
    if det == n_in:
        zc[det] = sum(zc[:n_in]) + res
    else:
        zc[det] = zc[n_in] - res - sum(zc[i] for i in range(n_in) if i != det)
    ks = [block_of(x) for x in xcs]
    js = [block_of(z) for z in zc]
    bumps = []
    for i in range(n_in + 1):
        # centres of k = 0 bumps must sit inside [-2, 2]; block_of guarantees the margin
        bumps.append(DyadicBump.random(rng, ks[i], js[i], xcs[i], zc[i]))
    return bumps, ks, js


def probe_block_estimate(variant: str = "L2a", k_range: tuple[int, int] = (2, 8), ensemble: int = 100,
                         seed: int = 0, quad: Quadrature | None = None) -> ProbeReport:
    """Ratios J / (rhs * prod norms) on resonant bump configurations, per frequency level."""
    if ensemble < 1:
        raise ValueError("the ensemble must contain at least one member")
    if variant not in VARIANTS:
        raise BlockDomainError(f"unknown variant {variant!r}")
    n_in = 2 if variant.startswith("L2") else 3
    draws = [_draw(_member_rng(seed, m), n_in, variant) for m in range(ensemble)]
    levels = list(range(k_range[0], k_range[1] + 1))
    ratios, maxes, skipped = {}, {}, 0
    for level in levels:
        vals = []
        for d in draws:
            out = _realize(d, level, n_in)
            if out is None:
                skipped += 1
                continue
            bumps, ks, js = out
            try:
                rhs = block_bound_rhs(variant, ks, js)
            except BlockDomainError:
                skipped += 1
                continue
            J = _evaluate(bumps, quad)
            vals.append(abs(J) / rhs)
        ratios[level] = vals
        maxes[level] = max(vals) if vals else 0.0
    slope = fit_log_slope(levels, [maxes[v] for v in levels])
    return ProbeReport(f"block:{variant}", seed, ensemble, levels, ratios, maxes, slope, skipped)


# ========================================================= theorem probes

QUADRATIC_CLASSES = ("high-low-high", "high-high-high", "high-high-low")
CUBIC_CLASSES = ("hhh-h", "hhl-h", "hhh-l", "hll-h", "hhl-l")


def _class_frequencies(cls: str, level: int, rng_u: np.ndarray) -> list[float]:
    """Input frequency centres realizing an interaction class at frequency level ``level``."""
    K = 2.0**level
    u = rng_u
    low = 2.0 ** (u[0] * max(level - 4, 0))  # low frequencies range over [1, 2^(level - 4)]
    tiny = 0.3 + 0.6 * u[1]
    if cls == "high-low-high":
        return [K * (1 + 0.2 * u[2]), low * (1 if u[3] > 0.5 else -1) * (tiny if u[4] < 0.3 else 1.0)]
    if cls == "high-high-high":
        return [K * (0.7 + 0.2 * u[2]), K * (0.6 + 0.2 * u[3])]
    if cls == "high-high-low":
        x = K * (1 + 0.2 * u[2])
        out = low * (tiny if u[4] < 0.5 else 1.0) * (1 if u[3] > 0.5 else -1)
        return [x, -x + out]
    if cls == "hhh-h":
        return [K * (0.8 + 0.2 * u[2]), K * (0.9 + 0.2 * u[3]), -K * (0.7 + 0.2 * u[5])]
    if cls == "hhl-h":
        return [low * (tiny if u[4] < 0.3 else 1.0), K * (0.8 + 0.2 * u[2]), K * (0.7 + 0.2 * u[3])]
    if cls == "hhh-l":
        x = K * (1 + 0.2 * u[2])
        y = K * (0.8 + 0.2 * u[3])
        out = low * (tiny if u[4] < 0.5 else 1.0)
        return [x, -y, -(x - y) + out]
    if cls == "hll-h":
        return [low * tiny, low * (0.5 + u[5]), K * (1 + 0.2 * u[2])]
    if cls == "hhl-l":
        x = K * (1 + 0.2 * u[2])
        return [low * tiny, x, -x + low * (0.5 + u[5]) * (1 if u[3] > 0.5 else -1)]
    raise ValueError(f"unknown interaction class {cls!r}")


def _bracket(v):
    return np.sqrt(1.0 + np.asarray(v, dtype=float) ** 2)


def _input_norm(f: DyadicBump, s: float, b: float, alpha: float) -> float:
    """max(||u||_{X^{s,b}}, ||u||_{D^alpha}) for u~(tau, xi) = f(tau - xi^5, xi)."""
    x2 = f.xi_profile.weighted_l2_squared(lambda x: _bracket(x) ** (2 * s))
    z2 = f.zeta_profile.weighted_l2_squared(lambda z: _bracket(z) ** (2 * b))
    xnorm = math.sqrt(x2 * z2)
    lo, hi = f.xi_profile.hull(QUAD_RADIUS)
    lo, hi = max(lo, -1.0), min(hi, 1.0)
    if hi <= lo:
        return xnorm
    xs, xw = _panel_nodes(lo, hi, 8, 16)
    zs, zw = _panel_nodes(*f.zeta_profile.hull(QUAD_RADIUS), 16, 16)
    tau = zs[None, :] + xs[:, None] ** 5
    dens = (f.xi_profile(xs) ** 2)[:, None] * (f.zeta_profile(zs) ** 2)[None, :]
    d2 = float(np.einsum("i,j,ij->", xw, zw, dens * _bracket(tau) ** (2 * alpha)))
    return max(xnorm, math.sqrt(d2))


def probe_theorem_ratio(kind, s: float = 0.0, b: float = 0.45, alpha: float = 0.55,
                        k_range: tuple[int, int] = (2, 10), ensemble: int = 12, seed: int = 0,
                        norm: str = "X", classes: Sequence[str] | None = None,
                        quad: Quadrature | None = None) -> ProbeReport:
    """Dual lower estimate of ||F(u, v[, w])|| / prod ||inputs||_{X^{s,b} cap D^alpha}.

    The output norm (X^{s,-b}, or Y^{s,-b} with ``norm='Y'``) is tested against a
    unit bump placed where the interaction lands, which bounds it from below.
    Inputs are bumps whose modulation levels are drawn up to the resonance
    level.  For each interaction class the maximum over the ensemble and its
    log-slope against the frequency level are reported.
    """
    kind = NonlinearityKind(kind)
    if ensemble < 1:
        raise ValueError("the ensemble must contain at least one member")
    n_in = kind.degree
    classes = list(classes or (QUADRATIC_CLASSES if n_in == 2 else CUBIC_CLASSES))
    levels = list(range(k_range[0], k_range[1] + 1))
    if norm not in ("X", "Y"):
        raise ValueError("norm must be 'X' or 'Y'")

    def sym(xi):
        a = np.abs(xi)
        return a * _bracket(xi) if kind is NonlinearityKind.QUADRATIC else a

    if norm == "X":
        def xi_weight(xi):
            return sym(xi) * _bracket(xi) ** s

        def zweight(z, xi):
            return _bracket(z) ** (-b)
    else:
        def xi_weight(xi):
            return sym(xi)

        def zweight(z, xi):
            return _bracket(z + xi**5) ** (s / 5) * _bracket(z) ** (-b)

    ratios, maxes, per_class = {}, {}, {}
    skipped = 0
    for ci, cls in enumerate(classes):
        cls_max = {}
        for level in levels:
            best = 0.0
            for m in range(ensemble):
                rng = np.random.default_rng([int(seed), ci, m])
                u = rng.uniform(0.0, 1.0, 6)
                draw = _TheoremDraw.sample(rng, n_in)
                bumps = draw.realize(level, _class_frequencies(cls, level, u))
                if bumps is None:
                    skipped += 1
                    continue
                val = _evaluate(bumps, quad, sign=-1, weight=zweight, xi_weight=xi_weight)
                den = math.prod(_input_norm(f, s, b, alpha) for f in bumps[:n_in])
                r = abs(val) / den
                ratios.setdefault(f"{cls}:{level}", []).append(r)
                best = max(best, r)
            cls_max[level] = best
        per_class[cls] = {"max": cls_max, "slope": fit_log_slope(levels, [cls_max[v] for v in levels])}
    for level in levels:
        maxes[level] = max(per_class[c]["max"][level] for c in classes)
    slope = max(per_class[c]["slope"] for c in classes)
    meta = {"kind": kind.value, "s": s, "b": b, "alpha": alpha, "norm": norm}
    return ProbeReport(f"theorem:{kind.value}:{norm}", seed, ensemble, levels, ratios, maxes, slope,
                       skipped, per_class, meta)


@dataclass(frozen=True)
class _TheoremDraw:
    """Normalized shape parameters of one theorem-probe member, reused at every level.

    Frequency widths are log-uniform down to 2^(-level) of the block, and
    input modulations are either O(1) or a fraction of the resonance level, so
    the ensemble reaches the thin, box-shaped interactions where a separable
    test bump captures the output.
    """

    xi_exp: np.ndarray
    low_mod: np.ndarray
    jfrac: np.ndarray
    zsigns: np.ndarray
    zfill: np.ndarray
    seed: int

    @classmethod
    def sample(cls, rng: np.random.Generator, n_in: int) -> "_TheoremDraw":
        return cls(rng.uniform(0.0, 1.0, n_in + 1), rng.uniform(0.0, 1.0, n_in) < 0.5,
                   rng.uniform(0.0, 1.0, n_in), rng.choice([-1.0, 1.0], n_in),
                   rng.uniform(0.4, 0.9, n_in + 1), int(rng.integers(2**62)))

    def realize(self, level: int, xc: list[float]):
        """Bumps for u v (w) and the output test bump at zeta_sum - resonance."""
        n_in = len(xc)
        rng = np.random.default_rng(self.seed)
        xo = float(sum(xc))
        if abs(xo) < 1e-3:
            return None
        res = float(resonance_H(*xc) if n_in == 2 else resonance_G(*xc))
        top = max(0.0, math.log2(abs(res) + 1.0)) + 1.0
        zc = [self.zsigns[i] * (2.0 ** (3.0 * self.jfrac[i]) if self.low_mod[i] else 2.0 ** (self.jfrac[i] * top))
              for i in range(n_in)]
        zc.append(sum(zc) - res)  # tau_out = sum tau_in
        xcs = list(xc) + [xo]
        fills = 0.9 * 2.0 ** (-level * self.xi_exp)
        ncomp = 2 if n_in == 2 else 1  # keeps the trilinear modulation kernel to one Gaussian
        out = []
        for i, (x, z) in enumerate(zip(xcs, zc)):
            out.append(DyadicBump.random(rng, block_of(x), block_of(z), x, z, ncomp=ncomp,
                                         xi_fill=float(fills[i]), zeta_fill=float(self.zfill[i])))
        return out


# ====================================================== Strichartz probe

def strichartz_probe(k_range: tuple[int, int] = (1, 8), ensemble: int = 4, seed: int = 0,
                     n: int = 2048, nt: int = 256) -> ProbeReport:
    """||exp(t d^5) P_k phi||_{L^6_{t,x}} 2^{k/2} / ||P_k phi||_{L^2} for random block profiles.

    Each level is computed on its own natural grid (x in units of 2^-k, t in
    units of 2^-5k), with the time integral truncated at a fixed number of
    dispersion times and the spatial box wide enough to hold the wave packet.
    Members are drawn once in normalized form and rescaled to every level.
    """
    levels = list(range(k_range[0], k_range[1] + 1))
    ratios, maxes = {}, {}
    for k in levels:
        K = 2.0**k
        L = 800.0 / K
        dx = L / n
        xi = 2 * np.pi * np.fft.fftfreq(n, d=dx)
        Tmax = 40.0 / K**5
        t, tw = _panel_nodes(-Tmax, Tmax, nt // 8, 8)
        vals = []
        for m in range(ensemble):
            rng = np.random.default_rng([int(seed), m])
            centre = float(rng.choice([-1.0, 1.0]) * K * 2.0 ** rng.uniform(-0.3, 0.3))
            prof = random_profile(rng, centre, *_side(k, centre), ncomp=3)
            spec = prof(xi)
            l2 = math.sqrt(np.sum(spec**2) / L)
            phase = np.exp(1j * np.multiply.outer(t, xi**5))
            u = np.fft.ifft(phase * spec[None, :], axis=1) / dx
            l6 = float(np.sum(tw[:, None] * np.abs(u) ** 6) * dx) ** (1 / 6)
            vals.append(l6 * 2.0 ** (k / 2) / l2)
        ratios[k] = vals
        maxes[k] = max(vals)
    slope = fit_log_slope(levels, [maxes[v] for v in levels])
    return ProbeReport("strichartz", seed, ensemble, levels, ratios, maxes, slope)
