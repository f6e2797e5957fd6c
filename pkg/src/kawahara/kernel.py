"""The oscillatory kernel of the fifth-order group and its integral identities.

    B^(n)(x) = (1/2pi) * integral over R of (i xi)^n exp(i x xi + i xi^5) d(xi)

The integral is only conditionally convergent on the real axis.  We deform it
onto a contour on which ``exp(i phi)``, ``phi(xi) = x xi + xi^5``, decays:

* a ray leaving ``+c`` at angle pi/10,
* a ray arriving at ``-c`` from infinity along angle 9 pi/10,
* the real segment ``[-c, c]``,

with ``c = (max(-x, 0)/5)^(1/4)``.  For ``x >= 0`` the segment is empty and the
rays start at the origin, where ``exp(i xi^5) = exp(-r^5)``.  For ``x < 0`` the
rays start at the real saddle points ``+-c`` of the phase; there the linear
term of ``Im phi`` along the ray cancels and ``Im phi`` is a sum of positive
powers of ``r``, so the integrand never grows.  Starting the rays at the
origin instead would lose about ``|x|^(5/4)`` digits to cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.special import gamma, roots_jacobi, roots_laguerre

PLUS = "plus"
MINUS = "minus"

_THETA_R = np.pi / 10
_THETA_L = 9 * np.pi / 10
_DECAY = 46.0  # exp(-46) ~ 1e-20 relative cut for the ray truncation
_NODES = 16


class KernelDomainError(ValueError):
    pass


class QuadratureError(RuntimeError):
    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved {achieved:.3e})")
        self.achieved = achieved


@lru_cache(maxsize=None)
def _gauss_legendre(q: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(q)
    return x, w


def _composite_nodes(a: float, b: float, panels: int, q: int = _NODES) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gauss_legendre(q)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _saddle(x: float) -> float:
    return (max(-x, 0.0) / 5.0) ** 0.25


def _ray_imag_phase(x: float, c: float, r: np.ndarray) -> np.ndarray:
    xi = c + r * np.exp(1j * _THETA_R)
    return np.imag(x * xi + xi**5)


def _ray_length(x: float, c: float) -> float:
    """Smallest r where Im(phi) along the right ray reaches the decay cut."""
    lo, hi = 0.0, _DECAY ** 0.2
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _ray_imag_phase(x, c, np.array([mid]))[0] >= _DECAY:
            hi = mid
        else:
            lo = mid
    return hi


def _ray_panels(x: float, c: float, R: float) -> int:
    # phase swept along the ray, bounded by |d phi/dr| at the far end
    xi = c + R * np.exp(1j * _THETA_R)
    speed = abs(x + 5 * xi**4)
    return int(min(400, max(6, np.ceil(speed * R / 3.0))))


def _integrand(n: int, x: float, xi: np.ndarray) -> np.ndarray:
    return (1j * xi) ** n * np.exp(1j * (x * xi + xi**5))


def _contour_value(n: int, x: float, refine: int = 1) -> complex:
    c = _saddle(x)
    R = _ray_length(x, c)
    panels = _ray_panels(x, c, R) * refine
    r, w = _composite_nodes(0.0, R, panels)
    er, el = np.exp(1j * _THETA_R), np.exp(1j * _THETA_L)
    right = np.sum(w * _integrand(n, x, c + r * er)) * er
    # the left ray is traversed inward, from infinity to -c
    left = -np.sum(w * _integrand(n, x, -c + r * el)) * el
    total = right + left
    if c > 0:
        sweep = 8.0 * c**5  # total phase change of phi on [-c, c]
        seg_panels = int(max(2, np.ceil(sweep / 2.5))) * refine
        s, ws = _composite_nodes(-c, c, seg_panels)
        total += np.sum(ws * _integrand(n, x, s))
    return total / (2 * np.pi)


def _validate_order(n: int) -> None:
    if n not in (0, 1, 2, 3, 4):
        raise KernelDomainError(f"derivative order must be in 0..4, got {n}")


def eval_B(n: int, x, *, tol: float = 1e-10, check: bool = False) -> np.ndarray:
    """B^(n) at real ``x`` (scalar or array); the imaginary part is the quadrature residual.

    With ``check=True`` every value is recomputed on a doubled panel count and a
    QuadratureError is raised if the two disagree by more than ``tol``.
    """
    _validate_order(n)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(xs)):
        raise KernelDomainError("kernel argument must be finite")
    out = np.empty(xs.shape, dtype=complex)
    for i, xv in np.ndenumerate(xs):
        out[i] = _contour_value(n, float(xv))
        if check:
            fine = _contour_value(n, float(xv), refine=2)
            err = abs(fine - out[i])
            if err > tol:
                raise QuadratureError(f"kernel quadrature at x={xv}", err)
    return out if np.ndim(x) else out[0]


def closed_form_at_zero(n: int) -> float:
    """Exact values of B, B', B'', B''' at the origin."""
    c1, s1 = np.cos(np.pi / 10), np.sin(np.pi / 5)
    c3, s2 = np.cos(3 * np.pi / 10), np.sin(2 * np.pi / 5)
    table = {
        0: c1 / (5 * s1 * gamma(4 / 5)),
        1: -c3 / (5 * s2 * gamma(3 / 5)),
        2: -c3 / (5 * s2 * gamma(2 / 5)),
        3: c1 / (5 * s1 * gamma(1 / 5)),
    }
    if n not in table:
        raise KernelDomainError(f"closed form known for orders 0..3, got {n}")
    return float(table[n])


def asymptotic_left(y) -> np.ndarray:
    """Leading stationary-phase form of B(-y) for large y > 0."""
    y = np.asarray(y, dtype=float)
    c = (y / 5.0) ** 0.25
    amp = np.sqrt(2 * np.pi / (20 * c**3)) / np.pi
    return amp * np.cos(0.8 * y * c - np.pi / 4)


# --------------------------------------------------------------- quadrature

def _gauss_jacobi_moment(a: float, X: float, power: float, f, q: int = 40) -> float:
    """integral_0^X x^(power) f(x) dx via Gauss-Jacobi nodes (exact singular weight)."""
    u, w = roots_jacobi(q, 0.0, power)
    x = 0.5 * X * (u + 1.0)
    return float(np.real(np.sum(w * f(x))) * (0.5 * X) ** (power + 1))


def _panel_quad(f, a: float, b: float, panels: int) -> complex:
    x, w = _composite_nodes(a, b, panels)
    return np.sum(w * f(x))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float


def integral_B_halfline(X: float = 40.0, table: "KernelTable | None" = None) -> IntegralResult:
    """integral_0^infinity B via panel quadrature on [0, X]; the tail beyond X is below exp(-0.8*X^(5/4)*5^(-1/4))."""
    if table is not None:
        f = table
    else:
        f = lambda x: np.real(eval_B(0, x))
    coarse = float(np.real(_panel_quad(f, 0.0, X, 24)))
    fine = float(np.real(_panel_quad(f, 0.0, X, 48)))
    tail = float(np.exp(-0.8 * X * (X / 5.0) ** 0.25 * np.sin(np.pi / 4)))
    err = abs(fine - coarse) + tail
    if err > 1e-6:
        raise QuadratureError("half-line integral of the kernel", err)
    return IntegralResult(fine, err)


def mellin_closed_form(lam: float, side: str = PLUS) -> float:
    """Closed form of integral_0^infinity x^(lam-1) B(+-x) dx.

    The product Gamma(1/5 - lam/5) cos(...) is rewritten with the reflection
    formula in z = (1-lam)/5, which removes the removable singularity at
    lam = 1 on either side.
    """
    if side == PLUS:
        if not lam > 0:
            raise KernelDomainError("plus-side transform needs lam > 0")
        z = (1.0 - lam) / 5.0
        return float(gamma(lam) * 2.0 * np.cos(np.pi * z) / (5.0 * gamma(1.0 - z)))
    if side == MINUS:
        # absolutely convergent for lam < 3/8, conditionally (oscillatory tail) up to 11/8
        if not 0 < lam < 11 / 8:
            raise KernelDomainError("minus-side transform needs 0 < lam < 11/8")
        # Gamma(z) cos((1-6 lam) pi/10) = pi (3 - 4 sin^2(pi z)) / Gamma(1-z), z = (1-lam)/5
        z = (1.0 - lam) / 5.0
        return float(gamma(lam) * (3.0 - 4.0 * np.sin(np.pi * z) ** 2) / (5.0 * gamma(1.0 - z)))
    raise KernelDomainError(f"unknown side {side!r}")


def mellin_closed_form_raw(lam: float, side: str = PLUS) -> float:
    """The unsimplified closed form; singular at the removable points lam = 1 + 5n."""
    cosarg = (1 + 4 * lam) if side == PLUS else (1 - 6 * lam)
    return float(gamma(lam) * gamma(0.2 - lam / 5) / (5 * np.pi) * np.cos(cosarg * np.pi / 10))


def _left_tail(lam: float, X: float) -> float:
    """integral_X^infinity x^(lam-1) B_asym(-x) dx, rotated onto a Laguerre contour.

    With B_asym(-x) = A x^(-3/8) cos(k x^(5/4) - pi/4) and u = k x^(5/4) the
    tail is Re[exp(-i pi/4) * integral_U^infinity C u^p e^{iu} du], and the
    latter equals i e^{iU} integral_0^infinity (U + i v)^p e^{-v} dv.
    """
    A = np.sqrt(2 * np.pi / 20) * 5 ** 0.375 / np.pi
    k = 0.8 * 5 ** -0.25
    a = lam - 1 - 0.375
    p = (a + 1) * 0.8 - 1.0
    C = A * 0.8 * k ** (-(a + 1) * 0.8)
    U = k * X**1.25
    v, w = roots_laguerre(60)
    inner = 1j * np.exp(1j * U) * np.sum(w * (U + 1j * v) ** p)
    return float(np.real(np.exp(-1j * np.pi / 4) * C * inner))


@dataclass(frozen=True)
class MellinResult:
    closed_form: float
    quadrature: float
    difference: float


def mellin_B(lam: float, side: str = PLUS, X: float | None = None) -> MellinResult:
    """Mellin transform of B on either half-line, by quadrature and in closed form."""
    closed = mellin_closed_form(lam, side)
    if side == PLUS:
        X = 40.0 if X is None else X
        f = lambda x: np.real(eval_B(0, x))
        head = _gauss_jacobi_moment(0.0, 2.0, lam - 1.0, f)
        body = float(np.real(_panel_quad(lambda x: x ** (lam - 1) * f(x), 2.0, X, 48)))
        quad = head + body
    else:
        X = 300.0 if X is None else X
        f = lambda x: np.real(eval_B(0, -x))
        head = _gauss_jacobi_moment(0.0, 2.0, lam - 1.0, f)
        sweep = 0.8 * X * (X / 5.0) ** 0.25
        body = float(np.real(_panel_quad(lambda x: x ** (lam - 1) * f(x), 2.0, X, int(sweep / 2) + 8)))
        quad = head + body + _left_tail(lam, X)
    return MellinResult(closed, quad, abs(quad - closed))


# ------------------------------------------------------------------ envelope

@dataclass(frozen=True)
class EnvelopeReport:
    direction: str
    weight_power: float
    constant: float
    slope: float
    xs: np.ndarray
    values: np.ndarray


def _envelope_slope(xs: np.ndarray, weighted: np.ndarray, bins: int = 8) -> float:
    """Slope of log(max |weighted| per log-spaced bin) against log x."""
    edges = np.geomspace(xs.min(), xs.max() * (1 + 1e-12), bins + 1)
    lx, ly = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (xs >= lo) & (xs < hi)
        if np.any(sel):
            i = np.argmax(weighted[sel])
            lx.append(np.log(xs[sel][i]))
            ly.append(np.log(weighted[sel][i]))
    if len(lx) < 2:
        return 0.0
    return float(np.polyfit(lx, ly, 1)[0])


def decay_envelope_check(xs, direction: str = "right", n: int = 0) -> EnvelopeReport:
    """Weighted sup of |B(+-x)| against <x>^5 (right) or <x>^(3/8) (left)."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 0) or np.any(np.diff(xs) <= 0):
        raise KernelDomainError("sample abscissae must be nonnegative and increasing")
    sign, power = (1.0, 5.0) if direction == "right" else (-1.0, 3.0 / 8.0)
    vals = np.real(eval_B(n, sign * xs))
    weighted = np.abs(vals) * (1 + xs**2) ** (power / 2)
    slope = _envelope_slope(xs, weighted) if xs.size > 2 and xs.min() > 0 else 0.0
    return EnvelopeReport(direction, power, float(weighted.max()), slope, xs, vals)


# --------------------------------------------------------------------- table

class KernelTable:
    """Piecewise cubic Hermite interpolant of B^(n) using exact derivative samples.

    Outside ``[x_min, x_max]`` the right side returns 0 (super-exponential
    decay) and the left side raises unless ``left_asymptotic`` is set, in which
    case the stationary-phase form is used (order 0 only).
    """

    def __init__(self, n: int = 0, x_min: float = -40.0, x_max: float = 30.0,
                 spacing: float = 0.02, left_asymptotic: bool = False):
        _validate_order(n)
        if n == 4:
            raise KernelDomainError("tables need order + 1 <= 4 for the Hermite slopes")
        self.n = n
        self.x_min, self.x_max = float(x_min), float(x_max)
        inner = np.arange(x_min, x_max + spacing / 2, spacing)
        self.abscissae = inner
        self.values = np.real(eval_B(n, inner))
        self.slopes = np.real(eval_B(n + 1, inner))
        self.degree = 3
        self.left_asymptotic = left_asymptotic
        self._spline = CubicHermiteSpline(inner, self.values, self.slopes, extrapolate=False)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = (x >= self.x_min) & (x <= self.x_max)
        out[inside] = self._spline(x[inside])
        below = x < self.x_min
        if np.any(below):
            if not (self.left_asymptotic and self.n == 0):
                raise KernelDomainError(
                    f"kernel table covers [{self.x_min}, {self.x_max}], needs down to {x[below].min():.3g}")
            out[below] = asymptotic_left(-x[below])
        return out

    def derivative(self, x) -> np.ndarray:
        return self._spline.derivative()(np.asarray(x, dtype=float))


@lru_cache(maxsize=8)
def default_table(n: int = 0, x_min: float = -40.0, x_max: float = 30.0) -> KernelTable:
    return KernelTable(n, x_min, x_max, left_asymptotic=True)
