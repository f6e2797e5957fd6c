import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gamma

from conftest import bump
from kawahara.fractional import (
    FractionalDomainError, HalfLineSignal, halfline_power_transform, riemann_liouville, riemann_liouville_neg,
    rl_apply, rl_integrate,
)

N, T = 2048, 2.0
DT = T / N
TT = DT * np.arange(N)
F = bump(TT, 0.1, 1.4) * np.e**4


@pytest.mark.parametrize("a", [0.2, 0.5, 1.0])
@pytest.mark.parametrize("b", [0.2, 0.5, 1.0])
def test_semigroup(a, b):
    lhs = rl_integrate(rl_integrate(F, a, DT), b, DT)
    rhs = rl_integrate(F, a + b, DT)
    assert np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs) < 1e-4


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5])
def test_power_law(alpha):
    # I_a t^p = Gamma(p+1)/Gamma(p+a+1) t^(p+a)
    p = 2.0
    got = rl_integrate(TT**p, alpha, DT)
    exact = gamma(p + 1) / gamma(p + alpha + 1) * TT ** (p + alpha)
    assert np.max(np.abs(got - exact)) / np.max(exact) < 1e-5


@pytest.mark.parametrize("alpha", [0.2, 0.8, 1.6])
def test_negative_order_inverts(alpha):
    # I_alpha F does not vanish at the window end, so derivatives use finite differences;
    # past two derivatives at this step size roundoff dominates
    back = rl_apply(rl_integrate(F, alpha, DT), -alpha, DT)
    assert np.linalg.norm(back - F) / np.linalg.norm(F) < 1e-4


@pytest.mark.parametrize("alpha", [0.5, 2.5, 3.4])
def test_negative_order_on_compact_input(alpha):
    # compact input takes the spectral route: I_-a F = I_(k-a) D^k F agrees with D^k I_(k-a) F
    k = int(np.ceil(alpha))
    a = rl_apply(F, -alpha, DT)
    b = rl_apply(rl_integrate(F, k - alpha, DT), -float(k), DT)
    assert np.max(np.abs(a - b)[TT < 1.6]) / np.max(np.abs(a)) < 1e-4


def test_support_preserved():
    f = np.where(TT < 0.5, 0.0, F)
    out = rl_integrate(f, 0.7, DT)
    assert np.max(np.abs(out[TT < 0.5])) < 1e-12


@given(st.floats(-3, 3), st.floats(-3, 3), st.sampled_from([0.25, 0.6, 1.3]))
def test_linearity(a, b, alpha):
    g = bump(TT, 0.3, 1.8)
    lhs = rl_integrate(a * F + b * g, alpha, DT)
    rhs = a * rl_integrate(F, alpha, DT) + b * rl_integrate(g, alpha, DT)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(lhs)))


def test_zero_order_is_identity():
    assert np.array_equal(rl_apply(F, 0.0, DT), F)


def test_order_range():
    with pytest.raises(FractionalDomainError):
        rl_apply(F, -5.0, DT)
    with pytest.raises(FractionalDomainError):
        HalfLineSignal(0.0, F)


def test_signal_wrappers():
    s = HalfLineSignal(DT, F)
    assert np.allclose(riemann_liouville(s, 0.5).values, rl_integrate(F, 0.5, DT))
    neg = riemann_liouville_neg(s, -0.4)
    assert neg.meta["derivative_route"] == "spectral"
    with pytest.raises(FractionalDomainError):
        riemann_liouville(HalfLineSignal(DT, np.ones(N)), 0.5)


def test_fourier_formula_of_kernel():
    assert halfline_power_transform(1.0, 2.0) == pytest.approx(-0.5j)
    with pytest.raises(FractionalDomainError):
        halfline_power_transform(0.5, 0.0)
