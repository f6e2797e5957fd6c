import numpy as np
import pytest
from hypothesis import given, strategies as st

from kawahara import kernel
from kawahara.kernel import (
    MINUS, PLUS, KernelDomainError, closed_form_at_zero, decay_envelope_check, default_table, eval_B,
    integral_B_halfline, mellin_B, mellin_closed_form,
)


@pytest.mark.parametrize("n", range(4))
def test_value_at_zero(n):
    assert abs(eval_B(n, 0.0) - closed_form_at_zero(n)) < 1e-8


@given(st.integers(0, 4), st.floats(-30, 20))
def test_real_valued(n, x):
    assert abs(np.imag(eval_B(n, x))) < 1e-8


def test_matches_plain_quadrature_on_moderate_x():
    # the damped real-axis integral converges to B as the damping goes to zero
    xi = np.linspace(-6, 6, 200001)
    for x in (-1.5, 0.4, 2.0):
        direct = np.trapezoid(np.exp(1j * (x * xi + xi**5)) * np.exp(-1e-9 * xi**10), xi).real / (2 * np.pi)
        assert abs(direct - eval_B(0, x).real) < 2e-3


def test_satisfies_ode():
    # B'''' = -x B / 5 follows from differentiating under the integral
    xs = np.linspace(-6, 4, 9)
    assert np.allclose(eval_B(4, xs).real, -xs * eval_B(0, xs).real / 5, atol=1e-9)


def test_derivative_of_table_matches_order_one():
    t = default_table(0, -10.0, 10.0)
    xs = np.linspace(-9.5, 9.5, 41)
    assert np.max(np.abs(t.derivative(xs) - eval_B(1, xs).real)) < 1e-6


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_continuous_at_zero_below_order_four(n):
    assert abs(eval_B(n, 1e-9) - eval_B(n, -1e-9)) < 1e-8


def test_order_four_is_continuous_at_zero():
    # B'''' = -x B / 5 is continuous; the step at x = 0 belongs to d_x^4 of the forcing
    assert abs(eval_B(4, 1e-10) - eval_B(4, -1e-10)) < 1e-10


def test_halfline_integral():
    r = integral_B_halfline()
    assert abs(r.value - 0.4) < 1e-6
    assert r.error < 1e-6


@pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
def test_mellin_plus(lam):
    r = mellin_B(lam, PLUS)
    assert abs(r.difference) < 1e-6
    assert r.closed_form == pytest.approx(mellin_closed_form(lam, PLUS))


def test_mellin_minus_one_point():
    assert abs(mellin_B(0.3, MINUS).difference) < 1e-4


def test_decay_envelopes():
    assert decay_envelope_check(np.linspace(5, 50, 100), "right").slope < 0
    left = decay_envelope_check(np.geomspace(10, 500, 120), "left")
    assert left.slope <= 0.05 and np.isfinite(left.constant)


@pytest.mark.parametrize("bad", [-1, 5, 2.5])
def test_order_domain(bad):
    with pytest.raises(KernelDomainError):
        eval_B(bad, 0.0)


def test_nonfinite_rejected():
    with pytest.raises(KernelDomainError):
        eval_B(0, np.inf)


def test_side_constants():
    assert kernel.PLUS != kernel.MINUS
