import numpy as np
import pytest
from hypothesis import given, strategies as st

from kawahara.nonlinearity import (
    AliasingWarning, NonlinearityKind, apply_F, homogeneous_sobolev, resonance_G_expanded, resonance_G_factored,
    resonance_gradient_H, resonance_H_expanded, resonance_H_factored, scale_initial, scaling_map,
)
from kawahara.spectral import Field1D, Field2D, Grid1D, SpaceTimeGrid, spectral_derivative

KINDS = list(NonlinearityKind)
freq = st.floats(-100, 100)


def test_resonances_on_random_triples(rng):
    x = rng.uniform(-100, 100, (3, 10_000))
    h = resonance_H_factored(x[0], x[1])
    g = resonance_G_factored(*x)
    assert np.max(np.abs(resonance_H_expanded(x[0], x[1]) - h) / np.abs(h)) < 1e-10
    assert np.max(np.abs(resonance_G_expanded(*x) - g) / np.abs(g)) < 1e-10


@given(freq, freq)
def test_h_expansion_identity(a, b):
    scale = (abs(a) + abs(b)) ** 5 + 1.0
    assert abs(resonance_H_expanded(a, b) - resonance_H_factored(a, b)) <= 1e-12 * scale


@given(freq, freq, freq)
def test_g_expansion_identity(a, b, c):
    scale = (abs(a) + abs(b) + abs(c)) ** 5 + 1.0
    assert abs(resonance_G_expanded(a, b, c) - resonance_G_factored(a, b, c)) <= 1e-12 * scale


@given(freq, freq, freq)
def test_g_zero_set(a, b, c):
    # G vanishes exactly when two of the frequencies cancel
    assert resonance_G_factored(a, -a, c) == 0.0
    assert resonance_G_factored(a, b, -b) == 0.0


@given(freq, freq)
def test_h_symmetric_and_odd(a, b):
    assert resonance_H_factored(a, b) == pytest.approx(resonance_H_factored(b, a), rel=1e-12, abs=1e-6)
    assert resonance_H_factored(-a, -b) == pytest.approx(-resonance_H_factored(a, b), rel=1e-12, abs=1e-6)


def test_gradient():
    a, b, h = 1.3, -0.7, 1e-6
    ga, gb = resonance_gradient_H(a, b)
    assert ga == pytest.approx((resonance_H_factored(a + h, b) - resonance_H_factored(a - h, b)) / (2 * h), rel=1e-6)
    assert gb == pytest.approx((resonance_H_factored(a, b + h) - resonance_H_factored(a, b - h)) / (2 * h), rel=1e-6)


@pytest.mark.parametrize("kind", KINDS)
def test_real_and_mean_free(kind):
    g = Grid1D(256, 40.0, -20.0)
    u = Field1D(g, np.exp(-g.points**2) * (1 + 0.5 * np.sin(g.points)))
    out = apply_F(u, kind)
    assert np.max(np.abs(out.values.imag)) < 1e-14
    assert abs(np.sum(out.values)) * g.dx < 1e-12


def test_cubic_matches_derivative_of_cube():
    g = Grid1D(256, 40.0, -20.0)
    v = np.exp(-g.points**2 / 4)
    out = apply_F(Field1D(g, v), NonlinearityKind.CUBIC).values.real
    assert np.allclose(out, spectral_derivative(v**3, g, 1).real, atol=1e-10)


def test_quadratic_symbol_on_single_mode():
    # u = cos(m x) gives u^2 = 1/2 + cos(2 m x)/2, and F picks i xi <xi> on the 2m mode
    g = Grid1D(64, 2 * np.pi)
    m = 3
    out = apply_F(Field1D(g, np.cos(m * g.points)), NonlinearityKind.QUADRATIC).values.real
    xi = 2 * m
    assert np.allclose(out, -0.5 * xi * np.sqrt(1 + xi**2) * np.sin(xi * g.points), atol=1e-10)


def test_aliasing_warning_and_real_input_required():
    g = Grid1D(32, 2 * np.pi)
    with pytest.warns(AliasingWarning):
        apply_F(Field1D(g, np.cos(14 * g.points)), NonlinearityKind.CUBIC)
    with pytest.raises(ValueError):
        apply_F(Field1D(g, 1j * np.cos(g.points)), NonlinearityKind.CUBIC)


@given(st.floats(0.25, 4.0))
def test_scaling_map_homogeneity(lam):
    # ||u_lam(0)||_{dot H^s} = lam^(s + 3/2) ||u(0)||_{dot H^s}; critical at s = -3/2
    g = Grid1D(512, 80.0, -40.0)
    v = np.exp(-g.points**2) * g.points
    vs, gs = scale_initial(v, g, lam)
    for s in (0.0, -0.5):
        assert homogeneous_sobolev(vs, gs, s) == pytest.approx(lam ** (s + 1.5) * homogeneous_sobolev(v, g, s),
                                                               rel=1e-10)


def test_scaling_map_grid():
    g = SpaceTimeGrid(Grid1D(16, 8.0, -4.0), Grid1D(8, 1.0, 0.0))
    u = Field2D(g, np.ones(g.shape))
    s = scaling_map(u, 2.0)
    assert s.grid.space.L == 4.0 and s.grid.time.L == 1 / 32
    assert np.all(s.values == 4.0)
    with pytest.raises(ValueError):
        scaling_map(u, 0.0)
