import numpy as np
import pytest
from hypothesis import given, strategies as st

from kawahara.propagator import (
    apply_cutoff, duhamel, halfline_mass, energy_identity_report, free_evolution, group_symbol, propagate, psi,
)
from kawahara.spectral import Field1D, Field2D, Grid1D, SpaceTimeGrid, l2_physical

G = Grid1D(512, 60.0, -30.0)


def packet(x0=0.0, k0=0.0, w=1.0):
    x = G.points
    return Field1D(G, np.exp(-((x - x0) ** 2) / (2 * w * w) + 1j * k0 * x))


@given(st.floats(-2, 2), st.floats(-5, 5), st.floats(0.5, 3))
def test_unitarity(t, k0, w):
    phi = packet(0.0, k0, w)
    assert abs(l2_physical(propagate(phi, t)) - l2_physical(phi)) <= 1e-12 * l2_physical(phi)


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_group_law(s, t):
    phi = packet(1.0, 1.0)
    a = propagate(propagate(phi, s), t).values
    b = propagate(phi, s + t).values
    assert np.max(np.abs(a - b)) < 1e-12


def test_time_reversal():
    phi = packet(-2.0, 2.0)
    assert np.max(np.abs(propagate(propagate(phi, 0.3), -0.3).values - phi.values)) < 1e-12


def test_single_mode_is_exact():
    m = 3
    xi = 2 * np.pi * m / G.L
    phi = Field1D(G, np.exp(1j * xi * G.points))
    t = 0.17
    assert np.allclose(propagate(phi, t).values, np.exp(1j * xi**5 * t) * phi.values, atol=1e-12)
    assert group_symbol(np.array([xi]), t)[0] == pytest.approx(np.exp(1j * xi**5 * t))


def test_solves_linear_equation():
    phi = packet()
    h = 1e-6
    dt = (propagate(phi, h).values - propagate(phi, -h).values) / (2 * h)
    from kawahara.spectral import spectral_derivative
    d5 = spectral_derivative(phi.values, G, 5)
    assert np.max(np.abs(dt - d5)) / np.max(np.abs(d5)) < 1e-6


def test_free_evolution_matches_propagate():
    phi = packet(0.5)
    times = np.array([0.0, 0.1, 0.2])
    rows = free_evolution(phi.values, G, times)
    for row, t in zip(rows, times):
        assert np.allclose(row, propagate(phi, t).values, atol=1e-13)


def test_duhamel_linear_and_starts_at_zero(rng):
    st_grid = SpaceTimeGrid(Grid1D(64, 20.0, -10.0), Grid1D(64, 1.0, 0.0))
    w1 = Field2D(st_grid, rng.normal(size=st_grid.shape))
    w2 = Field2D(st_grid, rng.normal(size=st_grid.shape))
    d1, d2 = duhamel(w1).values, duhamel(w2).values
    d12 = duhamel(Field2D(st_grid, 2 * w1.values - 3 * w2.values)).values
    assert np.max(np.abs(d12 - (2 * d1 - 3 * d2))) < 1e-10
    assert np.max(np.abs(d1[0])) == 0.0


def test_duhamel_constant_source():
    # source w(t, x) = exp(i xi x): D w = (exp(i xi^5 t) - 1)/(i xi^5) exp(i xi x)
    sg = Grid1D(64, 2 * np.pi, 0.0)
    tg = Grid1D(256, 0.01, 0.0)
    grid = SpaceTimeGrid(sg, tg)
    w = Field2D(grid, np.broadcast_to(np.exp(2j * sg.points), grid.shape))
    t = tg.points[:, None]
    exact = (np.exp(1j * 32 * t) - 1) / (32j) * np.exp(2j * sg.points)[None, :]
    assert np.max(np.abs(duhamel(w).values - exact)) < 1e-10


def test_cutoff_profile():
    t = np.linspace(-3, 3, 601)
    p = psi(t)
    assert np.all(p[np.abs(t) <= 1] == pytest.approx(1.0))
    assert np.all(p[np.abs(t) >= 2] == 0.0)
    cut = apply_cutoff(np.ones((601, 1)), 0.5, t)
    assert cut[np.argmin(np.abs(t - 0.25)), 0] == pytest.approx(1.0)


@pytest.mark.parametrize("side", ["right", "left"])
def test_energy_identity(side):
    g = Grid1D(1024, 320.0, -160.0)
    phi = Field1D(g, np.exp(-((g.points - 1.0) ** 2) / (2 * 1.5**2)))
    assert energy_identity_report(phi, 0.05, side).relative_gap < 1e-4


def test_energy_identity_mirror():
    # v(t, x) = u(-t, -x) solves the same equation, so the left identity for reflected
    # data describes the right half-line mass of the backward flow
    g = Grid1D(1024, 320.0, -160.0)
    x = g.points
    phi = Field1D(g, np.exp(-((x - 1.0) ** 2) / 2.25) * (1 + 0.2 * x))
    mirrored = Field1D(g, phi.values[(-np.arange(g.n)) % g.n])
    assert np.allclose(mirrored.values[g.index_of(-1.0)], phi.values[g.index_of(1.0)])
    left = energy_identity_report(mirrored, 0.05, "left")
    back = np.real(propagate(phi, -0.05).values)
    assert left.relative_gap < 1e-4
    assert left.lhs == pytest.approx(halfline_mass(back, g, "right"), rel=1e-10)
