import numpy as np
import pytest
from hypothesis import given, strategies as st

from kawahara.norms import (
    NormDomainError, SobolevIndex, dalpha_norm, hs0_halfline_norm, hs_norm, xsb_dyadic, xsb_norm, ysb_norm,
    z_norm, z_norm_report, zero_extension,
)
from kawahara.spectral import Field1D, Field2D, Grid1D, SpaceTimeGrid, l2_physical

GRID = SpaceTimeGrid(Grid1D(64, 20.0, -10.0), Grid1D(32, 4.0, 0.0))


def random_field(seed):
    r = np.random.default_rng(seed)
    return Field2D(GRID, r.normal(size=GRID.shape) + 1j * r.normal(size=GRID.shape))


def mode(m_t, m_x, amp=1.0):
    t, x = np.meshgrid(GRID.time.points, GRID.space.points, indexing="ij")
    tau = 2 * np.pi * m_t / GRID.time.L
    xi = 2 * np.pi * m_x / GRID.space.L
    return Field2D(GRID, amp * np.exp(1j * (tau * t + xi * x))), tau, xi


NORMS = [
    lambda f: xsb_norm(f, 0.3, 0.45),
    lambda f: ysb_norm(f, -0.2, 0.45),
    lambda f: dalpha_norm(f, 0.55),
    lambda f: max(xsb_norm(f, 0.0, 0.45), dalpha_norm(f, 0.55)),
]


@pytest.mark.parametrize("norm", NORMS)
@given(st.integers(0, 2**32), st.integers(0, 2**32), st.floats(-5, 5))
def test_norm_axioms(norm, s1, s2, c):
    f, g = random_field(s1), random_field(s2)
    assert norm(Field2D(GRID, c * f.values)) == pytest.approx(abs(c) * norm(f), rel=1e-10, abs=1e-12)
    assert norm(Field2D(GRID, f.values + g.values)) <= norm(f) + norm(g) + 1e-10


def test_zero_exponents_give_l2(rng):
    f = random_field(1)
    l2 = l2_physical(f)
    assert xsb_norm(f, 0, 0) == pytest.approx(l2, rel=1e-12)
    assert ysb_norm(f, 0, 0) == pytest.approx(l2, rel=1e-12)


def test_single_mode_weights():
    f, tau, xi = mode(3, 5)
    l2 = l2_physical(f)
    br = lambda v: np.sqrt(1 + v * v)
    assert xsb_norm(f, 0.5, 0.4) == pytest.approx(br(xi) ** 0.5 * br(tau - xi**5) ** 0.4 * l2, rel=1e-12)
    assert ysb_norm(f, 0.5, 0.4) == pytest.approx(br(tau) ** 0.1 * br(tau - xi**5) ** 0.4 * l2, rel=1e-12)
    assert dalpha_norm(f, 0.55) < 1e-12 * l2  # |xi| > 1
    g, tau0, _ = mode(2, 0)
    assert dalpha_norm(g, 0.55) == pytest.approx(br(tau0) ** 0.55 * l2_physical(g), rel=1e-12)


@pytest.mark.parametrize("which", ["s", "b"])
def test_monotone_in_exponents(which):
    f = random_field(3)
    vals = [xsb_norm(f, e, 0.2) if which == "s" else xsb_norm(f, 0.2, e) for e in (-0.5, 0.0, 0.3, 0.7)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_dyadic_norm_is_equivalent():
    f = random_field(4)
    a, b = xsb_norm(f, 0.3, 0.4), xsb_dyadic(f, 0.3, 0.4)
    assert 0.1 < b / a < 10


def test_zero_field():
    z = Field2D(GRID, np.zeros(GRID.shape))
    assert xsb_norm(z, 0.1, 0.4) == ysb_norm(z, 0.1, 0.4) == dalpha_norm(z, 0.6) == 0.0
    assert z_norm(z, 0.0, 0.45, 0.55) == 0.0


def test_z_norm_components():
    f = random_field(5)
    r = z_norm_report(f, 0.0, 0.45, 0.55)
    assert r.bourgain == max(r.xsb, r.dalpha)
    assert r.total == pytest.approx(r.energy + sum(r.traces) + r.bourgain)
    assert z_norm_report(f, 0.1, 0.45, 0.55).total >= z_norm_report(f, 0.0, 0.45, 0.55).total - 1e-12
    with pytest.raises(NormDomainError):
        z_norm_report(f, 0.0, 0.45, 0.55, ell=3)


def test_halfline_norm_and_extension():
    g = Grid1D(1024, 40.0, -20.0)
    x = g.points
    f = Field1D(g, np.exp(-((x - 6) ** 2)))
    assert np.allclose(zero_extension(f).values, np.where(x >= 0, f.values, 0))
    assert hs0_halfline_norm(f, 0.3) == pytest.approx(hs_norm(f, 0.3), rel=1e-8)
    with pytest.raises(NormDomainError):
        hs0_halfline_norm(f, 0.5)


def test_zero_extension_bounded_at_s_03():
    g = Grid1D(2048, 40.0, -20.0)
    x = g.points
    r = np.random.default_rng(7)
    ratios = []
    for _ in range(10):
        c, w = r.uniform(-2, 2), r.uniform(0.5, 2)
        f = Field1D(g, np.exp(-((x - c) ** 2) / w**2) * np.cos(r.uniform(0, 4) * x))
        ratios.append(hs_norm(zero_extension(f), 0.3) / hs_norm(f, 0.3))
    assert max(ratios) < 5


def test_solver_window():
    assert SobolevIndex(0, 0.4, 0.55).in_solver_window()
    assert not SobolevIndex(0, 0.45, 0.55).in_solver_window()
    with pytest.raises(NormDomainError):
        SobolevIndex(0, 0.45, 0.55).require_solver_window()
