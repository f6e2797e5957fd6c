import numpy as np
import pytest
from hypothesis import given, strategies as st

from kawahara import probe
from kawahara.nonlinearity import NonlinearityKind
from kawahara.probe import (
    BlockDomainError, DyadicBump, GaussianProfile, LatticeFunction, ProbeCostError, block_bound_rhs, block_of,
    fit_log_slope, j2_bumps, j2_bumps_dense, j2_direct, j2_plancherel, j3_bumps, j3_direct, j3_plancherel,
    random_lattice_function, support_property_check, support_violation,
)

seeds = st.integers(0, 2**32 - 1)


def lattice(seed, n, nz=21, nx=5):
    rng = np.random.default_rng(seed)
    return [random_lattice_function(rng, nz, nx) for _ in range(n)]


def bump_at(rng, xc, zc):
    return DyadicBump.random(rng, block_of(xc), block_of(zc), xi_center=xc, zeta_center=zc)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


# ---------------------------------------------------------------- lattice oracle

@given(seeds, st.sampled_from([1, -1]))
def test_j2_two_oracles_agree(seed, sign):
    f, g, h = lattice(seed, 3)
    assert rel(j2_direct(f, g, h, sign), j2_plancherel(f, g, h, sign)) < 1e-8


@given(seeds)
def test_j3_two_oracles_agree(seed):
    fs = lattice(seed, 4, 9, 5)
    assert rel(j3_direct(*fs), j3_plancherel(*fs)) < 1e-8


@given(seeds)
def test_j2_symmetries(seed):
    f, g, h = lattice(seed, 3)
    a = j2_direct(f, g, h)
    assert rel(a, j2_direct(g, f, h)) < 1e-8
    assert rel(a, j2_direct(g.star(), h, f)) < 1e-8
    assert rel(a, j2_direct(h, f.star(), g)) < 1e-8


@given(seeds)
def test_j3_symmetries(seed):
    f1, f2, f3, f4 = lattice(seed, 4, 9, 5)
    a = j3_direct(f1, f2, f3, f4)
    for b in (j3_direct(f2, f1, f3, f4), j3_direct(f3, f2, f1, f4), j3_direct(f1.star(), f2.star(), f4, f3),
              j3_direct(f1, f2, f4.star(), f3.star())):
        assert rel(a, b) < 1e-8


def test_zero_argument_gives_zero():
    f, g, _ = lattice(3, 3)
    z = LatticeFunction(np.zeros_like(f.values))
    assert j2_direct(f, g, z) == 0.0 == j2_plancherel(z, g, f)


def test_lattice_guards():
    big = LatticeFunction(np.zeros((129, 65)))
    with pytest.raises(ProbeCostError):
        j2_direct(big, big, big)
    with pytest.raises(ValueError):
        LatticeFunction(np.zeros((4, 5)))
    f = lattice(0, 1)[0]
    with pytest.raises(ValueError):
        j2_direct(f, f, LatticeFunction(np.zeros((21, 7))))


# --------------------------------------------------------------------- bumps

@pytest.mark.parametrize("seed", range(3))
def test_bump_quadrature_matches_dense_rule(seed):
    rng = np.random.default_rng(seed)
    f1 = bump_at(rng, 3.0, 0.8)
    f2 = bump_at(rng, -1.5, -0.8)
    f3 = bump_at(rng, 1.5, float(probe.resonance_H(3.0, -1.5)))
    assert rel(j2_bumps(f1, f2, f3), j2_bumps_dense(f1, f2, f3)) < 1e-3


def test_bumps_are_normalized_and_contained(rng):
    b = DyadicBump.random(rng, 5, 3)
    assert b.norm() == pytest.approx(1.0, rel=1e-10)
    assert b.leakage() < 1e-12


def test_gaussian_profile_mass():
    p = GaussianProfile(np.array([1.0]), np.array([0.0]), np.array([1.0]))
    # components are normal densities: int N(x; 0, 1)^2 dx = 1 / (2 sqrt(pi))
    assert p.l2_squared() == pytest.approx(0.5 / np.sqrt(np.pi), rel=1e-12)
    assert p.mass_outside(-50, 50) < 1e-15
    assert p.mass_outside(0, 50) == pytest.approx(0.25 / np.sqrt(np.pi), rel=1e-10)


@pytest.mark.parametrize("seed", range(3))
def test_j2_bump_swap_symmetry(seed):
    rng = np.random.default_rng(seed)
    f1 = bump_at(rng, 6.0, 1.5)
    f2 = bump_at(rng, -3.0, -1.5)
    f3 = bump_at(rng, 3.0, float(probe.resonance_H(6.0, -3.0)))
    assert rel(j2_bumps(f1, f2, f3), j2_bumps(f2, f1, f3)) < 1e-6


def test_j3_bump_swap_symmetry(rng):
    fs = [bump_at(rng, c, z) for c, z in ((3.0, 1.0), (-2.5, 0.5), (2.0, -1.0))]
    f4 = bump_at(rng, 2.5, float(probe.resonance_G(3.0, -2.5, 2.0)))
    a = j3_bumps(*fs, f4)
    assert abs(a) > 0
    assert rel(a, j3_bumps(fs[1], fs[0], fs[2], f4)) < 1e-3


# ----------------------------------------------------------------- support

@pytest.mark.parametrize("blocks", [
    [(10, 2), (3, 2), (3, 4)],
    [(4, 0), (4, 0), (4, 1)],
    [(3, 30), (3, 1), (3, 1), (3, 1)],
])
def test_support_property(blocks):
    assert support_violation(blocks)
    rep = support_property_check(blocks, samples=2)
    assert rep.vanishes and rep.value <= 1e-10


def test_all_zero_blocks_are_compliant():
    assert support_violation([(0, 0)] * 3) == ""


# ------------------------------------------------------------------ bounds

def test_block_bound_examples():
    assert block_bound_rhs("L2a", (8, 8, 8), (2, 4, 9)) == pytest.approx(2.0**-4)
    assert block_bound_rhs("L2c", (0, 5, 5), (0, 3, 3)) == 1.0
    assert block_bound_rhs("L3a", (0,) * 4, (0,) * 4) == 1.0


@given(st.lists(st.integers(0, 20), min_size=3, max_size=3), st.lists(st.integers(0, 20), min_size=3, max_size=3))
def test_l2a_hypothesis_enforced(ks, js):
    if max(ks) - min(ks) > 5:
        with pytest.raises(BlockDomainError):
            block_bound_rhs("L2a", ks, js)
    else:
        assert block_bound_rhs("L2a", ks, js) > 0


@given(st.lists(st.integers(0, 30), min_size=4, max_size=4), st.lists(st.integers(0, 30), min_size=4, max_size=4))
def test_l3b_hypotheses_partition(ks, js):
    k_thd, k_max = sorted(ks)[1], max(ks)
    outcomes = []
    for v in ("L3b1", "L3b2"):
        try:
            outcomes.append(block_bound_rhs(v, ks, js) > 0)
        except BlockDomainError:
            outcomes.append(False)
    # exactly one of the two trilinear cases applies once the frequency gap is large
    assert sum(outcomes) == (1 if k_thd <= k_max - 10 else 0)


def test_block_bound_errors():
    with pytest.raises(BlockDomainError):
        block_bound_rhs("L9", (1, 1, 1), (1, 1, 1))
    with pytest.raises(BlockDomainError):
        block_bound_rhs("L2a", (1, 1), (1, 1))
    with pytest.raises(BlockDomainError):
        block_bound_rhs("L2c", (1, -1, 1), (1, 1, 1))


# ------------------------------------------------------------------ probes

def test_slope_fit():
    assert fit_log_slope([1, 2, 3], [2.0, 4.0, 8.0]) == pytest.approx(1.0)


def test_block_probe_is_reproducible_and_flat():
    a = probe.probe_block_estimate("L2a", (2, 5), 8, seed=3)
    b = probe.probe_block_estimate("L2a", (2, 5), 8, seed=3)
    assert a.as_dict() == b.as_dict()
    assert a.slope <= 0.05
    assert a.ensemble == 8 and a.levels == [2, 3, 4, 5]


def test_single_sample_reproducible():
    a = probe.probe_block_estimate("L3a", (2, 3), 1, seed=11).as_dict()
    assert a == probe.probe_block_estimate("L3a", (2, 3), 1, seed=11).as_dict()


def test_empty_ensemble_rejected():
    with pytest.raises(ValueError):
        probe.probe_block_estimate("L2a", (2, 4), 0)
    with pytest.raises(ValueError):
        probe.probe_theorem_ratio(NonlinearityKind.CUBIC, ensemble=0)


def test_theorem_probe_quadratic_small():
    rep = probe.probe_theorem_ratio(NonlinearityKind.QUADRATIC, 0.0, 0.45, 0.55, (2, 6), 3, seed=1)
    assert set(rep.classes) == set(probe.QUADRATIC_CLASSES)
    assert rep.slope <= 0.1
    assert rep.as_dict() == probe.probe_theorem_ratio(NonlinearityKind.QUADRATIC, 0.0, 0.45, 0.55, (2, 6), 3,
                                                      seed=1).as_dict()


def test_theorem_probe_rejects_unknown_norm():
    with pytest.raises(ValueError):
        probe.probe_theorem_ratio(NonlinearityKind.QUADRATIC, norm="Z")


def test_strichartz_probe_scale_invariant():
    rep = probe.strichartz_probe((1, 4), ensemble=2, seed=0, n=1024, nt=128)
    vals = [rep.max_ratio[k] for k in rep.levels]
    assert max(vals) / min(vals) < 1 + 1e-8
    assert rep.slope <= 0.05
