import numpy as np
import pytest

from kawahara.fractional import HalfLineSignal
from kawahara.nonlinearity import NonlinearityKind
from kawahara.norms import NormDomainError, SobolevIndex
from kawahara.solver import (
    IBVPData, NonConvergenceError, SolverDomainError, extend_initial, extract_traces, picard_solve,
    whole_line_reference,
)
from kawahara.spectral import Field1D, Grid1D

IDX = SobolevIndex(0.0, 0.4, 0.55)
N, L, NT, T_END = 512, 50.0, 128, 0.04
GRID = Grid1D(N, L, -L / 2)
TIMES = T_END / NT * np.arange(NT)
DT = TIMES[1]


def compatible(amplitude=2.0, kind=NonlinearityKind.CUBIC, u0=None):
    if u0 is None:
        u0 = Field1D(GRID, amplitude * np.exp(-((GRID.points - 4.0) ** 2) / 0.49))
    v = whole_line_reference(u0, TIMES, kind, substeps=8)
    f, g, _ = extract_traces(v)
    return IBVPData(u0, HalfLineSignal(DT, f), HalfLineSignal(DT, g), kind), v


def rel_error(u, v, T):
    m, r = TIMES <= T, GRID.points >= 0
    d = np.abs(u.values - v.values)[m][:, r]
    return np.sqrt(np.sum(d**2) / np.sum(np.abs(v.values)[m][:, r] ** 2))


@pytest.fixture(scope="module")
def cubic_solution():
    data, v = compatible()
    u, rep = picard_solve(data, IDX, T0=0.015)
    return data, v, u, rep


def test_matches_whole_line_solution(cubic_solution):
    _, v, u, rep = cubic_solution
    assert rel_error(u, v, rep.T) < 1e-3
    assert rep.converged and rep.contraction < 0.5


def test_fixed_point_and_traces(cubic_solution):
    data, _, u, rep = cubic_solution
    assert rep.fixed_point_residual <= 1e-10 * 10
    f = data.f.values
    assert rep.trace_error_f <= 1e-3 * (1 + np.max(np.abs(f)))
    assert rep.trace_error_g <= 1e-3 * (1 + np.max(np.abs(data.g.values)))
    assert rep.initial_error < 1e-8
    assert rep.pde_residual < 1e-3


def test_quadratic_kind_converges():
    data, v = compatible(kind=NonlinearityKind.QUADRATIC)
    u, rep = picard_solve(data, IDX, T0=0.015)
    assert rel_error(u, v, rep.T) < 1e-3


def test_zero_data_gives_zero():
    z = np.zeros(NT)
    data = IBVPData(Field1D(GRID, np.zeros(N)), HalfLineSignal(DT, z), HalfLineSignal(DT, z))
    u, rep = picard_solve(data, IDX, T0=0.015)
    assert np.max(np.abs(u.values)) == 0.0


def test_directional_derivative_is_first_order():
    # u(eps) - u(0) = eps Du[delta] + O(eps^2): halving eps halves the linearization defect by four
    x = GRID.points
    base = 2.0 * np.exp(-((x - 4.0) ** 2) / 0.49)
    delta = np.exp(-((x - 5.0) ** 2) / 0.49)
    sols = {}
    for eps in (0.0, 0.02, 0.04):
        data, _ = compatible(u0=Field1D(GRID, base + eps * delta))
        sols[eps] = picard_solve(data, IDX, T0=0.01)[0].values
    second = np.linalg.norm(sols[0.04] - 2 * sols[0.02] + sols[0.0])
    first = np.linalg.norm(sols[0.02] - sols[0.0])
    assert second < 0.1 * first


def test_extension_is_exact_for_data_away_from_the_boundary():
    u0 = Field1D(GRID, np.exp(-((GRID.points - 6.0) ** 2)) * (GRID.points >= 1))
    assert np.array_equal(extend_initial(u0).values, u0.values)


def test_large_data_fails_to_contract():
    data, _ = compatible(amplitude=8.0)
    with pytest.raises(NonConvergenceError) as info:
        picard_solve(data, IDX, T0=0.015, T_min=0.01)
    assert info.value.report.attempts


def test_domain_errors():
    z = np.zeros(NT)
    u0 = Field1D(GRID, np.zeros(N))
    with pytest.raises(SolverDomainError):
        IBVPData(u0, HalfLineSignal(DT, z), HalfLineSignal(DT, z), s=0.5)
    with pytest.raises(SolverDomainError):
        IBVPData(u0, HalfLineSignal(DT, z), HalfLineSignal(DT / 2, z))
    data = IBVPData(u0, HalfLineSignal(DT, z), HalfLineSignal(DT, z))
    with pytest.raises(NormDomainError):
        picard_solve(data, SobolevIndex(0.0, 0.45, 0.55))
    with pytest.raises(SolverDomainError):
        picard_solve(data, IDX, T0=1.5)
