import numpy as np
import pytest

from qshock import gaussian_packet as gp
from qshock import oracle
from qshock.errors import BelowDensityFloor, BoundaryLeak, PhaseUnwrapAmbiguity
from qshock.gaussian_packet import PacketParams

SLOW = PacketParams(u0=1.0)


@pytest.fixture(scope="module")
def evolved():
    start = oracle.initial_state(SLOW, -20.0, 20.0, 4096)
    return start, oracle.evolve(start, SLOW, 1e-4, 10_000)


def test_wavestate_validation():
    with pytest.raises(ValueError):
        oracle.WaveState(np.zeros(300), 0, 1, 300)
    with pytest.raises(ValueError):
        oracle.WaveState(np.zeros(128), 0, 1, 128)
    with pytest.raises(ValueError):
        oracle.WaveState(np.zeros(256), 1, 0, 256)
    s = oracle.WaveState(np.zeros(256), -1.0, 1.0, 256)
    assert s.x[0] == -1.0 and s.h == pytest.approx(2 / 256)
    assert s.x[-1] == pytest.approx(1.0 - s.h)


def test_plane_wave_is_exact_eigenstate():
    L, n, k = 2 * np.pi, 256, 3.0
    x = np.arange(n) * L / n
    p = PacketParams(hbar=1.0, m=2.0)
    state = oracle.WaveState(np.exp(1j * k * x), 0.0, L, n)
    out = oracle.evolve(state, p, 0.01, 100, guard=False)
    assert out.t == pytest.approx(1.0)
    assert np.allclose(np.abs(out.psi), 1.0, atol=1e-13)
    expected = np.exp(1j * (k * x - p.hbar * k**2 * out.t / (2 * p.m)))
    assert np.allclose(out.psi, expected, atol=1e-12)


def test_plane_wave_fields():
    L, n, k = 2 * np.pi, 256, 3.0
    x = np.arange(n) * L / n
    p = PacketParams(hbar=1.0, m=2.0)
    prof = oracle.extract_fields(oracle.WaveState(np.exp(1j * k * x), 0.0, L, n), p)
    assert np.allclose(prof.u, p.hbar * k / p.m, atol=1e-12)
    assert np.allclose(prof.Q, 0.0, atol=1e-12)


def test_initial_state_matches_closed_form():
    s = oracle.initial_state(SLOW, -20.0, 20.0, 1024)
    rep = oracle.compare_to_analytic(s, SLOW)
    assert rep.rho_linf < 1e-12
    assert rep.norm_drift < 1e-14


def test_gaussian_propagation(evolved):
    _, out = evolved
    assert out.t == pytest.approx(1.0)
    assert out.steps == 10_000
    rho_exact = gp.density(SLOW, out.x, 1.0, normalized=True)
    assert np.max(np.abs(out.rho - rho_exact)) < 1e-6
    assert gp.spread(SLOW, 1.0) == pytest.approx(np.sqrt(1.25))


def test_norm_conserved(evolved):
    _, out = evolved
    assert abs(out.norm() - 1.0) < 1e-10


def test_extracted_velocity_matches_closed_form(evolved):
    _, out = evolved
    rep = oracle.compare_to_analytic(out, SLOW)
    assert rep.u_linf < 1e-5
    assert rep.meta["steps"] == 10_000 and rep.meta["k"] == 1.0


def test_extracted_potential_is_one_dimensional_bohm_potential():
    s = oracle.initial_state(PacketParams(u0=0.0), -20.0, 20.0, 4096)
    prof = oracle.extract_fields(s, PacketParams(u0=0.0))
    centre = np.argmin(np.abs(prof.x))
    assert prof.x[centre] == 0.0
    assert prof.Q[centre] == pytest.approx(0.25, abs=1e-5)
    # the reference closed form sits a uniform hbar^2 / (2 m^2 sigma^2) higher
    assert gp.quantum_potential(PacketParams(u0=0.0), 0.0, 0.0) - prof.Q[centre] == pytest.approx(0.5, abs=1e-5)


def test_strang_second_order_in_time():
    p = PacketParams(u0=1.0)
    start = oracle.initial_state(p, -20.0, 20.0, 512)
    V = 0.5 * start.x**2
    ref = oracle.evolve_to(start, p, 1.0, 1.25e-3 / 4, V=V).psi
    errs = []
    for dt in (0.04, 0.02, 0.01):
        psi = oracle.evolve_to(start, p, 1.0, dt, V=V).psi
        errs.append(np.max(np.abs(psi - ref)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 1.8), orders


def test_free_evolution_independent_of_domain():
    reports = []
    for half, n in ((20.0, 1024), (40.0, 2048)):
        s = oracle.initial_state(SLOW, -half, half, n)
        out = oracle.evolve(s, SLOW, 1e-3, 1000)
        reports.append(oracle.compare_to_analytic(out, SLOW))
    assert abs(reports[0].rho_linf - reports[1].rho_linf) < 1e-9
    assert abs(reports[0].u_linf - reports[1].u_linf) < 1e-9


def test_boundary_leak_detected():
    s = oracle.initial_state(SLOW, -6.0, 6.0, 256)
    with pytest.raises(BoundaryLeak):
        oracle.evolve(s, SLOW, 1e-2, 10)
    s = oracle.initial_state(PacketParams(u0=5.0), -12.0, 12.0, 512)
    with pytest.raises(BoundaryLeak) as info:
        oracle.evolve(s, PacketParams(u0=5.0), 1e-2, 200)
    assert "t = " in str(info.value)


def test_phase_unwrap_ambiguity():
    p = PacketParams(u0=20.0)
    s = oracle.initial_state(p, -20.0, 20.0, 256)
    with pytest.raises(PhaseUnwrapAmbiguity):
        oracle.extract_fields(s, p)


def test_window_below_floor():
    s = oracle.initial_state(SLOW, -20.0, 20.0, 1024)
    with pytest.raises(BelowDensityFloor):
        oracle.extract_fields(s, SLOW, window=(-19.0, 0.0))
    prof = oracle.extract_fields(s, SLOW, window=(-3.0, 3.0))
    assert prof.x[0] >= -3.0 and prof.x[-1] <= 3.0


def test_snapshot_columns_mask_vacuum():
    s = oracle.initial_state(SLOW, -20.0, 20.0, 1024)
    cols = oracle.snapshot_columns(s, SLOW)
    assert set(cols) == {"x", "re", "im", "rho", "u", "Q"}
    assert np.isnan(cols["u"][0]) and np.isfinite(cols["u"][512])


@pytest.mark.parametrize("n", [4096, 8192])
def test_error_floor_on_fine_grids(n):
    # one exact kinetic step isolates the spatial error
    s = oracle.initial_state(SLOW, -20.0, 20.0, n)
    rep = oracle.compare_to_analytic(oracle.evolve(s, SLOW, 1.0, 1), SLOW)
    assert rep.rho_linf < 1e-9
    assert rep.u_linf < 1e-9
    assert rep.Q_linf < 1e-7


def test_free_step_is_exact_in_time():
    s = oracle.initial_state(SLOW, -20.0, 20.0, 1024)
    one = oracle.evolve(s, SLOW, 1.0, 1).psi
    many = oracle.evolve(s, SLOW, 0.01, 100).psi
    assert np.max(np.abs(one - many)) < 1e-12
