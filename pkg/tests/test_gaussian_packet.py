import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from qshock import gaussian_packet as gp
from qshock.gaussian_packet import PacketParams

finite = st.floats(-50, 50, allow_nan=False)
positive = st.floats(0.2, 5.0)


@st.composite
def packets(draw):
    return PacketParams(
        hbar=draw(positive), m=draw(positive), sigma0=draw(positive), u0=draw(st.floats(-20, 20))
    )


@pytest.mark.parametrize("name", ["hbar", "m", "sigma0"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_params_reject_non_positive(name, bad):
    with pytest.raises(ValueError):
        PacketParams(**{name: bad})


def test_params_reject_non_finite_drift():
    with pytest.raises(ValueError):
        PacketParams(u0=math.inf)


def test_default_wavenumber_matches_drift():
    p = PacketParams(hbar=2.0, m=3.0, u0=4.0)
    assert p.wavenumber == pytest.approx(6.0)
    assert PacketParams(k=-1.5).wavenumber == -1.5


def test_spread_examples(unit):
    assert gp.spread(unit, 0.0) == 1.0
    assert gp.spread(unit, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert gp.spread(unit, -2.0) == gp.spread(unit, 2.0)


@given(packets(), st.floats(1e-3, 1e3), st.floats(1e-3, 10.0))
def test_spread_increasing(p, t, dt):
    assert gp.spread(p, t + dt) > gp.spread(p, t) >= p.sigma0


def test_spread_asymptote(unit):
    p = PacketParams(hbar=1.3, m=0.7, sigma0=0.9)
    t = 1e8
    assert gp.spread(p, t) / t == pytest.approx(p.hbar / (2 * p.m * p.sigma0), rel=1e-12)


def test_density_is_square_of_amplitude(unit):
    x = np.linspace(-5, 30, 301)
    for normalized in (False, True):
        f = gp.fields(unit, x, 1.7, normalized=normalized)
        assert np.array_equal(f.rho, f.R * f.R)
        assert np.all(f.rho >= 0)


def test_amplitude_peak_at_centre(unit):
    t = 2.0
    x = np.linspace(-10, 50, 6001)
    R = gp.fields(unit, x, t).R
    assert x[np.argmax(R)] == pytest.approx(unit.u0 * t, abs=1e-9)


def test_phase_zero_at_origin(unit):
    assert gp.fields(unit, 0.0, 0.0).S == 0.0


def test_verbatim_density_value():
    p = PacketParams(u0=10.0)
    assert gp.fields(p, 0.0, 0.0).rho == pytest.approx((2 * math.pi) ** -1.5, rel=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.5, 3.0, 20.0])
def test_normalized_density_conserves_mass(unit, t):
    sigma = gp.spread(unit, t)
    c = unit.u0 * t
    mass, _ = integrate.quad(lambda x: gp.density(unit, x, t, normalized=True),
                             c - 12 * sigma, c + 12 * sigma, epsabs=1e-13)
    assert mass == pytest.approx(1.0, abs=1e-12)


def test_verbatim_density_is_not_conserved(unit):
    # the 3/4-power prefactor integrates to 1 / (2 pi sigma^2)
    for t in (0.0, 4.0):
        sigma = float(gp.spread(unit, t))
        mass, _ = integrate.quad(lambda x: gp.density(unit, x, t), -200, 200, points=[unit.u0 * t])
        assert mass == pytest.approx(1.0 / (2 * math.pi * sigma**2), rel=1e-9)


def test_quantum_potential_examples(unit):
    assert gp.quantum_potential(unit, 0.0, 0.0) == pytest.approx(0.75)
    t = 1.5
    sigma = gp.spread(unit, t)
    assert gp.quantum_potential(unit, unit.u0 * t + sigma * math.sqrt(6), t) == pytest.approx(0.0, abs=1e-15)
    assert gp.quantum_potential(unit, 0.0, 0.0, one_dimensional=True) == pytest.approx(0.25)


def test_one_dimensional_potential_is_uniform_offset(unit):
    x = np.linspace(-5, 30, 50)
    t = 1.2
    diff = gp.quantum_potential(unit, x, t) - gp.quantum_potential(unit, x, t, one_dimensional=True)
    assert np.allclose(diff, 1.0 / (2 * gp.spread(unit, t) ** 2), rtol=1e-14)


@given(packets(), st.floats(-5, 5), st.floats(0, 5))
def test_potential_even_force_odd(p, d, t):
    c = p.u0 * t
    assert gp.quantum_potential(p, c + d, t) == pytest.approx(gp.quantum_potential(p, c - d, t), rel=1e-12, abs=1e-14)
    assert gp.quantum_force(p, c + d, t) == pytest.approx(-gp.quantum_force(p, c - d, t), rel=1e-12, abs=1e-14)


def test_quantum_force_examples(unit):
    assert gp.quantum_force(unit, 0.0, 0.0) == 0.0
    assert gp.quantum_force(unit, 1.0, 0.0) == pytest.approx(0.25)
    assert gp.quantum_force(unit, unit.u0 * 3.0, 3.0) == 0.0


@given(packets(), finite, st.floats(-4, 4))
@settings(max_examples=60)
def test_force_is_minus_potential_gradient(p, x, t):
    # central differences on a quadratic are exact up to rounding
    h = 1e-3 * p.sigma0
    fd = -(gp.quantum_potential(p, x + h, t) - gp.quantum_potential(p, x - h, t)) / (2 * h)
    scale = p.hbar**2 / (p.m**2 * p.sigma0**3) * (1 + abs(x - p.u0 * t) / p.sigma0)
    assert abs(gp.quantum_force(p, x, t) - fd) < 1e-7 * scale


def test_force_fd_error_is_second_order_free(unit):
    x, t = 2.3, 0.7
    errs = []
    for h in (1e-1, 5e-2, 2.5e-2):
        fd = -(gp.quantum_potential(unit, x + h, t) - gp.quantum_potential(unit, x - h, t)) / (2 * h)
        errs.append(abs(gp.quantum_force(unit, x, t) - fd))
    assert max(errs) < 1e-13


def test_velocity_examples(unit):
    x = np.linspace(-3, 3, 7)
    assert np.all(gp.velocity(unit, x, 0.0) == 10.0)
    for t in (0.5, 2.0, 7.0):
        assert gp.velocity(unit, unit.u0 * t, t) == pytest.approx(10.0, rel=1e-15)
    assert gp.velocity(unit, 21.0, 2.0) == pytest.approx(10.25, rel=1e-15)


def test_trajectory_examples(unit):
    assert gp.trajectory(unit, 0.0, 3.0) == pytest.approx(30.0)
    assert gp.trajectory(unit, 1.0, 2.0) == pytest.approx(20 + math.sqrt(2), rel=1e-15)
    assert gp.trajectory(unit, -0.7, 0.0) == -0.7


@given(packets(), st.floats(-3, 3), st.floats(0, 10))
@settings(max_examples=80)
def test_trajectory_follows_velocity(p, x0, t):
    h = 1e-4
    x_dot = (gp.trajectory(p, x0, t + h) - gp.trajectory(p, x0, t - h)) / (2 * h)
    u = gp.velocity(p, gp.trajectory(p, x0, t), t)
    assert abs(x_dot - u) <= 1e-6 * max(1.0, abs(u))


def test_wavefunction_carries_fields(unit):
    x = np.linspace(-5, 5, 11)
    psi = gp.wavefunction(unit, x, 0.4, normalized=False)
    f = gp.fields(unit, x, 0.4)
    assert np.allclose(np.abs(psi), f.R)
    assert np.allclose(np.angle(psi * np.exp(-1j * f.S / unit.hbar)), 0.0, atol=1e-12)


def test_dispersionless_packet(unit):
    p = unit.with_(dispersive=False)
    assert gp.spread(p, 50.0) == p.sigma0
    assert np.all(gp.velocity(p, np.array([-3.0, 0.0, 8.0]), 5.0) == p.u0)
    assert gp.trajectory(p, 1.5, 2.0) == pytest.approx(21.5)
    assert gp.quantum_force(p, 4.0, 1.0) == 0.0
    assert gp.quantum_potential(p, 4.0, 1.0) == 0.0
    assert gp.sound_speed(p, 3.0) == 0.0
