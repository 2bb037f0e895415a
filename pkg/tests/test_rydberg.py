import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, optimize

from tidalcharge.rydberg import (TidalEnvironment, convergence_angle, diamagnetic_force,
                                 diamagnetic_shift, log_ring_density, mean_square_radius,
                                 parker_shift, ring_density, state_properties, tidal_force,
                                 tidal_shift, tidal_velocity_field, transverse_size_sq)


@pytest.fixture(scope="module")
def earth():
    return TidalEnvironment.earth()


def transverse_size_by_quadrature(n, a0):
    """<r^2 sin^2 theta> from 2-D quadrature of the package's ring density."""
    scale = n * a0
    upper = 4 * n + 80  # in units of n a0; the density has decayed by > e^-100 there

    def weight(u, th, power):
        # |psi|^2 * (r^2 sin th) volume element * (r^2 sin^2 th)^power, r = scale * u
        return float(ring_density(n, scale * u, th)) * u**2 * math.sin(th) * (u * math.sin(th)) ** (2 * power)

    num = integrate.dblquad(lambda u, th: weight(u, th, 1), 0, math.pi, 0, upper, epsabs=0, epsrel=1e-13)[0]
    den = integrate.dblquad(lambda u, th: weight(u, th, 0), 0, math.pi, 0, upper, epsabs=0, epsrel=1e-13)[0]
    return num / den * scale**2


def test_state_properties_ground(consts):
    st = state_properties(1)
    assert (st.a_n, st.mu_n, st.Phi_n) == (consts.a0, consts.mu_B, consts.Phi0)


def test_state_properties_n100(consts):
    st = state_properties(100)
    assert st.a_n == pytest.approx(1e4 * consts.a0, rel=1e-15)
    assert st.a_n == pytest.approx(5.292e-7, rel=1e-3)
    assert st.mu_n == pytest.approx(100 * consts.mu_B)
    assert state_properties(2).a_n / state_properties(1).a_n == 4.0


@pytest.mark.parametrize("n", [0, -3, 2.5])
def test_bad_quantum_number(n):
    with pytest.raises(ValueError):
        state_properties(n)


def test_density_node_on_polar_axis(consts):
    for n in (2, 5, 100):
        assert ring_density(n, 10 * consts.a0, 0.0) == 0.0


def test_ground_state_density_is_monotone(consts):
    r = np.linspace(0, 20 * consts.a0, 200)
    rho = ring_density(1, r, math.pi / 2)
    assert rho[0] == 1.0
    assert np.all(np.diff(rho) < 0)
    assert rho == pytest.approx(np.exp(-2 * r / consts.a0))


def test_density_finite_at_large_n(consts):
    r = np.linspace(0, 3e4 * consts.a0, 1000)
    rho = ring_density(100, r, math.pi / 2)
    assert np.all(np.isfinite(rho)) and rho.max() <= 1.0


@pytest.mark.parametrize("n", [2, 5, 10, 100])
def test_density_peak_radius(consts, n):
    expected = n * (n - 1) * consts.a0
    h = 1e-5

    def slope(x):  # central difference of the log density in the scaled radius
        r_plus, r_minus = (x + h) * expected, (x - h) * expected
        return float(log_ring_density(n, r_plus, math.pi / 2) - log_ring_density(n, r_minus, math.pi / 2))

    x_star = optimize.brentq(slope, 0.5, 1.5, xtol=1e-14, rtol=1e-14)
    assert x_star == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("n", [2, 10, 100])
def test_density_peak_high_precision_oracle(n):
    # independent high-precision stationary point of (r sin th)^(2n-2) exp(-2r/(n a0)) at a0 = 1
    mpmath.mp.dps = 40
    logd = lambda r: (2 * n - 2) * mpmath.log(r) - 2 * r / n  # noqa: E731
    root = mpmath.findroot(lambda r: mpmath.diff(logd, r), n * (n - 1) * 1.1)
    assert float(root) == pytest.approx(n * (n - 1), rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 10, 50])
def test_transverse_size_matches_quadrature(consts, n):
    assert transverse_size_sq(n) == pytest.approx(transverse_size_by_quadrature(n, consts.a0), rel=1e-8)


def test_transverse_size_closed_forms(consts):
    assert transverse_size_sq(1) == pytest.approx(2 * consts.a0**2, rel=1e-15)
    # radial factor 3 a0^2 times angular factor 2/3 for n = 1
    assert mean_square_radius(1) == pytest.approx(3 * consts.a0**2, rel=1e-15)
    assert transverse_size_sq(100) / state_properties(100).a_n ** 2 == pytest.approx(1.01, rel=1e-14)
    ratios = [transverse_size_sq(n) / state_properties(n).a_n ** 2 for n in range(1, 200)]
    assert all(r > 1 for r in ratios)
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_parker_shift(earth, consts):
    assert parker_shift(100, earth) == pytest.approx(1.964e-49, rel=1e-3)
    assert parker_shift(20, earth) / parker_shift(10, earth) == pytest.approx(16, rel=1e-12)
    flat = TidalEnvironment(g=1e-300, R_E=1.0)
    assert parker_shift(100, flat) == pytest.approx(0.0, abs=1e-300)
    assert parker_shift(5, earth, l=0) == 0.0


def test_parker_exact_quadrupole_expectation(earth, consts):
    # <r^2 (3 sin^2 - 2)> = 3 <r^2 sin^2> - 2 <r^2>
    for n in (1, 3, 40):
        expected = 3 * transverse_size_sq(n) - 2 * mean_square_radius(n)
        coeff = consts.m_e * earth.g / (2 * earth.R_E)
        assert parker_shift(n, earth, exact=True) == pytest.approx(coeff * expected, rel=1e-12)
    assert parker_shift(1, earth, exact=True) == 0.0


def test_diamagnetic_shift(consts):
    env = TidalEnvironment.earth(B=1.0)
    assert diamagnetic_shift(100, TidalEnvironment.earth(B=0.0)) == 0.0
    # e^2 a_n^2 B^2 / (8 m_e) with a_n = 5.29177e-7 m
    assert diamagnetic_shift(100, env) == pytest.approx(9.864e-22, rel=1e-3)
    doubled = TidalEnvironment.earth(B=2.0)
    assert diamagnetic_shift(100, doubled) / diamagnetic_shift(100, env) == pytest.approx(4, rel=1e-12)


def test_diamagnetic_force_is_minus_derivative(consts):
    n, B2 = 60, 0.7
    grad = 3.0
    env = TidalEnvironment.earth(B=math.sqrt(B2), grad_B2=grad)

    def shift_at(b2):
        return diamagnetic_shift(n, TidalEnvironment.earth(B=math.sqrt(b2)))

    h = 1e-4
    dE_dB2 = (shift_at(B2 + h) - shift_at(B2 - h)) / (2 * h)
    assert diamagnetic_force(n, env) == pytest.approx(-dE_dB2 * grad, rel=1e-8)
    assert diamagnetic_force(n, env) < 0


def test_tidal_shift(earth):
    assert tidal_shift(100, earth, 0.0) == 0.0
    assert tidal_force(100, earth, 0.0) == 0.0
    assert tidal_shift(100, earth, 1.0) == pytest.approx(3.024e-55, rel=1e-3)
    assert tidal_shift(100, earth, 2.0) / tidal_shift(100, earth, 1.0) == pytest.approx(4, rel=1e-12)


def test_tidal_force_is_minus_derivative():
    n, t, grad = 30, 2.0, 5e-12
    q0 = 9.81**2 / 6.371e6**2

    def shift_at(q):  # q = g^2 / R_E^2, varied through g
        return tidal_shift(n, TidalEnvironment(g=math.sqrt(q) * 6.371e6, R_E=6.371e6), t)

    h = q0 * 1e-4
    dE_dq = (shift_at(q0 + h) - shift_at(q0 - h)) / (2 * h)
    env = TidalEnvironment.earth(grad_g2_over_RE2=grad)
    assert tidal_force(n, env, t) == pytest.approx(-dE_dq * grad, rel=1e-8)


def test_tidal_over_parker_ratio(earth):
    for n, t in ((10, 1.0), (100, 3.5), (7, 0.2)):
        ratio = tidal_shift(n, earth, t) / parker_shift(n, earth)
        assert ratio == pytest.approx(earth.g * t**2 / earth.R_E, rel=1e-12)


def test_scaling_exact(earth):
    for n in (3, 10, 50):
        assert diamagnetic_shift(2 * n, TidalEnvironment.earth(B=1.0)) / diamagnetic_shift(
            n, TidalEnvironment.earth(B=1.0)) == pytest.approx(16, rel=1e-12)
        assert tidal_shift(2 * n, earth, 1.0) / tidal_shift(n, earth, 1.0) == pytest.approx(16, rel=1e-12)


def test_exact_variants_use_transverse_size(earth):
    env = TidalEnvironment.earth(B=0.5)
    assert diamagnetic_shift(10, env, exact=True) / diamagnetic_shift(10, env) == pytest.approx(1.1)
    assert tidal_shift(10, earth, 1.0, exact=True) / tidal_shift(10, earth, 1.0) == pytest.approx(1.1)


def test_tidal_velocity_field(earth):
    assert np.all(tidal_velocity_field(earth, 0.0, 0.0, 5.0) == 0)
    v = tidal_velocity_field(earth, 1.0, 0.0, 1.0)
    assert v == pytest.approx([1.540e-6, 0.0], rel=1e-3)
    assert tidal_velocity_field(earth, 2.0, -1.0, 3.0) == pytest.approx(
        6 * tidal_velocity_field(earth, 1.0, -0.5, 1.0))


def test_convergence_angle(earth):
    theta, _ = convergence_angle(1.0, earth)
    assert theta == pytest.approx(1.5696e-7, rel=1e-4)
    _, g_prime = convergence_angle(0.01, earth)
    assert g_prime == pytest.approx(1.540e-8, rel=1e-3)
    assert convergence_angle(3.0, earth)[0] == pytest.approx(3 * theta)
    with pytest.raises(ValueError):
        convergence_angle(0.0, earth)
