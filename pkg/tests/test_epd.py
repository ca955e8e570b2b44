import math

import mpmath
import numpy as np
import pytest

from epdkit import epd
from epdkit.errors import DomainError, PoleError, RegimeError
from epdkit.grid import GridFunction


def test_order_relation():
    assert epd.order_for(0, 3) == 0.5
    assert epd.order_for(1, 2) == 1.0


def test_pole_rejected():
    f = GridFunction.random_trig(3, 8, 2 * math.pi, 2, seed=0)
    with pytest.raises(PoleError):
        epd.propagate(f, 1.0, -1.5)
    with pytest.raises(PoleError):
        epd.check_alpha(-1.0 + 1e-8, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("alpha", [0, 1, 0.7, 1 + 0.5j])
def test_time_zero_is_identity(n, alpha):
    f = GridFunction.random_trig(n, 16, 2 * math.pi, 5, seed=n)
    u = epd.propagate(f, 0.0, alpha)
    assert np.max(np.abs(u.values - f.values)) <= 1e-12


def test_constants_are_preserved():
    f = GridFunction.constant(2.5, 2, 8, 1.0)
    assert np.allclose(epd.propagate(f, 3.7, 0.3).values, 2.5)


def test_wave_mean_in_three_dimensions():
    # alpha = 0, n = 3: spherical mean of cos(lambda x_1) is sin(lambda t)/(lambda t) cos(lambda x_1)
    L, t = 2 * math.pi, 0.8
    f = GridFunction.cosine(3, 16, L, (3,))
    u = epd.propagate(f, t, 0)
    lam = 3.0
    want = math.sin(lam * t) / (lam * t) * f.values
    assert np.max(np.abs(u.values - want)) <= 1e-12


@pytest.mark.parametrize("alpha,n", [(0, 2), (0, 3), (1, 3), (0.7, 2)])
def test_spectral_and_quadrature_agree(alpha, n):
    for k in (1, 3):
        for t in (0.4, 1.3):
            assert epd.eigen_check(k, t, alpha, n, route="spectral") <= 1e-12
            assert epd.eigen_check(k, t, alpha, n, route="quadrature") <= 1e-8


def test_quadrature_needs_positive_alpha():
    f = GridFunction.cosine(2, 16, 2 * math.pi)
    with pytest.raises(RegimeError):
        epd.m_alpha_quadrature(f, 1.0, -0.2, [[0.0, 0.0]])


def test_quadrature_against_mpmath():
    # n = 1, alpha = 1: c int_0^1 cos(x) ... reduces to a one-dimensional integral
    f = GridFunction.cosine(1, 16, 2 * math.pi, (2,))
    t, alpha = 0.9, 1.0
    got = epd.m_alpha_quadrature(f, t, alpha, [[0.0]])[0]
    c = 2 * math.gamma(alpha + 0.5) / (math.gamma(alpha) * math.gamma(0.5))
    want = c * mpmath.quad(lambda u: mpmath.cos(2 * t * u) * (1 - u * u) ** (alpha - 1), [0, 1])
    assert got == pytest.approx(float(want), abs=1e-13)


@pytest.mark.parametrize("alpha", [0, 1, 0.5])
def test_residual_is_second_order(alpha):
    n = 2
    f = GridFunction.random_trig(n, 16, 2 * math.pi, 3, seed=1)
    orders, res = epd.convergence_order(f, alpha, [0.5, 1.0, 2.0], h_t=0.1, levels=3)
    assert np.all(np.abs(orders - 2) <= 0.2)
    with pytest.raises(DomainError):
        epd.epd_residual(f, alpha, [0.1], 0.1)


def test_asgeirsson_symmetry():
    f = GridFunction.random_trig(2, 16, 2 * math.pi, 3, seed=2)
    x = [[0.3, 1.1], [2.0, 0.4]]
    ts = [0.5, 1.0, 1.5]
    assert epd.asgeirsson_check(f, 0.4, x, ts) <= 1e-12
    assert epd.asgeirsson_check(f, 0, x, ts, route="quadrature") <= 1e-6
    with pytest.raises(DomainError):
        epd.asgeirsson_check(f, 0.4, x, ts, route="quadrature")


def test_slow_decrease_profile():
    half = epd.slow_decrease_profile(0.5, 1.0, 200.0)
    assert half.exponent == pytest.approx(-1.0, abs=0.1)
    zero = epd.slow_decrease_profile(0.0, 1.0, 200.0)
    assert zero.exponent == pytest.approx(-0.5, abs=0.1)
    assert half.c > 0 and zero.c > 0


def test_laplacian_of_cosine():
    f = GridFunction.cosine(2, 16, 2 * math.pi, (2, 1))
    assert np.allclose(epd.laplacian(f).values, -5 * f.values, atol=1e-12)
