import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from epdkit import bessel
from epdkit.errors import PoleError, RegimeError


def oracle(nu, z, dps=40):
    """(z/2)^-nu J_nu(z) from mpmath at high precision."""
    with mpmath.workdps(dps):
        nu, z = mpmath.mpmathify(nu), mpmath.mpmathify(z)
        return complex((z / 2) ** (-nu) * mpmath.besselj(nu, z))


@pytest.mark.parametrize("nu", [0, 0.5, 1, 2.5, -0.5, 1 + 0.5j, 0.3 - 1.2j])
@pytest.mark.parametrize("z", [0.01, 0.7, 3.0, 12.0, 24.0, 26.0, 40.0, 90.0, 2 + 1j])
def test_matches_mpmath(nu, z):
    want = oracle(nu, z)
    got = bessel.j(nu, z)
    scale = max(abs(want), abs(bessel.envelope(nu, abs(z))))
    assert abs(got - want) <= 1e-12 * scale


def test_half_order_closed_form():
    x = np.linspace(0.1, 100, 2001)
    want = 2 / math.sqrt(math.pi) * np.sin(x) / x
    assert np.max(np.abs(bessel.j(0.5, x) - want)) <= 1e-12


def test_value_at_origin_and_scaling():
    assert bessel.j(0, 0) == pytest.approx(1.0)
    for nu in (0.5, 2.0, 1 + 1j):
        assert complex(bessel.gamma_scaled_j(nu, 0.0)) == pytest.approx(1.0, abs=1e-15)


def test_even_in_z():
    for z in (0.5, 7.0, 33.0):
        assert bessel.j(1.5, -z) == pytest.approx(bessel.j(1.5, z), rel=1e-13, abs=1e-16)


def test_asymptotic_needs_large_argument():
    with pytest.raises(RegimeError):
        bessel.j_asymptotic(0.5, 5.0)


def test_negative_integer_order_rejected():
    with pytest.raises(PoleError):
        bessel.j(-1, 2.0)
    with pytest.raises(PoleError) as info:
        bessel.gamma(-3)
    assert info.value.pole == -3


@pytest.mark.parametrize("nu", [0, 0.5, 1, 2.5, 1 + 0.5j])
def test_series_and_hankel_overlap(nu):
    for z in np.linspace(20, 40, 21):
        s, a = bessel.j_series(nu, z), complex(bessel.j_asymptotic(nu, z))
        assert abs(s - a) <= 1e-10 * max(abs(s), abs(bessel.envelope(nu, z)))


def test_derivative_at_half_order_zero():
    assert complex(bessel.j_derivative(0.5, math.pi)).real == pytest.approx(-2 / math.pi**1.5, abs=1e-12)


def test_derivative_matches_mpmath():
    for nu, z in [(0, 1.3), (1.5, 17.0), (2 + 1j, 30.0)]:
        with mpmath.workdps(30):
            f = lambda x: (x / 2) ** (-mpmath.mpmathify(nu)) * mpmath.besselj(nu, x)
            want = complex(mpmath.diff(f, z))
        assert abs(complex(bessel.j_derivative(nu, z)) - want) <= 1e-11 * max(1, abs(want))


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(-0.9, 4), z=st.floats(0.05, 60))
def test_derivative_against_central_difference(nu, z):
    h = 1e-5
    fd = (bessel.j(nu, z + h) - bessel.j(nu, z - h)) / (2 * h)
    assert abs(complex(bessel.j_derivative(nu, z)) - fd) <= 1e-7


def test_evaluator_is_vectorized_and_reusable():
    ev = bessel.BesselEvaluator(1.0)
    z = np.array([0.5, 10.0, 30.0, 80.0])
    out = ev(z)
    assert out.shape == z.shape
    for zi, vi in zip(z, out):
        assert vi == pytest.approx(oracle(1.0, zi), rel=1e-12, abs=1e-15)
