import math

import mpmath
import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.special import jv

from epdkit import zeros
from epdkit.bessel import j
from epdkit.errors import BracketError, DomainError


def bisection_zeros(nu, count):
    """Sign changes of scipy's J_nu on a fine grid, refined with brentq."""
    x = np.arange(0.1, (count + 2) * math.pi + 5, 0.05)
    y = jv(nu, x)
    out = []
    for a, b, ya, yb in zip(x[:-1], x[1:], y[:-1], y[1:]):
        if ya * yb < 0:
            out.append(brentq(lambda t: jv(nu, t), a, b, xtol=1e-15, rtol=1e-15))
        if len(out) == count:
            break
    return np.array(out)


def test_half_order_zeros_are_multiples_of_pi():
    lat = zeros.zero_lattice(0.5, 100)
    assert lat.exact
    got = lat.values_array(100)
    assert np.max(np.abs(got - math.pi * np.arange(1, 101))) <= 1e-12
    assert lat.ratio(3, 6) == 0.5


def test_order_zero_matches_bisection():
    got = zeros.real_zeros(0, 50).values_array(50)
    assert np.max(np.abs(got - bisection_zeros(0, 50))) <= 1e-10


@pytest.mark.parametrize("nu", [1.5, 3.0])
def test_matches_mpmath_zeros(nu):
    lat = zeros.real_zeros(nu, 100)
    for m in (1, 2, 17, 100):
        assert float(lat.value(m)) == pytest.approx(float(mpmath.besseljzero(nu, m)), abs=1e-11)


def test_negative_half_order():
    vals = zeros.real_zeros(-0.5, 20).values_array(20)
    assert np.max(np.abs(vals - (np.arange(1, 21) - 0.5) * math.pi)) <= 1e-12


def test_gaps_approach_pi():
    vals = zeros.real_zeros(0, 101).values_array(101)
    gaps = np.diff(vals)
    assert np.all(gaps > 0)
    assert abs(gaps[99] - math.pi) <= 1e-3


def test_tail_beyond_table_and_error_bound():
    lat = zeros.real_zeros(0, 60)
    m = 10**6
    assert lat.covers(m)
    # the bound includes the working-precision rounding of the expansion
    assert lat.error_bound(m) > 1e-10
    with mpmath.workdps(80):
        assert lat.error_bound(m) < 1e-40
    want = mpmath.besseljzero(0, 300)
    assert abs(lat.value(300) - want) <= lat.error_bound(300) + 1e-12


def test_index_at_least_brackets_value():
    lat = zeros.real_zeros(0, 100)
    for n, x in [(1, 2.5), (3, 7.0), (10, 0.3)]:
        ell = lat.index_at_least(n, x)
        assert lat.value(ell) / lat.value(n) >= x
        assert ell == 1 or lat.value(ell - 1) / lat.value(n) < x


def test_complex_order_zeros():
    lat = zeros.complex_zeros(1 + 1j, 40)
    assert not lat.missing
    for m in lat.indices:
        assert abs(complex(j(1 + 1j, complex(lat.value(m))))) <= 1e-10
    assert abs(complex(lat.value(30)).imag - math.pi / 2) <= 0.05


def test_ratio_function():
    assert zeros.zero_ratio_f(0.5) == pytest.approx(0.5, abs=1e-14)
    f0 = float(mpmath.besseljzero(0, 1) / mpmath.besseljzero(0, 2))
    assert zeros.zero_ratio_f(0) == pytest.approx(f0, abs=1e-12)
    nus = np.arange(0, 0.5 + 1e-12, 1e-3)
    vals = np.array([zeros.zero_ratio_f(v) for v in nus])
    assert np.max(np.abs(np.diff(vals))) <= 1e-2


def test_find_order_with_ratio():
    assert zeros.find_order_with_ratio(0.5) == pytest.approx(0.5, abs=1e-8)
    target = zeros.zero_ratio_f(1.3)
    assert zeros.find_order_with_ratio(target) == pytest.approx(1.3, abs=1e-8)
    with pytest.raises(BracketError):
        zeros.find_order_with_ratio(0.99)
    with pytest.raises(DomainError):
        zeros.zero_ratio_f(5.0)


def test_mcmahon_is_close_for_large_index():
    for nu in (0, 1.5):
        m = 80
        assert float(zeros.mcmahon_expansion(nu, m)) == pytest.approx(float(mpmath.besseljzero(nu, m)), abs=1e-12)
