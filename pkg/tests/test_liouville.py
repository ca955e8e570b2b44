import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from epdkit import liouville as lv
from epdkit.errors import DomainError, RegimeError
from epdkit.zeros import zero_lattice


@pytest.fixture(scope="module")
def half():
    return zero_lattice(0.5, 100)


@pytest.fixture(scope="module")
def zero():
    return zero_lattice(0, 100)


def liouville_constant(terms=6):
    return sum(Fraction(1, 10 ** math.factorial(k)) for k in range(1, terms + 1))


def test_rational_witness(half, zero):
    assert lv.is_jnu_rational(Fraction(3, 7), half, 10) == (3, 7)
    assert lv.is_jnu_rational(math.sqrt(2), half, 10**4, tol=1e-12) is None
    assert lv.is_jnu_rational(zero.ratio(1, 2), zero, 10) == (1, 2)
    assert lv.is_jnu_rational(zero.ratio(2, 5), zero, 10) == (2, 5)


def test_theta_examples(half, zero):
    assert lv.theta(half, 10, Fraction(1, 2)) == Fraction(6, 10)
    assert lv.theta(half, 10, 0.55) == Fraction(7, 10)
    # a_5/a_10 < 0.5 <= a_6/a_10, so ell = 6 and theta = a_7/a_10 (zeros from mpmath)
    a = [mpmath.besseljzero(0, k) for k in range(1, 11)]
    assert a[4] / a[9] < 0.5 <= a[5] / a[9]
    assert float(lv.theta(zero, 10, 0.5)) == pytest.approx(float(a[6] / a[9]), abs=1e-12)
    with pytest.raises(DomainError):
        lv.theta(half, 10, 0.05)


def test_generalized_lattices(half):
    ints = lv.generalized_lattice(step=1)
    assert lv.theta(ints, 10, 0.5) == Fraction(6, 10)
    pis = lv.generalized_lattice(step=math.pi)
    assert float(pis.value(7)) == pytest.approx(float(half.value(7)), rel=1e-15)
    fin = lv.generalized_lattice(values=[1.0, 2.5, 4.0, 7.5])
    assert lv.is_jnu_rational(2.5 / 7.5, fin, 4) == (2, 4)
    with pytest.raises(DomainError):
        lv.generalized_lattice(values=[1.0, 2.0, 2.0])


@pytest.mark.parametrize("name,limit", [("half", 2.0 + 1e-12), ("zero", 3.0)])
def test_theta_sandwich(name, limit, request):
    lat = request.getfixturevalue(name)
    C, rows = lv.fit_theta_constant(lat, n_max=1000, samples=500, seed=0)
    assert 1 <= C <= limit
    _, fresh = lv.fit_theta_constant(lat, n_max=1000, samples=200, seed=1)
    for n, x, d in fresh:
        assert 1 / (3 * n) <= d <= 3 / n


def test_cutoff_examples():
    assert lv.validate_cutoff(10, 3)
    assert not lv.validate_cutoff(9, 3)
    assert not lv.validate_cutoff(10, 1.0001)
    # C barely above 1 still allows a large cutoff: min(C, N/C^2) = C > 1 + N^-2
    assert lv.validate_cutoff(1000, 1.0001)


def test_chain_example(half):
    chain = lv.theta_chain(half, (1, 1), N=10, x_start=Fraction(1, 2), C=3)
    assert chain.values == (Fraction(3, 5), Fraction(600001, 1000000))
    assert chain.indices == (10, 10**6)
    d = chain.to_dict()
    assert d["indices"] == ["10^1", "10^6"]
    assert d["exact_values"] == ["3/5", "600001/1000000"]


def test_chain_order_and_increments(half):
    C = 3
    prev_hi = None
    for bits in itertools.product((0, 1), repeat=3):
        chain = lv.theta_chain(half, bits, N=10, x_start=Fraction(1, 2), C=C)
        lo, hi = chain.interval()
        if prev_hi is not None:
            assert prev_hi < lo
        prev_hi = hi
        for inc, n in zip(chain.increments(), chain.indices):
            assert 0 < inc <= Fraction(C, n)
        assert all(Fraction(1, 2) < v < Fraction(1, 2) + Fraction(C * C, 10) for v in chain.values)


def test_rapid_approximation_forms(half, zero):
    chain = lv.theta_chain(half, (1, 0, 1), N=10, C=3)
    lo, hi = chain.interval()
    for m in (1, 2):
        index_form, zero_form = lv.rapid_approximation_bounds(chain, half, m)
        assert hi - chain.values[m - 1] <= index_form
    # the zero-based form needs (a_n / n)^(2m+1) <= C; for a_n = n pi it is
    # smaller than the index form by C / pi^(2m+1), so it is a stronger claim
    for m in (1, 2, 3):
        index_form, zero_form = lv.rapid_approximation_bounds(chain, half, m)
        ratio = zero_form / mpmath.mpf(index_form.numerator) * index_form.denominator
        assert ratio == pytest.approx(3 / mpmath.pi ** (2 * m + 1))
    # on the integer lattice a_n = n, so the two forms agree up to a factor C
    ints = lv.generalized_lattice(step=1)
    chain = lv.theta_chain(ints, (1, 1), N=10, C=3)
    index_form, zero_form = lv.rapid_approximation_bounds(chain, ints, 1)
    assert float(zero_form) == pytest.approx(3 * float(index_form))


def test_non_exact_chain(zero):
    chain = lv.theta_chain(zero, (1, 0, 1), N=10, C=3)
    assert not chain.exact
    incs = [float(v) for v in chain.increments()]
    assert all(i > 0 for i in incs)
    assert incs[0] > incs[1] > incs[2]
    assert all(float(e) < float(i) * 1e-3 for e, i in zip(chain.errors, incs))
    with pytest.raises(RegimeError):
        lv.theta_chain(zero, (0, 0, 0, 0), N=10, C=3, max_dps=5000)


def test_quality(half):
    exact = lv.liouville_quality(Fraction(5, 8), half, 100)
    assert exact.gap == 0 and exact.exponent == math.inf
    root2 = lv.liouville_quality(math.sqrt(2), half, 10**6)
    assert root2.exponent <= 2.1
    x = liouville_constant()
    exps = [lv.liouville_quality(x, half, b).exponent for b in (10**2, 10**6, 10**24, 10**120, 10**721)]
    assert all(b > a for a, b in zip(exps, exps[1:]))
    assert exps[-1] > 5.5


def test_quality_monotone_in_bound(zero):
    x = 0.7071
    exps = [lv.liouville_quality(x, zero, b).exponent for b in (10, 100, 1000)]
    assert exps == sorted(exps)


def test_ratio_approximation_fields(half):
    r = lv.ratio_approximation(0.3, half, 1, 3)
    assert r.gap == pytest.approx(abs(0.3 - 1 / 3))
    assert r.exponent == pytest.approx(-math.log(r.gap) / math.log(3 * math.pi))


def test_measure_properties(half):
    measures = [lv.measure_cover(half, 2, p, 60).measure for p in (3, 4, 5)]
    assert measures[0] > measures[1] > measures[2]
    big = lv.measure_cover(half, 2, 50, 60)
    assert big.measure < 1e-12
    assert big.measure <= big.bound


def test_measure_matches_brute_force():
    ints = lv.generalized_lattice(step=1)
    cover = lv.measure_cover(ints, 1, 2, 6)
    # union of (k/n - n^-2, k/n + n^-2) over ratios 0 < k/n < 1, clipped to (0, 1)
    x = np.linspace(0, 1, 2_000_001)
    inside = np.zeros_like(x, dtype=bool)
    for n in range(1, 7):
        for k in range(1, n):
            inside |= np.abs(x - k / n) < n**-2.0
    assert cover.measure == pytest.approx(inside.mean(), abs=2e-6)
