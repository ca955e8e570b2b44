"""Zeros of ``j_nu`` and the ordered zero lattice ``a_1, a_2, ...``.

Real orders ``nu > -1`` have only real, simple, positive zeros; they are
located by a sign-change scan and refined by safeguarded Newton.  Complex
orders are handled by Newton from McMahon seeds, with any index whose
iteration fails reported as missing.  Beyond the computed table the
lattice falls back on McMahon's expansion with a fitted error bound.
"""

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.special import jv

from .bessel import BesselEvaluator, DEFAULT_CROSSOVER, check_order
from .errors import BracketError, DomainError, RegimeError

SCAN_STEP = math.pi / 8
DEFAULT_COUNT = 100
_EPS = np.finfo(float).eps


def mcmahon_seed(nu, m):
    """Leading-order zero estimate ``m*pi + (nu - 1/2)*pi/2``."""
    if m < 1:
        raise DomainError("zero index must be >= 1")
    return complex(m * math.pi + (complex(nu) - 0.5) * math.pi / 2)


def _mcmahon(nu, beta):
    mu = 4 * nu * nu
    b8 = 8 * beta
    return (
        beta
        - (mu - 1) / b8
        - 4 * (mu - 1) * (7 * mu - 31) / (3 * b8**3)
        - 32 * (mu - 1) * (83 * mu**2 - 982 * mu + 3779) / (15 * b8**5)
        - 64 * (mu - 1) * (6949 * mu**3 - 153855 * mu**2 + 1585743 * mu - 6277237) / (105 * b8**7)
    )


def mcmahon_beta(nu, m):
    return (m + complex(nu) / 2 - 0.25) * math.pi


def mcmahon_expansion(nu, m):
    """McMahon's expansion of the m-th zero through ``beta**-7``, at mpmath precision."""
    if m < 1:
        raise DomainError("zero index must be >= 1")
    nu = complex(nu)
    nu_mp = mpmath.mpf(nu.real) if nu.imag == 0 else mpmath.mpc(nu.real, nu.imag)
    beta = (m + nu_mp / 2 - mpmath.mpf(1) / 4) * mpmath.pi
    return _mcmahon(nu_mp, beta)


def mcmahon_array(nu, m):
    """Vectorized double-precision McMahon values for index array ``m``."""
    m = np.asarray(m, dtype=float)
    return _mcmahon(complex(nu), (m + complex(nu) / 2 - 0.25) * math.pi)


def _refine_real(ev, dev, lo, hi, flo):
    """Newton iteration kept inside a shrinking sign-change bracket."""
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = ev(x).real
        if fx == 0.0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi = x
        d = dev(x).real
        step_ok = d != 0.0
        if step_ok:
            new = x - fx / d
            # converged: the correction is at roundoff and may leave the bracket
            if abs(new - x) <= 4 * _EPS * abs(x):
                return new
            step_ok = lo < new < hi
        if not step_ok:
            new = 0.5 * (lo + hi)
        if abs(new - x) <= 4 * _EPS * abs(x) or hi - lo <= 4 * _EPS * abs(x):
            return new
        x = new
    raise RegimeError("zero refinement did not converge")


@dataclass(frozen=True)
class ZeroLattice:
    """The ordered zeros of ``j_nu`` as a lattice.

    ``table`` maps index to computed zero, ``errors`` to its error estimate.
    Indices ``>= tail_start`` come from McMahon's expansion with error at most
    ``tail_constant / |beta_m|**9``.  For ``nu = 1/2`` the lattice is exact:
    ``a_m = m*pi`` and ratios are rationals.
    """

    order: complex
    table: dict
    errors: dict
    tail_start: int
    tail_constant: float
    missing: tuple = ()
    exact: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def is_real(self):
        return self.order.imag == 0.0

    @property
    def max_index(self):
        return max(self.table) if self.table else 0

    @property
    def indices(self):
        return sorted(self.table)

    @property
    def values(self):
        return np.array([self.table[m] for m in self.indices], dtype=complex)

    def _check(self, m):
        if m < 1:
            raise DomainError("zero index must be >= 1")
        if m < self.tail_start and m not in self.table:
            raise DomainError(f"zero a_{m} was not found for nu = {self.order}")

    def value(self, m):
        """Zero ``a_m`` as an mpmath number at the current working precision."""
        self._check(m)
        if self.exact:
            return m * mpmath.pi
        if m in self.table:
            v = self.table[m]
            return mpmath.mpf(v.real) if self.is_real else mpmath.mpc(v.real, v.imag)
        v = mcmahon_expansion(self.order, m)
        return mpmath.re(v) if self.is_real else v

    def ratio(self, k, n):
        """``a_k / a_n``; a Fraction when the lattice is exact."""
        if self.exact:
            self._check(k), self._check(n)
            return Fraction(k, n)
        return self.value(k) / self.value(n)

    def error_bound(self, m):
        """Bound on ``|value(m) - true a_m|``."""
        self._check(m)
        if self.exact:
            return 0.0
        if m in self.table:
            return self.errors[m]
        # mpmath: m may be far beyond the float range
        beta = abs((m + mpmath.mpf(self.order.real) / 2 - mpmath.mpf(1) / 4) * mpmath.pi)
        return self.tail_constant / beta**9 + mpmath.mpf(10) ** (-mpmath.mp.dps + 2) * beta

    def covers(self, m):
        return m >= 1 and (m in self.table or m >= self.tail_start)

    def index_at_least(self, n, x):
        """Smallest ``l`` with ``a_l / a_n >= x`` (real lattices only).

        Comparisons run at the current mpmath precision, so ``n`` may be far
        beyond the computed table.
        """
        if not self.is_real:
            raise DomainError("index_at_least needs a real lattice")
        if self.exact:
            return max(1, math.ceil(Fraction(x) * n))
        x = mpmath.mpf(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator
        target = x * self.value(n)
        guess = int(mpmath.floor((target - (self.order.real - 0.5) * mpmath.pi / 2) / mpmath.pi)) - 1
        guess = max(1, guess)
        while guess > 1 and self.value(guess) >= target:
            guess -= 1
        while self.value(guess) < target:
            guess += 1
        return guess

    def values_array(self, m_max):
        """Real parts of ``a_1 .. a_{m_max}`` in double precision."""
        if self.exact:
            return math.pi * np.arange(1, m_max + 1, dtype=float)
        m = np.arange(1, m_max + 1)
        out = mcmahon_array(self.order, m)
        for idx, v in self.table.items():
            if idx <= m_max:
                out[idx - 1] = v
        return out.real if self.is_real else out


def _fit_tail_constant(nu, table, start=None):
    """Fit C in ``|a_m - McMahon(m)| <= C / |beta_m|**9`` from the computed zeros."""
    rows = []
    for m, v in table.items():
        if start is not None and m < start:
            continue
        beta = abs(mcmahon_beta(nu, m))
        diff = abs(v - complex(mcmahon_expansion(nu, m)))
        # once the McMahon error sinks to round-off the fit carries no information
        if diff > 64 * _EPS * abs(v):
            rows.append(diff * beta**9)
    if not rows:
        return 0.0
    return 4.0 * max(rows)


def real_zeros(nu, count=DEFAULT_COUNT, crossover=DEFAULT_CROSSOVER):
    """First ``count`` positive zeros of ``j_nu`` for real ``nu > -1``.

    Results are cached per ``(nu, count, crossover)``; treat them as read-only.
    """
    nu = check_order(nu)
    if nu.imag != 0.0 or not nu.real > -1:
        raise DomainError("real_zeros needs a real order nu > -1")
    if count < 1:
        raise DomainError("count must be >= 1")
    return _real_zeros(nu, int(count), float(crossover))


@functools.lru_cache(maxsize=64)
def _real_zeros(nu, count, crossover):
    ev = BesselEvaluator(nu, crossover_radius=crossover)
    found = []
    errors = {}
    i0 = 0
    chunk = min(128, 8 * count + 16)  # zeros are about 8 scan steps apart
    # J_nu and j_nu share signs for x > 0, and j_nu(0) > 0 for nu > -1;
    # scipy's J_nu only brackets the sign changes, refinement uses ev
    prev_x, prev_f = 0.0, 1.0
    while len(found) < count:
        xs = SCAN_STEP * np.arange(i0 + 1, i0 + chunk + 1)
        fs = jv(complex(nu).real, xs)
        for x, f in zip(xs, fs):
            if f == 0.0:
                found.append(float(x))
            elif (f < 0) != (prev_f < 0) and prev_f != 0.0:
                found.append(_refine_real(ev, ev.derivative, prev_x, x, prev_f))
            prev_x, prev_f = float(x), f
            if len(found) >= count:
                break
        i0 += chunk
    table = {}
    for m, x in enumerate(found[:count], start=1):
        table[m] = complex(x)
        resid = abs(ev(x))
        slope = abs(ev.derivative(x))
        errors[m] = resid / slope + 4 * _EPS * x if slope else 4 * _EPS * x
    exact = nu == 0.5
    return ZeroLattice(
        order=nu,
        table=table,
        errors=errors,
        tail_start=count + 1,
        tail_constant=_fit_tail_constant(nu, table),
        exact=exact,
        meta={"method": "scan+newton", "scan_step": SCAN_STEP},
    )


def complex_zeros(nu, count=DEFAULT_COUNT, start=3, crossover=DEFAULT_CROSSOVER, tol=1e-13):
    """Zeros ``a_start .. a_count`` of ``j_nu`` for complex ``nu`` by Newton from McMahon seeds.

    Indices whose iteration diverges or settles more than ``pi/2`` from the
    seed are listed in ``missing`` rather than guessed.
    """
    nu = check_order(nu)
    if start < 1 or count < start:
        raise DomainError("need 1 <= start <= count")
    ev = BesselEvaluator(nu, crossover_radius=crossover)
    table, errors, missing = {}, {}, []
    for m in range(start, count + 1):
        seed = complex(mcmahon_expansion(nu, m))
        z = seed
        ok = False
        for _ in range(60):
            f = ev(z)
            d = ev.derivative(z)
            if d == 0 or not np.isfinite(f):
                break
            step = f / d
            z = z - step
            if abs(z - seed) > math.pi / 2:
                break
            if abs(step) <= tol * abs(z):
                ok = True
                break
        if ok:
            table[m] = z
            errors[m] = abs(ev(z)) / abs(ev.derivative(z)) + 4 * _EPS * abs(z)
        else:
            missing.append(m)
    return ZeroLattice(
        order=nu,
        table=table,
        errors=errors,
        tail_start=count + 1,
        tail_constant=_fit_tail_constant(nu, table),
        missing=tuple(missing),
        meta={"method": "newton-from-mcmahon", "start": start},
    )


def zero_lattice(nu, count=DEFAULT_COUNT, crossover=DEFAULT_CROSSOVER):
    """Real or complex zero lattice, whichever the order calls for."""
    nu = check_order(nu)
    if nu.imag == 0.0 and nu.real > -1:
        return real_zeros(nu, count, crossover)
    return complex_zeros(nu, count, crossover=crossover)


def zero_ratio_f(nu):
    """``f(nu) = a_1 / a_2`` for real ``nu`` in ``(-1, 2]``."""
    nu = complex(nu)
    if nu.imag != 0.0 or not (-1 < nu.real <= 2):
        raise DomainError("zero_ratio_f needs real nu in (-1, 2]")
    lat = real_zeros(nu.real, 2)
    return lat.table[1].real / lat.table[2].real


def find_order_with_ratio(x, bracket=(-0.999, 2.0), tol=1e-10):
    """Order ``nu`` in ``bracket`` with ``a_1/a_2 = x``, by bisection (f is increasing)."""
    lo, hi = map(float, bracket)
    if not (-1 < lo < hi <= 2):
        raise DomainError("bracket must lie in (-1, 2]")
    flo, fhi = zero_ratio_f(lo) - x, zero_ratio_f(hi) - x
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise BracketError(
            f"ratio {x} not bracketed: f({lo}) = {flo + x:.6g}, f({hi}) = {fhi + x:.6g}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = zero_ratio_f(mid) - x
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
