"""Zero-ratio rationals, Liouville-type chains and covering measures.

Everything here runs over a *lattice*: an increasing sequence ``a_1 < a_2 < ...``
exposing ``value(m)``, ``ratio(k, n)``, ``error_bound(m)``,
``index_at_least(n, x)``, ``values_array(m_max)``, ``covers(m)`` and the
``exact`` flag.  The zero lattice of ``j_nu`` is the main instance;
``ArithmeticLattice`` and ``FiniteLattice`` wrap other discrete sets.

Exact lattices (arithmetic progressions, ``nu = 1/2``) have rational ratios
``k/n`` and are handled with ``fractions.Fraction`` throughout.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .errors import DomainError, RegimeError

DEFAULT_CUTOFF = 10
DEFAULT_C = 3
MAX_DPS = 5000


def _to_fraction(x):
    """Exact rational for ``x``; floats are read through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Fraction(man) * Fraction(2) ** exp
    return Fraction(repr(float(x)))


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class ArithmeticLattice:
    """The lattice ``a_m = step * m``; ratios are exactly ``k/n``."""

    step: float = 1.0
    exact: bool = field(default=True, init=False)

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError("step must be positive")

    def covers(self, m):
        return m >= 1

    def value(self, m):
        if m < 1:
            raise DomainError("index must be >= 1")
        step = mpmath.pi if self.step == math.pi else mpmath.mpf(self.step)
        return m * step

    def ratio(self, k, n):
        if k < 1 or n < 1:
            raise DomainError("index must be >= 1")
        return Fraction(k, n)

    def error_bound(self, m):
        return 0.0

    def index_at_least(self, n, x):
        return max(1, math.ceil(_to_fraction(x) * n))

    def values_array(self, m_max):
        return self.step * np.arange(1, m_max + 1, dtype=float)


@dataclass(frozen=True)
class FiniteLattice:
    """A finite increasing set of positive reals used as a lattice."""

    points: tuple
    exact: bool = field(default=False, init=False)

    def covers(self, m):
        return 1 <= m <= len(self.points)

    def _check(self, m):
        if not self.covers(m):
            raise DomainError(f"index {m} outside the finite lattice (size {len(self.points)})")

    def value(self, m):
        self._check(m)
        return mpmath.mpf(self.points[m - 1])

    def ratio(self, k, n):
        return self.value(k) / self.value(n)

    def error_bound(self, m):
        self._check(m)
        return 0.0

    def index_at_least(self, n, x):
        target = float(x) * self.points[n - 1]
        idx = int(np.searchsorted(np.asarray(self.points), target, side="left")) + 1
        self._check(idx)
        return idx

    def values_array(self, m_max):
        self._check(m_max)
        return np.asarray(self.points[:m_max], dtype=float)


def generalized_lattice(values=None, step=None):
    """Wrap a discrete set as a lattice.

    Pass ``step`` for the arithmetic progression ``step * {1, 2, ...}``
    (exact ratios), or ``values`` for a finite increasing set.
    """
    if step is not None:
        return ArithmeticLattice(float(step))
    if values is None:
        raise DomainError("need values or step")
    pts = np.sort(np.asarray(values, dtype=float).ravel())
    if pts.size == 0 or pts[0] <= 0:
        raise DomainError("lattice values must be positive")
    if pts.size > 1 and np.min(np.diff(pts)) <= 0:
        raise DomainError("lattice values must be separated (distinct)")
    return FiniteLattice(tuple(float(v) for v in pts))


def _covered_bound(lattice, bound):
    if hasattr(lattice, "points"):
        return min(bound, len(lattice.points))
    return bound


def is_jnu_rational(x, lattice, index_bound, tol=1e-12):
    """Search for ``(k, n)`` with ``|x - a_k/a_n| <= tol`` and ``n, k <= index_bound``.

    Returns the witness with the smallest ``n``, or None when nothing is found
    within the bound (which does not prove irrationality).
    """
    x = float(x)
    if not x > 0:
        raise DomainError("x must be positive")
    m_max = _covered_bound(lattice, int(index_bound))
    a = lattice.values_array(m_max)
    targets = x * a
    idx = np.searchsorted(a, targets)
    for n in range(1, m_max + 1):
        for k in (idx[n - 1] - 1, idx[n - 1]):
            if 0 <= k < m_max:
                r = lattice.ratio(int(k) + 1, n)
                if abs(x - float(r)) <= tol:
                    return int(k) + 1, n
    return None


def theta(lattice, n, x):
    """``a_{l+1}/a_n`` where ``a_{l-1}/a_n < x <= a_l/a_n``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if lattice.exact:
        x = _to_fraction(x)
        ell = math.ceil(x * n)
        if ell < 2:
            raise DomainError(f"x = {x} must exceed a_1/a_n = 1/{n}")
        return Fraction(ell + 1, n)
    if not x > lattice.ratio(1, n):
        raise DomainError(f"x = {x} must exceed a_1/a_n")
    ell = lattice.index_at_least(n, x)
    return lattice.ratio(ell + 1, n)


def fit_theta_constant(lattice, n_max=1000, samples=500, x_max=10.0, seed=0):
    """Smallest C with ``1/(Cn) <= theta(n, x) - x <= C/n`` on random samples.

    Returns ``(C, samples)`` where samples is a list of ``(n, x, theta - x)``.
    """
    rng = np.random.default_rng(seed)
    worst = 1.0
    rows = []
    with mpmath.workdps(30):
        for _ in range(samples):
            n = int(rng.integers(1, n_max + 1))
            lo = float(lattice.ratio(1, n))
            x = float(rng.uniform(lo, x_max))
            if x <= lo:
                continue
            d = float(theta(lattice, n, x)) - x
            rows.append((n, x, d))
            worst = max(worst, d * n, 1.0 / (d * n))
    return worst, rows


def _cutoff_terms():
    m = 1
    while True:
        yield math.factorial(2 * m)
        m += 1


def validate_cutoff(N, C):
    """True iff ``1 + N^-2 + N^-24 + N^-720 + ... < min(C, N / C**2)``.

    The sum is accumulated exactly until the remaining tail (at most twice the
    next term) can no longer change the decision.
    """
    N = int(N)
    if N < 2:
        raise DomainError("N must be >= 2")
    C = _to_fraction(C)
    if not C > 1:
        raise DomainError("C must be > 1")
    rhs = min(C, Fraction(N) / (C * C))
    partial = Fraction(1)
    for depth, e in enumerate(_cutoff_terms()):
        if partial >= rhs:
            return False
        nxt = Fraction(1, N**e)
        if partial + 2 * nxt < rhs:
            return True
        partial += nxt
        if depth > 3:
            # the remaining tail is below N**-40320; the comparison is an exact tie
            return partial < rhs


def chain_index(N, m, bit):
    """``n_m = N**((2m-1)!)`` if bit else ``N**((2m)!)``."""
    return N ** math.factorial(2 * m - 1) if bit else N ** math.factorial(2 * m)


def required_dps(N, bits):
    """Decimal digits needed to resolve a chain with these bits."""
    n_last = max(chain_index(N, m, b) for m, b in enumerate(bits, start=1))
    digits = int(n_last.bit_length() * math.log10(2)) + 1
    return 2 * digits + 30


@dataclass(frozen=True)
class ThetaChain:
    """A finite Liouville-type chain ``Theta_m = theta(n_m, Theta_{m-1})``.

    ``errors[m]`` bounds the numerical error of ``values[m]`` (zero for exact
    lattices); ``tail_bound`` bounds ``Theta - Theta_M`` over all continuations
    of the bit string.
    """

    bits: tuple
    cutoff: int
    constant: Fraction
    x_start: object
    indices: tuple = field(repr=False)
    values: tuple = field(repr=False)
    errors: tuple = field(repr=False)
    tail_bound: Fraction = field(repr=False)
    exact: bool = True
    dps: int = 0

    @property
    def depth(self):
        return len(self.bits)

    def increments(self):
        prev = self.x_start
        out = []
        for v in self.values:
            out.append(v - prev)
            prev = v
        return out

    def interval(self):
        """Certified enclosure of every infinite continuation's limit."""
        v, e = self.values[-1], self.errors[-1]
        if self.exact:
            return v, v + self.tail_bound
        return v - e, v + e + _to_mpf(self.tail_bound)

    def to_dict(self, digits=40):
        # enough digits to separate successive values, capped for huge indices
        needed = int(self.indices[-1].bit_length() * math.log10(2)) + 10
        digits = max(digits, min(needed, 5000))

        def dec(v):
            with mpmath.workdps(digits + 10):
                return mpmath.nstr(_to_mpf(v) if isinstance(v, Fraction) else v, digits)

        return {
            "bits": "".join(str(b) for b in self.bits),
            "cutoff": self.cutoff,
            "constant": str(self.constant),
            "x_start": str(self.x_start),
            "indices": [
                f"{self.cutoff}^{math.factorial(2 * m - 1) if b else math.factorial(2 * m)}"
                for m, b in enumerate(self.bits, start=1)
            ],
            "values": [dec(v) for v in self.values],
            "exact_values": [f"{v.numerator}/{v.denominator}" for v in self.values]
            if self.exact and all(v.denominator.bit_length() <= 4000 for v in self.values)
            else None,
            "certified_error": [float(e) for e in self.errors],
            "tail_bound": dec(self.tail_bound),
        }


def theta_chain(lattice, bits, N=DEFAULT_CUTOFF, x_start=0.5, C=DEFAULT_C, max_dps=MAX_DPS):
    """Build the chain for a finite bit string ``bits`` (its length is the depth)."""
    bits = tuple(int(b) for b in bits)
    if not bits or any(b not in (0, 1) for b in bits):
        raise DomainError("bits must be a non-empty string of 0/1")
    if not validate_cutoff(N, C):
        raise DomainError(f"cutoff N = {N} fails the admissibility test for C = {C}")
    C = _to_fraction(C)
    M = len(bits)
    indices = tuple(chain_index(N, m, b) for m, b in enumerate(bits, start=1))
    tail = 2 * C / Fraction(N ** math.factorial(2 * M + 1))
    if lattice.exact:
        x = _to_fraction(x_start)
        values = []
        for n in indices:
            x = theta(lattice, n, x)
            values.append(x)
        return ThetaChain(bits, N, C, _to_fraction(x_start), indices, tuple(values),
                          tuple(0 for _ in values), tail, True)
    dps = required_dps(N, bits)
    if dps > max_dps:
        raise RegimeError(
            f"depth {M} needs about {dps} significant digits (max_dps = {max_dps}); "
            "use an exact lattice or a shorter bit string"
        )
    with mpmath.workdps(dps):
        x = mpmath.mpf(str(x_start))
        values, errors = [], []
        for n in indices:
            ell = lattice.index_at_least(n, x)
            if ell < 2:
                raise DomainError("chain fell below a_1/a_n")
            k = ell + 1
            x = lattice.ratio(k, n)
            an = lattice.value(n)
            err = (lattice.error_bound(k) + abs(x) * lattice.error_bound(n)) / abs(an)
            values.append(x)
            errors.append(mpmath.mpf(err) + mpmath.mpf(10) ** (-dps + 5))
    return ThetaChain(bits, N, C, x_start, indices, tuple(values), tuple(errors), tail, False, dps)


def rapid_approximation_bounds(chain, lattice, m):
    """Bounds on ``|Theta - Theta_m|``.

    Returns ``(index_form, zero_form)``: ``C**2 / n_m**(2m+1)``, which follows
    from the tail estimate, and ``C**3 / a_{n_m}**(2m+1)``, which additionally
    needs ``(a_n/n)**(2m+1) <= C``.
    """
    C = chain.constant
    n = chain.indices[m - 1]
    index_form = C * C / Fraction(n) ** (2 * m + 1)
    with mpmath.workdps(max(50, chain.dps)):
        zero_form = _to_mpf(C) ** 3 / lattice.value(n) ** (2 * m + 1)
    return index_form, zero_form


@dataclass(frozen=True)
class RatioApproximation:
    target: object = field(repr=False)
    k: int
    n: int
    gap: float
    exponent: float

    def to_dict(self):
        return {"target": float(self.target), "k": self.k, "n": self.n,
                "gap": float(self.gap), "exponent": float(self.exponent)}


def ratio_approximation(x, lattice, k, n):
    """Gap and quality exponent ``-log(gap)/log(a_n)`` of ``a_k/a_n`` as an approximation to ``x``."""
    with mpmath.workdps(60):
        if lattice.exact:
            gap = abs(_to_fraction(x) - lattice.ratio(k, n))
            gap_mp = _to_mpf(gap)
        else:
            gap_mp = abs(_to_mpf(x) - lattice.ratio(k, n))
        an = lattice.value(n)
        if gap_mp == 0:
            expo = math.inf
        elif an <= 1:
            expo = -math.inf
        else:
            expo = float(-mpmath.log(gap_mp) / mpmath.log(an))
        return RatioApproximation(x, int(k), int(n), gap_mp, expo)


def _convergents(x):
    """Continued-fraction convergents ``(p, q)`` of a Fraction."""
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        a = x.numerator // x.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield h1, k1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


_SCAN_LIMIT = 200_000


def liouville_quality(x, lattice, denominator_bound):
    """Best quality exponent over ratios ``a_k/a_n`` with ``a_n <= denominator_bound``.

    Exact lattices scan small denominators directly and larger ones through
    continued-fraction convergents: any ratio beating ``a_n**-2`` is a
    convergent, so the maximum is found whenever it exceeds 2.
    """
    best = None

    def consider(k, n):
        nonlocal best
        if k < 1 or not lattice.covers(k):
            return
        cand = ratio_approximation(x, lattice, k, n)
        if best is None or cand.exponent > best.exponent:
            best = cand

    xf = float(x)
    if not xf > 0:
        raise DomainError("x must be positive")
    if lattice.exact:
        scale = float(lattice.value(1))
        n_cap = int(mpmath.floor(mpmath.mpf(denominator_bound) / lattice.value(1)))
        n_scan = min(n_cap, _SCAN_LIMIT)
        if n_scan >= 1:
            ns = np.arange(1, n_scan + 1, dtype=float)
            ks = np.maximum(np.rint(xf * ns), 1)
            with np.errstate(divide="ignore"):
                q = -np.log(np.abs(xf - ks / ns)) / np.log(ns * scale)
            q[ns * scale <= 1] = -np.inf
            for i in np.argsort(q)[-5:]:
                consider(int(ks[i]), int(ns[i]))
        for p, qd in _convergents(_to_fraction(x)):
            if qd > n_cap:
                break
            consider(p, qd)
        return best
    m = 1
    while lattice.covers(m + 1) and float(lattice.value(m + 1)) <= denominator_bound:
        m += 1
        if m >= _SCAN_LIMIT:
            break
    if float(lattice.value(1)) > denominator_bound:
        raise DomainError("denominator_bound is below a_1")
    a = lattice.values_array(m)
    idx = np.clip(np.searchsorted(a, xf * a), 1, m - 1) if m > 1 else np.zeros(m, int)
    for n in range(1, m + 1):
        for k in (idx[n - 1], idx[n - 1] + 1):
            if 1 <= k <= m:
                gap = abs(xf - a[k - 1] / a[n - 1])
                if gap < 1e-9 or best is None or a[n - 1] > 1 and gap > 0 and \
                        -math.log(gap) / math.log(a[n - 1]) > best.exponent - 1e-9:
                    consider(int(k), n)
    return best


@dataclass(frozen=True)
class MeasureCover:
    L: float
    p: float
    n_max: int
    measure: float
    bound: float
    c3: float
    intervals: int

    def to_dict(self):
        return dict(self.__dict__)


def measure_cover(lattice, L, p, n_max, dps=50):
    """Lebesgue measure of the union over ``n <= n_max`` of ``a_n**-p``-neighbourhoods
    of the ratios ``a_k/a_n`` inside ``(0, L)``, with the analytic bound
    ``2*C3*L*sum(n / a_n**p)`` where ``C3 >= K(L, n)/(L n)``.
    """
    if not (L > 0 and p > 0 and n_max >= 1):
        raise DomainError("need L > 0, p > 0 and n_max >= 1")
    with mpmath.workdps(dps):
        Lm = mpmath.mpf(L)
        spans = []
        k_ratio = 0.0
        weights = mpmath.mpf(0)
        cache = []

        def value(k):
            while len(cache) < k:
                cache.append(lattice.value(len(cache) + 1))
            return cache[k - 1]

        for n in range(1, n_max + 1):
            an = value(n)
            rad = an ** (-mpmath.mpf(p))
            K = 0
            k = 1
            while lattice.covers(k):
                # exact lattices: correctly rounded k/n, so equal rationals coincide
                r = mpmath.mpf(k) / n if lattice.exact else value(k) / an
                if r >= Lm:
                    break
                K = k
                spans.append((max(r - rad, mpmath.mpf(0)), min(r + rad, Lm)))
                k += 1
            k_ratio = max(k_ratio, K / (float(L) * n))
            weights += n / an ** mpmath.mpf(p)
        spans.sort(key=lambda s: (float(s[0]), s[0]))
        total = mpmath.mpf(0)
        cur_lo, cur_hi = spans[0]
        for lo, hi in spans[1:]:
            if lo > cur_hi:
                total += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
            elif hi > cur_hi:
                cur_hi = hi
        total += cur_hi - cur_lo
        c3 = k_ratio * (1 + 1e-9)
        bound = 2 * c3 * Lm * weights
        return MeasureCover(float(L), float(p), int(n_max), float(total), float(bound), c3, len(spans))
