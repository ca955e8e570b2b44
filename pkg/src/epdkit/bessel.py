"""Normalized Bessel functions ``j_nu(z) = (z/2)**(-nu) * J_nu(z)``.

Order and argument may both be complex.  Two evaluation routes are used:

* the power series, summed in extended precision because its alternating
  terms cancel by roughly ``exp(|z|)`` before converging;
* Hankel's large-argument expansion in double precision, truncated
  adaptively at its smallest term.

``j_nu`` is even and entire, so arguments with negative real part are
reflected before either route is applied.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, PoleError, RegimeError

DEFAULT_CROSSOVER = 25.0
ASYMPTOTIC_MIN_RADIUS = 10.0
DEFAULT_SERIES_TOL = 1e-17
SERIES_MAX_TERMS = 4000
_HANKEL_MAX_TERMS = 60
_LN10 = math.log(10.0)


def gamma(w):
    """Complex Gamma function.

    Raises PoleError at ``w = 0, -1, -2, ...``.
    """
    w = complex(w)
    if w.imag == 0.0 and w.real <= 0.0 and w.real == math.floor(w.real):
        raise PoleError(f"Gamma has a pole at w = {int(w.real)}", pole=w.real)
    return complex(mpmath.gamma(mpmath.mpc(w.real, w.imag)))


def check_order(nu):
    """Return ``nu`` as a complex number, rejecting negative integer orders."""
    nu = complex(nu)
    if nu.imag == 0.0 and nu.real < 0 and nu.real == math.floor(nu.real):
        raise PoleError(f"order nu = {int(nu.real)} is a negative integer", pole=nu.real)
    return nu


def _series_scalar(nu, z, tol, scaled):
    az = abs(z)
    # digits lost to cancellation between terms of size ~exp(|z|)
    extra = int((az + abs(nu.imag) * math.pi / 2) / _LN10) + 8
    with mpmath.workdps(20 + extra):
        half = mpmath.mpc(z.real, z.imag) / 2
        q = -half * half
        nu_mp = mpmath.mpc(nu.real, nu.imag)
        term = mpmath.mpf(1) if scaled else mpmath.rgamma(nu_mp + 1)
        total = term
        floor = abs(term) * (1 + az) ** (-(abs(nu.real) + 1.0)) * 1e-6
        if az == 0:
            return complex(total)
        k_safe = az + abs(nu) + 1
        for k in range(1, SERIES_MAX_TERMS):
            term = term * q / (k * (k + nu_mp))
            total += term
            # past k_safe the term ratio is below 1/4, so the tail is < |term|
            if k > k_safe and abs(term) <= tol * max(abs(total), floor):
                return complex(total)
    raise RegimeError(
        f"power series for j_nu did not converge in {SERIES_MAX_TERMS} terms at |z| = {az:.4g}"
    )


def _hankel(nu, z, scaled):
    """Hankel expansion on an array with Re z >= 0 (no regime checks)."""
    mu = 4.0 * nu * nu
    inv = 1.0 / z
    omega = z - (nu / 2.0 + 0.25) * math.pi
    p_sum = np.ones_like(z)
    q_sum = np.zeros_like(z)
    term = np.ones_like(z)
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, _HANKEL_MAX_TERMS):
        term = term * ((mu - (2 * k - 1) ** 2) / (8.0 * k)) * inv
        mag = np.abs(term)
        # asymptotic series: stop at the smallest term
        active &= mag < prev
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p_sum = np.where(active, p_sum + sign * term, p_sum)
        else:
            q_sum = np.where(active, q_sum + sign * term, q_sum)
        active &= mag > 1e-18 * np.maximum(np.abs(p_sum), np.abs(q_sum))
        if not active.any():
            break
        prev = mag
    bracket = p_sum * np.cos(omega) - q_sum * np.sin(omega)
    power = np.exp(-(nu + 0.5) * np.log(z))
    out = (2.0 ** (nu + 0.5) / math.sqrt(math.pi)) * power * bracket
    if scaled:
        out = out * gamma(nu + 1)
    return out


def _reflect(arr):
    return np.where(arr.real < 0, -arr, arr)


def _evaluate(nu, z, crossover, tol, scaled):
    arr = np.asarray(z, dtype=complex)
    flat = _reflect(arr.ravel())
    out = np.empty_like(flat)
    big = np.abs(flat) >= crossover
    if big.any():
        out[big] = _hankel(nu, flat[big], scaled)
    for i in np.flatnonzero(~big):
        out[i] = _series_scalar(nu, complex(flat[i]), tol, scaled)
    if arr.ndim == 0:
        return complex(out[0])
    return out.reshape(arr.shape)


@dataclass(frozen=True)
class BesselEvaluator:
    """Evaluates ``j_nu`` and its derivative for one fixed order.

    Arguments with ``|z| < crossover_radius`` go through the series, the rest
    through the Hankel expansion.  Every method accepts scalars or arrays and
    returns complex values of the same shape.
    """

    order: complex
    series_tolerance: float = DEFAULT_SERIES_TOL
    crossover_radius: float = DEFAULT_CROSSOVER

    def __post_init__(self):
        object.__setattr__(self, "order", check_order(self.order))
        if not self.series_tolerance > 0:
            raise DomainError("series_tolerance must be positive")
        if not self.crossover_radius >= ASYMPTOTIC_MIN_RADIUS:
            raise DomainError(f"crossover_radius must be >= {ASYMPTOTIC_MIN_RADIUS}")

    def __call__(self, z):
        return _evaluate(self.order, z, self.crossover_radius, self.series_tolerance, False)

    def scaled(self, z):
        """``Gamma(nu + 1) * j_nu(z)``, equal to 1 at the origin."""
        return _evaluate(self.order, z, self.crossover_radius, self.series_tolerance, True)

    def series(self, z):
        arr = np.asarray(z, dtype=complex)
        vals = [_series_scalar(self.order, complex(v), self.series_tolerance, False)
                for v in _reflect(arr.ravel())]
        if arr.ndim == 0:
            return vals[0]
        return np.array(vals, dtype=complex).reshape(arr.shape)

    def asymptotic(self, z):
        arr = np.asarray(z, dtype=complex)
        if arr.size and np.min(np.abs(arr)) < ASYMPTOTIC_MIN_RADIUS:
            raise RegimeError(
                f"Hankel expansion needs |z| >= {ASYMPTOTIC_MIN_RADIUS}, got {np.min(np.abs(arr)):.4g}"
            )
        out = _hankel(self.order, _reflect(arr.ravel()), False)
        if arr.ndim == 0:
            return complex(out[0])
        return out.reshape(arr.shape)

    def derivative(self, z):
        """``d/dz j_nu(z) = -(z/2) * j_{nu+1}(z)``."""
        upper = BesselEvaluator(self.order + 1, self.series_tolerance, self.crossover_radius)
        arr = np.asarray(z, dtype=complex)
        out = -(arr / 2.0) * upper(arr)
        if arr.ndim == 0:
            return complex(out)
        return out


def j(nu, z, crossover=DEFAULT_CROSSOVER):
    """Normalized Bessel function ``j_nu(z)``."""
    return BesselEvaluator(nu, crossover_radius=crossover)(z)


def j_series(nu, z, tol=DEFAULT_SERIES_TOL):
    """Power-series value of ``j_nu(z)`` with truncation error below ``tol`` (relative)."""
    return BesselEvaluator(nu, series_tolerance=tol).series(z)


def j_asymptotic(nu, z):
    """Hankel-expansion value of ``j_nu(z)``; requires ``|z| >= 10``."""
    return BesselEvaluator(nu).asymptotic(z)


def j_derivative(nu, z, crossover=DEFAULT_CROSSOVER):
    return BesselEvaluator(nu, crossover_radius=crossover).derivative(z)


def gamma_scaled_j(nu, z, crossover=DEFAULT_CROSSOVER):
    """``Gamma(nu + 1) * j_nu(z)``: the Fourier symbol of the EPD kernel."""
    return BesselEvaluator(nu, crossover_radius=crossover).scaled(z)


def envelope(nu, x):
    """Large-argument amplitude ``|Gamma-free j_nu|`` on the real axis, used as an error scale."""
    nu = complex(nu)
    x = np.abs(np.asarray(x, dtype=float)) + 1.0
    return (2.0 ** (nu.real + 0.5) / math.sqrt(math.pi)) * x ** (-nu.real - 0.5) * math.cosh(
        math.pi * nu.imag / 2
    )
