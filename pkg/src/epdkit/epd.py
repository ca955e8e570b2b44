"""Euler-Poisson-Darboux propagator on periodic grids.

The solution of ``Delta u = u_tt + ((n - 1 + 2 alpha)/t) u_t`` with
``u(., 0) = f``, ``u_t(., 0) = 0`` is the Fourier multiplier

    u^(xi, t) = Gamma(alpha + n/2) j_nu(t |xi|) f^(xi),   nu = alpha + (n - 2)/2,

which equals 1 at ``xi = 0`` because ``nu + 1 = alpha + n/2``.  For
``Re alpha > 0`` the same operator is an average of spherical means against
the weight ``(1 - u^2)^(alpha - 1) u^(n - 1)``; ``alpha = 0`` is the spherical
mean itself.  Both routes are implemented so they can check each other.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d
from scipy.special import roots_jacobi, roots_legendre

from .bessel import envelope, gamma, gamma_scaled_j, j
from .errors import DomainError, PoleError, RegimeError
from .grid import GridFunction

POLE_GUARD = 1e-6
CIRCLE_NODES = 64
SPHERE_POLAR_NODES = 32
SPHERE_AZIMUTH_NODES = 64
RADIAL_NODES = 32


def order_for(alpha, n):
    """Bessel order ``nu = alpha + (n - 2)/2``."""
    return complex(alpha) + (n - 2) / 2


def check_alpha(alpha, n):
    """Reject ``alpha`` within ``POLE_GUARD`` of the poles ``-n/2 - k``, k = 0, 1, ..."""
    alpha = complex(alpha)
    w = alpha + n / 2
    k = round(w.real)
    if k <= 0 and abs(w - k) < POLE_GUARD:
        pole = k - n / 2
        raise PoleError(
            f"alpha = {alpha} is within {POLE_GUARD:g} of the pole alpha = {pole:g} (n = {n})",
            pole=pole,
        )
    return alpha


class EpdMultiplier:
    """Table of ``Gamma(alpha + n/2) j_nu(t |xi_k|)`` on the frequency lattice ``xi_k = 2 pi k / L``.

    Frequencies are grouped by the integer ``|k|^2`` so each distinct radius
    is evaluated once; tables are cached per ``|t|``.
    """

    def __init__(self, alpha, n, L, P):
        if n not in (1, 2, 3):
            raise DomainError("dimension n must be 1, 2 or 3")
        self.alpha = check_alpha(alpha, n)
        self.n, self.L, self.P = n, float(L), int(P)
        self.nu = order_for(self.alpha, n)
        k = np.fft.fftfreq(self.P, d=1.0 / self.P).round().astype(np.int64)
        grids = np.meshgrid(*([k] * n), indexing="ij")
        k2 = sum(g * g for g in grids)
        self._radii_sq, self._inverse = np.unique(k2.ravel(), return_inverse=True)
        self._xi = (2 * math.pi / self.L) * np.sqrt(self._radii_sq.astype(float))
        self._cache = {}

    @property
    def is_real(self):
        return self.alpha.imag == 0.0

    def radial(self, t):
        """Multiplier values for each distinct ``|xi|`` (sorted), and those radii."""
        t = abs(float(t))
        if t not in self._cache:
            vals = gamma_scaled_j(self.nu, t * self._xi)
            self._cache[t] = np.asarray(vals, dtype=complex)
        return self._xi, self._cache[t]

    def table(self, t):
        _, vals = self.radial(t)
        return vals[self._inverse].reshape((self.P,) * self.n)

    def symbol(self, xi, t):
        """Multiplier at arbitrary ``|xi|`` (not cached)."""
        return gamma_scaled_j(self.nu, abs(float(t)) * np.asarray(xi, dtype=float))


@functools.lru_cache(maxsize=32)
def multiplier_for(alpha, n, L, P):
    return EpdMultiplier(alpha, n, L, P)


def _multiplier(f, alpha):
    return multiplier_for(complex(alpha), f.n, f.L, f.P)


def apply_multiplier(f, table, real_symbol=True):
    out = np.fft.ifftn(np.fft.fftn(f.values) * table)
    if not f.is_complex and real_symbol:
        out = out.real
    return f.with_values(out)


def propagate(f, t, alpha):
    """``u(., t)`` for initial data ``f``; even in ``t``."""
    m = _multiplier(f, alpha)
    return apply_multiplier(f, m.table(t), m.is_real)


def laplacian(f):
    """Spectral Laplacian (exact for trigonometric polynomials below Nyquist)."""
    lap = -((2 * math.pi / f.L) ** 2) * f.k_squared()
    return apply_multiplier(f, lap)


# -- quadrature route -------------------------------------------------------


def _sphere_rule(n):
    """Directions and weights (summing to 1) for averaging over S^{n-1}."""
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    if n == 2:
        th = 2 * math.pi * np.arange(CIRCLE_NODES) / CIRCLE_NODES
        return np.column_stack([np.cos(th), np.sin(th)]), np.full(CIRCLE_NODES, 1.0 / CIRCLE_NODES)
    if n == 3:
        c, wc = roots_legendre(SPHERE_POLAR_NODES)
        ph = 2 * math.pi * np.arange(SPHERE_AZIMUTH_NODES) / SPHERE_AZIMUTH_NODES
        C, PH = np.meshgrid(c, ph, indexing="ij")
        S = np.sqrt(1 - C**2)
        dirs = np.column_stack([C.ravel(), (S * np.cos(PH)).ravel(), (S * np.sin(PH)).ravel()])
        w = np.repeat(wc / 2, SPHERE_AZIMUTH_NODES) / SPHERE_AZIMUTH_NODES
        return dirs, w
    raise DomainError("dimension n must be 1, 2 or 3")


def _points(f, x):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != f.n:
        raise DomainError(f"evaluation points must have {f.n} coordinates")
    return x


def _means_at_radii(f, radii, x):
    """Spherical means ``M^rho f(x)`` for every radius in ``radii`` and point in ``x``."""
    dirs, w = _sphere_rule(f.n)
    out = np.empty((len(radii), len(x)), dtype=complex if f.is_complex else float)
    for i, rho in enumerate(radii):
        pts = (x[:, None, :] + rho * dirs[None, :, :]).reshape(-1, f.n)
        vals = f.evaluate(pts).reshape(len(x), len(w))
        out[i] = vals @ w
    return out


def spherical_mean(f, t, x):
    """Average of ``f`` over the sphere of radius ``t`` about each point of ``x``."""
    x = _points(f, x)
    return _means_at_radii(f, [float(t)], x)[0]


def m_alpha_quadrature(f, t, alpha, x, nodes=RADIAL_NODES):
    """``c * int_0^1 M^{tu} f(x) (1 - u^2)^(alpha - 1) u^(n - 1) du`` by Gauss-Jacobi.

    ``c = 2 Gamma(alpha + n/2) / (Gamma(alpha) Gamma(n/2))`` makes ``f = 1`` map
    to 1.  Only ``Re alpha > 0``; use ``propagate`` otherwise.
    """
    alpha = complex(alpha)
    if not alpha.real > 0:
        raise RegimeError("quadrature route needs Re alpha > 0; use propagate for other alpha")
    x = _points(f, x)
    n = f.n
    a = alpha.real - 1.0
    s, w = roots_jacobi(nodes, a, n - 1.0)
    u = (1 + s) / 2
    # (1-u^2)^(alpha-1) u^(n-1) du = 2^{-a-(n-1)-1} (1-s)^a (1+s)^(n-1) (1+u)^a ds
    # times the oscillating factor (1-u^2)^(i Im alpha), kept with the integrand
    smooth = (1 + u) ** a * (1 - u * u) ** (1j * alpha.imag)
    c = 2 * gamma(alpha + n / 2) / (gamma(alpha) * gamma(n / 2))
    means = _means_at_radii(f, abs(float(t)) * u, x)
    total = c * 2.0 ** (-a - n) * ((w * smooth) @ means)
    if not f.is_complex and alpha.imag == 0:
        return total.real
    return total


def quadrature_route(f, t, alpha, x):
    """Quadrature value of the propagator: spherical mean for ``alpha = 0``, Jacobi rule for ``Re alpha > 0``."""
    if complex(alpha) == 0:
        return spherical_mean(f, abs(float(t)), x)
    return m_alpha_quadrature(f, t, alpha, x)


def eigen_check(k, t, alpha, n, L=2 * math.pi, P=16, route="spectral", points=None):
    """Relative sup error of the propagator on ``cos(2 pi k x_1 / L)`` against
    ``Gamma(alpha + n/2) j_nu(lambda t) cos(lambda x_1)``.

    ``route`` is ``"spectral"`` (whole grid) or ``"quadrature"`` (at ``points``,
    by default a few fixed off-grid locations).
    """
    f = GridFunction.cosine(n, P, L, (k,))
    lam = 2 * math.pi * abs(k) / L
    factor = complex(gamma_scaled_j(order_for(alpha, n), lam * abs(t)))
    if route == "spectral":
        got = propagate(f, t, alpha).values
        want = factor * f.values
    elif route == "quadrature":
        if points is None:
            points = np.array([[0.0] * n, [0.37] + [0.11] * (n - 1), [1.9] + [-0.7] * (n - 1)]) * (L / (2 * math.pi))
        pts = _points(f, points)
        got = quadrature_route(f, t, alpha, pts)
        want = factor * np.cos(lam * pts[:, 0])
    else:
        raise DomainError(f"unknown route {route!r}")
    scale = max(np.max(np.abs(want)), np.max(np.abs(f.values)) * 1e-12, 1e-300)
    return float(np.max(np.abs(got - want)) / scale)


# -- PDE residual ------------------------------------------------------------


def epd_residual(f, alpha, t_values, h_t):
    """Sup norm of ``Delta u - u_tt - ((n - 1 + 2 alpha)/t) u_t`` at each ``t``.

    Time derivatives are centered differences with step ``h_t``; the Laplacian
    is spectral.
    """
    coef = f.n - 1 + 2 * complex(alpha)
    out = []
    for t in np.atleast_1d(t_values):
        t = float(t)
        if t <= 2 * h_t:
            raise DomainError(f"t = {t} too close to 0 for h_t = {h_t} (need t > 2 h_t)")
        um = propagate(f, t - h_t, alpha).values
        u0 = propagate(f, t, alpha)
        up = propagate(f, t + h_t, alpha).values
        u_tt = (up - 2 * u0.values + um) / h_t**2
        u_t = (up - um) / (2 * h_t)
        res = laplacian(u0).values - u_tt - (coef / t) * u_t
        out.append(float(np.max(np.abs(res))))
    return np.array(out)


def convergence_order(f, alpha, t_values, h_t=0.1, levels=3):
    """Observed orders ``log2(res(h)/res(h/2))`` for successive halvings.

    Returns ``(orders, residuals)`` with shapes ``(levels - 1, len(t))`` and
    ``(levels, len(t))``.
    """
    res = np.array([epd_residual(f, alpha, t_values, h_t / 2**i) for i in range(levels)])
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log2(res[:-1] / res[1:])
    return orders, res


# -- Asgeirsson symmetry -----------------------------------------------------


def _double_circle_mean(f, s, t, x, ns=48, nt=64):
    th_s = 2 * math.pi * np.arange(ns) / ns
    th_t = 2 * math.pi * np.arange(nt) / nt
    ds = s * np.column_stack([np.cos(th_s), np.sin(th_s)])
    dt = t * np.column_stack([np.cos(th_t), np.sin(th_t)])
    pts = (x[:, None, None, :] + ds[None, :, None, :] + dt[None, None, :, :]).reshape(-1, 2)
    return f.evaluate(pts).reshape(len(x), ns * nt).mean(axis=1)


def asgeirsson_check(f, alpha, x, s_values, t_values=None, route="spectral"):
    """Max of ``|U(s, t) - U(t, s)|`` with ``U(s, t) = (u(., t) * m^s)(x)``.

    ``route="quadrature"`` needs ``alpha = 0`` and ``n = 2``; it averages over
    two circles with different node counts, so the symmetry is not built in.
    """
    t_values = s_values if t_values is None else t_values
    if complex(alpha).real < (1 - f.n) / 2:
        raise DomainError("symmetry check needs Re alpha >= (1 - n)/2")
    x = _points(f, x)
    worst = 0.0
    for s in s_values:
        for t in t_values:
            if route == "spectral":
                ust = propagate(propagate(f, t, alpha), s, alpha).evaluate(x)
                uts = propagate(propagate(f, s, alpha), t, alpha).evaluate(x)
            elif route == "quadrature":
                if complex(alpha) != 0 or f.n != 2:
                    raise DomainError("quadrature route is implemented for alpha = 0, n = 2")
                ust = _double_circle_mean(f, s, t, x)
                uts = _double_circle_mean(f, t, s, x)
            else:
                raise DomainError(f"unknown route {route!r}")
            worst = max(worst, float(np.max(np.abs(ust - uts))))
    return worst


# -- slow decrease -----------------------------------------------------------


@dataclass(frozen=True)
class SlowDecrease:
    nu: complex
    t: float
    c: float
    exponent: float
    xi: np.ndarray
    profile: np.ndarray

    def to_dict(self):
        return {"nu": [self.nu.real, self.nu.imag], "t": self.t, "c": self.c, "exponent": self.exponent}


def slow_decrease_profile(nu, t, xi_max, per_window=16):
    """Windowed maximum of ``|j_nu(t s)|`` over ``|s - xi| <= pi/(2t)``.

    Returns the largest ``c`` with ``max >= c (1 + t xi)^(-Re nu - 1/2)`` on the
    grid and the fitted log-log slope of the windowed maximum.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    nu = complex(nu)
    half = math.pi / (2 * t)
    step = half / per_window
    s = step * np.arange(int(math.ceil((xi_max + half) / step)) + 1)
    vals = np.abs(j(nu, t * s))
    win = maximum_filter1d(vals, size=2 * per_window + 1, mode="nearest")
    keep = s <= xi_max
    xi, prof = s[keep], win[keep]
    weight = (1 + t * xi) ** (nu.real + 0.5)
    c = float(np.min(prof * weight))
    tail = xi >= xi_max / 10
    slope = float(np.polyfit(np.log1p(t * xi[tail]), np.log(prof[tail]), 1)[0])
    return SlowDecrease(nu, float(t), c, slope, xi, prof)


def envelope_ratio(nu, z):
    """``|j_nu(z)|`` over its large-argument amplitude; O(1) away from zeros."""
    return np.abs(j(nu, z)) / envelope(nu, z)
