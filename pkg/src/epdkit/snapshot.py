"""Recovering initial data from two snapshots ``g = f * m^s`` and ``h = f * m^r``.

Per frequency the two snapshots are ``d_s(xi) f^(xi)`` and ``d_r(xi) f^(xi)``
with ``d_t = Gamma(nu + 1) j_nu(t |xi|)``.  Inversion divides by whichever
denominator is larger; it breaks down where both vanish together, which
happens exactly when ``r/s`` is a ratio of zeros of ``j_nu``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .bessel import gamma, gamma_scaled_j, j, j_derivative
from .epd import check_alpha, multiplier_for, order_for, propagate
from .errors import DomainError, IncompatibleError
from .grid import GridFunction
from .liouville import is_jnu_rational
from .zeros import zero_lattice

DEFAULT_FLOOR = 1e-10
DEFAULT_COMPAT_TOL = 1e-8
DEFAULT_N_CANDIDATES = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0)


@dataclass(frozen=True)
class SnapshotProblem:
    g: GridFunction
    h: GridFunction
    r: float
    s: float
    alpha: complex

    def __post_init__(self):
        if self.g.values.shape != self.h.values.shape or self.g.L != self.h.L:
            raise DomainError("snapshots g and h must live on the same grid")
        r, s = abs(float(self.r)), abs(float(self.s))
        if r == 0 or s == 0:
            raise DomainError("snapshot times must be non-zero")
        if r == s:
            raise DomainError("snapshot times r and s must differ")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "alpha", check_alpha(self.alpha, self.g.n))

    @property
    def n(self):
        return self.g.n

    @property
    def nu(self):
        return order_for(self.alpha, self.n)

    def multiplier(self):
        return multiplier_for(self.alpha, self.n, self.g.L, self.g.P)


def make_problem(f_true, r, s, alpha):
    """Forward snapshots: ``g`` at time ``s`` and ``h`` at time ``r``."""
    if abs(float(r)) == abs(float(s)):
        raise DomainError("snapshot times r and s must differ")
    return SnapshotProblem(propagate(f_true, s, alpha), propagate(f_true, r, alpha), r, s, alpha)


def compatibility_residual(p, floor=1e-300):
    """``|g * m^r - h * m^s|_inf / max(|g|, |h|, floor)``."""
    lhs = propagate(p.g, p.r, p.alpha).values
    rhs = propagate(p.h, p.s, p.alpha).values
    scale = max(p.g.norm_inf(), p.h.norm_inf(), floor)
    return float(np.max(np.abs(lhs - rhs)) / scale)


# -- small denominators -------------------------------------------------------


@dataclass(frozen=True)
class ScanResult:
    """Lower-bound fit ``|j(rz)| + |j(sz)| >= C (1 + z)^-N`` on ``[0, z_max]``."""

    r: float
    s: float
    nu: complex
    z_max: float
    C: float
    N: float
    argmin: float
    constants: dict
    early_constants: dict
    normalized_min: float
    z: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)

    def to_dict(self):
        return {
            "r": self.r, "s": self.s, "nu": [self.nu.real, self.nu.imag], "z_max": self.z_max,
            "C": self.C, "N": self.N, "argmin": self.argmin,
            "constants": {str(k): v for k, v in self.constants.items()},
            "early_constants": {str(k): v for k, v in self.early_constants.items()},
            "normalized_min": self.normalized_min,
        }


def _denominator_sum(nu, r, s, z):
    return np.abs(j(nu, r * z)) + np.abs(j(nu, s * z))


def _polish(nu, r, s, z0, step):
    res = minimize_scalar(lambda q: float(_denominator_sum(nu, r, s, q)),
                          bounds=(max(z0 - step, 0.0), z0 + step), method="bounded",
                          options={"xatol": 1e-13})
    return float(res.x), float(res.fun)


def _lower_bounds(nu, r, s, z, D, n_candidates, step, limits, keep=3):
    """``min D (1+z)^N`` over ``[0, limit]`` for every candidate N and limit.

    Grid minima are polished once each with a bounded 1-D minimizer of D
    (the weight varies negligibly inside one grid cell).
    """
    interior = np.flatnonzero((D[1:-1] <= D[:-2]) & (D[1:-1] <= D[2:])) + 1
    picks = set()
    for N in n_candidates:
        w = D * (1 + z) ** N
        for lim in limits:
            sel = interior[z[interior] <= lim]
            picks.update(sel[np.argsort(w[sel])[:keep]].tolist())
    polished = [_polish(nu, r, s, float(z[i]), step) for i in sorted(picks)]
    out = {}
    for N in n_candidates:
        w = D * (1 + z) ** N
        for lim in limits:
            sel = z <= lim
            i = int(np.argmin(np.where(sel, w, np.inf)))
            best, where = float(w[i]), float(z[i])
            for zp, dp in polished:
                if zp <= lim and dp * (1 + zp) ** N < best:
                    best, where = dp * (1 + zp) ** N, zp
            out[N, lim] = (best, where)
    return out


STABILITY_SPAN = 8
STABILITY_RATIO = 0.5


def small_denominator_scan(r, s, nu, z_max, n_candidates=DEFAULT_N_CANDIDATES, step=None):
    """Fit the polynomial lower bound on ``|j_nu(rz)| + |j_nu(sz)|`` over ``[0, z_max]``.

    For each candidate ``N`` the largest valid ``C`` is the minimum of
    ``D (1+z)^N`` over a grid of step ``pi/(16 max(r, s))``, with every
    promising local minimum polished by a bounded 1-D minimizer.  The reported
    ``N`` is the smallest candidate whose ``C`` over ``[0, z_max]`` is at least
    half its value over ``[0, z_max/8]``: the bound has stopped degrading.
    ``normalized_min`` is the grid minimum of ``D (1+z)^(Re nu + 1/2)``, which
    stays bounded below when the zeros of ``j_nu`` sit off the real axis.
    """
    r, s = abs(float(r)), abs(float(s))
    nu = complex(nu)
    if z_max < 10 * math.pi / min(r, s):
        raise DomainError(f"z_max must be >= 10 pi / min(r, s) = {10 * math.pi / min(r, s):.4g}")
    if step is None:
        step = math.pi / (16 * max(r, s))
    z = step * np.arange(int(math.ceil(z_max / step)) + 1)
    z[-1] = min(z[-1], z_max)
    D = _denominator_sum(nu, r, s, z)
    early = z_max / STABILITY_SPAN
    bounds = _lower_bounds(nu, r, s, z, D, n_candidates, step, (z_max, early))
    full = {N: bounds[N, z_max][0] for N in n_candidates}
    part = {N: bounds[N, early][0] for N in n_candidates}
    chosen = next((N for N in n_candidates if full[N] > 0 and full[N] >= STABILITY_RATIO * part[N]),
                  n_candidates[-1])
    normalized = float(np.min(D * (1 + z) ** (nu.real + 0.5)))
    return ScanResult(r, s, nu, float(z_max), full[chosen], chosen, bounds[chosen, z_max][1],
                      full, part, normalized, z, D)


# -- reconstruction -------------------------------------------------------------


@dataclass(frozen=True)
class ReconstructionReport:
    f: GridFunction
    channel: np.ndarray = field(repr=False)
    d_r: np.ndarray = field(repr=False)
    d_s: np.ndarray = field(repr=False)
    flagged: tuple
    residual_g: float
    residual_h: float
    compatibility: float
    floor_policy: str
    fit: dict = None

    def to_dict(self):
        return {
            "flagged": [list(k) for k in self.flagged],
            "residual_g": self.residual_g,
            "residual_h": self.residual_h,
            "compatibility": self.compatibility,
            "floor_policy": self.floor_policy,
            "channel_r_fraction": float(np.mean(self.channel == "r")),
            "min_denominator": float(np.min(np.maximum(np.abs(self.d_r), np.abs(self.d_s)))),
            "fit": self.fit,
        }


def _floor_values(p, xi, floor):
    gam = abs(gamma(p.nu + 1))
    if floor is None or floor == "default":
        return np.full(xi.shape, DEFAULT_FLOOR), f"absolute {DEFAULT_FLOOR:g}", None
    if isinstance(floor, (int, float)):
        return np.full(xi.shape, float(floor)), f"absolute {float(floor):g}", None
    if floor == "auto":
        z_max = max(float(np.max(xi)), 10 * math.pi / min(p.r, p.s))
        scan = small_denominator_scan(p.r, p.s, p.nu, z_max)
        C, N = scan.C, scan.N
        fit = {"C": C, "N": N, "argmin": scan.argmin}
        # max(|d_r|, |d_s|) >= half the sum; a further 1/2 leaves room for the fit
        return 0.25 * gam * C * (1 + xi) ** (-N), f"auto C={C:.6g} N={N:g}", fit
    C, N = floor
    return float(C) * (1 + xi) ** (-float(N)), f"C={float(C):g} N={float(N):g}", {"C": float(C), "N": float(N)}


def reconstruct(p, floor="default", tol=DEFAULT_COMPAT_TOL):
    """Invert the snapshots frequency by frequency.

    ``floor`` is ``"default"`` (absolute 1e-10), a number (absolute floor),
    a pair ``(C, N)`` for ``C (1 + |xi|)^-N``, or ``"auto"`` for a floor taken
    from ``small_denominator_scan``.  Frequencies whose larger denominator is
    below the floor are flagged and set to zero.
    """
    resid = compatibility_residual(p)
    if resid > tol:
        raise IncompatibleError(
            f"snapshots are not compatible: residual {resid:.3e} > {tol:g}", residual=resid
        )
    m = p.multiplier()
    d_r, d_s = m.table(p.r), m.table(p.s)
    G, H = np.fft.fftn(p.g.values), np.fft.fftn(p.h.values)
    use_r = np.abs(d_r) > np.abs(d_s)
    best = np.where(use_r, d_r, d_s)
    xi = p.g.frequency_norm()
    floor_vals, label, fit = _floor_values(p, xi, floor)
    flagged_mask = np.abs(best) < floor_vals
    safe = np.where(flagged_mask, 1.0, best)
    F = np.where(use_r, H, G) / safe
    F[flagged_mask] = 0.0
    vals = np.fft.ifftn(F)
    if not (p.g.is_complex or p.h.is_complex) and m.is_real:
        vals = vals.real
    f = p.g.with_values(vals)
    ks = p.g.wavenumbers()
    flagged = tuple(sorted(tuple(int(k[idx]) for k in ks) for idx in zip(*np.nonzero(flagged_mask))))
    res_g = float(np.max(np.abs(propagate(f, p.s, p.alpha).values - p.g.values)))
    res_h = float(np.max(np.abs(propagate(f, p.r, p.alpha).values - p.h.values)))
    channel = np.where(use_r, "r", "s")
    return ReconstructionReport(f, channel, d_r, d_s, flagged, res_g, res_h, resid, label, fit)


def common_small_denominators(p_or_grid, r, s, alpha, tol=1e-8):
    """Lattice wave vectors where both ``|d_r|`` and ``|d_s|`` are at most ``tol``."""
    grid = p_or_grid.g if isinstance(p_or_grid, SnapshotProblem) else p_or_grid
    m = multiplier_for(complex(alpha), grid.n, grid.L, grid.P)
    both = (np.abs(m.table(r)) <= tol) & (np.abs(m.table(s)) <= tol)
    ks = grid.wavenumbers()
    return sorted(tuple(int(k[idx]) for k in ks) for idx in zip(*np.nonzero(both)))


# -- resonant witnesses ---------------------------------------------------------


@dataclass(frozen=True)
class KernelWitness:
    f: GridFunction
    z: float
    a: float
    b: float
    indices: tuple
    norm_r: float
    norm_s: float

    def to_dict(self):
        return {"z": self.z, "a": self.a, "b": self.b, "indices": list(self.indices),
                "L": self.f.L, "norm_r": self.norm_r, "norm_s": self.norm_s}


def kernel_witness(r, s, nu, lattice=None, index_bound=50, n=3, P=16, tol=1e-10):
    """``cos(z x_1)`` with ``z = a/r = b/s`` for zeros ``a, b``, if ``r/s`` is such a ratio.

    The box length is ``L = 2 pi / z`` so ``z`` is a lattice frequency.
    Returns None when no zero pair within ``index_bound`` matches.
    """
    r, s = abs(float(r)), abs(float(s))
    nu = complex(nu)
    if lattice is None:
        lattice = zero_lattice(nu.real if nu.imag == 0 else nu, max(index_bound, 2))
    hit = is_jnu_rational(r / s, lattice, index_bound, tol=tol)
    if hit is None:
        return None
    k, m = hit
    a, b = float(lattice.value(k)), float(lattice.value(m))
    z = a / r
    L = 2 * math.pi / z
    f = GridFunction.cosine(n, P, L, (1,))
    alpha = nu - (n - 2) / 2
    norm_r = propagate(f, r, alpha).norm_inf()
    norm_s = propagate(f, s, alpha).norm_inf()
    return KernelWitness(f, z, a, b, (k, m), norm_r, norm_s)


def strong_compatibility_residual(p, a, b, zero_tol=1e-8):
    """``|g * Psi^r - h * Psi^s|_inf`` with ``Psi^t = d_t / (|xi|^2 - (a/r)^2)``.

    At ``|xi| = a/r`` the quotient is replaced by its limit
    ``Gamma(nu+1) j_nu'(c) t^2 / (2c)`` with ``c = t a / r``.
    """
    nu = p.nu
    for name, c in (("a", a), ("b", b)):
        if abs(j(nu, c)) > zero_tol:
            raise DomainError(f"{name} = {c} is not a zero of j_nu (|j| = {abs(j(nu, c)):.3e})")
    xi0 = a / p.r
    if abs(b / p.s - xi0) > 1e-8 * max(1.0, xi0):
        raise DomainError("need a/r = b/s")
    xi = p.g.frequency_norm()
    near = np.abs(xi - xi0) <= 1e-9 * max(1.0, xi0)
    m = p.multiplier()
    gam = gamma(nu + 1)

    def psi(t):
        d = m.table(t)
        den = np.where(near, 1.0, xi**2 - xi0**2)
        out = d / den
        c = t * xi0
        out[near] = gam * complex(j_derivative(nu, c)) * t * t / (2 * c)
        return out

    G, H = np.fft.fftn(p.g.values), np.fft.fftn(p.h.values)
    diff = np.fft.ifftn(G * psi(p.r) - H * psi(p.s))
    return float(np.max(np.abs(diff)))

