"""Sampled functions on a periodic box ``[0, L)^n`` and their text file format.

A grid file is either a single JSON document::

    {"n": 2, "P": 16, "L": 6.28, "dtype": "f64", "layout": "row-major", "values": [...]}

or a one-line JSON header (same keys without ``values``) followed by one value
per line, complex values written as ``re,im``.  Values are written with 17
significant digits so a write/read round trip is bit-exact.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma

from .errors import DomainError

FORMAT_KEYS = ("n", "P", "L", "dtype", "layout")


def sphere_area(n):
    """Surface area of the unit sphere in R^n, ``2 pi^(n/2) / Gamma(n/2)``."""
    return 2 * math.pi ** (n / 2) / _gamma(n / 2)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values of a function on the ``P^n`` grid ``x_j = j L / P`` (row-major, axis 0 = x_1)."""

    values: np.ndarray
    L: float

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim not in (1, 2, 3):
            raise DomainError("dimension n must be 1, 2 or 3")
        P = v.shape[0]
        if any(s != P for s in v.shape):
            raise DomainError("grid must have the same number of points on every axis")
        if P < 8 or P & (P - 1):
            raise DomainError(f"points per axis must be a power of two >= 8, got {P}")
        if not self.L > 0:
            raise DomainError("box length L must be positive")
        v = v.astype(complex if np.iscomplexobj(v) else float, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "L", float(self.L))

    def __repr__(self):
        dtype = "c64" if self.is_complex else "f64"
        return f"GridFunction(n={self.n}, P={self.P}, L={self.L:.17g}, dtype={dtype})"

    @property
    def n(self):
        return self.values.ndim

    @property
    def P(self):
        return self.values.shape[0]

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)

    @property
    def spacing(self):
        return self.L / self.P

    def coordinates(self):
        """Tuple of broadcastable coordinate arrays, one per axis."""
        x = self.spacing * np.arange(self.P)
        return np.meshgrid(*([x] * self.n), indexing="ij")

    def wavenumbers(self):
        """Integer wavenumber arrays ``k`` (one per axis); frequencies are ``2 pi k / L``."""
        k = np.fft.fftfreq(self.P, d=1.0 / self.P).round().astype(int)
        return np.meshgrid(*([k] * self.n), indexing="ij")

    def k_squared(self):
        return sum(k * k for k in self.wavenumbers())

    def frequency_norm(self):
        return 2 * math.pi / self.L * np.sqrt(self.k_squared())

    def with_values(self, values):
        return GridFunction(values, self.L)

    def norm_inf(self):
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    # -- construction -------------------------------------------------------

    @classmethod
    def from_function(cls, fn, n, P, L):
        """Sample ``fn(x_1, ..., x_n)`` (vectorized) on the grid."""
        x = (L / P) * np.arange(P)
        coords = np.meshgrid(*([x] * n), indexing="ij")
        return cls(np.asarray(fn(*coords)) * np.ones((P,) * n), L)

    @classmethod
    def constant(cls, c, n, P, L):
        return cls(np.full((P,) * n, c), L)

    @classmethod
    def cosine(cls, n, P, L, k=(1,), amplitude=1.0, phase=0.0):
        """``amplitude * cos(2 pi k.x / L + phase)`` for an integer wave vector ``k``."""
        k = tuple(int(v) for v in k) + (0,) * (n - len(k))
        if any(abs(v) >= P // 2 for v in k):
            raise DomainError("wave vector must lie strictly below the Nyquist index")

        def fn(*xs):
            arg = sum(kk * xx for kk, xx in zip(k, xs)) * (2 * math.pi / L)
            return amplitude * np.cos(arg + phase)

        return cls.from_function(fn, n, P, L)

    @classmethod
    def random_trig(cls, n, P, L, kmax, seed=0, complex_values=False):
        """Random trigonometric polynomial with all wavenumbers ``|k_i| <= kmax``."""
        if kmax >= P // 2:
            raise DomainError("kmax must lie below the Nyquist index")
        rng = np.random.default_rng(seed)
        shape = (P,) * n
        coef = np.zeros(shape, dtype=complex)
        kk = np.fft.fftfreq(P, d=1.0 / P).round().astype(int)
        mask = np.ones(shape, dtype=bool)
        for ax in range(n):
            idx = [None] * n
            idx[ax] = slice(None)
            mask &= (np.abs(kk) <= kmax)[tuple(idx)]
        coef[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
        vals = np.fft.ifftn(coef) * coef.size
        if not complex_values:
            vals = vals.real
        return cls(vals, L)

    # -- interpolation ------------------------------------------------------

    def evaluate(self, points, tol=1e-14):
        """Trigonometric interpolant at arbitrary points, shape ``(M, n)``.

        Only modes with non-negligible coefficients are summed, which keeps
        quadrature over band-limited test functions cheap.  Energy at the
        Nyquist index makes the interpolant ambiguous and is rejected.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.n:
            raise DomainError(f"points must have {self.n} columns")
        coef = np.fft.fftn(self.values) / self.values.size
        scale = np.max(np.abs(coef)) if coef.size else 0.0
        keep = np.abs(coef) > tol * max(scale, 1e-300)
        ks = [k[keep] for k in self.wavenumbers()]
        if any(np.any(np.abs(k) == self.P // 2) for k in ks):
            raise DomainError("function has energy at the Nyquist index; refine the grid")
        c = coef[keep]
        phase = sum(np.outer(pts[:, i], ks[i]) for i in range(self.n)) * (2 * math.pi / self.L)
        out = np.exp(1j * phase) @ c
        if not self.is_complex:
            return out.real
        return out

    # -- file I/O -----------------------------------------------------------

    def header(self):
        return {"n": self.n, "P": self.P, "L": self.L,
                "dtype": "c64" if self.is_complex else "f64", "layout": "row-major"}

    def _rows(self):
        flat = self.values.ravel(order="C")
        if self.is_complex:
            return [f"{v.real:.17g},{v.imag:.17g}" for v in flat]
        return [f"{v:.17g}" for v in flat]

    def save(self, path):
        path = str(path)
        if path.endswith(".json"):
            doc = self.header()
            if self.is_complex:
                doc["values"] = [[float(v.real), float(v.imag)] for v in self.values.ravel()]
            else:
                doc["values"] = [float(v) for v in self.values.ravel()]
            with open(path, "w") as fh:
                json.dump(doc, fh)
            return
        with open(path, "w") as fh:
            fh.write(json.dumps(self.header()) + "\n")
            fh.write("\n".join(self._rows()) + "\n")

    @classmethod
    def load(cls, path):
        path = str(path)
        with open(path) as fh:
            text = fh.read()
        if path.endswith(".json"):
            doc = json.loads(text)
            raw = doc.get("values")
            if raw is None:
                raise DomainError(f"{path}: missing values")
            vals = np.asarray(raw, dtype=float)
            if doc.get("dtype") == "c64":
                vals = vals[:, 0] + 1j * vals[:, 1]
        else:
            first, _, body = text.partition("\n")
            doc = json.loads(first)
            lines = [ln for ln in body.splitlines() if ln.strip()]
            if doc.get("dtype") == "c64":
                vals = np.array([complex(*map(float, ln.split(","))) for ln in lines])
            else:
                vals = np.array([float(ln) for ln in lines])
        missing = [k for k in FORMAT_KEYS if k not in doc]
        if missing:
            raise DomainError(f"{path}: header lacks {missing}")
        if doc["layout"] != "row-major":
            raise DomainError(f"{path}: unsupported layout {doc['layout']!r}")
        n, P = int(doc["n"]), int(doc["P"])
        if vals.size != P**n:
            raise DomainError(f"{path}: expected {P**n} values, found {vals.size}")
        return cls(vals.reshape((P,) * n), float(doc["L"]))
