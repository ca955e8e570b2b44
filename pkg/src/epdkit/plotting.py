"""Optional figures for CLI reports.

matplotlib is imported lazily with the Agg backend so the library and the
CSV/JSON reports work without it.  Each function writes one PNG and returns
its path.
"""

import numpy as np

from .errors import EpdError


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise EpdError("plotting needs matplotlib (pip install 'artifact[plot]')") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def publication_axes(width=8, height=6):
    """Figure and axes with large fonts and no top or right spines."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(width, height))
    ax.tick_params(labelsize=14)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    fig.set_layout_engine("tight")
    return fig, ax


def _save(fig, path):
    fig.savefig(path, dpi=120)
    _pyplot().close(fig)
    return str(path)


def zero_spacings(indices, values, path, nu=None):
    """Gaps ``a_{m+1} - a_m`` against ``m`` with the limiting spacing pi."""
    fig, ax = publication_axes()
    values = np.real(np.asarray(values))
    ax.plot(indices[:-1], np.diff(values), "o-", ms=3, label="gap")
    ax.axhline(np.pi, color="k", ls="--", lw=1, label=r"$\pi$")
    ax.set_xlabel("index m", fontsize=16)
    ax.set_ylabel(r"$a_{m+1} - a_m$", fontsize=16)
    if nu is not None:
        ax.set_title(rf"zeros of $j_\nu$, $\nu$ = {nu}", fontsize=16)
    ax.legend(fontsize=12)
    return _save(fig, path)


def denominator_profile(z, D, path, C=None, N=None):
    """``|j(rz)| + |j(sz)|`` on a log scale with the fitted lower bound."""
    fig, ax = publication_axes()
    ax.semilogy(z, np.maximum(D, 1e-18), lw=0.8, label="denominator sum")
    if C is not None and N is not None and C > 0:
        ax.semilogy(z, C * (1 + z) ** (-N), "r--", lw=1.2, label=f"C(1+z)^-{N:g}")
    ax.set_xlabel("z", fontsize=16)
    ax.set_ylabel("D(z)", fontsize=16)
    ax.legend(fontsize=12)
    return _save(fig, path)


def measure_curve(ps, measures, bounds, path):
    """Covering measure and its analytic bound against the exponent p."""
    fig, ax = publication_axes()
    ax.semilogy(ps, measures, "o-", label="union measure")
    ax.semilogy(ps, bounds, "s--", label="analytic bound")
    ax.set_xlabel("p", fontsize=16)
    ax.set_ylabel("measure", fontsize=16)
    ax.legend(fontsize=12)
    return _save(fig, path)


def slow_decrease(xi, profile, c, nu_real, t, path):
    """Windowed maximum of ``|j_nu(t s)|`` with the lower envelope ``c (1 + t xi)^(-Re nu - 1/2)``."""
    fig, ax = publication_axes()
    ax.loglog(1 + t * xi, profile, lw=1, label="window max")
    ax.loglog(1 + t * xi, c * (1 + t * xi) ** (-nu_real - 0.5), "r--", label="lower envelope")
    ax.set_xlabel(r"$1 + t\xi$", fontsize=16)
    ax.set_ylabel(r"$\max |j_\nu(ts)|$", fontsize=16)
    ax.legend(fontsize=12)
    return _save(fig, path)
