"""Standard normal special functions.

Thin wrappers over the battle-tested scipy.special kernels: the CDF goes
through the complementary error function, its logarithm switches to the
Gaussian tail expansion for very negative arguments (no underflow down to
z ~ -38 and beyond), and the quantile is the double-precision inverse CDF.

Every function accepts a scalar or a numpy array and returns a matching
shape; scalars come back as plain floats.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

from .errors import DomainError

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)

__all__ = [
    "std_normal_pdf",
    "std_normal_cdf",
    "log_std_normal_cdf",
    "std_normal_quantile",
]


def _match(value, out):
    return float(out) if np.ndim(value) == 0 else out


def std_normal_pdf(z):
    """Density of N(0, 1) at ``z``: exp(-z^2/2) / sqrt(2*pi)."""
    arr = np.asarray(z, dtype=float)
    return _match(z, np.exp(-0.5 * arr * arr) * _INV_SQRT_2PI)


def std_normal_cdf(z):
    """Lower-tail probability of N(0, 1), accurate to ~1 ulp over the reals."""
    return _match(z, _sp.ndtr(np.asarray(z, dtype=float)))


def log_std_normal_cdf(z):
    """log of the N(0, 1) CDF, stable far into the left tail.

    Always <= 0; for z >= 0 the result is tiny and negative, for very
    negative z it follows the tail asymptotics -z^2/2 - log(-z*sqrt(2*pi))
    instead of underflowing.
    """
    return _match(z, _sp.log_ndtr(np.asarray(z, dtype=float)))


def std_normal_quantile(p):
    """Inverse of the N(0, 1) CDF.

    Raises
    ------
    DomainError
        If any probability lies outside the open interval (0, 1).
    """
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("probability must lie strictly inside (0, 1)")
    return _match(p, _sp.ndtri(arr))
