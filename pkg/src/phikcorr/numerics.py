"""Special functions, bivariate normal rectangle probabilities, root finding
and reproducible random streams."""
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from . import _backend

UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Seeded, independently addressable random stream.

    The pair ``(seed, stream_id)`` is used directly as the 128-bit key of a
    Philox counter-based generator, so distinct stream ids never overlap and a
    stream's draws do not depend on which thread consumes it.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([int(self.seed) & UINT64_MASK, int(self.stream_id) & UINT64_MASK], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator or an int seed."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngStream(0 if rng is None else int(rng)).generator()
    raise TypeError(f"cannot build a random generator from {type(rng).__name__}")


@dataclass(frozen=True)
class BvnParams:
    """Standardised bivariate normal: zero means, unit widths, correlation rho."""

    rho: float

    def __post_init__(self):
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"correlation must lie in [-1, 1], got {self.rho}")


def _check_dof(k):
    if np.any(np.asarray(k) <= 0):
        raise ValueError("degrees of freedom must be positive")


def regularized_gamma_q(x, k):
    """Upper tail of the chi-square distribution with ``k`` degrees of freedom,
    i.e. Q(k/2, x/2)."""
    _check_dof(k)
    if np.any(np.asarray(x) < 0):
        raise ValueError("x must be nonnegative")
    return special.gammaincc(np.asarray(k) / 2.0, np.asarray(x) / 2.0)


def regularized_gamma_p(x, k):
    """Lower tail counterpart of :func:`regularized_gamma_q`."""
    _check_dof(k)
    if np.any(np.asarray(x) < 0):
        raise ValueError("x must be nonnegative")
    return special.gammainc(np.asarray(k) / 2.0, np.asarray(x) / 2.0)


def regularized_incomplete_beta(x, a, b):
    """I_x(a, b)."""
    if np.any(np.asarray(a) <= 0) or np.any(np.asarray(b) <= 0):
        raise ValueError("beta parameters must be positive")
    xa = np.asarray(x)
    if np.any((xa < 0) | (xa > 1)):
        raise ValueError("x must lie in [0, 1]")
    return special.betainc(a, b, x)


def normal_cdf(z):
    return special.ndtr(z)


def normal_sf(z):
    return special.ndtr(-np.asarray(z, dtype=float))


def normal_quantile(p):
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr <= 0) | (p_arr >= 1)):
        raise ValueError("quantile requires 0 < p < 1")
    return special.ndtri(p)


def bvn_upper(h, k, rho):
    """P(X > h, Y > k) for the standardised bivariate normal."""
    return _backend.bvnu(h, k, BvnParams(rho).rho)


def bvn_cdf(x, y, rho):
    """P(X <= x, Y <= y) for the standardised bivariate normal."""
    return _backend.bvnu(-np.asarray(x, dtype=float), -np.asarray(y, dtype=float), BvnParams(rho).rho)


def bvn_rect(params, x_lo, x_hi, y_lo, y_hi):
    """Probability mass of the standardised bivariate normal over a rectangle.

    Infinite bounds are allowed.
    """
    if not (x_lo < x_hi and y_lo < y_hi):
        raise ValueError("rectangle bounds must satisfy lo < hi on both axes")
    rho = params.rho if isinstance(params, BvnParams) else BvnParams(params).rho
    u = _backend.bvnu(
        np.array([x_lo, x_hi, x_lo, x_hi], dtype=float),
        np.array([y_lo, y_lo, y_hi, y_hi], dtype=float),
        rho,
    )
    return max(0.0, float(u[0] - u[1] - u[2] + u[3]))


def bvn_grid_masses(x_edges, y_edges, rho):
    """Masses of all cells of the grid spanned by ascending edge arrays.

    Returns an array of shape ``(len(x_edges) - 1, len(y_edges) - 1)``.
    """
    x_edges = np.asarray(x_edges, dtype=float)
    y_edges = np.asarray(y_edges, dtype=float)
    u = _backend.bvnu_grid(x_edges, y_edges, BvnParams(rho).rho)
    masses = u[:-1, :-1] - u[1:, :-1] - u[:-1, 1:] + u[1:, 1:]
    return np.clip(masses, 0.0, None)


def brent_root(f, lo, hi, tol=1e-12, maxiter=200):
    """Root of ``f`` bracketed by ``[lo, hi]`` (Brent's method)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("root not bracketed")
    return optimize.brentq(f, lo, hi, xtol=tol, maxiter=maxiter)
