"""The phi_K correlation coefficient.

The observed Pearson chi-square of a contingency table is interpreted as the
chi-square a binned, noise-free bivariate normal with correlation rho would
produce against its rho = 0 counterpart, after rescaling that curve to run
from the sample's noise pedestal (rho = 0) to the maximum attainable
chi-square (rho = 1). Solving for rho gives phi_K.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import numerics
from .contingency import chi2_stat, dependent_estimates
from .datamodel import Column, build_table, discretize

GRID_HALF_WIDTH = 5.0
MASS_FLOOR = 1e-300
ROOT_TOL = 1e-5


@dataclass(frozen=True)
class PhiKResult:
    phik: float
    chi2_obs: float
    chi2_ped: float
    chi2_max: float
    n_sdof: float
    clipped_to_zero: bool = False
    error: Optional[str] = None


@lru_cache(maxsize=128)
def _grid(r, k):
    """Edges, rho = 0 cell masses and the per-record chi-square at rho = 1."""
    xe = np.linspace(-GRID_HALF_WIDTH, GRID_HALF_WIDTH, r + 1)
    ye = np.linspace(-GRID_HALF_WIDTH, GRID_HALF_WIDTH, k + 1)
    cx = numerics.normal_cdf(xe)
    cy = numerics.normal_cdf(ye)
    f0 = np.maximum(np.outer(np.diff(cx), np.diff(cy)), MASS_FLOOR)
    # rho = 1 puts all mass on x = y: cell ij holds the Gaussian mass of the
    # overlap of row interval i and column interval j.
    lo = np.maximum(xe[:-1, None], ye[None, :-1])
    hi = np.minimum(xe[1:, None], ye[None, 1:])
    f1 = np.where(hi > lo, numerics.normal_cdf(hi) - numerics.normal_cdf(lo), 0.0)
    unit_at_one = math.fsum(((f1 - f0) ** 2 / f0).ravel())
    return xe, ye, f0, unit_at_one


def _unit_bn_chi2(rho, r, k):
    if r > k:
        r, k = k, r
    xe, ye, f0, unit_at_one = _grid(r, k)
    rho = abs(float(rho))
    if rho == 0.0:
        return 0.0
    if rho == 1.0:
        return unit_at_one
    f = numerics.bvn_grid_masses(xe, ye, rho)
    return math.fsum(((f - f0) ** 2 / f0).ravel())


def bn_chi2(rho, n, r, k) -> float:
    """Chi-square of the binned bivariate normal at correlation ``rho`` against
    the uncorrelated one, for ``n`` records on an r x k grid over [-5, 5]^2."""
    if r < 2 or k < 2:
        raise ValueError("need at least 2 rows and 2 columns")
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [-1, 1]")
    return n * _unit_bn_chi2(rho, int(r), int(k))


def chi2_max(n, r, k) -> float:
    if r < 2 or k < 2:
        raise ValueError("need at least 2 rows and 2 columns")
    return float(n * min(r - 1, k - 1))


def noise_pedestal(t, c=0.0):
    """``(n_sdof, chi2_ped)``: (r-1)(k-1) less the empty expected cells, and the
    chi-square level attributed to statistical noise."""
    counts = np.asarray(getattr(t, "counts", t))
    r, k = counts.shape
    expected = dependent_estimates(counts).expected
    n_sdof = max(0, (r - 1) * (k - 1) - int(np.count_nonzero(expected == 0)))
    return float(n_sdof), float(n_sdof + c * math.sqrt(2.0 * n_sdof))


def scaled_bn_chi2(rho, n, r, k, chi2_ped):
    """The bivariate-normal chi-square rescaled to run from ``chi2_ped`` at
    rho = 0 to ``chi2_max`` at rho = 1."""
    top = chi2_max(n, r, k)
    return chi2_ped + (top - chi2_ped) * _unit_bn_chi2(rho, r, k) / _unit_bn_chi2(1.0, r, k)


def phik_from_chi2(chi2, n, r, k, chi2_ped=0.0, tol=ROOT_TOL) -> float:
    """Invert :func:`scaled_bn_chi2` for rho in [0, 1]."""
    top = chi2_max(n, r, k)
    if chi2 <= chi2_ped:
        return 0.0
    if chi2 >= top:
        return 1.0
    target = (chi2 - chi2_ped) / (top - chi2_ped)
    at_one = _unit_bn_chi2(1.0, r, k)
    return float(
        numerics.brent_root(lambda rho: _unit_bn_chi2(rho, r, k) / at_one - target, 0.0, 1.0, tol)
    )


def phik_from_table(t, c=0.0, tol=ROOT_TOL) -> PhiKResult:
    counts = np.asarray(getattr(t, "counts", t))
    r, k = counts.shape
    n = int(counts.sum())
    if n <= 0:
        raise ValueError("table has no records")
    if r < 2 or k < 2:
        return PhiKResult(0.0, 0.0, 0.0, 0.0, 0.0, True, "no association measurable in a 1-row or 1-column table")
    if r > k:
        counts = counts.T
        r, k = k, r
    chi2 = chi2_stat(counts, dependent_estimates(counts))
    n_sdof, ped = noise_pedestal(counts, c)
    top = chi2_max(n, r, k)
    value = phik_from_chi2(chi2, n, r, k, ped, tol)
    return PhiKResult(value, chi2, ped, top, n_sdof, clipped_to_zero=chi2 <= ped)


def phik_from_columns(x, y, n_bins=10, c=0.0) -> PhiKResult:
    """phi_K of two columns; interval columns are binned uniformly."""
    dx = discretize(x, _bins_for(n_bins, x.name)) if isinstance(x, Column) else x
    dy = discretize(y, _bins_for(n_bins, y.name)) if isinstance(y, Column) else y
    return phik_from_table(build_table(dx, dy), c)


def _bins_for(n_bins, name):
    if isinstance(n_bins, dict):
        return int(n_bins.get(name, 10))
    return int(n_bins)


@dataclass(frozen=True, eq=False)
class PhiKMatrix:
    names: tuple
    values: np.ndarray
    results: dict = field(repr=False)

    def result(self, a, b) -> Optional[PhiKResult]:
        i, j = self.names.index(a), self.names.index(b)
        return self.results.get((min(i, j), max(i, j)))


def phik_matrix(columns, n_bins=10, c=0.0) -> PhiKMatrix:
    """Pairwise phi_K over all columns. Failing pairs become NaN with the error
    recorded in their result."""
    columns = list(columns)
    if len(columns) < 2:
        raise ValueError("need at least two columns")
    disc = [discretize(col, _bins_for(n_bins, col.name)) for col in columns]
    m = len(columns)
    values = np.eye(m)
    results = {}
    for i in range(m):
        for j in range(i + 1, m):
            try:
                res = phik_from_table(build_table(disc[i], disc[j]), c)
            except ValueError as exc:
                res = PhiKResult(math.nan, math.nan, math.nan, math.nan, math.nan, False, str(exc))
            results[(i, j)] = res
            values[i, j] = values[j, i] = res.phik
    return PhiKMatrix(tuple(col.name for col in columns), values, results)


def global_correlations(m) -> np.ndarray:
    """Per-variable correlation with the best linear combination of all others,
    treating the correlation matrix as a covariance matrix of unit variances."""
    c = np.asarray(getattr(m, "values", m), dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("need a square matrix")
    if not np.isfinite(c).all():
        raise ValueError("degenerate correlation matrix")
    if np.linalg.cond(c) > 1e12:
        raise ValueError("degenerate correlation matrix")
    inv = np.linalg.inv(c)
    prod = np.diag(c) * np.diag(inv)
    return np.sqrt(np.clip(1.0 - 1.0 / prod, 0.0, 1.0))
