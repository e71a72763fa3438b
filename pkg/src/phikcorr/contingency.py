"""Expected frequencies under the factorisation hypothesis and the chi-square
and G test statistics."""
import math
from dataclasses import dataclass

import numpy as np

from .datamodel import ContingencyTable


def _counts(t):
    if isinstance(t, ContingencyTable):
        return t.counts.astype(float)
    return np.asarray(t, dtype=float)


@dataclass(frozen=True, eq=False)
class DependentEstimates:
    expected: np.ndarray


@dataclass(frozen=True, eq=False)
class IndependentEstimates:
    """ABCD estimates. ``defined`` is False where the denominator D vanishes;
    those cells carry NaN expectation and uncertainty."""

    expected: np.ndarray
    sigma: np.ndarray
    defined: np.ndarray


def dependent_estimates(t) -> DependentEstimates:
    """E_ij = (row_i total)(col_j total) / N."""
    o = _counts(t)
    n = o.sum()
    if n <= 0:
        raise ValueError("table has no records")
    return DependentEstimates(np.outer(o.sum(axis=1), o.sum(axis=0)) / n)


def _poisson_sigma2(q):
    # sigma_Q = sqrt(Q), and 1 for an empty sum
    return np.where(q > 0, q, 1.0)


def independent_estimates(t) -> IndependentEstimates:
    """Expected count of each cell from the other rows and columns only:
    E_ij = B_ij C_ij / D_ij, with B the rest of row i, C the rest of column j and
    D everything outside row i and column j. Uncertainties follow from Poisson
    errors on B, C and D."""
    o = _counts(t)
    if o.shape[0] < 2 or o.shape[1] < 2:
        raise ValueError("ABCD needs >=2x2")
    rows = o.sum(axis=1, keepdims=True)
    cols = o.sum(axis=0, keepdims=True)
    n = o.sum()
    b = rows - o
    c = cols - o
    d = n - rows - cols + o
    defined = d > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        e = np.where(defined, b * c / d, np.nan)
        var = (
            _poisson_sigma2(b) * c**2 + _poisson_sigma2(c) * b**2 + _poisson_sigma2(d) * e**2
        ) / d**2
    sigma = np.where(defined, np.sqrt(var), np.nan)
    return IndependentEstimates(e, sigma, defined)


def _expected(e):
    if isinstance(e, (DependentEstimates, IndependentEstimates)):
        return np.asarray(e.expected, dtype=float)
    return np.asarray(e, dtype=float)


def chi2_stat(o, e) -> float:
    """Pearson chi-square; cells with E = 0 and O = 0 contribute nothing."""
    o, e = _counts(o), _expected(e)
    if ((e <= 0) & (o > 0)).any():
        raise ValueError("incompatible expectation")
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(e > 0, (o - e) ** 2 / e, 0.0)
    # exactly rounded, so cell order (permutation, transpose) cannot matter
    return math.fsum(terms.ravel())


def g_stat(o, e) -> float:
    """Log-likelihood ratio statistic 2 sum O ln(O/E) over non-empty cells."""
    o, e = _counts(o), _expected(e)
    if ((e <= 0) & (o > 0)).any():
        raise ValueError("incompatible expectation")
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(o > 0, o * np.log(o / e), 0.0)
    return 2.0 * math.fsum(terms.ravel())


def theoretical_ndof(dims) -> int:
    """Cells minus free parameters of the product of marginals."""
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise ValueError("need at least one dimension with >=1 category")
    return int(np.prod(dims)) - (sum(d - 1 for d in dims) + 1)
