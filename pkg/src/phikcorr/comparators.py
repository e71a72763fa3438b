"""Reference coefficients for comparison with phi_K."""
import numpy as np

from .contingency import chi2_stat, dependent_estimates


def pearson_rho(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("need two equal-length sequences of at least 2 values")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("undefined correlation")
    return float(np.clip((dx @ dy) / np.sqrt(sxx * syy), -1.0, 1.0))


def cramers_phi(t) -> float:
    """Cramer's phi from the chi-square against margin-product expectations."""
    o = np.asarray(getattr(t, "counts", t), dtype=float)
    r, k = o.shape
    if r < 2 or k < 2:
        raise ValueError("Cramer's phi needs at least a 2x2 table")
    n = o.sum()
    if n <= 0:
        raise ValueError("table has no records")
    chi2 = chi2_stat(o, dependent_estimates(o))
    return float(min(1.0, np.sqrt(chi2 / (n * min(r - 1, k - 1)))))
