"""Per-cell significance of excesses and deficits in a contingency table.

Each cell's observed count is tested against the ABCD expectation of that cell
(built from the other rows and columns only), allowing for the uncertainty on
the expectation: a Poisson count whose mean carries a Gamma-distributed prior
gives the hybrid p-value I_{1/(1+tau)}(n_o, n_e tau + 1) with tau = n_e/sigma^2.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special

from .contingency import independent_estimates
from .datamodel import ContingencyTable

P_FLOOR = np.finfo(float).tiny
POISSON_LIMIT = 1e8


def _tails(n_o, n_e, sigma_e):
    """``(P(s >= n_o), P(s < n_o))``, each computed directly so that neither
    loses precision to cancellation."""
    n_o, n_e, sigma_e = np.broadcast_arrays(
        np.asarray(n_o, dtype=float), np.asarray(n_e, dtype=float), np.asarray(sigma_e, dtype=float)
    )
    if (n_o < 0).any() or (n_e < 0).any() or (sigma_e < 0).any():
        raise ValueError("counts, expectations and uncertainties must be nonnegative")
    n_e = np.where((n_e == 0) & (sigma_e > 0), sigma_e, n_e)
    a = np.maximum(n_o, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = n_e / sigma_e**2
        x = 1.0 / (1.0 + tau)
        b = n_e * tau + 1.0
        # I_x(a, b) = 1 - I_{1-x}(b, a)
        upper = special.betainc(a, b, x)
        lower = special.betainc(b, a, tau / (1.0 + tau))
    # regularized lower gamma P(n_o, mu) is the Poisson tail P(X >= n_o | mu).
    # Once n_e / sigma_e exceeds 1e4 the prior is narrower than anything the
    # Poisson tail can resolve (differences ~1e-10) and betainc loses accuracy.
    poisson = (sigma_e == 0) | ~(b < POISSON_LIMIT)
    upper = np.where(poisson, special.gammainc(a, n_e), upper)
    lower = np.where(poisson, special.gammaincc(a, n_e), lower)
    zero = n_o == 0
    return np.where(zero, 1.0, upper), np.where(zero, 0.0, lower)


def linnemann_pb(n_o, n_e, sigma_e):
    """P(s >= n_o) for a Poisson count whose mean n_e is uncertain by sigma_e.

    Degenerate inputs: n_o = 0 gives 1; sigma_e = 0 falls back to the plain
    Poisson tail; n_e = 0 with sigma_e > 0 is evaluated at n_e = sigma_e.
    Works elementwise on arrays.
    """
    p = _tails(n_o, n_e, sigma_e)[0]
    return p if p.ndim else float(p)


def _midp_tails(n_o, n_e, sigma_e):
    n_o = np.asarray(n_o, dtype=float)
    up0, lo0 = _tails(n_o, n_e, sigma_e)
    up1, lo1 = _tails(n_o + 1.0, n_e, sigma_e)
    return 0.5 * (up0 + up1), 0.5 * (lo0 + lo1)


def midp(n_o, n_e, sigma_e):
    """Lancaster mid-P: P(s > n_o) + P(s = n_o) / 2."""
    p = _midp_tails(n_o, n_e, sigma_e)[0]
    return p if p.ndim else float(p)


def z_from_midp(p, q=None):
    """Z = Phi^-1(1 - p), with p floored so Z stays finite.

    ``q``, the complementary mid-P, is used instead of ``1 - p`` when given and
    p > 0.5, so strong deficits keep their precision.
    """
    p = np.asarray(p, dtype=float)
    z = -special.ndtri(np.clip(p, P_FLOOR, np.nextafter(1.0, 0.0)))
    if q is not None:
        q = np.clip(np.asarray(q, dtype=float), P_FLOOR, np.nextafter(1.0, 0.0))
        z = np.where(p > 0.5, special.ndtri(q), z)
    return z if z.ndim else float(z)


def _midp_z(n_o, n_e, sigma_e):
    p, q = _midp_tails(n_o, n_e, sigma_e)
    return p, np.asarray(z_from_midp(p, q))


@dataclass(frozen=True)
class CellSignificance:
    n_obs: int
    n_exp: float
    sigma_exp: float
    p_mid: float
    z: float


def lancaster_midp_z(n_o, n_e, sigma_e) -> CellSignificance:
    p, z = _midp_z(n_o, n_e, sigma_e)
    return CellSignificance(int(n_o), float(n_e), float(sigma_e), float(p), float(z))


@dataclass(frozen=True, eq=False)
class OutlierMatrix:
    """Per-cell observed, expected, uncertainty, mid-P and Z. Cells whose ABCD
    expectation is undefined have ``defined`` False and NaN in the derived fields."""

    observed: np.ndarray
    expected: np.ndarray
    sigma: np.ndarray
    p_mid: np.ndarray
    z: np.ndarray
    defined: np.ndarray
    row_labels: tuple
    col_labels: tuple

    @property
    def shape(self):
        return self.observed.shape

    def cell(self, i, j) -> CellSignificance:
        return CellSignificance(
            int(self.observed[i, j]), float(self.expected[i, j]), float(self.sigma[i, j]),
            float(self.p_mid[i, j]), float(self.z[i, j]),
        )


def outlier_z_matrix(t) -> OutlierMatrix:
    if not isinstance(t, ContingencyTable):
        t = ContingencyTable.from_counts(t)
    est = independent_estimates(t)
    obs = t.counts.astype(float)
    ok = est.defined
    e = np.where(ok, est.expected, 0.0)
    s = np.where(ok, est.sigma, 0.0)
    p, z = _midp_z(obs, e, s)
    p = np.where(ok, p, np.nan)
    z = np.where(ok, z, np.nan)
    return OutlierMatrix(
        t.counts.copy(), est.expected, est.sigma, p, z, ok.copy(), t.row_labels, t.col_labels
    )
