"""Significance of the independence hypothesis for a contingency table.

The G statistic of the data is compared with its distribution over synthetic
tables drawn from the table's own margin-product expectation. The mean of that
distribution sets the effective degrees of freedom; at low statistics the
distribution is modelled as a mixture of a chi-square density and a Gaussian
of matching mean, whose mixing fraction is fitted to the simulated values.
"""
import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special, stats

from . import _backend
from .contingency import dependent_estimates, g_stat, theoretical_ndof
from .datamodel import ContingencyTable, build_table, discretize
from .numerics import RngStream, as_generator, regularized_gamma_p, regularized_gamma_q

# Smallest p-value fed to the normal quantile; below it the Chernoff bound is used.
P_UNDERFLOW = np.finfo(float).tiny
P_BELOW_ONE = np.nextafter(1.0, 0.0)
LOW_STATS_MEAN = 4.0
N_SIM_LOW = 2000
N_SIM_HIGH = 500
FIT_BINS = 50
FIT_TOL = 1e-4


class SamplingMethod(enum.Enum):
    MULTINOMIAL = "multinomial"
    PRODUCT_ROWS = "product-rows"
    PRODUCT_COLS = "product-cols"
    HYPERGEOMETRIC = "hypergeometric"


def _method(method) -> SamplingMethod:
    return method if isinstance(method, SamplingMethod) else SamplingMethod(method)


class _Sampler:
    """Draws synthetic count tables for one expectation and one scheme."""

    def __init__(self, expected, n, method):
        e = np.asarray(getattr(expected, "expected", expected), dtype=float)
        total = e.sum()
        if total <= 0 or n <= 0:
            raise ValueError("cannot sample a table with zero total")
        self.shape = e.shape
        self.method = _method(method)
        self.n = int(n)
        if self.method is SamplingMethod.MULTINOMIAL:
            self.p = (e / total).ravel()
        else:
            self.rows = np.rint(e.sum(axis=1) * (n / total)).astype(np.int64)
            self.cols = np.rint(e.sum(axis=0) * (n / total)).astype(np.int64)
            if self.method is SamplingMethod.PRODUCT_ROWS:
                self.p = self.cols / self.cols.sum()
            elif self.method is SamplingMethod.PRODUCT_COLS:
                self.p = self.rows / self.rows.sum()
            else:
                if self.rows.sum() != self.cols.sum():
                    raise ValueError("expected margins do not round to a common integer total")
                self.fact = np.array([math.lgamma(i + 1.0) for i in range(int(self.rows.sum()) + 1)])

    def draw(self, gen) -> np.ndarray:
        m = self.method
        if m is SamplingMethod.MULTINOMIAL:
            return gen.multinomial(self.n, self.p).reshape(self.shape)
        if m is SamplingMethod.PRODUCT_ROWS:
            return gen.multinomial(self.rows, self.p)
        if m is SamplingMethod.PRODUCT_COLS:
            return gen.multinomial(self.cols, self.p).T.copy()
        return _backend.patefield(self.rows, self.cols, gen, self.fact)


def sample_synthetic(e, n, method=SamplingMethod.MULTINOMIAL, rng=None) -> ContingencyTable:
    """One synthetic table of ``n`` records drawn around the expectation ``e``.

    Multinomial fixes only the total; the product-multinomial variants fix the
    row (or column) totals; hypergeometric fixes both margins (Patefield).
    """
    sampler = _Sampler(e, n, method)
    return ContingencyTable.from_counts(sampler.draw(as_generator(rng)))


def simulate_g(t, n_sim, method=SamplingMethod.MULTINOMIAL, seed=0, n_jobs=1) -> np.ndarray:
    """G statistics of ``n_sim`` synthetic tables, each scored against its own
    margin-product expectation.

    Sample ``i`` draws from ``RngStream(seed, i)``, so the output does not
    depend on ``n_jobs``.
    """
    counts = np.asarray(getattr(t, "counts", t))
    sampler = _Sampler(dependent_estimates(counts), counts.sum(), method)
    tables = np.empty((n_sim,) + counts.shape, dtype=np.int64)

    def fill(indices):
        for i in indices:
            tables[i] = sampler.draw(RngStream(seed, i).generator())

    if n_jobs > 1:
        chunks = np.array_split(np.arange(n_sim), n_jobs)
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            list(pool.map(fill, chunks))
    else:
        fill(range(n_sim))
    return _backend.g_stat_batch(tables)


def effective_ndof(t, n_sim=N_SIM_HIGH, method=SamplingMethod.MULTINOMIAL, seed=0, n_jobs=1) -> float:
    """Mean of the simulated G distribution."""
    if n_sim < 100:
        raise ValueError("n_sim must be at least 100")
    return float(np.mean(simulate_g(t, n_sim, method, seed, n_jobs)))


@dataclass(frozen=True)
class ModifiedChi2:
    """Mixture ``f * chi2(n_edof) + (1 - f) * N(n_edof, sqrt(n_edof))``.

    The Gaussian part is truncated at zero and renormalised.
    """

    f: float
    n_edof: float

    def __post_init__(self):
        if not 0.0 <= self.f <= 1.0:
            raise ValueError("fraction must lie in [0, 1]")
        if self.n_edof <= 0:
            raise ValueError("n_edof must be positive")

    @property
    def _sigma(self):
        return math.sqrt(self.n_edof)

    @property
    def _gauss_norm(self):
        return special.ndtr(math.sqrt(self.n_edof))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        gauss = stats.norm.pdf(x, self.n_edof, self._sigma) / self._gauss_norm
        out = self.f * stats.chi2.pdf(x, self.n_edof) + (1.0 - self.f) * gauss
        return np.where(x >= 0, out, 0.0)

    def sf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        gauss = special.ndtr(-(x - self.n_edof) / self._sigma) / self._gauss_norm
        return self.f * regularized_gamma_q(x, self.n_edof) + (1.0 - self.f) * gauss

    def cdf(self, x):
        return 1.0 - self.sf(x)


def _golden_max(fn, lo, hi, tol):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def fit_h(g_samples, n_edof, n_bins=FIT_BINS) -> ModifiedChi2:
    """Fit the mixing fraction by maximising the binned Poisson likelihood of
    the sample histogram (uniform bins over the sample range)."""
    g = np.asarray(g_samples, dtype=float)
    lo, hi = float(g.min()), float(g.max())
    if hi <= lo:
        warnings.warn("degenerate G distribution; using the pure chi-square model", RuntimeWarning)
        return ModifiedChi2(1.0, n_edof)
    edges = np.linspace(lo, hi, n_bins + 1)
    observed, _ = np.histogram(g, edges)
    n = g.size
    chi_mass = np.diff(-regularized_gamma_q(np.maximum(edges, 0.0), n_edof))
    gauss_sf = special.ndtr(-(edges - n_edof) / math.sqrt(n_edof)) / special.ndtr(math.sqrt(n_edof))
    gauss_mass = -np.diff(gauss_sf)

    def loglike(f):
        nu = np.maximum(n * (f * chi_mass + (1.0 - f) * gauss_mass), 1e-300)
        return float(np.sum(observed * np.log(nu) - nu))

    best = _golden_max(loglike, 0.0, 1.0, FIT_TOL)
    best = max((best, 0.0, 1.0), key=loglike)
    return ModifiedChi2(float(best), n_edof)


def p_value_modified(g_obs, model: ModifiedChi2) -> float:
    if g_obs < 0:
        raise ValueError("test statistic must be nonnegative")
    return float(min(1.0, max(0.0, model.sf(g_obs))))


def _chernoff_log_p(g_obs, model):
    """Log of an upper bound on the tail of ``model`` beyond ``g_obs``: Chernoff
    for the chi-square part plus the exact log tail of the Gaussian part."""
    n = model.n_edof
    z = g_obs / n
    parts = []
    if model.f > 0:
        parts.append(math.log(model.f) + 0.5 * n * (math.log(z) + 1.0 - z))
    if model.f < 1:
        parts.append(
            math.log1p(-model.f)
            + special.log_ndtr(-(g_obs - n) / math.sqrt(n))
            - special.log_ndtr(math.sqrt(n))
        )
    return float(np.logaddexp.reduce(parts))


def z_from_p(p, g_obs=None, model: Optional[ModifiedChi2] = None) -> float:
    """One-sided Gaussian significance Z = Phi^-1(1 - p).

    When ``p`` is too small to represent and the statistic and model are given,
    Z comes from the Chernoff bound via Z = sqrt(u - ln u), u = -2 ln(p sqrt(2 pi)).
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p < P_UNDERFLOW and g_obs is not None and model is not None and g_obs > model.n_edof:
        log_p = _chernoff_log_p(g_obs, model)
        u = -2.0 * log_p - math.log(2.0 * math.pi)
        return math.sqrt(u - math.log(u))
    p = min(max(p, P_UNDERFLOW), P_BELOW_ONE)
    return float(-special.ndtri(p))


@dataclass(frozen=True)
class SignificanceResult:
    g_obs: float
    n_edof: float
    f: float
    p_value: float
    z: float
    n_sim: int
    method: SamplingMethod
    seed: int
    n_dof: int
    chernoff: bool = False

    @property
    def model(self) -> ModifiedChi2:
        return ModifiedChi2(self.f, self.n_edof)

    def z_asymptotic(self) -> float:
        """Z from the plain chi-square with the theoretical degrees of freedom."""
        return _chi2_z(self.g_obs, self.n_dof)

    def z_edof(self) -> float:
        """Z from the plain chi-square with the effective degrees of freedom."""
        return _chi2_z(self.g_obs, self.n_edof)


def _chi2_z(g_obs, ndof) -> float:
    q = float(regularized_gamma_q(g_obs, ndof))
    if q > 0.5:
        # deep lower tail: quantile of the cdf keeps precision that 1 - q loses
        return float(special.ndtri(regularized_gamma_p(g_obs, ndof)))
    return z_from_p(q, g_obs, ModifiedChi2(1.0, ndof))


def significance_from_table(
    t,
    method=SamplingMethod.MULTINOMIAL,
    seed=0,
    n_sim=None,
    fit=None,
    n_jobs=1,
) -> SignificanceResult:
    """Full significance evaluation of one table.

    ``n_sim`` defaults to 2000 when the mean cell occupancy is below 4 and 500
    otherwise; the mixture fraction is fitted only in the low-occupancy case
    unless ``fit`` forces the choice.
    """
    counts = np.asarray(getattr(t, "counts", t))
    method = _method(method)
    r, k = counts.shape
    n = int(counts.sum())
    if n <= 0:
        raise ValueError("table has no records")
    if r < 2 or k < 2:
        raise ValueError("significance needs at least a 2x2 table")
    low_stats = n / (r * k) < LOW_STATS_MEAN
    if n_sim is None:
        n_sim = N_SIM_LOW if low_stats else N_SIM_HIGH
    if fit is None:
        fit = low_stats

    samples = simulate_g(counts, n_sim, method, seed, n_jobs)
    n_edof = float(np.mean(samples))
    if n_edof <= 0:
        raise ValueError("no degrees of freedom: every synthetic table is factorisable")
    model = fit_h(samples, n_edof) if fit else ModifiedChi2(1.0, n_edof)
    g_obs = g_stat(counts, dependent_estimates(counts))
    p = p_value_modified(g_obs, model)
    z = z_from_p(p, g_obs, model)
    return SignificanceResult(
        g_obs=g_obs,
        n_edof=n_edof,
        f=model.f,
        p_value=p,
        z=z,
        n_sim=int(n_sim),
        method=method,
        seed=int(seed),
        n_dof=theoretical_ndof((r, k)),
        chernoff=p < P_UNDERFLOW,
    )


@dataclass(frozen=True)
class CochranDiagnostics:
    fraction_ge5: float
    min_expected: float
    passed: bool


def cochran_check(e) -> CochranDiagnostics:
    """Cochran's rule: at least 80% of expected counts >= 5 and none below 1;
    a 2x2 table needs every expected count >= 5."""
    exp = np.asarray(getattr(e, "expected", e), dtype=float)
    frac = float(np.mean(exp >= 5.0))
    min_e = float(exp.min())
    if exp.shape == (2, 2):
        passed = min_e >= 5.0
    else:
        passed = frac >= 0.8 and min_e >= 1.0
    return CochranDiagnostics(frac, min_e, passed)


def pair_seed(seed, i, j) -> int:
    """Deterministic seed for the variable pair (i, j)."""
    return int(np.random.SeedSequence([int(seed), int(i), int(j)]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class SignificanceMatrix:
    names: tuple
    z: np.ndarray
    results: dict = field(repr=False)
    errors: dict = field(default_factory=dict, repr=False)

    def result(self, a, b) -> Optional[SignificanceResult]:
        i, j = self.names.index(a), self.names.index(b)
        return self.results.get((min(i, j), max(i, j)))


def significance_matrix(
    columns,
    n_bins=10,
    method=SamplingMethod.MULTINOMIAL,
    seed=0,
    n_sim=None,
    n_jobs=1,
) -> SignificanceMatrix:
    """Pairwise significance Z; the diagonal is NaN."""
    from .phik import _bins_for

    columns = list(columns)
    if len(columns) < 2:
        raise ValueError("need at least two columns")
    disc = [discretize(col, _bins_for(n_bins, col.name)) for col in columns]
    m = len(columns)
    z = np.full((m, m), np.nan)
    results, errors = {}, {}
    for i in range(m):
        for j in range(i + 1, m):
            try:
                res = significance_from_table(
                    build_table(disc[i], disc[j]), method, pair_seed(seed, i, j), n_sim, n_jobs=n_jobs
                )
            except ValueError as exc:
                errors[(i, j)] = str(exc)
                continue
            results[(i, j)] = res
            z[i, j] = z[j, i] = res.z
    return SignificanceMatrix(tuple(col.name for col in columns), z, results, errors)
