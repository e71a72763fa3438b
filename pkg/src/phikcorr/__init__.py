"""phi_K correlation, calibrated independence significance and per-cell outlier
significance for mixed categorical, ordinal and interval data."""
from ._backend import BACKEND
from .comparators import cramers_phi, pearson_rho
from .contingency import (
    DependentEstimates,
    IndependentEstimates,
    chi2_stat,
    dependent_estimates,
    g_stat,
    independent_estimates,
    theoretical_ndof,
)
from .datamodel import (
    BinningSpec,
    Column,
    ContingencyTable,
    Discretized,
    VariableKind,
    bin_interval,
    build_table,
    discretize,
    infer_kind,
)
from .numerics import RngStream
from .outliers import (
    CellSignificance,
    OutlierMatrix,
    lancaster_midp_z,
    linnemann_pb,
    outlier_z_matrix,
)
from .phik import (
    PhiKMatrix,
    PhiKResult,
    bn_chi2,
    chi2_max,
    global_correlations,
    noise_pedestal,
    phik_from_chi2,
    phik_from_columns,
    phik_from_table,
    phik_matrix,
)
from .significance import (
    ModifiedChi2,
    SamplingMethod,
    SignificanceMatrix,
    SignificanceResult,
    cochran_check,
    effective_ndof,
    fit_h,
    p_value_modified,
    sample_synthetic,
    significance_from_table,
    significance_matrix,
    simulate_g,
    z_from_p,
)
from .synth import SmileySpec, gen_bvn, gen_car_dataset, gen_smiley, gen_uniform_pmf

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BinningSpec",
    "CellSignificance",
    "Column",
    "ContingencyTable",
    "DependentEstimates",
    "Discretized",
    "IndependentEstimates",
    "ModifiedChi2",
    "OutlierMatrix",
    "PhiKMatrix",
    "PhiKResult",
    "RngStream",
    "SamplingMethod",
    "SignificanceMatrix",
    "SignificanceResult",
    "SmileySpec",
    "VariableKind",
    "bin_interval",
    "bn_chi2",
    "build_table",
    "chi2_max",
    "chi2_stat",
    "cochran_check",
    "cramers_phi",
    "dependent_estimates",
    "discretize",
    "effective_ndof",
    "fit_h",
    "g_stat",
    "gen_bvn",
    "gen_car_dataset",
    "gen_smiley",
    "gen_uniform_pmf",
    "global_correlations",
    "independent_estimates",
    "infer_kind",
    "lancaster_midp_z",
    "linnemann_pb",
    "noise_pedestal",
    "outlier_z_matrix",
    "p_value_modified",
    "pearson_rho",
    "phik_from_chi2",
    "phik_from_columns",
    "phik_from_table",
    "phik_matrix",
    "sample_synthetic",
    "significance_from_table",
    "significance_matrix",
    "simulate_g",
    "theoretical_ndof",
    "z_from_p",
]
