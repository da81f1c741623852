"""Consilience: a holistic goodness-of-fit statistic for modeled vs observed data.

The score C = -(MSE_tot - 2)/2 is 1 for a perfect fit, near 0 when the model
is indistinguishable from mean-and-variance-matched noise, and unbounded
below.  Lack of fit splits exactly into systematic and non-systematic parts,
multiple response series combine into a joint score through covariance-based
weights, and null sampling plus tabulated critical curves provide
significance assessment.
"""

from ._version import __version__
from .analysis import analyze, compare, render_compare_text, render_text
from .critical import (
    CRITICAL_ROWS,
    TABULATED_ALPHAS,
    critical_c,
    nomogram_table,
    significance_bracket,
)
from .conventional import (
    TestResult,
    mssd,
    r_squared,
    residual_regression_test,
    signed_rank_distribution,
    wilcoxon_signed_rank,
)
from .dataio import (
    AnalysisConfig,
    Dataset,
    ResponseSeries,
    SCALAR_KINDS,
    apply_config,
    dump_dataset,
    load_config,
    load_dataset,
    overlap_count,
    parse_dataset,
)
from .decomposition import (
    ErrorPartition,
    ProjectionLine,
    consilience_score,
    decompose,
    fit_projection,
    scalar_value,
)
from .errors import (
    ConsilienceError,
    DegenerateDataError,
    DegenerateObservedError,
    DegenerateScalarError,
    DegenerateSeriesError,
    InsufficientOverlapError,
    ParseError,
    UntabulatedAlphaError,
)
from .estimator import ConsilienceScorer
from .nullmodels import (
    NullDistribution,
    NullSpec,
    RandMixEnumeration,
    enumerate_randmix,
    null_distribution,
    randmix_replicate,
    randnorm_replicate,
    replicate_rng,
)
from .weighting import (
    WeightTable,
    build_weight_table,
    covariance_weights,
    effn_values,
    final_weights,
    joint_c,
    rsq_matrix,
)

__all__ = [
    "__version__",
    "analyze", "compare", "render_text", "render_compare_text",
    "CRITICAL_ROWS", "TABULATED_ALPHAS", "critical_c", "nomogram_table",
    "significance_bracket",
    "TestResult", "mssd", "r_squared", "residual_regression_test",
    "signed_rank_distribution", "wilcoxon_signed_rank",
    "AnalysisConfig", "Dataset", "ResponseSeries", "SCALAR_KINDS",
    "apply_config", "dump_dataset", "load_config", "load_dataset",
    "overlap_count", "parse_dataset",
    "ErrorPartition", "ProjectionLine", "consilience_score", "decompose",
    "fit_projection", "scalar_value",
    "ConsilienceError", "DegenerateDataError", "DegenerateObservedError",
    "DegenerateScalarError", "DegenerateSeriesError",
    "InsufficientOverlapError", "ParseError", "UntabulatedAlphaError",
    "ConsilienceScorer",
    "NullDistribution", "NullSpec", "RandMixEnumeration", "enumerate_randmix",
    "null_distribution", "randmix_replicate", "randnorm_replicate",
    "replicate_rng",
    "WeightTable", "build_weight_table", "covariance_weights", "effn_values",
    "final_weights", "joint_c", "rsq_matrix",
]
