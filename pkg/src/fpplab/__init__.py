"""Growth-cluster passage-time simulation and variance analysis toolkit."""

__version__ = "0.1.0"

from .lattice import (
    Cluster,
    StripRegion,
    Vertex,
    boundary_edges_from_scratch,
    integer_part_vector,
    min_boundary,
    neighbors,
)
from .rng import (
    RngStream,
    derive_stream,
    exponential_batch,
    sample_exponential,
    sample_uniform01,
)
from .engines import (
    GrowthTrace,
    HitResult,
    ResourceLimitError,
    SimConfig,
    extract_hit_scalars,
    farm_replicates,
    run,
    run_dijkstra,
    run_eden,
    run_richardson,
    run_strip,
)
from .analysis import (
    ConditionalMoments,
    GrowthConstantEstimate,
    KsResult,
    Lemma2Result,
    SampleSet,
    ScalingFit,
    TimeConstantEstimate,
    abel_summation_gap,
    bootstrap_variance_growth,
    chi_square_two_sample,
    clt_conditional_check,
    conditional_moments,
    estimate_growth_constant,
    estimate_time_constant,
    exponential_cdf,
    first_hit_index,
    fit_scaling,
    ks_one_sample,
    ks_two_sample,
    lemma1_ratio,
    lemma2_check,
    normal_cdf,
    q_sequence,
    rearrange_decreasing,
    tightness_scan,
)

__all__ = [
    "__version__",
    "Cluster",
    "ConditionalMoments",
    "GrowthConstantEstimate",
    "GrowthTrace",
    "HitResult",
    "KsResult",
    "Lemma2Result",
    "ResourceLimitError",
    "RngStream",
    "SampleSet",
    "ScalingFit",
    "SimConfig",
    "StripRegion",
    "TimeConstantEstimate",
    "Vertex",
    "abel_summation_gap",
    "bootstrap_variance_growth",
    "boundary_edges_from_scratch",
    "chi_square_two_sample",
    "clt_conditional_check",
    "conditional_moments",
    "derive_stream",
    "estimate_growth_constant",
    "estimate_time_constant",
    "exponential_batch",
    "exponential_cdf",
    "extract_hit_scalars",
    "farm_replicates",
    "first_hit_index",
    "fit_scaling",
    "integer_part_vector",
    "ks_one_sample",
    "ks_two_sample",
    "lemma1_ratio",
    "lemma2_check",
    "min_boundary",
    "neighbors",
    "normal_cdf",
    "q_sequence",
    "rearrange_decreasing",
    "run",
    "run_dijkstra",
    "run_eden",
    "run_richardson",
    "run_strip",
    "sample_exponential",
    "sample_uniform01",
    "tightness_scan",
]
