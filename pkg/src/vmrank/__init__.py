"""Rank cloud VM types by expected application performance.

Micro-benchmark measurements are normalized per attribute (z-score over
the fleet, polarity adjusted), reduced to four group scores per VM, and
combined with user weights (0-5 per group) into a single score that
induces the ranking. The toolkit also sweeps the entire 1295-vector weight
space for dominance statistics and validates rankings against measured
application timings via rank correlation.
"""

from .errors import (
    DataFormatError,
    DegenerateRanksError,
    EmptyInputError,
    ExtractionError,
    IncompleteMatrixError,
    MissingGroupError,
    NoRuleMatchedError,
    PipelineError,
    UnknownFixtureError,
    VmRankError,
)
from .fixtures import (
    CaseStudyRanks,
    casestudy1_timings_path,
    demo_measurements_path,
    extraction_spec_path,
    load_fixture_dataset,
)
from .ingest import (
    Aggregation,
    ExtractionResult,
    ExtractionRule,
    ExtractionSpec,
    aggregate,
    apply_extraction_spec,
    format_measurements,
    load_measurements,
    load_measurements_path,
    load_timings,
    load_timings_path,
    merge_observations,
)
from .model import (
    AttributeDef,
    AttributeGroup,
    ComparisonReport,
    CorrelationMethod,
    DEFAULT_TIE_TOLERANCE,
    MeasurementMatrix,
    MeasurementSet,
    Mode,
    NormalizedMatrix,
    Polarity,
    RankEntry,
    RankTable,
    TableKind,
    TimingRecord,
    TimingSet,
    VmDescriptor,
    WeightVector,
    validate_rank_table,
)
from .scoring import (
    GroupReduction,
    ScoringContext,
    contributions,
    group_scores,
    normalize,
    parallel_adjust,
    rank,
    rank_pipeline,
    score,
)
from .sweep import FULL_SWEEP_SIZE, SweepResult, enumerate_weight_vectors, top_k_frequency
from .validation import (
    DivergenceFlag,
    DivergenceReport,
    compare,
    divergence_report,
    rank_empirical,
)

__version__ = "0.1.0"
