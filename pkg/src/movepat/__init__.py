"""
movepat - movement-pattern mining on 10 Hz player tracking data.

Discretize tracking streams into movement-unit strings, mine closed contiguous
patterns, closed itemsets and clustered LCS patterns per player-match, compare
the three pattern families, and test how well each separates positions:

    from movepat import PipelineConfig, SynthConfig, run_pipeline

    result = run_pipeline(PipelineConfig(synth=SynthConfig(seed=7), output_dir="out"))
    print(result.summary["best_model"])
"""

from movepat._version import __version__  # noqa: E402

# Alphabet and discretization
from movepat.alphabet import (
    ALPHABET,
    AccelerationBand,
    Band,
    BandThresholds,
    MovementUnit,
    TurningBand,
    VelocityBand,
    decode,
    describe_pattern,
    encode,
)

# Pattern analysis
from movepat.analysis import (
    compare,
    jaccard,
    jaccard_matrix,
    overlap_by_position,
    overlap_summary,
    overlap_topk,
    position_overlap,
    top_k,
    union_patterns,
)
from movepat.config import ClassifyConfig, CompareConfig, DiscretizeConfig, PipelineConfig, load_config, load_thresholds

# Miners
from movepat.contiguous import mine_closed_contiguous, support_contiguous

# Exceptions
from movepat.exceptions import (
    ConfigError,
    DegenerateLabelsError,
    EmptyInputError,
    GapError,
    InvalidSampleError,
    KindMismatchError,
    MissingClassError,
    MovepatError,
    NotFittedError,
    StageError,
    UndefinedInputError,
    UnrecoverableInputError,
)
from movepat.features import FeatureMatrix, featurize, read_matrix, write_matrix
from movepat.ingest import (
    InactiveConfig,
    TrackingStream,
    build_sequences,
    derive_acceleration,
    derive_turning_angle,
    discretize_sample,
    discretize_streams,
    read_observations,
    read_tracking_csv,
    write_observations,
    write_tracking_csv,
)
from movepat.itemset import mine_closed_itemsets, support_itemset, to_transactions
from movepat.mining import mine_observations, mine_sequences, read_patterns, write_patterns

# Classifiers
from movepat.models import (
    DecisionTree,
    GaussianNB,
    LogisticRegressionL1,
    MLPClassifier,
    RandomForest,
    fit_cart,
    fit_gaussian_nb,
    fit_logreg_l1,
    fit_mlp,
    fit_random_forest,
    make_model,
)
from movepat.pipeline import PipelineResult, run_pipeline
from movepat.smp import cluster_sequences, edit_distance_normalized, lcs_pair, smp_extract
from movepat.synth import Motif, SynthConfig, generate_cohort, realize_streams
from movepat.telemetry import get_telemetry_json, reset_telemetry

# Types
from movepat.types import (
    Algorithm,
    ClusteringConfig,
    CvConfig,
    CvReport,
    FoldMetrics,
    ImportanceEntry,
    ImportanceRanking,
    MinedObservation,
    MinerConfig,
    ModelName,
    MovementSequence,
    ObservationSet,
    OverlapEnd,
    OverlapEntry,
    Pattern,
    PatternKind,
    PositionOverlap,
    TrackingSample,
    UniquePatternSet,
)
from movepat.validation import cross_validate, fold_indices, fold_metrics, importance_for_matrix, top_k_importance

__all__ = [
    # End to end
    "run_pipeline",
    "PipelineResult",
    "PipelineConfig",
    "DiscretizeConfig",
    "CompareConfig",
    "ClassifyConfig",
    "load_config",
    "load_thresholds",
    # Alphabet
    "ALPHABET",
    "Band",
    "BandThresholds",
    "VelocityBand",
    "AccelerationBand",
    "TurningBand",
    "MovementUnit",
    "encode",
    "decode",
    "describe_pattern",
    # Ingestion
    "TrackingStream",
    "InactiveConfig",
    "derive_acceleration",
    "derive_turning_angle",
    "discretize_sample",
    "build_sequences",
    "discretize_streams",
    "read_tracking_csv",
    "write_tracking_csv",
    "read_observations",
    "write_observations",
    # Mining
    "support_contiguous",
    "mine_closed_contiguous",
    "to_transactions",
    "support_itemset",
    "mine_closed_itemsets",
    "edit_distance_normalized",
    "cluster_sequences",
    "lcs_pair",
    "smp_extract",
    "mine_sequences",
    "mine_observations",
    "read_patterns",
    "write_patterns",
    # Analysis
    "union_patterns",
    "jaccard",
    "jaccard_matrix",
    "top_k",
    "overlap_topk",
    "overlap_summary",
    "overlap_by_position",
    "position_overlap",
    "compare",
    # Features and classifiers
    "FeatureMatrix",
    "featurize",
    "read_matrix",
    "write_matrix",
    "LogisticRegressionL1",
    "GaussianNB",
    "DecisionTree",
    "RandomForest",
    "MLPClassifier",
    "make_model",
    "fit_logreg_l1",
    "fit_gaussian_nb",
    "fit_cart",
    "fit_random_forest",
    "fit_mlp",
    "cross_validate",
    "fold_indices",
    "fold_metrics",
    "top_k_importance",
    "importance_for_matrix",
    # Synthetic data
    "Motif",
    "SynthConfig",
    "generate_cohort",
    "realize_streams",
    # Telemetry
    "get_telemetry_json",
    "reset_telemetry",
    # Types
    "Algorithm",
    "PatternKind",
    "ModelName",
    "OverlapEnd",
    "TrackingSample",
    "MovementSequence",
    "ObservationSet",
    "MinerConfig",
    "ClusteringConfig",
    "Pattern",
    "MinedObservation",
    "UniquePatternSet",
    "OverlapEntry",
    "PositionOverlap",
    "CvConfig",
    "FoldMetrics",
    "CvReport",
    "ImportanceEntry",
    "ImportanceRanking",
    # Exceptions
    "MovepatError",
    "ConfigError",
    "GapError",
    "InvalidSampleError",
    "UnrecoverableInputError",
    "EmptyInputError",
    "KindMismatchError",
    "UndefinedInputError",
    "MissingClassError",
    "DegenerateLabelsError",
    "NotFittedError",
    "StageError",
    # Version
    "__version__",
]
