"""Distributional benchmark for synthetic-speech datasets.

A candidate dataset is scored per feature by its 2-Wasserstein distance to
the nearest real-speech reference and the nearest noise distractor; scores
average into five factor scores and one overall 0-100 score, where above 50
means closer to real speech than to noise.
"""

from ._version import __version__
from .distances import (
    DEFAULT_MAX_OBS,
    DistanceResult,
    EmpiricalDistribution,
    GaussianSummary,
    min_distances,
    pool,
    summarize_gaussian,
    wasserstein_1d,
    wasserstein_gaussian,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateSignalError,
    EmptyReferenceError,
    EngineError,
    FeatureFileError,
    InsufficientDataError,
    ManifestError,
    NumericalError,
    WavFormatError,
)
from .extractors import (
    NoiseKind,
    PitchConfig,
    compute_wer,
    estimate_wada_snr,
    extract_pitch,
    generate_noise,
    token_run_lengths,
)
from .pipeline import extract_dataset, generate_noise_dataset
from .rng import Xoshiro256StarStar, derive_seed
from .scoring import (
    DEFAULT_REGISTRY,
    FACTORS,
    BenchmarkManifest,
    FactorScore,
    FeatureRegistry,
    FeatureScore,
    FeatureSpec,
    ScoreReport,
    aggregate,
    default_registry,
    feature_score,
    load_benchmark_manifest,
    render_score_table,
    round_half_even,
    run_benchmark,
)
from .stats import (
    RankedSeries,
    WilcoxonResult,
    average_ranks,
    pairwise_p_values,
    pairwise_significance,
    spearman,
    wilcoxon_signed_rank,
)
from .store import (
    DatasetManifest,
    FeatureTable,
    load_manifest,
    read_feature_file,
    read_token_file,
    read_tsv_map,
    write_feature_file,
    write_manifest,
    write_token_file,
    write_tsv_map,
)
from .wav_io import Waveform, decode_wav, write_wav

__all__ = [
    "__version__",
    "BenchmarkManifest",
    "ConfigError",
    "DataError",
    "DatasetManifest",
    "DEFAULT_MAX_OBS",
    "DEFAULT_REGISTRY",
    "DegenerateSignalError",
    "DistanceResult",
    "EmptyReferenceError",
    "EmpiricalDistribution",
    "EngineError",
    "FACTORS",
    "FactorScore",
    "FeatureFileError",
    "FeatureRegistry",
    "FeatureScore",
    "FeatureSpec",
    "FeatureTable",
    "GaussianSummary",
    "InsufficientDataError",
    "ManifestError",
    "NoiseKind",
    "NumericalError",
    "PitchConfig",
    "RankedSeries",
    "ScoreReport",
    "Waveform",
    "WavFormatError",
    "WilcoxonResult",
    "Xoshiro256StarStar",
    "aggregate",
    "average_ranks",
    "compute_wer",
    "decode_wav",
    "default_registry",
    "derive_seed",
    "estimate_wada_snr",
    "extract_dataset",
    "extract_pitch",
    "feature_score",
    "generate_noise",
    "generate_noise_dataset",
    "load_benchmark_manifest",
    "load_manifest",
    "min_distances",
    "pairwise_p_values",
    "pairwise_significance",
    "pool",
    "read_feature_file",
    "read_token_file",
    "read_tsv_map",
    "render_score_table",
    "round_half_even",
    "run_benchmark",
    "spearman",
    "summarize_gaussian",
    "token_run_lengths",
    "wasserstein_1d",
    "wasserstein_gaussian",
    "wilcoxon_signed_rank",
    "write_feature_file",
    "write_manifest",
    "write_token_file",
    "write_tsv_map",
    "write_wav",
]
