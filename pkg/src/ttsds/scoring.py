"""Benchmark scoring: per-feature distances become a 0-100 quality score.

Each feature of the candidate dataset is compared against a collection of
reference (real speech) datasets and a collection of distractor (noise)
datasets. With w_real and w_noise the smallest distances to each side,

    score = 100 * w_noise / (w_real + w_noise)

so a feature scores above 50 exactly when the candidate sits closer to real
speech than to noise. Features average (unweighted) into five factor
scores - general, environment, intelligibility, prosody, speaker - and the
factors average into the overall score.

Scalar features are compared with the exact one-dimensional distance,
vector features through their Gaussian summaries. A feature resolves from
a dataset either as a feature file, or natively: "wer_<asr>" from the
dataset's transcripts plus that recognizer's hypotheses, "<tok>_token_len"
as run lengths of that tokenizer's token file. A feature file with the
exact feature id always takes precedence, so precomputed tables can stand
in for native computation.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

import numpy as np

from ._version import __version__
from .distances import (
    DEFAULT_MAX_OBS,
    min_distances,
    pool,
    summarize_gaussian,
)
from .errors import ConfigError, DataError, EmptyReferenceError
from .extractors import compute_wer, token_run_lengths
from .rng import derive_seed
from .store import (
    DatasetManifest,
    FeatureTable,
    load_manifest,
    read_token_file,
    read_tsv_map,
)

FACTORS = ("general", "environment", "intelligibility", "prosody", "speaker")

UTTERANCE_COUNT_GUIDANCE = 80  # datasets below this get a warning, not an error


@dataclass(frozen=True)
class FeatureSpec:
    """One feature: its id, the factor it serves, and how it is compared."""

    feature_id: str
    factor: str
    kind: str  # "scalar" -> exact 1-d distance, "vector" -> gaussian summary

    def __post_init__(self) -> None:
        if not self.feature_id:
            raise ValueError("feature_id must be non-empty")
        if self.factor not in FACTORS:
            raise ValueError(f"unknown factor '{self.factor}'")
        if self.kind not in ("scalar", "vector"):
            raise ValueError(f"kind must be 'scalar' or 'vector', got '{self.kind}'")

    @property
    def method(self) -> str:
        return "exact_1d" if self.kind == "scalar" else "gaussian"


class FeatureRegistry:
    """Maps feature ids to the factor they serve; iteration order is fixed."""

    def __init__(self, specs: Iterable[FeatureSpec]):
        self._specs: dict[str, FeatureSpec] = {}
        for spec in specs:
            if spec.feature_id in self._specs:
                raise ValueError(f"duplicate feature '{spec.feature_id}'")
            self._specs[spec.feature_id] = spec

    def __iter__(self):
        return iter(self._specs.values())

    def __contains__(self, feature_id: str) -> bool:
        return feature_id in self._specs

    def __len__(self) -> int:
        return len(self._specs)

    def get(self, feature_id: str) -> FeatureSpec | None:
        return self._specs.get(feature_id)

    def resolve(self, feature_id: str) -> FeatureSpec:
        """Look up a feature, deriving specs for native patterns.

        Ids of the form "wer_<asr>" and "<tokenizer>_token_len" are valid
        without registration; they are scalar intelligibility and prosody
        features respectively.
        """
        spec = self._specs.get(feature_id)
        if spec is not None:
            return spec
        if feature_id.startswith("wer_") and len(feature_id) > 4:
            return FeatureSpec(feature_id, "intelligibility", "scalar")
        if feature_id.endswith("_token_len") and len(feature_id) > 10:
            return FeatureSpec(feature_id, "prosody", "scalar")
        raise ConfigError(f"unknown feature '{feature_id}'")


_DEFAULT_SPECS = (
    FeatureSpec("hubert", "general", "vector"),
    FeatureSpec("wav2vec2", "general", "vector"),
    FeatureSpec("voicefixer_pesq", "environment", "scalar"),
    FeatureSpec("wada_snr", "environment", "scalar"),
    FeatureSpec("wer_wav2vec2", "intelligibility", "scalar"),
    FeatureSpec("wer_whisper", "intelligibility", "scalar"),
    FeatureSpec("pitch", "prosody", "scalar"),
    FeatureSpec("hubert_token_len", "prosody", "scalar"),
    FeatureSpec("mpm", "prosody", "vector"),
    FeatureSpec("dvector", "speaker", "vector"),
    FeatureSpec("wespeaker", "speaker", "vector"),
)

DEFAULT_REGISTRY = FeatureRegistry(_DEFAULT_SPECS)


def default_registry() -> FeatureRegistry:
    return DEFAULT_REGISTRY


def feature_score(w_real: float, w_noise: float) -> float:
    """100 * w_noise / (w_real + w_noise).

    Equal distances (including the degenerate 0, 0 case) give exactly 50.0
    and a vanishing distance gives exactly 0.0 or 100.0, so the boundary
    values carry no floating-point noise.
    """
    if w_real < 0 or w_noise < 0:
        raise ValueError("distances must be non-negative")
    if w_real == w_noise:
        return 50.0
    if w_real == 0.0:
        return 100.0
    if w_noise == 0.0:
        return 0.0
    return 100.0 * w_noise / (w_real + w_noise)


@dataclass(frozen=True)
class FeatureScore:
    feature_id: str
    score: float
    w_real: float
    w_noise: float
    nearest_real: str
    nearest_noise: str
    method: str
    degenerate: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 100.0:
            raise ValueError(f"score out of range: {self.score}")
        total = self.w_real + self.w_noise
        if total > 0 and abs(self.score - 100.0 * self.w_noise / total) > 1e-9:
            raise ValueError(
                f"feature '{self.feature_id}': score inconsistent with distances"
            )


@dataclass(frozen=True)
class FactorScore:
    factor: str
    score: float
    features: tuple[FeatureScore, ...]


@dataclass(frozen=True)
class ScoreReport:
    candidate_id: str
    factor_scores: tuple[FactorScore, ...]
    ttsds: float
    excluded_factors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    provenance: dict = field(default_factory=dict)
    seed: int = 0
    max_obs: int = DEFAULT_MAX_OBS

    def to_dict(self) -> dict:
        return {
            "engine": {"name": "ttsds", "version": __version__},
            "candidate": self.candidate_id,
            "seed": self.seed,
            "max_obs": self.max_obs,
            "excluded_factors": list(self.excluded_factors),
            "factors": [
                {
                    "factor": factor.factor,
                    "score": factor.score,
                    "features": [
                        {
                            "feature": fs.feature_id,
                            "score": fs.score,
                            "w_real": fs.w_real,
                            "w_noise": fs.w_noise,
                            "nearest_real": fs.nearest_real,
                            "nearest_noise": fs.nearest_noise,
                            "method": fs.method,
                            "degenerate": fs.degenerate,
                        }
                        for fs in factor.features
                    ],
                }
                for factor in self.factor_scores
            ],
            "ttsds": self.ttsds,
            "warnings": list(self.warnings),
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "ScoreReport":
        try:
            factors = tuple(
                FactorScore(
                    factor=entry["factor"],
                    score=float(entry["score"]),
                    features=tuple(
                        FeatureScore(
                            feature_id=fs["feature"],
                            score=float(fs["score"]),
                            w_real=float(fs["w_real"]),
                            w_noise=float(fs["w_noise"]),
                            nearest_real=fs["nearest_real"],
                            nearest_noise=fs["nearest_noise"],
                            method=fs["method"],
                            degenerate=bool(fs["degenerate"]),
                        )
                        for fs in entry["features"]
                    ),
                )
                for entry in doc["factors"]
            )
            return cls(
                candidate_id=doc["candidate"],
                factor_scores=factors,
                ttsds=float(doc["ttsds"]),
                excluded_factors=tuple(doc.get("excluded_factors", ())),
                warnings=tuple(doc.get("warnings", ())),
                provenance=doc.get("provenance", {}),
                seed=int(doc.get("seed", 0)),
                max_obs=int(doc.get("max_obs", DEFAULT_MAX_OBS)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed score report: {exc}") from exc

    def feature_score_map(self) -> dict[str, float]:
        return {
            fs.feature_id: fs.score
            for factor in self.factor_scores
            for fs in factor.features
        }


def aggregate(
    feature_scores: Sequence[FeatureScore],
    *,
    registry: FeatureRegistry | None = None,
    exclude_factors: Sequence[str] = (),
    candidate_id: str = "",
    warnings: Sequence[str] = (),
    provenance: dict | None = None,
    seed: int = 0,
    max_obs: int = DEFAULT_MAX_OBS,
) -> ScoreReport:
    """Fold feature scores into factor scores and the overall mean.

    Every factor must either contribute at least one feature score or be
    listed in `exclude_factors`.
    """
    registry = registry or DEFAULT_REGISTRY
    excluded = tuple(dict.fromkeys(exclude_factors))
    for factor in excluded:
        if factor not in FACTORS:
            raise ConfigError(f"unknown factor '{factor}' in exclude_factors")
    by_factor: dict[str, list[FeatureScore]] = {factor: [] for factor in FACTORS}
    seen: set[str] = set()
    for fs in feature_scores:
        if fs.feature_id in seen:
            raise ConfigError(f"duplicate feature score '{fs.feature_id}'")
        seen.add(fs.feature_id)
        factor = registry.resolve(fs.feature_id).factor
        if factor in excluded:
            raise ConfigError(
                f"feature '{fs.feature_id}' belongs to excluded factor '{factor}'"
            )
        by_factor[factor].append(fs)
    factor_scores = []
    for factor in FACTORS:
        if factor in excluded:
            continue
        members = by_factor[factor]
        if not members:
            raise ConfigError(
                f"factor '{factor}' has no feature scores; supply features "
                f"or exclude it explicitly"
            )
        factor_scores.append(
            FactorScore(
                factor=factor,
                score=fmean(fs.score for fs in members),
                features=tuple(members),
            )
        )
    if not factor_scores:
        raise ConfigError("all factors are excluded, nothing to aggregate")
    return ScoreReport(
        candidate_id=candidate_id,
        factor_scores=tuple(factor_scores),
        ttsds=fmean(fs.score for fs in factor_scores),
        excluded_factors=excluded,
        warnings=tuple(warnings),
        provenance=provenance if provenance is not None else {},
        seed=seed,
        max_obs=max_obs,
    )


@dataclass
class BenchmarkManifest:
    """A full benchmark run: one candidate against two dataset collections.

    `features` is None for automatic selection (every registry feature the
    candidate can resolve); otherwise the explicit list is required to
    resolve for every dataset.
    """

    candidate: Path
    references: list[Path]
    distractors: list[Path]
    features: list[str] | None = None
    exclude_factors: tuple[str, ...] = ()
    max_obs: int = DEFAULT_MAX_OBS
    seed: int = 0
    source_sha256: str | None = None

    def __post_init__(self) -> None:
        if not self.references:
            raise ConfigError("need at least one reference dataset")
        if not self.distractors:
            raise ConfigError("need at least one distractor dataset")
        if self.max_obs < 2:
            raise ConfigError(f"max_obs must be >= 2, got {self.max_obs}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        for factor in self.exclude_factors:
            if factor not in FACTORS:
                raise ConfigError(f"unknown factor '{factor}' in exclude_factors")
        if self.features is not None:
            if not self.features:
                raise ConfigError("features list must be non-empty (or 'auto')")
            if len(set(self.features)) != len(self.features):
                raise ConfigError("features list contains duplicates")


def load_benchmark_manifest(path: str | Path) -> BenchmarkManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: cannot parse benchmark manifest: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: benchmark manifest must be a JSON object")
    known = {
        "candidate",
        "references",
        "distractors",
        "features",
        "exclude_factors",
        "max_obs",
        "seed",
    }
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown field '{unknown[0]}'")
    for required in ("candidate", "references", "distractors"):
        if required not in doc:
            raise ConfigError(f"{path}: missing field '{required}'")
    base = path.parent

    def resolve(rel, what: str) -> Path:
        if not isinstance(rel, str) or not rel:
            raise ConfigError(f"{path}: {what} must be a non-empty path string")
        target = Path(rel) if Path(rel).is_absolute() else (base / rel).resolve()
        if not target.is_file():
            raise ConfigError(f"{path}: {what} not found: {target}")
        return target

    features = doc.get("features", "auto")
    if features == "auto":
        features = None
    elif not isinstance(features, list):
        raise ConfigError(f"{path}: features must be a list of ids or \"auto\"")
    references = doc["references"]
    distractors = doc["distractors"]
    if not isinstance(references, list) or not isinstance(distractors, list):
        raise ConfigError(f"{path}: references and distractors must be lists")
    return BenchmarkManifest(
        candidate=resolve(doc["candidate"], "candidate manifest"),
        references=[resolve(p, "reference manifest") for p in references],
        distractors=[resolve(p, "distractor manifest") for p in distractors],
        features=features,
        exclude_factors=tuple(doc.get("exclude_factors", ())),
        max_obs=int(doc.get("max_obs", DEFAULT_MAX_OBS)),
        seed=int(doc.get("seed", 0)),
        source_sha256=hashlib.sha256(path.read_bytes()).hexdigest(),
    )


def _resolvable(spec: FeatureSpec, dataset: DatasetManifest) -> bool:
    feature_id = spec.feature_id
    if feature_id in dataset.feature_files:
        return True
    if feature_id.startswith("wer_") and len(feature_id) > 4:
        return dataset.transcripts is not None and feature_id[4:] in dataset.hypotheses
    if feature_id.endswith("_token_len") and len(feature_id) > 10:
        return feature_id[:-10] in dataset.tokens
    return False


def _load_feature_table(
    spec: FeatureSpec, dataset: DatasetManifest
) -> tuple[FeatureTable, list[str]]:
    from .store import read_feature_file  # local to keep module import light

    feature_id = spec.feature_id
    dataset_id = dataset.dataset_id
    if feature_id in dataset.feature_files:
        return read_feature_file(dataset.feature_files[feature_id], feature_id), []
    warnings: list[str] = []
    if feature_id.startswith("wer_") and feature_id[4:] in dataset.hypotheses:
        if dataset.transcripts is None:
            raise ConfigError(
                f"feature '{feature_id}': dataset '{dataset_id}' has no transcripts"
            )
        recognizer = feature_id[4:]
        references = read_tsv_map(dataset.transcripts)
        hypotheses = read_tsv_map(dataset.hypotheses[recognizer])
        utterances = []
        for utterance_id, reference in references.items():
            if utterance_id not in hypotheses:
                warnings.append(
                    f"dataset '{dataset_id}', feature '{feature_id}': "
                    f"no hypothesis for utterance '{utterance_id}'"
                )
                utterances.append((utterance_id, np.zeros((0, 1))))
                continue
            try:
                value = compute_wer(reference, hypotheses[utterance_id])
            except EmptyReferenceError:
                warnings.append(
                    f"dataset '{dataset_id}', feature '{feature_id}': "
                    f"utterance '{utterance_id}' has an empty reference, skipped"
                )
                utterances.append((utterance_id, np.zeros((0, 1))))
                continue
            utterances.append((utterance_id, np.array([[value]])))
        return FeatureTable(feature_id, 1, utterances), warnings
    if feature_id.endswith("_token_len") and feature_id[:-10] in dataset.tokens:
        token_map = read_token_file(dataset.tokens[feature_id[:-10]])
        utterances = [
            (
                utterance_id,
                np.asarray(token_run_lengths(toks), dtype=np.float64).reshape(-1, 1),
            )
            for utterance_id, toks in token_map.items()
        ]
        return FeatureTable(feature_id, 1, utterances), warnings
    raise ConfigError(
        f"feature '{feature_id}' is not resolvable for dataset '{dataset_id}'"
    )


def _map_ordered(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items))


def run_benchmark(
    manifest: BenchmarkManifest,
    *,
    registry: FeatureRegistry | None = None,
    jobs: int = 1,
) -> ScoreReport:
    """Execute a full benchmark run; the report is deterministic for a seed.

    Results are invariant to dataset listing order and to `jobs`: features
    live in registry order, minima break ties on dataset id, warnings are
    sorted, and parallel phases reduce in task order.
    """
    registry = registry or DEFAULT_REGISTRY
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")

    candidate = load_manifest(manifest.candidate)
    references = [load_manifest(p) for p in manifest.references]
    distractors = [load_manifest(p) for p in manifest.distractors]
    if candidate.role != "candidate":
        raise ConfigError(
            f"dataset '{candidate.dataset_id}' has role '{candidate.role}' "
            f"but is listed as the candidate"
        )
    for datasets, wanted in ((references, "reference"), (distractors, "distractor")):
        for ds in datasets:
            if ds.role != wanted:
                raise ConfigError(
                    f"dataset '{ds.dataset_id}' has role '{ds.role}' "
                    f"but is listed as a {wanted}"
                )
    every = [candidate, *references, *distractors]
    ids = [ds.dataset_id for ds in every]
    if len(set(ids)) != len(ids):
        duplicate = next(d for d in ids if ids.count(d) > 1)
        raise ConfigError(f"duplicate dataset id '{duplicate}'")

    # settle the feature set, then require it everywhere before any scoring
    if manifest.features is None:
        enabled = [
            spec
            for spec in registry
            if spec.factor not in manifest.exclude_factors
            and _resolvable(spec, candidate)
        ]
        if not enabled:
            raise ConfigError(
                f"no registry feature is resolvable for candidate "
                f"'{candidate.dataset_id}'"
            )
    else:
        in_registry = [
            registry.resolve(f) for f in manifest.features if f in registry
        ]
        synthesized = sorted(
            (registry.resolve(f) for f in manifest.features if f not in registry),
            key=lambda spec: spec.feature_id,
        )
        order = {spec.feature_id: i for i, spec in enumerate(registry)}
        in_registry.sort(key=lambda spec: order[spec.feature_id])
        enabled = in_registry + synthesized
        for spec in enabled:
            if spec.factor in manifest.exclude_factors:
                raise ConfigError(
                    f"feature '{spec.feature_id}' belongs to excluded factor "
                    f"'{spec.factor}'"
                )
    for factor in FACTORS:
        if factor in manifest.exclude_factors:
            continue
        if not any(spec.factor == factor for spec in enabled):
            raise ConfigError(
                f"factor '{factor}' has no resolvable features; supply them "
                f"or exclude the factor"
            )
    missing = [
        (spec.feature_id, ds.dataset_id)
        for spec in enabled
        for ds in every
        if not _resolvable(spec, ds)
    ]
    if missing:
        feature_id, dataset_id = missing[0]
        raise ConfigError(
            f"feature '{feature_id}' is not resolvable for dataset "
            f"'{dataset_id}' ({len(missing)} missing combination(s) total)"
        )

    warnings: list[str] = []

    def prepare(task):
        ds, spec = task
        table, table_warnings = _load_feature_table(spec, ds)
        if spec.kind == "scalar" and table.dim != 1:
            raise DataError(
                f"feature '{spec.feature_id}' for dataset '{ds.dataset_id}': "
                f"expected scalar observations, file has dim {table.dim}"
            )
        pool_seed = derive_seed(
            manifest.seed, "pool", ds.dataset_id, spec.feature_id
        )
        distribution = pool(
            table, manifest.max_obs, pool_seed, dataset_id=ds.dataset_id
        )
        if spec.kind == "vector":
            distribution = summarize_gaussian(distribution)
        return table.dim, len(table.utterances), distribution, table_warnings

    tasks = [(ds, spec) for ds in every for spec in enabled]
    prepared = _map_ordered(prepare, tasks, jobs)

    dims: dict[str, dict[str, int]] = {}
    utterance_counts: dict[str, int] = {}
    observations: dict[tuple[str, str], object] = {}
    for (ds, spec), (dim, n_utts, distribution, table_warnings) in zip(
        tasks, prepared
    ):
        dims.setdefault(spec.feature_id, {})[ds.dataset_id] = dim
        counts = utterance_counts.get(ds.dataset_id, 0)
        utterance_counts[ds.dataset_id] = max(counts, n_utts)
        observations[(ds.dataset_id, spec.feature_id)] = distribution
        warnings.extend(table_warnings)

    for feature_id, per_dataset in dims.items():
        unique_dims = sorted(set(per_dataset.values()))
        if len(unique_dims) > 1:
            raise DataError(
                f"feature '{feature_id}': observation dimension differs across "
                f"datasets ({unique_dims})"
            )
    for dataset_id in sorted(utterance_counts):
        count = utterance_counts[dataset_id]
        if count < UTTERANCE_COUNT_GUIDANCE:
            warnings.append(
                f"dataset '{dataset_id}': only {count} utterances "
                f"(recommended 80-100)"
            )

    def score_feature(spec: FeatureSpec) -> FeatureScore:
        cand = observations[(candidate.dataset_id, spec.feature_id)]
        reals = [observations[(ds.dataset_id, spec.feature_id)] for ds in references]
        noises = [observations[(ds.dataset_id, spec.feature_id)] for ds in distractors]
        w_real, w_noise, nearest_real, nearest_noise = min_distances(
            cand, reals, noises, method=spec.method, feature_id=spec.feature_id
        )
        degenerate = w_real == 0.0 and w_noise == 0.0
        return FeatureScore(
            feature_id=spec.feature_id,
            score=feature_score(w_real, w_noise),
            w_real=w_real,
            w_noise=w_noise,
            nearest_real=nearest_real,
            nearest_noise=nearest_noise,
            method=spec.method,
            degenerate=degenerate,
        )

    feature_scores = _map_ordered(score_feature, enabled, jobs)
    for fs in feature_scores:
        if fs.degenerate:
            warnings.append(
                f"feature '{fs.feature_id}': distances to nearest reference and "
                f"distractor both vanish; score pinned at 50"
            )

    provenance = {
        "benchmark_manifest_sha256": manifest.source_sha256,
        "dataset_manifests_sha256": {
            ds.dataset_id: hashlib.sha256(Path(source).read_bytes()).hexdigest()
            for ds, source in zip(
                every,
                [manifest.candidate, *manifest.references, *manifest.distractors],
            )
        },
    }
    return aggregate(
        feature_scores,
        registry=registry,
        exclude_factors=manifest.exclude_factors,
        candidate_id=candidate.dataset_id,
        warnings=tuple(sorted(set(warnings))),
        provenance=provenance,
        seed=manifest.seed,
        max_obs=manifest.max_obs,
    )


def round_half_even(value: float, decimals: int = 1) -> float:
    """Decimal rounding of the shortest repr, half to even."""
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_EVEN))


_FACTOR_HEADERS = {
    "general": "Gen",
    "environment": "Env",
    "intelligibility": "Int",
    "prosody": "Pro",
    "speaker": "Spk",
}


def render_score_table(reports: Sequence[ScoreReport]) -> str:
    """Aligned text table: System, factor columns, overall score."""
    header = ["System"] + [_FACTOR_HEADERS[f] for f in FACTORS] + ["TTSDS"]
    rows = [header]
    for report in reports:
        by_factor = {fs.factor: fs.score for fs in report.factor_scores}
        cells = [report.candidate_id]
        for factor in FACTORS:
            if factor in by_factor:
                cells.append(f"{round_half_even(by_factor[factor]):.1f}")
            else:
                cells.append("-")
        cells.append(f"{round_half_even(report.ttsds):.1f}")
        rows.append(cells)
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for row in rows:
        first = row[0].ljust(widths[0])
        rest = [cell.rjust(width) for cell, width in zip(row[1:], widths[1:])]
        lines.append("  ".join([first, *rest]).rstrip())
    return "\n".join(lines) + "\n"
