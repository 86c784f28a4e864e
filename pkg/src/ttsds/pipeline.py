"""Dataset construction: native extraction over WAV folders, noise synthesis.

Both entry points write a self-contained dataset directory: feature files,
normalized copies of any text sidecars, and a manifest.json that the
scoring engine consumes. They return the manifest plus human-readable
warnings (low utterance counts, skipped degenerate utterances).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .errors import DataError, DegenerateSignalError
from .extractors import (
    NoiseKind,
    PitchConfig,
    estimate_wada_snr,
    extract_pitch,
    generate_noise,
)
from .rng import derive_seed
from .scoring import UTTERANCE_COUNT_GUIDANCE
from .store import (
    DatasetManifest,
    FeatureTable,
    read_token_file,
    read_tsv_map,
    write_feature_file,
    write_manifest,
    write_token_file,
    write_tsv_map,
)
from .wav_io import Waveform, decode_wav, write_wav

_EMPTY_ROW = np.zeros((0, 1))


def _pitch_and_snr_tables(
    utterances: list[tuple[str, Waveform]],
    pitch_config: PitchConfig,
    jobs: int,
    warn_context: str,
) -> tuple[FeatureTable, FeatureTable, list[str]]:
    def extract_one(item):
        utterance_id, waveform = item
        track = extract_pitch(waveform, pitch_config).reshape(-1, 1)
        try:
            snr = np.array([[estimate_wada_snr(waveform)]])
            snr_warning = None
        except DegenerateSignalError as exc:
            snr = _EMPTY_ROW
            snr_warning = (
                f"{warn_context}: utterance '{utterance_id}': {exc}; "
                f"no SNR observation"
            )
        return utterance_id, track, snr, snr_warning

    if jobs <= 1:
        results = [extract_one(item) for item in utterances]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(extract_one, utterances))
    warnings = [r[3] for r in results if r[3] is not None]
    pitch = FeatureTable("pitch", 1, [(r[0], r[1]) for r in results])
    snr = FeatureTable("wada_snr", 1, [(r[0], r[2]) for r in results])
    return pitch, snr, warnings


def _write_tables(
    out_dir: Path, tables: list[FeatureTable], warnings: list[str]
) -> dict[str, Path]:
    """Write non-empty tables as <feature_id>.feat; warn on empty ones."""
    feature_files: dict[str, Path] = {}
    for table in tables:
        if table.total_frames == 0:
            warnings.append(
                f"feature '{table.feature_id}' omitted: no valid observations"
            )
            continue
        path = out_dir / f"{table.feature_id}.feat"
        write_feature_file(table, path)
        feature_files[table.feature_id] = path
    return feature_files


def extract_dataset(
    wav_dir: str | Path,
    out_dir: str | Path,
    dataset_id: str,
    role: str = "candidate",
    *,
    transcripts: str | Path | None = None,
    hypotheses: dict[str, Path] | None = None,
    tokens: dict[str, Path] | None = None,
    pitch_config: PitchConfig = PitchConfig(),
    jobs: int = 1,
) -> tuple[DatasetManifest, list[str]]:
    """Run the native extractors over every .wav in a directory.

    Sidecar TSVs are re-validated and copied into the dataset directory so
    the output is self-contained.
    """
    wav_dir = Path(wav_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    wav_paths = sorted(wav_dir.glob("*.wav"))
    if not wav_paths:
        raise DataError(f"no .wav files in {wav_dir}")
    warnings: list[str] = []
    if len(wav_paths) < UTTERANCE_COUNT_GUIDANCE:
        warnings.append(
            f"dataset '{dataset_id}': only {len(wav_paths)} utterances "
            f"(recommended 80-100)"
        )
    stems = [p.stem for p in wav_paths]
    if len(set(stems)) != len(stems):
        duplicate = next(s for s in stems if stems.count(s) > 1)
        raise DataError(f"{wav_dir}: duplicate utterance id '{duplicate}'")

    loaded = [(p.stem, decode_wav(p)) for p in wav_paths]
    pitch, snr, table_warnings = _pitch_and_snr_tables(
        loaded, pitch_config, jobs, f"dataset '{dataset_id}'"
    )
    warnings.extend(table_warnings)
    feature_files = _write_tables(out_dir, [pitch, snr], warnings)

    transcripts_out = None
    if transcripts is not None:
        transcripts_out = out_dir / "transcripts.tsv"
        write_tsv_map(read_tsv_map(transcripts), transcripts_out)
    hypotheses_out = {}
    for name, path in (hypotheses or {}).items():
        hypotheses_out[name] = out_dir / f"hyp_{name}.tsv"
        write_tsv_map(read_tsv_map(path), hypotheses_out[name])
    tokens_out = {}
    for name, path in (tokens or {}).items():
        tokens_out[name] = out_dir / f"tokens_{name}.tsv"
        write_token_file(read_token_file(path), tokens_out[name])

    manifest = DatasetManifest(
        dataset_id=dataset_id,
        role=role,
        feature_files=feature_files,
        transcripts=transcripts_out,
        hypotheses=hypotheses_out,
        tokens=tokens_out,
    )
    write_manifest(manifest, out_dir / "manifest.json")
    return manifest, warnings


def generate_noise_dataset(
    out_dir: str | Path,
    kind: NoiseKind | str,
    *,
    count: int = 100,
    duration_s: float = 3.0,
    sample_rate: int = 16000,
    seed: int = 0,
    write_features: bool = True,
    pitch_config: PitchConfig = PitchConfig(),
    jobs: int = 1,
) -> tuple[DatasetManifest, list[str]]:
    """Synthesize one distractor dataset of `count` noise utterances.

    Utterance seeds derive from (seed, kind, index), so a dataset is
    reproducible utterance-by-utterance regardless of count.
    """
    kind = NoiseKind(kind)
    if count < 1:
        raise DataError(f"count must be >= 1, got {count}")
    out_dir = Path(out_dir)
    dataset_id = f"noise_{kind.value}"
    wav_out = out_dir / "wav"
    wav_out.mkdir(parents=True, exist_ok=True)
    utterances = []
    for i in range(count):
        utterance_id = f"{dataset_id}_{i:04d}"
        waveform = generate_noise(
            kind,
            duration_s,
            sample_rate,
            derive_seed(seed, "noise", kind.value, str(i)),
        )
        write_wav(waveform, wav_out / f"{utterance_id}.wav")
        utterances.append((utterance_id, waveform))

    warnings: list[str] = []
    if count < UTTERANCE_COUNT_GUIDANCE:
        warnings.append(
            f"dataset '{dataset_id}': only {count} utterances (recommended 80-100)"
        )
    feature_files: dict[str, Path] = {}
    if write_features:
        pitch, snr, table_warnings = _pitch_and_snr_tables(
            utterances, pitch_config, jobs, f"dataset '{dataset_id}'"
        )
        warnings.extend(table_warnings)
        feature_files = _write_tables(out_dir, [pitch, snr], warnings)

    manifest = DatasetManifest(
        dataset_id=dataset_id,
        role="distractor",
        feature_files=feature_files,
    )
    write_manifest(manifest, out_dir / "manifest.json")
    return manifest, warnings
