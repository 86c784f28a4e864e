"""Feature extraction: WAV files in, interchange-format dataset out.

Three operations mirror the three model families (frame-level SSL
embeddings, per-utterance speaker embeddings, ASR hypotheses plus k-means
frame tokens); `run_adapter` composes them into a complete dataset
directory with a manifest the scoring engine loads directly.

Files the models cannot use are skipped, not fatal: undecodable audio and
clips shorter than one encoder frame are dropped from every output,
reported as warnings, and listed in a `skipped.log` sidecar next to the
features.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audio import load_wav
from .config import AdapterConfig
from .errors import AdapterError, ModelError
from .interchange import (
    write_dataset_manifest,
    write_feature_file,
    write_tokens,
    write_tsv,
)
from .models import CtcRecognizer, FrameEncoder, KmeansTokenizer

SIDECAR_LOG = "skipped.log"


@dataclass(frozen=True, order=True)
class SkipRecord:
    file: str
    stage: str
    reason: str


class ModelCache:
    """Loads each checkpoint once, however many features share it."""

    def __init__(self, device: str):
        self.device = device
        self._loaded: dict[tuple[str, Path], object] = {}

    def get(self, cls, path: Path):
        key = (cls.__name__, Path(path).resolve())
        if key not in self._loaded:
            self._loaded[key] = cls.load(path, self.device)
        return self._loaded[key]


def _check_ids(wavs: list[Path]) -> list[str]:
    ids = [Path(path).stem for path in wavs]
    seen: set[str] = set()
    for utterance_id in ids:
        if utterance_id in seen:
            raise AdapterError(f"duplicate utterance id '{utterance_id}'")
        seen.add(utterance_id)
    return ids


def _prepare(
    wavs: list[Path], rate: int, min_samples: int
) -> tuple[list[str], list[np.ndarray], list[SkipRecord]]:
    """Decode to `rate`, dropping undecodable or too-short files."""
    ids, waves, skips = [], [], []
    for path, utterance_id in zip(wavs, _check_ids(wavs)):
        try:
            samples = load_wav(path, rate)
        except AdapterError as exc:
            skips.append(SkipRecord(Path(path).name, "decode", str(exc)))
            continue
        if len(samples) < min_samples:
            skips.append(
                SkipRecord(
                    Path(path).name,
                    "length",
                    f"{len(samples)} samples is shorter than one model frame "
                    f"({min_samples} samples)",
                )
            )
            continue
        ids.append(utterance_id)
        waves.append(samples)
    return ids, waves, skips


def extract_ssl_embeddings(
    wavs: list[Path],
    cfg: AdapterConfig,
    out_dir: str | Path,
    cache: ModelCache | None = None,
) -> tuple[dict[str, Path], list[SkipRecord]]:
    """One feature file per configured SSL model, one vector per frame."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache = cache or ModelCache(cfg.device)
    written: dict[str, Path] = {}
    skips: list[SkipRecord] = []
    for feature_id, model_path in cfg.ssl.items():
        encoder: FrameEncoder = cache.get(FrameEncoder, model_path)
        ids, waves, skipped = _prepare(wavs, encoder.sample_rate, encoder.min_samples)
        skips.extend(skipped)
        frames = encoder.encode(waves, cfg.layer_index, cfg.batch_size)
        path = out_dir / f"{feature_id}.feat"
        write_feature_file(path, encoder.hidden_size, list(zip(ids, frames)))
        written[feature_id] = path
    return written, skips


def extract_speaker_embeddings(
    wavs: list[Path],
    cfg: AdapterConfig,
    out_dir: str | Path,
    cache: ModelCache | None = None,
) -> tuple[dict[str, Path], list[SkipRecord]]:
    """One feature file per configured speaker model, one vector per utterance."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache = cache or ModelCache(cfg.device)
    written: dict[str, Path] = {}
    skips: list[SkipRecord] = []
    for feature_id, model_path in cfg.speaker.items():
        encoder: FrameEncoder = cache.get(FrameEncoder, model_path)
        ids, waves, skipped = _prepare(wavs, encoder.sample_rate, encoder.min_samples)
        skips.extend(skipped)
        vectors = encoder.embed_utterances(waves, cfg.layer_index, cfg.batch_size)
        path = out_dir / f"{feature_id}.feat"
        write_feature_file(path, encoder.hidden_size, list(zip(ids, vectors)))
        written[feature_id] = path
    return written, skips


def transcribe_and_tokenize(
    wavs: list[Path],
    cfg: AdapterConfig,
    out_dir: str | Path,
    cache: ModelCache | None = None,
) -> tuple[dict[str, Path], dict[str, Path], list[SkipRecord]]:
    """Hypothesis TSV per ASR system plus cluster-id token file per tokenizer."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache = cache or ModelCache(cfg.device)
    hypotheses: dict[str, Path] = {}
    tokens: dict[str, Path] = {}
    skips: list[SkipRecord] = []

    for name, model_path in cfg.asr.items():
        recognizer: CtcRecognizer = cache.get(CtcRecognizer, model_path)
        ids, waves, skipped = _prepare(wavs, recognizer.sample_rate, recognizer.min_samples)
        skips.extend(skipped)
        entries: dict[str, str] = {}
        for start in range(0, len(waves), cfg.batch_size):
            chunk_ids = ids[start : start + cfg.batch_size]
            chunk = waves[start : start + cfg.batch_size]
            try:
                texts = recognizer.transcribe(chunk, cfg.batch_size)
            except Exception as exc:
                for utterance_id in chunk_ids:
                    skips.append(
                        SkipRecord(utterance_id, f"asr '{name}'", f"decoding failed: {exc}")
                    )
                continue
            entries.update(zip(chunk_ids, texts))
        path = out_dir / f"hyp_{name}.tsv"
        write_tsv(entries, path)
        hypotheses[name] = path

    for name, spec in cfg.tokenizer.items():
        encoder: FrameEncoder = cache.get(FrameEncoder, spec.model)
        tokenizer = KmeansTokenizer.load(spec.centroids)
        if tokenizer.dim != encoder.hidden_size:
            raise ModelError(
                f"tokenizer '{name}': centroid dimension {tokenizer.dim} does not "
                f"match model hidden size {encoder.hidden_size}"
            )
        ids, waves, skipped = _prepare(wavs, encoder.sample_rate, encoder.min_samples)
        skips.extend(skipped)
        frames = encoder.encode(waves, cfg.layer_index, cfg.batch_size)
        entries = {
            utterance_id: tokenizer.assign(utterance_frames)
            for utterance_id, utterance_frames in zip(ids, frames)
        }
        path = out_dir / f"tokens_{name}.tsv"
        write_tokens(entries, path)
        tokens[name] = path

    return hypotheses, tokens, skips


def run_adapter(
    wav_dir: str | Path,
    out_dir: str | Path,
    cfg: AdapterConfig,
    dataset_id: str | None = None,
    role: str = "candidate",
    transcripts: str | Path | None = None,
) -> tuple[Path, list[str]]:
    """Extract every configured feature from a WAV directory.

    Writes feature files, hypothesis/token TSVs, an optional copied
    transcripts file, a skipped.log sidecar and manifest.json. Returns the
    manifest path and human-readable warnings for the skipped files.
    """
    wav_dir = Path(wav_dir)
    out_dir = Path(out_dir)
    wavs = sorted(wav_dir.glob("*.wav"))
    if not wavs:
        raise AdapterError(f"no .wav files in {wav_dir}")
    out_dir.mkdir(parents=True, exist_ok=True)

    cache = ModelCache(cfg.device)
    features: dict[str, Path] = {}
    skips: list[SkipRecord] = []

    ssl_files, skipped = extract_ssl_embeddings(wavs, cfg, out_dir, cache)
    features.update(ssl_files)
    skips.extend(skipped)
    speaker_files, skipped = extract_speaker_embeddings(wavs, cfg, out_dir, cache)
    features.update(speaker_files)
    skips.extend(skipped)
    hypotheses, tokens, skipped = transcribe_and_tokenize(wavs, cfg, out_dir, cache)
    skips.extend(skipped)

    transcripts_path = None
    if transcripts is not None:
        transcripts_path = out_dir / "transcripts.tsv"
        shutil.copyfile(transcripts, transcripts_path)

    unique = sorted(set(skips))
    (out_dir / SIDECAR_LOG).write_text(
        "".join(f"{r.file}\t{r.stage}\t{r.reason}\n" for r in unique), "utf-8"
    )

    manifest_path = out_dir / "manifest.json"
    write_dataset_manifest(
        manifest_path,
        dataset_id or out_dir.name,
        role,
        features,
        transcripts=transcripts_path,
        hypotheses=hypotheses,
        tokens=tokens,
    )
    warnings = [f"skipped {r.file} ({r.stage}): {r.reason}" for r in unique]
    return manifest_path, warnings
