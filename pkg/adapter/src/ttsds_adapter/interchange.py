"""Writers for the benchmark engine's interchange formats.

The adapter talks to the scoring engine exclusively through files, so the
formats are re-implemented here from their on-disk contract rather than
imported: a deliberate duplication that keeps the two packages decoupled
and lets the engine's reader act as an independent check on these writers.

Feature file layout (integers unsigned 32-bit little-endian): 8 magic bytes
"TTSDSF01", utterance count U, dimension D, U frame counts, U
length-prefixed UTF-8 utterance ids, then the float32 values
utterance-major, frame-major, row-major within a frame.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"TTSDSF01"


def write_feature_file(
    path: str | Path,
    dim: int,
    utterances: list[tuple[str, np.ndarray]],
) -> None:
    """Write (utterance_id, frames) pairs; each frames array is (n_u, dim).

    `dim` is explicit because an empty table still declares its width.
    Values are narrowed to little-endian float32.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    parts = [MAGIC, struct.pack("<II", len(utterances), dim)]
    blocks = []
    for utterance_id, frames in utterances:
        frames = np.asarray(frames, dtype="<f4").reshape(-1, dim)
        parts.append(struct.pack("<I", frames.shape[0]))
        blocks.append(frames)
    for utterance_id, _ in utterances:
        encoded = utterance_id.encode("utf-8")
        parts.append(struct.pack("<I", len(encoded)) + encoded)
    parts.extend(block.tobytes(order="C") for block in blocks)
    Path(path).write_bytes(b"".join(parts))


def write_tsv(entries: dict[str, str], path: str | Path) -> None:
    """id<TAB>text lines, UTF-8; text may be empty."""
    lines = [f"{utterance_id}\t{text}" for utterance_id, text in entries.items()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), "utf-8")


def write_tokens(entries: dict[str, list[int]], path: str | Path) -> None:
    """id<TAB>space-separated non-negative integers per line."""
    for utterance_id, tokens in entries.items():
        if any(token < 0 for token in tokens):
            raise ValueError(f"utterance '{utterance_id}': negative token id")
    write_tsv(
        {u: " ".join(str(t) for t in toks) for u, toks in entries.items()},
        path,
    )


def write_dataset_manifest(
    path: str | Path,
    dataset_id: str,
    role: str,
    feature_files: dict[str, Path],
    transcripts: Path | None = None,
    hypotheses: dict[str, Path] | None = None,
    tokens: dict[str, Path] | None = None,
) -> None:
    """Emit manifest.json with paths relative to the manifest's directory."""
    base = Path(path).parent.resolve()

    def rel(target: Path) -> str:
        try:
            return target.resolve().relative_to(base).as_posix()
        except ValueError:
            return str(target.resolve())

    doc: dict = {"dataset_id": dataset_id, "role": role}
    doc["feature_files"] = {k: rel(v) for k, v in feature_files.items()}
    if transcripts is not None:
        doc["transcripts"] = rel(transcripts)
    if hypotheses:
        doc["hypotheses"] = {k: rel(v) for k, v in hypotheses.items()}
    if tokens:
        doc["tokens"] = {k: rel(v) for k, v in tokens.items()}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", "utf-8")
