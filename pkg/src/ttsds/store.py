"""Feature tables, their binary interchange format, and dataset manifests.

A feature table holds per-utterance observation matrices for one feature.
On disk it is a little-endian binary file:

    offset  size        content
    0       8           magic "TTSDSF" + 2-digit version, currently "01"
    8       4           u32 U, number of utterances
    12      4           u32 D, observation dimension (>= 1)
    16      4*U         u32 frame count n_u per utterance
    ...     per utt     u32 byte length + UTF-8 utterance id
    ...     rest        float32 frames, utterance-major, row-major

Readers validate sizes before allocating anything, so a corrupt header
cannot trigger a huge allocation. Datasets are described by a JSON manifest
listing a role, feature files, and optional transcript / hypothesis / token
sidecars; all paths are resolved relative to the manifest's directory.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FeatureFileError, ManifestError

MAGIC_PREFIX = b"TTSDSF"
FORMAT_VERSION = b"01"
MAGIC = MAGIC_PREFIX + FORMAT_VERSION

ROLES = ("candidate", "reference", "distractor")

_U32_MAX = 2**32 - 1


def _as_frames(utterance_id: str, frames, dim: int) -> np.ndarray:
    arr = np.asarray(frames, dtype=np.float32)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(0, dim)
    if arr.ndim != 2 or (arr.shape[0] > 0 and arr.shape[1] != dim):
        raise ValueError(
            f"utterance '{utterance_id}': frames must be (n, {dim}), got {arr.shape}"
        )
    if arr.shape[0] > 0 and not np.isfinite(arr).all():
        bad = int(np.argwhere(~np.isfinite(arr).all(axis=1))[0][0])
        raise ValueError(
            f"utterance '{utterance_id}': non-finite value in frame {bad}"
        )
    arr = arr.reshape(arr.shape[0], dim)
    arr.flags.writeable = False
    return arr


@dataclass
class FeatureTable:
    """All observations of one feature over one dataset.

    `utterances` maps utterance ids to float32 matrices of shape (n_u, dim);
    ids are unique and keep their insertion order. n_u may be zero, which
    records "utterance present, nothing observed".
    """

    feature_id: str
    dim: int
    utterances: list[tuple[str, np.ndarray]]

    def __post_init__(self) -> None:
        if not self.feature_id:
            raise ValueError("feature_id must be non-empty")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        seen: set[str] = set()
        coerced = []
        for utterance_id, frames in self.utterances:
            if utterance_id in seen:
                raise ValueError(f"duplicate utterance id '{utterance_id}'")
            seen.add(utterance_id)
            coerced.append((utterance_id, _as_frames(utterance_id, frames, self.dim)))
        self.utterances = coerced

    @property
    def utterance_ids(self) -> list[str]:
        return [utterance_id for utterance_id, _ in self.utterances]

    @property
    def total_frames(self) -> int:
        return sum(frames.shape[0] for _, frames in self.utterances)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureTable):
            return NotImplemented
        return (
            self.feature_id == other.feature_id
            and self.dim == other.dim
            and self.utterance_ids == other.utterance_ids
            and all(
                np.array_equal(a, b)
                for (_, a), (_, b) in zip(self.utterances, other.utterances)
            )
        )


def write_feature_file(table: FeatureTable, path: str | Path) -> None:
    """Serialize `table` to `path` in the binary interchange format."""
    path = Path(path)
    n_utts = len(table.utterances)
    if n_utts > _U32_MAX or table.dim > _U32_MAX:
        raise FeatureFileError(f"{path}: table too large for the format")
    parts = [MAGIC, struct.pack("<II", n_utts, table.dim)]
    counts = [frames.shape[0] for _, frames in table.utterances]
    if any(c > _U32_MAX for c in counts):
        raise FeatureFileError(f"{path}: utterance frame count exceeds u32")
    parts.append(struct.pack(f"<{n_utts}I", *counts))
    for utterance_id, frames in table.utterances:
        if frames.shape[0] > 0 and not np.isfinite(frames).all():
            bad = int(np.argwhere(~np.isfinite(frames).all(axis=1))[0][0])
            raise FeatureFileError(
                f"{path}: utterance '{utterance_id}': non-finite value in frame {bad}"
            )
        raw = utterance_id.encode("utf-8")
        if len(raw) > _U32_MAX:
            raise FeatureFileError(f"{path}: utterance id too long")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
    for _, frames in table.utterances:
        parts.append(np.ascontiguousarray(frames, dtype="<f4").tobytes())
    path.write_bytes(b"".join(parts))


def read_feature_file(path: str | Path, feature_id: str | None = None) -> FeatureTable:
    """Parse a feature file. `feature_id` defaults to the file's stem."""
    path = Path(path)
    blob = path.read_bytes()
    size = len(blob)
    if size < 8 or blob[:6] != MAGIC_PREFIX:
        raise FeatureFileError(f"{path}: not a feature file")
    if blob[6:8] != FORMAT_VERSION:
        raise FeatureFileError(
            f"{path}: unsupported format version {blob[6:8]!r}"
        )
    pos = 8
    if size - pos < 8:
        raise FeatureFileError(f"{path}: truncated header")
    n_utts, dim = struct.unpack_from("<II", blob, pos)
    pos += 8
    if dim == 0:
        raise FeatureFileError(f"{path}: invalid header (dim = 0)")
    if size - pos < 4 * n_utts:
        raise FeatureFileError(f"{path}: size mismatch in frame-count block")
    counts = struct.unpack_from(f"<{n_utts}I", blob, pos)
    pos += 4 * n_utts
    ids = []
    for _ in range(n_utts):
        if size - pos < 4:
            raise FeatureFileError(f"{path}: size mismatch in id block")
        (id_len,) = struct.unpack_from("<I", blob, pos)
        pos += 4
        if size - pos < id_len:
            raise FeatureFileError(f"{path}: size mismatch in id block")
        try:
            ids.append(blob[pos : pos + id_len].decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise FeatureFileError(f"{path}: invalid utterance id bytes") from exc
        pos += id_len
    payload = 4 * dim * sum(counts)
    if size - pos != payload:
        raise FeatureFileError(
            f"{path}: size mismatch (expected {payload} payload bytes, "
            f"found {size - pos})"
        )
    flat = np.frombuffer(blob, dtype="<f4", count=dim * sum(counts), offset=pos)
    utterances = []
    start = 0
    for utterance_id, count in zip(ids, counts):
        stop = start + count * dim
        utterances.append((utterance_id, flat[start:stop].reshape(count, dim)))
        start = stop
    try:
        return FeatureTable(
            feature_id=feature_id if feature_id is not None else path.stem,
            dim=dim,
            utterances=utterances,
        )
    except ValueError as exc:
        raise FeatureFileError(f"{path}: {exc}") from exc


@dataclass
class DatasetManifest:
    """One dataset: a role plus paths to its feature files and sidecars.

    Paths are stored resolved. `hypotheses` maps a recognizer id to a TSV of
    its transcriptions; `tokens` maps a tokenizer id to a token file.
    """

    dataset_id: str
    role: str
    feature_files: dict[str, Path] = field(default_factory=dict)
    transcripts: Path | None = None
    hypotheses: dict[str, Path] = field(default_factory=dict)
    tokens: dict[str, Path] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.dataset_id or not isinstance(self.dataset_id, str):
            raise ManifestError("dataset_id must be a non-empty string")
        if self.role not in ROLES:
            raise ManifestError(
                f"unknown role '{self.role}' (expected one of {', '.join(ROLES)})"
            )


def _no_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise ManifestError(f"duplicate key '{key}'")
        seen.add(key)
    return dict(pairs)


def _resolve(base: Path, rel: str, what: str) -> Path:
    if not isinstance(rel, str) or not rel:
        raise ManifestError(f"{what}: path must be a non-empty string")
    path = (base / rel).resolve() if not Path(rel).is_absolute() else Path(rel)
    if not path.is_file():
        raise ManifestError(f"{what}: file not found: {path}")
    return path


def load_manifest(path: str | Path) -> DatasetManifest:
    """Load and fully validate a dataset manifest."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"), object_pairs_hook=_no_duplicate_keys)
    except ManifestError as exc:
        raise ManifestError(f"{path}: {exc}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"{path}: cannot parse manifest: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")
    known = {"dataset_id", "role", "feature_files", "transcripts", "hypotheses", "tokens"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ManifestError(f"{path}: unknown field '{unknown[0]}'")
    for required in ("dataset_id", "role"):
        if required not in doc:
            raise ManifestError(f"{path}: missing field '{required}'")
    base = path.parent
    try:
        feature_files = doc.get("feature_files", {})
        if not isinstance(feature_files, dict):
            raise ManifestError("feature_files must be an object")
        features = {
            feature_id: _resolve(base, rel, f"feature file for '{feature_id}'")
            for feature_id, rel in feature_files.items()
        }
        transcripts = doc.get("transcripts")
        if transcripts is not None:
            transcripts = _resolve(base, transcripts, "transcripts")
        hypotheses = doc.get("hypotheses", {})
        if not isinstance(hypotheses, dict):
            raise ManifestError("hypotheses must be an object")
        hypotheses = {
            name: _resolve(base, rel, f"hypotheses for '{name}'")
            for name, rel in hypotheses.items()
        }
        tokens = doc.get("tokens", {})
        if not isinstance(tokens, dict):
            raise ManifestError("tokens must be an object")
        tokens = {
            name: _resolve(base, rel, f"tokens for '{name}'")
            for name, rel in tokens.items()
        }
        return DatasetManifest(
            dataset_id=doc["dataset_id"],
            role=doc["role"],
            feature_files=features,
            transcripts=transcripts,
            hypotheses=hypotheses,
            tokens=tokens,
        )
    except ManifestError as exc:
        msg = str(exc)
        raise ManifestError(msg if msg.startswith(str(path)) else f"{path}: {msg}") from None


def write_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    """Write a dataset manifest with paths relative to its directory."""
    path = Path(path)
    base = path.parent.resolve()

    def rel(target: Path) -> str:
        try:
            return target.resolve().relative_to(base).as_posix()
        except ValueError:
            return str(target.resolve())

    doc: dict = {"dataset_id": manifest.dataset_id, "role": manifest.role}
    doc["feature_files"] = {k: rel(v) for k, v in manifest.feature_files.items()}
    if manifest.transcripts is not None:
        doc["transcripts"] = rel(manifest.transcripts)
    if manifest.hypotheses:
        doc["hypotheses"] = {k: rel(v) for k, v in manifest.hypotheses.items()}
    if manifest.tokens:
        doc["tokens"] = {k: rel(v) for k, v in manifest.tokens.items()}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", "utf-8")


def read_tsv_map(path: str | Path) -> dict[str, str]:
    """Read an id<TAB>text file into an ordered dict.

    Blank lines are skipped; a non-blank line without a tab, or a repeated
    id, is an error. Text may be empty.
    """
    path = Path(path)
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ManifestError(f"{path}:{lineno}: expected id<TAB>text")
            utterance_id, text = line.split("\t", 1)
            if not utterance_id:
                raise ManifestError(f"{path}:{lineno}: empty utterance id")
            if utterance_id in out:
                raise ManifestError(f"{path}:{lineno}: duplicate id '{utterance_id}'")
            out[utterance_id] = text
    return out


def write_tsv_map(entries: dict[str, str], path: str | Path) -> None:
    lines = [f"{utterance_id}\t{text}" for utterance_id, text in entries.items()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), "utf-8")


def read_token_file(path: str | Path) -> dict[str, list[int]]:
    """Read an id<TAB>space-separated-integers file. Token lists may be empty."""
    path = Path(path)
    out: dict[str, list[int]] = {}
    for utterance_id, text in read_tsv_map(path).items():
        try:
            tokens = [int(tok) for tok in text.split()]
        except ValueError:
            raise ManifestError(
                f"{path}: utterance '{utterance_id}': tokens must be integers"
            ) from None
        if any(tok < 0 for tok in tokens):
            raise ManifestError(
                f"{path}: utterance '{utterance_id}': tokens must be non-negative"
            )
        out[utterance_id] = tokens
    return out


def write_token_file(entries: dict[str, list[int]], path: str | Path) -> None:
    write_tsv_map(
        {utterance_id: " ".join(str(t) for t in toks) for utterance_id, toks in entries.items()},
        path,
    )
