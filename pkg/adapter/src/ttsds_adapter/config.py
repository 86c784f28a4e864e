"""Adapter configuration.

A config is a JSON object naming one model per feature, grouped by how the
model is used. Only the groups present are extracted. Relative model paths
resolve against the config file's own directory, mirroring the manifest
convention of the scoring engine.

    {
      "device": "cpu",
      "batch_size": 8,
      "layer_index": 2,
      "ssl": {"hubert": "models/ssl_hubert", "mpm": "models/ssl_mpm"},
      "speaker": {"dvector": "models/spk_dvector"},
      "asr": {"tiny": "models/asr_tiny"},
      "tokenizer": {"hubert": {"model": "models/ssl_hubert",
                               "centroids": "models/tokens_hubert.npz"}}
    }

`layer_index` picks the hidden layer tapped for frame-level features and
defaults to half the encoder depth (rounded down). Whether it fits the
actual depth is only checkable once the model is open, so that invariant
is enforced at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

_GROUPS = ("ssl", "speaker", "asr", "tokenizer")


@dataclass(frozen=True)
class TokenizerSpec:
    model: Path
    centroids: Path


@dataclass(frozen=True)
class AdapterConfig:
    device: str = "cpu"
    batch_size: int = 8
    layer_index: int | None = None
    ssl: dict[str, Path] = field(default_factory=dict)
    speaker: dict[str, Path] = field(default_factory=dict)
    asr: dict[str, Path] = field(default_factory=dict)
    tokenizer: dict[str, TokenizerSpec] = field(default_factory=dict)

    def __post_init__(self):
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.layer_index is not None and self.layer_index < 0:
            raise ConfigError("layer_index must be >= 0")
        if not (self.ssl or self.speaker or self.asr or self.tokenizer):
            raise ConfigError("no features enabled")


def _path_map(doc: dict, group: str, base: Path) -> dict[str, Path]:
    raw = doc.get(group, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"'{group}' must be an object")
    out: dict[str, Path] = {}
    for name, rel in raw.items():
        if not isinstance(rel, str) or not rel:
            raise ConfigError(f"{group} '{name}': model path must be a non-empty string")
        out[name] = (base / rel).resolve()
    return out


def load_adapter_config(path: str | Path) -> AdapterConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: cannot parse config: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    known = {"device", "batch_size", "layer_index", *_GROUPS}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown field '{unknown[0]}'")

    base = path.parent
    tokenizer: dict[str, TokenizerSpec] = {}
    raw_tok = doc.get("tokenizer", {})
    if not isinstance(raw_tok, dict):
        raise ConfigError("'tokenizer' must be an object")
    for name, entry in raw_tok.items():
        if not isinstance(entry, dict) or set(entry) != {"model", "centroids"}:
            raise ConfigError(
                f"tokenizer '{name}': expected an object with 'model' and 'centroids'"
            )
        tokenizer[name] = TokenizerSpec(
            model=(base / entry["model"]).resolve(),
            centroids=(base / entry["centroids"]).resolve(),
        )

    device = doc.get("device", "cpu")
    batch_size = doc.get("batch_size", 8)
    layer_index = doc.get("layer_index")
    if not isinstance(device, str) or not device:
        raise ConfigError("device must be a non-empty string")
    if not isinstance(batch_size, int) or isinstance(batch_size, bool):
        raise ConfigError("batch_size must be an integer")
    if layer_index is not None and (
        not isinstance(layer_index, int) or isinstance(layer_index, bool)
    ):
        raise ConfigError("layer_index must be an integer or null")
    try:
        return AdapterConfig(
            device=device,
            batch_size=batch_size,
            layer_index=layer_index,
            ssl=_path_map(doc, "ssl", base),
            speaker=_path_map(doc, "speaker", base),
            asr=_path_map(doc, "asr", base),
            tokenizer=tokenizer,
        )
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
