"""Neural feature adapter for the ttsds benchmark engine.

Runs local model checkpoints over WAV files and writes the results in the
engine's interchange formats (feature files, hypothesis TSVs, token files,
dataset manifests). The two packages share no code: this one only produces
files the engine consumes.
"""

from ._version import __version__
from .config import AdapterConfig, load_adapter_config
from .errors import AdapterError, ConfigError, ModelError
from .extract import (
    extract_speaker_embeddings,
    extract_ssl_embeddings,
    run_adapter,
    transcribe_and_tokenize,
)

__all__ = [
    "__version__",
    "AdapterConfig",
    "AdapterError",
    "ConfigError",
    "ModelError",
    "load_adapter_config",
    "extract_ssl_embeddings",
    "extract_speaker_embeddings",
    "transcribe_and_tokenize",
    "run_adapter",
]
