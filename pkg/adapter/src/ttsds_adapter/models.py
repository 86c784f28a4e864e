"""Model wrappers around local wav2vec2-style checkpoints.

Every model is loaded from a directory on disk (`local_files_only`); the
adapter never talks to a model hub. `build_tiny_model_set` fabricates a
self-contained set of small random-weight checkpoints so the full pipeline
can run, and be tested, completely offline. Random weights are useless for
recognition quality but preserve everything the interchange contract cares
about: frame rate, hidden width, determinism and file shapes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
import transformers
from transformers import (
    Wav2Vec2Config,
    Wav2Vec2CTCTokenizer,
    Wav2Vec2FeatureExtractor,
    Wav2Vec2ForCTC,
    Wav2Vec2Model,
    Wav2Vec2Processor,
)

from .errors import ModelError

transformers.logging.set_verbosity_error()
transformers.logging.disable_progress_bar()


def _batches(items: list, size: int):
    for start in range(0, len(items), size):
        yield items[start : start + size]


def _load(cls, path: Path, device: str):
    if not Path(path).is_dir():
        raise ModelError(f"model directory not found: {path}")
    try:
        model = cls.from_pretrained(path, local_files_only=True)
    except Exception as exc:
        raise ModelError(f"cannot load model from {path}: {exc}") from exc
    model.to(device)
    model.eval()
    return model


def _load_feature_extractor(path: Path) -> Wav2Vec2FeatureExtractor:
    try:
        return Wav2Vec2FeatureExtractor.from_pretrained(path, local_files_only=True)
    except Exception as exc:
        raise ModelError(f"cannot load feature extractor from {path}: {exc}") from exc


class FrameEncoder:
    """A frame-level encoder: WAV samples in, one vector per model frame out."""

    def __init__(self, model: Wav2Vec2Model, extractor: Wav2Vec2FeatureExtractor, device: str):
        self.model = model
        self.extractor = extractor
        self.device = device

    @classmethod
    def load(cls, path: str | Path, device: str = "cpu") -> "FrameEncoder":
        path = Path(path)
        return cls(_load(Wav2Vec2Model, path, device), _load_feature_extractor(path), device)

    @property
    def sample_rate(self) -> int:
        return int(self.extractor.sampling_rate)

    @property
    def hidden_size(self) -> int:
        return int(self.model.config.hidden_size)

    @property
    def depth(self) -> int:
        return int(self.model.config.num_hidden_layers)

    def resolve_layer(self, layer_index: int | None) -> int:
        """None means the middle of the stack; 0 taps the pre-transformer
        projection, k the output of transformer layer k."""
        if layer_index is None:
            return self.depth // 2
        if not 0 <= layer_index <= self.depth:
            raise ModelError(
                f"layer_index {layer_index} out of range for a "
                f"{self.depth}-layer model (valid 0..{self.depth})"
            )
        return layer_index

    def frame_count(self, n_samples: int) -> int:
        """Conv-stack output length for an input of `n_samples` samples."""
        length = int(n_samples)
        config = self.model.config
        for kernel, stride in zip(config.conv_kernel, config.conv_stride):
            if length < kernel:
                return 0
            length = (length - kernel) // stride + 1
        return length

    @property
    def frame_stride(self) -> int:
        """Samples per output frame (product of conv strides)."""
        stride = 1
        for s in self.model.config.conv_stride:
            stride *= int(s)
        return stride

    @property
    def min_samples(self) -> int:
        """Shortest input that still yields one frame (the receptive field)."""
        config = self.model.config
        span = 1
        for kernel, stride in zip(
            reversed(config.conv_kernel), reversed(config.conv_stride)
        ):
            span = (span - 1) * int(stride) + int(kernel)
        return span

    def encode(
        self,
        waves: list[np.ndarray],
        layer_index: int | None = None,
        batch_size: int = 8,
    ) -> list[np.ndarray]:
        """Hidden states at `layer_index`, one (n_frames, hidden) array per wave.

        Waves must already be at `sample_rate` and at least `min_samples`
        long. Batches are padded; each result is sliced back to its own
        frame count, so padding never leaks into the output.
        """
        layer = self.resolve_layer(layer_index)
        out: list[np.ndarray] = []
        with torch.no_grad():
            for chunk in _batches(waves, batch_size):
                inputs = self.extractor(
                    [np.asarray(w, dtype=np.float32) for w in chunk],
                    sampling_rate=self.sample_rate,
                    padding=True,
                    return_attention_mask=True,
                    return_tensors="pt",
                )
                inputs = {k: v.to(self.device) for k, v in inputs.items()}
                hidden = self.model(**inputs, output_hidden_states=True).hidden_states[layer]
                for row, wave in zip(hidden, chunk):
                    frames = self.frame_count(len(wave))
                    out.append(row[:frames].cpu().numpy().astype(np.float32))
        return out

    def embed_utterances(
        self,
        waves: list[np.ndarray],
        layer_index: int | None = None,
        batch_size: int = 8,
    ) -> list[np.ndarray]:
        """One L2-normalized mean-pooled vector per wave, shape (1, hidden)."""
        vectors = []
        for frames in self.encode(waves, layer_index, batch_size):
            pooled = frames.mean(axis=0)
            norm = float(np.linalg.norm(pooled))
            if norm > 0:
                pooled = pooled / norm
            vectors.append(pooled.reshape(1, -1).astype(np.float32))
        return vectors


class CtcRecognizer:
    """Greedy CTC transcription with a local wav2vec2-ctc checkpoint."""

    def __init__(self, model: Wav2Vec2ForCTC, processor: Wav2Vec2Processor, device: str):
        self.model = model
        self.processor = processor
        self.device = device

    @classmethod
    def load(cls, path: str | Path, device: str = "cpu") -> "CtcRecognizer":
        path = Path(path)
        model = _load(Wav2Vec2ForCTC, path, device)
        try:
            processor = Wav2Vec2Processor.from_pretrained(path, local_files_only=True)
        except Exception as exc:
            raise ModelError(f"cannot load processor from {path}: {exc}") from exc
        return cls(model, processor, device)

    @property
    def sample_rate(self) -> int:
        return int(self.processor.feature_extractor.sampling_rate)

    def frame_count(self, n_samples: int) -> int:
        length = int(n_samples)
        for kernel, stride in zip(
            self.model.config.conv_kernel, self.model.config.conv_stride
        ):
            if length < kernel:
                return 0
            length = (length - kernel) // stride + 1
        return length

    @property
    def min_samples(self) -> int:
        config = self.model.config
        span = 1
        for kernel, stride in zip(
            reversed(config.conv_kernel), reversed(config.conv_stride)
        ):
            span = (span - 1) * int(stride) + int(kernel)
        return span

    def decode_ids(self, ids: list[int]) -> str:
        """Collapse repeats, drop blanks, map to text."""
        tokenizer = self.processor.tokenizer
        blank = tokenizer.pad_token_id
        collapsed: list[int] = []
        previous = None
        for token_id in ids:
            if token_id != previous:
                collapsed.append(token_id)
            previous = token_id
        pieces = []
        for token_id in collapsed:
            if token_id == blank:
                continue
            token = tokenizer.convert_ids_to_tokens(token_id)
            # The delimiter counts as a special token, so map it first.
            if token == tokenizer.word_delimiter_token:
                pieces.append(" ")
            elif token not in tokenizer.all_special_tokens:
                pieces.append(token)
        return " ".join("".join(pieces).split())

    def transcribe(self, waves: list[np.ndarray], batch_size: int = 8) -> list[str]:
        texts: list[str] = []
        with torch.no_grad():
            for chunk in _batches(waves, batch_size):
                inputs = self.processor.feature_extractor(
                    [np.asarray(w, dtype=np.float32) for w in chunk],
                    sampling_rate=self.sample_rate,
                    padding=True,
                    return_attention_mask=True,
                    return_tensors="pt",
                )
                inputs = {k: v.to(self.device) for k, v in inputs.items()}
                logits = self.model(**inputs).logits
                for row, wave in zip(logits, chunk):
                    frames = self.frame_count(len(wave))
                    ids = row[:frames].argmax(dim=-1).tolist()
                    texts.append(self.decode_ids(ids))
        return texts


@dataclass(frozen=True)
class KmeansTokenizer:
    """Frame tokenizer: nearest of K centroids in embedding space."""

    centroids: np.ndarray  # (K, D) float32

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]

    @classmethod
    def fit(cls, frames: np.ndarray, n_clusters: int, seed: int) -> "KmeansTokenizer":
        from sklearn.cluster import KMeans

        frames = np.asarray(frames, dtype=np.float64)
        if frames.ndim != 2 or frames.shape[0] < n_clusters:
            raise ModelError(
                f"need at least {n_clusters} frames to fit {n_clusters} clusters, "
                f"got {frames.shape[0] if frames.ndim == 2 else 'non-2d input'}"
            )
        kmeans = KMeans(n_clusters=n_clusters, n_init=4, random_state=seed)
        kmeans.fit(frames)
        return cls(np.ascontiguousarray(kmeans.cluster_centers_, dtype=np.float32))

    def assign(self, frames: np.ndarray) -> list[int]:
        frames = np.asarray(frames, dtype=np.float32).reshape(-1, self.dim)
        if frames.shape[0] == 0:
            return []
        distances = (
            np.sum(frames**2, axis=1, keepdims=True)
            - 2.0 * frames @ self.centroids.T
            + np.sum(self.centroids**2, axis=1)
        )
        return np.argmin(distances, axis=1).astype(int).tolist()

    def save(self, path: str | Path) -> None:
        np.savez(path, centroids=self.centroids)

    @classmethod
    def load(cls, path: str | Path) -> "KmeansTokenizer":
        path = Path(path)
        if not path.is_file():
            raise ModelError(f"centroid file not found: {path}")
        try:
            with np.load(path) as archive:
                centroids = np.asarray(archive["centroids"], dtype=np.float32)
        except Exception as exc:
            raise ModelError(f"cannot load centroids from {path}: {exc}") from exc
        if centroids.ndim != 2 or centroids.shape[0] < 2:
            raise ModelError(f"{path}: centroids must be a (K, D) array with K >= 2")
        return cls(centroids)


_VOCAB = ["<pad>", "<s>", "</s>", "<unk>", "|"] + list("etaoinshrdlu")


def _tiny_config(seed: int, hidden: int, layers: int, vocab_size: int) -> Wav2Vec2Config:
    # Standard 7-layer conv stack: stride 320 samples (20 ms at 16 kHz),
    # receptive field 400. Only the widths shrink.
    return Wav2Vec2Config(
        vocab_size=vocab_size,
        hidden_size=hidden,
        num_hidden_layers=layers,
        num_attention_heads=2,
        intermediate_size=2 * hidden,
        conv_dim=(hidden,) * 7,
        conv_stride=(5, 2, 2, 2, 2, 2, 2),
        conv_kernel=(10, 3, 3, 3, 3, 2, 2),
        apply_spec_augment=False,
        layerdrop=0.0,
    )


def _tiny_extractor() -> Wav2Vec2FeatureExtractor:
    return Wav2Vec2FeatureExtractor(
        feature_size=1,
        sampling_rate=16000,
        padding_value=0.0,
        do_normalize=True,
        return_attention_mask=True,
    )


def build_tiny_model_set(
    out_dir: str | Path, seed: int = 0, hidden: int = 32, layers: int = 4
) -> dict[str, Path]:
    """Write a deterministic set of small random-weight checkpoints.

    Returns {"ssl_hubert", "ssl_mpm", "spk_dvector", "asr_tiny"} -> directory.
    Each model gets its own derived seed so the checkpoints differ. The CTC
    head is given a blank-dominant bias: trained CTC models emit blank
    almost everywhere outside speech, and the stand-in must share that
    property so silence decodes to an empty hypothesis.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    for offset, name in enumerate(("ssl_hubert", "ssl_mpm", "spk_dvector")):
        target = out_dir / name
        torch.manual_seed(seed + offset)
        model = Wav2Vec2Model(_tiny_config(seed + offset, hidden, layers, len(_VOCAB)))
        model.eval()
        model.save_pretrained(target, safe_serialization=True)
        _tiny_extractor().save_pretrained(target)
        paths[name] = target

    target = out_dir / "asr_tiny"
    torch.manual_seed(seed + 3)
    asr = Wav2Vec2ForCTC(_tiny_config(seed + 3, hidden, layers, len(_VOCAB)))
    with torch.no_grad():
        asr.lm_head.bias[0] += 4.0
    asr.eval()
    asr.save_pretrained(target, safe_serialization=True)
    vocab_file = target / "vocab.json"
    vocab_file.write_text(
        json.dumps({token: index for index, token in enumerate(_VOCAB)}), "utf-8"
    )
    tokenizer = Wav2Vec2CTCTokenizer(
        vocab_file,
        unk_token="<unk>",
        pad_token="<pad>",
        word_delimiter_token="|",
    )
    Wav2Vec2Processor(_tiny_extractor(), tokenizer).save_pretrained(target)
    paths["asr_tiny"] = target
    return paths
