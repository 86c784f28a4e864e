"""Minimal RIFF/WAVE reading and writing.

Reading accepts mono or multi-channel PCM 16-bit and IEEE float 32-bit
(including the WAVE_FORMAT_EXTENSIBLE wrapper), mixes channels down by
averaging, and returns float64 samples in [-1, 1]. Everything else is
rejected with a clear message rather than guessed at. Writing always emits
mono 16-bit PCM, which every other tool can read back.
"""

from __future__ import annotations

import struct
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import WavFormatError

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


@dataclass
class Waveform:
    """Mono audio: float64 samples in [-1, 1] and a sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64).reshape(-1)
        if not np.isfinite(samples).all():
            raise ValueError("samples must be finite")
        if not isinstance(self.sample_rate, int) or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        self.samples = samples

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate


def decode_wav(path: str | Path) -> Waveform:
    """Decode a WAV file, averaging channels down to mono."""
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < 12 or blob[:4] != b"RIFF" or blob[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(blob):
        chunk_id = blob[pos : pos + 4]
        (chunk_size,) = struct.unpack_from("<I", blob, pos + 4)
        body_start = pos + 8
        if body_start + chunk_size > len(blob):
            raise WavFormatError(f"{path}: truncated '{chunk_id.decode('latin-1')}' chunk")
        body = blob[body_start : body_start + chunk_size]
        if chunk_id == b"fmt ":
            if chunk_size < 16:
                raise WavFormatError(f"{path}: fmt chunk too short")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
            if fmt[0] == WAVE_FORMAT_EXTENSIBLE:
                # actual format lives in the first two bytes of the SubFormat GUID
                if chunk_size < 40:
                    raise WavFormatError(f"{path}: extensible fmt chunk too short")
                (sub_format,) = struct.unpack_from("<H", body, 24)
                fmt = (sub_format,) + fmt[1:]
        elif chunk_id == b"data":
            payload = body
        pos = body_start + chunk_size + (chunk_size & 1)  # chunks are 2-byte aligned

    if fmt is None:
        raise WavFormatError(f"{path}: missing fmt chunk")
    if payload is None:
        raise WavFormatError(f"{path}: missing data chunk")
    audio_format, channels, sample_rate, _, _, bits = fmt
    if channels < 1:
        raise WavFormatError(f"{path}: invalid channel count {channels}")
    if sample_rate < 1:
        raise WavFormatError(f"{path}: invalid sample rate {sample_rate}")

    if audio_format == WAVE_FORMAT_PCM and bits == 16:
        dtype, scale = np.dtype("<i2"), 32768.0
    elif audio_format == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        dtype, scale = np.dtype("<f4"), 1.0
    else:
        raise WavFormatError(
            f"{path}: unsupported encoding (format 0x{audio_format:04X}, {bits}-bit); "
            f"expected 16-bit PCM or 32-bit IEEE float"
        )

    frame_bytes = dtype.itemsize * channels
    if len(payload) % frame_bytes != 0:
        raise WavFormatError(f"{path}: data chunk is not a whole number of frames")
    raw = np.frombuffer(payload, dtype=dtype).astype(np.float64) / scale
    if channels > 1:
        raw = raw.reshape(-1, channels).mean(axis=1)
    if not np.isfinite(raw).all():
        raise WavFormatError(f"{path}: non-finite sample values")
    return Waveform(samples=np.clip(raw, -1.0, 1.0), sample_rate=int(sample_rate))


def write_wav(waveform: Waveform, path: str | Path) -> None:
    """Write mono 16-bit PCM."""
    quantized = np.clip(
        np.round(waveform.samples * 32767.0), -32768, 32767
    ).astype("<i2")
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(2)
        handle.setframerate(waveform.sample_rate)
        handle.writeframes(quantized.tobytes())
