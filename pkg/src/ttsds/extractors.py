"""Signal-level feature extractors and distractor-noise synthesis.

These produce the observation streams the benchmark compares: fundamental
frequency tracks, blind SNR estimates, word error rates against reference
transcripts, and token run lengths. None of them require a trained model,
so a dataset of plain WAV files plus text sidecars can be scored anywhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import groupby
from typing import Sequence

import numpy as np

from ._wada_table import G_VALUES, SNR_DB_MAX, SNR_DB_MIN
from .errors import DegenerateSignalError, EmptyReferenceError
from .rng import Xoshiro256StarStar
from .wav_io import Waveform

_SNR_GRID = np.arange(SNR_DB_MIN, SNR_DB_MAX + 1.0)
_G_TABLE = np.asarray(G_VALUES)


@dataclass(frozen=True)
class PitchConfig:
    """Frame layout and search band for the difference-function pitch tracker."""

    frame_ms: float = 50.0
    hop_ms: float = 10.0
    f0_min: float = 50.0
    f0_max: float = 500.0
    threshold: float = 0.15

    def __post_init__(self) -> None:
        if not (0.0 < self.f0_min < self.f0_max):
            raise ValueError("need 0 < f0_min < f0_max")
        if self.frame_ms <= 0 or self.hop_ms <= 0:
            raise ValueError("frame_ms and hop_ms must be positive")
        if not (0.0 < self.threshold < 1.0):
            raise ValueError("threshold must be in (0, 1)")


def extract_pitch(waveform: Waveform, config: PitchConfig = PitchConfig()) -> np.ndarray:
    """Per-frame fundamental frequency in Hz; 0.0 marks unvoiced frames.

    Cumulative-mean-normalized difference function with an absolute
    threshold: the first lag dipping below it is refined downhill, then by
    parabolic interpolation. Frames with no dip (noise, silence) are
    unvoiced; unvoiced frames stay in the output so the pitch distribution
    keeps its voiced/unvoiced mass balance.
    """
    sr = waveform.sample_rate
    frame = round(config.frame_ms * sr / 1000.0)
    hop = round(config.hop_ms * sr / 1000.0)
    tau_min = max(1, math.ceil(sr / config.f0_max))
    tau_max = math.floor(sr / config.f0_min)
    window = frame - tau_max  # correlation support shared by every lag
    if hop < 1 or window < 2 or tau_min >= tau_max:
        raise ValueError(
            f"pitch config does not fit sample rate {sr} "
            f"(frame={frame}, max lag={tau_max})"
        )
    x = waveform.samples
    if x.size < frame:
        return np.zeros(0)

    frames = np.lib.stride_tricks.sliding_window_view(x, frame)[::hop]
    head = frames[:, :window]
    # linear cross-correlation of each frame with its own first `window`
    # samples, batched over frames via FFT
    nfft = 1 << (frame - 1).bit_length()
    spec = np.fft.rfft(frames, nfft, axis=1)
    spec_head = np.fft.rfft(head, nfft, axis=1)
    corr = np.fft.irfft(spec * spec_head.conj(), nfft, axis=1)[:, : tau_max + 1]

    energy = np.concatenate(
        [np.zeros((frames.shape[0], 1)), np.cumsum(frames**2, axis=1)], axis=1
    )
    tail_energy = energy[:, window : window + tau_max + 1] - energy[:, : tau_max + 1]
    diff = energy[:, window, None] + tail_energy - 2.0 * corr
    diff = np.maximum(diff, 0.0)  # rounding can push exact zeros negative

    running = np.cumsum(diff[:, 1:], axis=1)
    lags = np.arange(1, tau_max + 1, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        cmnd = np.where(running > 0.0, diff[:, 1:] * lags / running, 1.0)
    cmnd = np.concatenate([np.ones((frames.shape[0], 1)), cmnd], axis=1)

    out = np.zeros(frames.shape[0])
    for i in range(frames.shape[0]):
        row = cmnd[i]
        band = row[tau_min : tau_max + 1]
        below = band < config.threshold
        if not below.any():
            continue
        tau = tau_min + int(np.argmax(below))
        while tau + 1 <= tau_max and row[tau + 1] < row[tau]:
            tau += 1
        refined = float(tau)
        if tau_min < tau < tau_max:
            left, mid, right = row[tau - 1], row[tau], row[tau + 1]
            denom = left - 2.0 * mid + right
            if denom > 0.0:
                shift = 0.5 * (left - right) / denom
                refined = tau + float(np.clip(shift, -1.0, 1.0))
        out[i] = float(np.clip(sr / refined, config.f0_min, config.f0_max))
    return out


def estimate_wada_snr(waveform: Waveform) -> float:
    """Blind SNR estimate in dB from the waveform's amplitude statistic.

    Assumes gamma-distributed speech amplitudes (shape 0.4) in Gaussian
    noise; the statistic ln(mean |x|) - mean(ln |x|) is inverted through a
    precomputed table and clamped to its [-20, 100] dB range.
    """
    x = waveform.samples
    if x.size == 0:
        raise DegenerateSignalError("empty waveform")
    if np.all(x == x[0]):
        raise DegenerateSignalError("all samples are equal, SNR is undefined")
    amplitude = np.abs(x) / np.abs(x).max()
    amplitude = np.maximum(amplitude, 1e-10)  # keep the log finite at exact zeros
    statistic = math.log(amplitude.mean()) - float(np.log(amplitude).mean())
    return float(np.interp(statistic, _G_TABLE, _SNR_GRID))


def _normalize_words(text: str) -> list[str]:
    kept = "".join(
        ch for ch in text.lower() if ch.isalnum() or ch == "'" or ch.isspace()
    )
    return kept.split()


def compute_wer(reference: str, hypothesis: str) -> float:
    """Word error rate: edit distance over words / reference word count.

    Both sides are lowercased and stripped of characters outside letters,
    digits, and apostrophes before splitting on whitespace.
    """
    ref = _normalize_words(reference)
    hyp = _normalize_words(hypothesis)
    if not ref:
        raise EmptyReferenceError(
            f"reference normalizes to zero words: {reference!r}"
        )
    previous = list(range(len(hyp) + 1))
    for i, ref_word in enumerate(ref, start=1):
        current = [i] + [0] * len(hyp)
        for j, hyp_word in enumerate(hyp, start=1):
            substitution = previous[j - 1] + (ref_word != hyp_word)
            current[j] = min(previous[j] + 1, current[j - 1] + 1, substitution)
        previous = current
    return previous[-1] / len(ref)


def token_run_lengths(tokens: Sequence[int]) -> list[int]:
    """Lengths of maximal runs of repeated tokens, in order."""
    return [len(list(group)) for _, group in groupby(tokens)]


class NoiseKind(str, enum.Enum):
    UNIFORM = "uniform"
    NORMAL = "normal"
    ZEROS = "zeros"
    ONES = "ones"


def generate_noise(
    kind: NoiseKind | str,
    duration_s: float,
    sample_rate: int,
    seed: int = 0,
) -> Waveform:
    """Synthesize one distractor utterance.

    uniform draws from [-1, 1), normal is Box-Muller with sigma 0.1 clipped
    to [-1, 1], zeros and ones are the constant signals. Equal seeds give
    bit-identical samples.
    """
    kind = NoiseKind(kind)
    if duration_s <= 0:
        raise ValueError(f"duration_s must be positive, got {duration_s}")
    n = round(duration_s * sample_rate)
    if kind is NoiseKind.ZEROS:
        samples = np.zeros(n)
    elif kind is NoiseKind.ONES:
        samples = np.ones(n)
    elif kind is NoiseKind.UNIFORM:
        samples = Xoshiro256StarStar(seed).uniform_signed(n)
    else:
        samples = np.clip(Xoshiro256StarStar(seed).normals(n, sigma=0.1), -1.0, 1.0)
    return Waveform(samples=samples, sample_rate=sample_rate)
