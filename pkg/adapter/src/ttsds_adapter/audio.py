"""WAV loading and resampling for model input."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.io import wavfile
from scipy.signal import resample_poly

from .errors import AdapterError

_INT_SCALE = {np.dtype("int16"): 32768.0, np.dtype("int32"): 2147483648.0}


def load_wav(path: str | Path, target_rate: int) -> np.ndarray:
    """Return mono float32 samples in [-1, 1] at `target_rate`.

    Integer PCM is scaled by its type's full range; multichannel audio is
    averaged. Anything scipy cannot parse, or non-finite float payloads,
    raise AdapterError so the caller can skip-and-log.
    """
    path = Path(path)
    try:
        rate, data = wavfile.read(path)
    except Exception as exc:
        raise AdapterError(f"cannot decode {path.name}: {exc}") from exc
    if data.ndim == 2:
        data = data.mean(axis=1)
    if data.dtype in _INT_SCALE:
        samples = data.astype(np.float64) / _INT_SCALE[data.dtype]
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif np.issubdtype(data.dtype, np.floating):
        samples = data.astype(np.float64)
    else:
        raise AdapterError(f"cannot decode {path.name}: unsupported dtype {data.dtype}")
    if not np.all(np.isfinite(samples)):
        raise AdapterError(f"cannot decode {path.name}: non-finite samples")
    if rate != target_rate:
        gcd = np.gcd(int(rate), int(target_rate))
        samples = resample_poly(samples, target_rate // gcd, rate // gcd)
    return np.clip(samples, -1.0, 1.0).astype(np.float32)
