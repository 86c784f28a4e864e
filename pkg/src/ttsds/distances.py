"""2-Wasserstein distances between empirical feature distributions.

Scalar features use the exact one-dimensional distance between the two
empirical measures: both quantile functions are piecewise constant, so the
squared distance is a finite sum over the merged breakpoint grid. With
integer sample sizes n and m the breakpoints are the multiples of 1/(n*m),
which keeps the computation exact up to float rounding, with no binning.

Vector features use the closed form for Gaussian fits,

    W2**2 = |mu1 - mu2|**2 + tr(C1 + C2 - 2*(C2**(1/2) C1 C2**(1/2))**(1/2)),

with matrix square roots taken through symmetric eigendecompositions whose
eigenvalues are clamped at zero, so rank-deficient covariances (few pooled
observations, collapsed dimensions) stay finite instead of going NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InsufficientDataError, NumericalError
from .rng import Xoshiro256StarStar
from .store import FeatureTable

DEFAULT_MAX_OBS = 50_000


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Pooled observations of one feature over one dataset, shape (N, D)."""

    data: np.ndarray
    source_dataset_id: str = ""

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError(f"observations must be 2-d, got shape {data.shape}")
        if data.shape[0] < 2:
            raise InsufficientDataError(
                f"need at least 2 observations, got {data.shape[0]}"
            )
        if not np.isfinite(data).all():
            raise ValueError("observations must be finite")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class GaussianSummary:
    """Mean vector and unbiased covariance of a pooled distribution."""

    mean: np.ndarray
    cov: np.ndarray
    source_dataset_id: str = ""

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.cov, dtype=np.float64)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"inconsistent shapes: mean {mean.shape}, cov {cov.shape}"
            )
        if not (np.isfinite(mean).all() and np.isfinite(cov).all()):
            raise ValueError("summary must be finite")
        scale = max(1.0, float(np.abs(cov).max()) if cov.size else 1.0)
        if cov.size and float(np.abs(cov - cov.T).max()) > 1e-10 * scale:
            raise ValueError("covariance must be symmetric")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class DistanceResult:
    value: float
    method: str  # "exact_1d" or "gaussian"
    pair: tuple[str, str]

    def __post_init__(self) -> None:
        if not math.isfinite(self.value) or self.value < 0.0:
            raise NumericalError(
                f"distance between {self.pair[0]!r} and {self.pair[1]!r} "
                f"is {self.value!r}"
            )


def pool(
    table: FeatureTable,
    max_obs: int = DEFAULT_MAX_OBS,
    seed: int = 0,
    *,
    dataset_id: str = "",
) -> EmpiricalDistribution:
    """Concatenate a table's frames; subsample uniformly above `max_obs`.

    Subsampling is a partial Fisher-Yates shuffle driven by the seed, with
    the chosen row indices re-sorted so the pooled order stays stable.
    """
    if max_obs < 2:
        raise ValueError(f"max_obs must be >= 2, got {max_obs}")
    chunks = [frames for _, frames in table.utterances if frames.shape[0] > 0]
    total = sum(chunk.shape[0] for chunk in chunks)
    if total < 2:
        raise InsufficientDataError(
            f"feature '{table.feature_id}': need at least 2 observations, "
            f"found {total}"
        )
    data = np.concatenate(chunks, axis=0).astype(np.float64)
    if total > max_obs:
        rng = Xoshiro256StarStar(seed)
        indices = np.arange(total, dtype=np.int64)
        for i in range(max_obs):
            j = i + rng.next_u64() % (total - i)
            indices[i], indices[j] = indices[j], indices[i]
        data = data[np.sort(indices[:max_obs])]
    return EmpiricalDistribution(data=data, source_dataset_id=dataset_id)


def wasserstein_1d(
    a: EmpiricalDistribution, b: EmpiricalDistribution
) -> DistanceResult:
    """Exact 2-Wasserstein distance between two scalar empirical measures."""
    if a.dim != 1 or b.dim != 1:
        raise ValueError(
            f"wasserstein_1d needs 1-d observations, got dims {a.dim} and {b.dim}"
        )
    x = np.sort(a.data[:, 0])
    y = np.sort(b.data[:, 0])
    n, m = x.size, y.size
    # merged breakpoints of the two quantile functions, as multiples of 1/(n*m)
    cuts = np.union1d(
        np.arange(1, n + 1, dtype=np.int64) * m,
        np.arange(1, m + 1, dtype=np.int64) * n,
    )
    widths = np.diff(np.concatenate((np.zeros(1, dtype=np.int64), cuts)))
    ix = (cuts + m - 1) // m - 1
    iy = (cuts + n - 1) // n - 1
    sq = float(widths @ (x[ix] - y[iy]) ** 2) / float(n * m)
    return DistanceResult(
        value=math.sqrt(max(sq, 0.0)),
        method="exact_1d",
        pair=(a.source_dataset_id, b.source_dataset_id),
    )


def summarize_gaussian(d: EmpiricalDistribution) -> GaussianSummary:
    """Gaussian fit of a pooled distribution (unbiased covariance)."""
    mean = d.data.mean(axis=0)
    cov = np.atleast_2d(np.cov(d.data, rowvar=False, ddof=1))
    cov = (cov + cov.T) / 2.0
    return GaussianSummary(mean=mean, cov=cov, source_dataset_id=d.source_dataset_id)


def _psd_sqrt(mat: np.ndarray, context: str) -> np.ndarray:
    try:
        vals, vecs = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigendecomposition failed for {context} "
            f"(dim={mat.shape[0]}, frobenius={np.linalg.norm(mat):.3e})"
        ) from exc
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def wasserstein_gaussian(
    g1: GaussianSummary, g2: GaussianSummary
) -> DistanceResult:
    """Closed-form 2-Wasserstein distance between two Gaussian fits."""
    if g1.dim != g2.dim:
        raise ValueError(f"dimension mismatch: {g1.dim} vs {g2.dim}")
    pair = (g1.source_dataset_id, g2.source_dataset_id)
    root2 = _psd_sqrt(g2.cov, f"covariance of {pair[1]!r}")
    inner = root2 @ g1.cov @ root2
    inner = (inner + inner.T) / 2.0
    cross = _psd_sqrt(inner, f"cross term of {pair[0]!r} and {pair[1]!r}")
    bures = float(np.trace(g1.cov) + np.trace(g2.cov) - 2.0 * np.trace(cross))
    delta = g1.mean - g2.mean
    sq = float(delta @ delta) + bures
    value = math.sqrt(max(sq, 0.0))
    if not math.isfinite(value):
        raise NumericalError(
            f"gaussian distance between {pair[0]!r} and {pair[1]!r} is not finite"
        )
    return DistanceResult(value=value, method="gaussian", pair=pair)


def min_distances(
    candidate,
    reals,
    noises,
    *,
    method: str,
    feature_id: str = "",
):
    """Distance from a candidate to its nearest reference and distractor.

    Ties on the distance value break on dataset id, so results do not
    depend on collection order. Returns (w_real, w_noise, nearest_real_id,
    nearest_noise_id).
    """
    if method not in ("exact_1d", "gaussian"):
        raise ValueError(f"unknown method '{method}'")
    dist = wasserstein_1d if method == "exact_1d" else wasserstein_gaussian

    def nearest(collection, label: str) -> tuple[float, str]:
        if not collection:
            raise ConfigError(
                f"feature '{feature_id}': no {label} distributions to compare against"
            )
        best: tuple[float, str] | None = None
        for other in collection:
            result = dist(candidate, other)
            key = (result.value, other.source_dataset_id)
            if best is None or key < best:
                best = key
        return best

    w_real, nearest_real = nearest(reals, "reference")
    w_noise, nearest_noise = nearest(noises, "distractor")
    return w_real, w_noise, nearest_real, nearest_noise
