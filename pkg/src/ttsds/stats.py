"""Rank statistics used to validate benchmark scores against human ratings.

Spearman correlation is Pearson correlation on average ranks, which handles
ties the standard way. The paired Wilcoxon signed-rank test gets an exact
two-sided p-value for small samples by dynamic programming over the rank
distribution (doubled ranks keep .5 average ranks in integer arithmetic)
and a tie-corrected normal approximation with continuity correction above
that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DataError

EXACT_WILCOXON_LIMIT = 25


@dataclass(frozen=True)
class RankedSeries:
    """Values keyed by system labels, in label order."""

    labels: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.values):
            raise ValueError("labels and values must have equal length")
        if len(self.values) < 2:
            raise DataError("need at least 2 paired values")
        if len(set(self.labels)) != len(self.labels):
            raise DataError("labels must be unique")
        if not all(math.isfinite(v) for v in self.values):
            raise DataError("values must be finite")


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W = min(W+, W-)
    n_effective: int  # pairs left after zero differences are discarded
    p_two_sided: float
    significant: bool
    method: str  # "exact", "normal", or "degenerate"


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """Ranks starting at 1; tied values share the mean of their positions."""
    arr = np.asarray(values, dtype=np.float64)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(arr.size, dtype=np.float64)
    i = 0
    while i < arr.size:
        j = i
        while j + 1 < arr.size and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: RankedSeries, y: RankedSeries) -> float:
    """Spearman rank correlation of two label-aligned series."""
    if set(x.labels) != set(y.labels):
        raise DataError("series cover different label sets")
    if x.labels != y.labels:
        position = {label: i for i, label in enumerate(y.labels)}
        y_values = tuple(y.values[position[label]] for label in x.labels)
    else:
        y_values = y.values
    if len(set(x.values)) < 2 or len(set(y_values)) < 2:
        raise DataError("spearman is undefined for a constant series")
    rx = average_ranks(x.values)
    ry = average_ranks(y_values)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    return float((rx @ ry) / math.sqrt((rx @ rx) * (ry @ ry)))


def _exact_two_sided_p(doubled_ranks: list[int], w_doubled: int) -> float:
    """2 * P(W- <= observed) under random signs; ranks doubled to integers."""
    total = sum(doubled_ranks)
    counts = [0] * (total + 1)
    counts[0] = 1
    for rank in doubled_ranks:
        for s in range(total, rank - 1, -1):
            counts[s] += counts[s - rank]
    tail = sum(counts[: w_doubled + 1])
    return min(1.0, 2.0 * tail / 2 ** len(doubled_ranks))


def wilcoxon_signed_rank(
    x: Sequence[float],
    y: Sequence[float],
    alpha: float = 0.05,
    method: str = "auto",
) -> WilcoxonResult:
    """Two-sided paired Wilcoxon signed-rank test.

    Zero differences are discarded; ties among |differences| get average
    ranks. `method` is "auto" (exact up to 25 effective pairs), "exact", or
    "normal". Identical samples are not an error: they give n_effective 0,
    p 1.0, not significant.
    """
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method '{method}'")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ConfigError("wilcoxon needs two equal-length 1-d samples")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DataError("samples must be finite")
    diffs = x - y
    diffs = diffs[diffs != 0.0]
    n = diffs.size
    if n == 0:
        return WilcoxonResult(
            statistic=0.0,
            n_effective=0,
            p_two_sided=1.0,
            significant=False,
            method="degenerate",
        )
    ranks = average_ranks(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    statistic = min(w_plus, w_minus)

    if method == "auto":
        method = "exact" if n <= EXACT_WILCOXON_LIMIT else "normal"
    if method == "exact":
        doubled = [int(round(2 * r)) for r in ranks]
        p = _exact_two_sided_p(doubled, int(round(2 * statistic)))
    else:
        mean = n * (n + 1) / 4.0
        variance = n * (n + 1) * (2 * n + 1) / 24.0
        # tie correction: a group of t tied |differences| removes (t^3-t)/48
        _, tie_counts = np.unique(ranks, return_counts=True)
        variance -= float(((tie_counts**3 - tie_counts) / 48.0).sum())
        if variance <= 0:
            # every difference tied at one magnitude and split both ways
            p = 1.0
        else:
            z = (statistic - mean + 0.5) / math.sqrt(variance)
            p = min(1.0, 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)))
    return WilcoxonResult(
        statistic=statistic,
        n_effective=n,
        p_two_sided=p,
        significant=p < alpha,
        method=method,
    )


def pairwise_p_values(
    vectors: Sequence[Sequence[float]],
    alpha: float = 0.05,
) -> np.ndarray:
    """Wilcoxon p-value for every pair of score vectors (1.0 on the diagonal)."""
    k = len(vectors)
    if k < 2:
        raise ConfigError("need at least 2 score vectors")
    length = len(vectors[0])
    if any(len(v) != length for v in vectors):
        raise ConfigError("score vectors must have equal lengths")
    p_values = np.ones((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            p = wilcoxon_signed_rank(vectors[i], vectors[j], alpha).p_two_sided
            p_values[i, j] = p_values[j, i] = p
    return p_values


def pairwise_significance(
    vectors: Sequence[Sequence[float]],
    alpha: float = 0.05,
) -> np.ndarray:
    """Symmetric boolean matrix of pairwise Wilcoxon significance at `alpha`.

    The diagonal is False, as is any pair whose test is degenerate
    (identical vectors).
    """
    significant = pairwise_p_values(vectors, alpha) < alpha
    np.fill_diagonal(significant, False)
    return significant
