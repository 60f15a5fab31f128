"""Discretization of 0-5 appraisal values into Low/Medium/High bins.

Includes the fixed binary, soft and strict schemes and exact one-dimensional
k-means, whose centroid midpoints give data-driven boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

LOW, MEDIUM, HIGH = "low", "medium", "high"

# Relative slack when comparing SSE values during tie-breaking.
SSE_TIE_RTOL = 1e-9


def bin_binary(v: float) -> str:
    return LOW if v < 3.0 else HIGH


def bin_soft(v: float) -> str:
    if v < 2.5:
        return LOW
    return MEDIUM if v <= 3.5 else HIGH


def bin_strict(v: float) -> str:
    """Round half up, then <=2 Low, 3 Medium, >=4 High."""
    r = math.floor(v + 0.5)
    if r <= 2:
        return LOW
    return MEDIUM if r == 3 else HIGH


def bin_boundaries(v: float, b1: float, b2: float) -> str:
    if not b1 < b2:
        raise ValueError(f"boundaries must be increasing, got {b1}, {b2}")
    if v < b1:
        return LOW
    return MEDIUM if v < b2 else HIGH


class BinnerKind(str, Enum):
    BINARY = "binary"
    SOFT = "soft"
    STRICT = "strict"
    BOUNDARIES = "boundaries"


@dataclass(frozen=True)
class Binner:
    kind: BinnerKind
    boundaries: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", BinnerKind(self.kind))
        if self.kind is BinnerKind.BOUNDARIES:
            if self.boundaries is None or len(self.boundaries) != 2:
                raise ValueError("boundaries binner needs a (b1, b2) pair")
            b1, b2 = (float(b) for b in self.boundaries)
            if not (0.0 <= b1 < b2 <= 5.0):
                raise ValueError(f"boundaries must be increasing within [0, 5], got {self.boundaries}")
            object.__setattr__(self, "boundaries", (b1, b2))

    def __call__(self, v: float) -> str:
        if self.kind is BinnerKind.BINARY:
            return bin_binary(v)
        if self.kind is BinnerKind.SOFT:
            return bin_soft(v)
        if self.kind is BinnerKind.STRICT:
            return bin_strict(v)
        return bin_boundaries(v, *self.boundaries)


@dataclass(frozen=True)
class KMeans1D:
    centroids: tuple[float, ...]
    boundaries: tuple[float, ...]
    sizes: tuple[int, ...]
    sse: float

    def labels(self, data: Sequence[float]) -> list[int]:
        """Cluster index of each point by position among the boundaries."""
        return [int(np.searchsorted(self.boundaries, x, side="right")) for x in data]


def _segment_cost(prefix: np.ndarray, prefix_sq: np.ndarray, i: int, j: np.ndarray) -> np.ndarray:
    """SSE of sorted points [i, j) for a vector of end indices j."""
    n = j - i
    s = prefix[j] - prefix[i]
    return np.maximum(prefix_sq[j] - prefix_sq[i] - s * s / n, 0.0)


def kmeans1d(data: Sequence[float], k: int) -> KMeans1D:
    """Globally optimal k-means on a line by dynamic programming.

    Optimal clusters are contiguous runs of the sorted data. Partitions whose
    SSE is within ``SSE_TIE_RTOL`` times the total SSE of the optimum count as
    ties; among them the one with the smallest first cluster (then second,
    and so on) is returned. Since moving a point between clusters changes the
    SSE by at least the difference of its squared centroid distances, a tied
    partition never places a point more than ``sqrt(slack)`` further from its
    centroid than from the nearest one.
    """
    x = np.sort(np.asarray(data, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("kmeans1d needs at least one data point")
    if not np.all(np.isfinite(x)):
        raise ValueError("kmeans1d data must be finite")
    if k < 1:
        raise ValueError("k must be at least 1")
    distinct = len(np.unique(x))
    if k > distinct:
        raise ValueError(f"k={k} exceeds the number of distinct values ({distinct})")

    centred = x - x.mean()
    prefix = np.concatenate(([0.0], np.cumsum(centred)))
    prefix_sq = np.concatenate(([0.0], np.cumsum(centred * centred)))

    # tail[j][i]: least SSE splitting points [i, n) into j clusters
    tail = np.full((k + 1, n + 1), np.inf)
    tail[0, n] = 0.0
    for j in range(1, k + 1):
        for i in range(n - j, -1, -1):
            ends = np.arange(i + 1, n - j + 2)
            tail[j, i] = np.min(_segment_cost(prefix, prefix_sq, i, ends) + tail[j - 1, ends])

    best = tail[k, 0]
    slack = SSE_TIE_RTOL * float(prefix_sq[-1])
    # an optimal partition never splits a run of equal values, so near-ties
    # that would are not candidates
    cut_ok = np.append(x[:-1] < x[1:], True)
    sizes, start, spent = [], 0, 0.0
    for j in range(k, 0, -1):
        ends = np.arange(start + 1, n - j + 2)
        totals = spent + _segment_cost(prefix, prefix_sq, start, ends) + tail[j - 1, ends]
        end = int(ends[np.argmax((totals <= best + slack) & cut_ok[ends - 1])])
        spent += float(_segment_cost(prefix, prefix_sq, start, np.array([end]))[0])
        sizes.append(end - start)
        start = end

    centroids, lo = [], 0
    for size in sizes:
        centroids.append(float(x[lo:lo + size].mean()))
        lo += size
    boundaries = tuple((a + b) / 2.0 for a, b in zip(centroids, centroids[1:]))
    return KMeans1D(tuple(centroids), boundaries, tuple(sizes), float(best))
