"""
Classical reliability diagrams.

Two bin policies are supported:

equal-width
    [0, 1] split into m intervals [(j-1)/m, j/m), the last one closed at 1;
    empty intervals are dropped.
equal-count
    m contiguous runs of the sorted samples with sizes floor(n/m) or
    ceil(n/m), the larger runs first.

For bin I_j the diagram plots A_j = mean of P_k and B_j = mean of C_k over
k in I_j, against the diagonal from (0, 0) to (1, 1).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .data import SortedDataset

EQUAL_WIDTH = "equal-width"
EQUAL_COUNT = "equal-count"
SCHEME_KINDS = (EQUAL_WIDTH, EQUAL_COUNT)


class BinningError(ValueError):
    pass


@dataclass(frozen=True)
class BinningScheme:
    kind: str
    bin_count: int

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise BinningError(f"unknown binning scheme {self.kind!r}; "
                               f"expected one of {', '.join(SCHEME_KINDS)}")
        if int(self.bin_count) != self.bin_count or self.bin_count < 1:
            raise BinningError(
                f"bin count must be a positive integer, got {self.bin_count}")


class Bin(NamedTuple):
    mean_score: float
    success_rate: float
    count: int
    score_lo: float
    score_hi: float


@dataclass(frozen=True)
class ReliabilityDiagram:
    bins: tuple[Bin, ...]
    scheme: BinningScheme

    @property
    def mean_scores(self) -> np.ndarray:
        return np.array([b.mean_score for b in self.bins])

    @property
    def success_rates(self) -> np.ndarray:
        return np.array([b.success_rate for b in self.bins])

    @property
    def counts(self) -> np.ndarray:
        return np.array([b.count for b in self.bins], dtype=np.int64)


def assign_bins(dataset_or_scores, scheme: BinningScheme) -> list[range]:
    """
    Partition the sorted indices 0..n-1 into contiguous bins.

    Accepts a :class:`SortedDataset` or a non-decreasing array of scores.
    Indices are 0-based here; each bin is a ``range``.

    Raises
    ------
    BinningError
        for equal-count binning with more bins than samples
    """
    scores = getattr(dataset_or_scores, "scores", dataset_or_scores)
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    m = scheme.bin_count
    if scheme.kind == EQUAL_COUNT:
        if m > n:
            raise BinningError(
                f"equal-count binning needs bin count <= n ({m} > {n})")
        size, extra = divmod(n, m)
        bins = []
        start = 0
        for j in range(m):
            stop = start + size + (1 if j < extra else 0)
            bins.append(range(start, stop))
            start = stop
        return bins
    edges = np.arange(m + 1) / m
    # Bin j holds edges[j] <= score < edges[j+1]; the last bin also takes 1.
    labels = np.clip(np.searchsorted(edges, scores, side="right") - 1, 0, m - 1)
    bounds = np.searchsorted(labels, np.arange(m + 1), side="left")
    return [range(int(bounds[j]), int(bounds[j + 1])) for j in range(m)
            if bounds[j + 1] > bounds[j]]


def _bin_stats(scores, values, index_ranges, scheme) -> ReliabilityDiagram:
    m = scheme.bin_count
    bins = []
    for j, idx in enumerate(index_ranges):
        s = scores[idx.start:idx.stop]
        v = values[idx.start:idx.stop]
        count = len(idx)
        if scheme.kind == EQUAL_WIDTH:
            label = min(int(np.searchsorted(np.arange(m + 1) / m, s[0],
                                            side="right")) - 1, m - 1)
            lo, hi = label / m, (label + 1) / m
        else:
            lo, hi = float(s[0]), float(s[-1])
        bins.append(Bin(math.fsum(s.tolist()) / count,
                        math.fsum(v.tolist()) / count, count, lo, hi))
    return ReliabilityDiagram(tuple(bins), scheme)


def reliability_diagram(dataset: SortedDataset,
                        scheme: BinningScheme) -> ReliabilityDiagram:
    """
    Reliability diagram of observed outcomes.

    Parameters
    ----------
    dataset : SortedDataset
        score-sorted observations
    scheme : BinningScheme
        bin policy and number of bins

    Returns
    -------
    ReliabilityDiagram
        one entry (A_j, B_j, #I_j, lo, hi) per non-empty bin, where ``lo``
        and ``hi`` are the interval edges for equal-width bins and the
        extreme scores in the bin for equal-count bins
    """
    scores = np.asarray(dataset.scores, dtype=float)
    outcomes = np.asarray(dataset.outcomes, dtype=float)
    return _bin_stats(scores, outcomes, assign_bins(scores, scheme), scheme)


def noiseless_diagram(model, scheme: BinningScheme) -> ReliabilityDiagram:
    """Reliability diagram with B_j the mean true probability over each bin."""
    scores = np.asarray(model.scores, dtype=float)
    truths = np.asarray(model.true_probs, dtype=float)
    return _bin_stats(scores, truths, assign_bins(scores, scheme), scheme)


def write_diagram_csv(diagram: ReliabilityDiagram,
                      path: str | os.PathLike) -> None:
    lines = ["bin,score_lo,score_hi,count,mean_score,success_rate"]
    for j, b in enumerate(diagram.bins, start=1):
        lines.append(f"{j},{b.score_lo:.17g},{b.score_hi:.17g},{b.count},"
                     f"{b.mean_score:.17g},{b.success_rate:.17g}")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")


def read_diagram_csv(path: str | os.PathLike,
                     scheme: BinningScheme) -> ReliabilityDiagram:
    bins = []
    with open(path, encoding="utf-8") as f:
        next(f)
        for line in f:
            if not line.strip():
                continue
            _, lo, hi, count, a, b = line.strip().split(",")
            bins.append(Bin(float(a), float(b), int(count), float(lo),
                            float(hi)))
    return ReliabilityDiagram(tuple(bins), scheme)


def merge_bins(diagram: ReliabilityDiagram,
               groups: Sequence[Sequence[int]]) -> list[tuple[float, float, int]]:
    """Count-weighted (A, B, count) of each group of bin positions."""
    out = []
    for group in groups:
        chosen = [diagram.bins[j] for j in group]
        total = sum(b.count for b in chosen)
        out.append((math.fsum(b.count * b.mean_score for b in chosen) / total,
                    math.fsum(b.count * b.success_rate for b in chosen) / total,
                    total))
    return out
