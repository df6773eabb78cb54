"""
Cumulative differences between observed outcomes and predicted probabilities.

For scores sorted so that P_1 <= ... <= P_n with outcomes C_k, the curve is
D_k = E_k - F_k with

    F_k = (P_1 + ... + P_k) / n,    E_k = (C_1 + ... + C_k) / n,

plotted against k/n. Miscalibration over a range of scores shows up as the
slope of the secant line over the corresponding range of k/n, and the
triangle half-height sqrt(sum P_k (1 - P_k)) / n gives the scale of purely
random fluctuations.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .data import SortedDataset


def compensated_cumsum(values) -> np.ndarray:
    """Running sums accumulated with Neumaier compensation."""
    out = np.empty(len(values))
    total = 0.0
    comp = 0.0
    for k, x in enumerate(np.asarray(values, dtype=float).tolist()):
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        out[k] = total + comp
    return out


def triangle_half_height(scores) -> float:
    """sqrt(sum P_k (1 - P_k)) / n."""
    scores = np.asarray(scores, dtype=float)
    return math.sqrt(math.fsum((scores * (1 - scores)).tolist())) / scores.size


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CumulativeCurve:
    """
    The curve D_k = E_k - F_k for k = 1..n; D_0 = 0 is implicit.

    Attributes
    ----------
    abscissas : ndarray
        k/n for k = 1..n
    ordinates : ndarray
        D_k for k = 1..n
    triangle_half_height : float
        sqrt(sum P_k (1 - P_k)) / n
    score_at_index : ndarray
        sorted scores P_k, used to label the lower axis
    """

    abscissas: np.ndarray
    ordinates: np.ndarray
    triangle_half_height: float
    score_at_index: np.ndarray

    def __post_init__(self):
        for name in ("abscissas", "ordinates", "score_at_index"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if not (self.abscissas.shape == self.ordinates.shape
                == self.score_at_index.shape):
            raise ValueError("curve arrays must have equal length")
        if self.abscissas.size == 0:
            raise ValueError("curve needs at least one point")
        if not self.triangle_half_height >= 0:
            raise ValueError("triangle_half_height must be nonnegative")

    @property
    def n(self) -> int:
        return int(self.ordinates.size)

    def difference(self, k: int) -> float:
        """D_k, with D_0 = 0."""
        if not 0 <= k <= self.n:
            raise IndexError(f"index {k} outside 0..{self.n}")
        return 0.0 if k == 0 else float(self.ordinates[k - 1])

    def __eq__(self, other):
        if not isinstance(other, CumulativeCurve):
            return NotImplemented
        return (self.triangle_half_height == other.triangle_half_height
                and np.array_equal(self.abscissas, other.abscissas)
                and np.array_equal(self.ordinates, other.ordinates)
                and np.array_equal(self.score_at_index, other.score_at_index))


@dataclass(frozen=True)
class SlopeEstimate:
    index_range: tuple[int, int]
    score_range: tuple[float, float]
    slope: float


def cumulative_at(dataset: SortedDataset, p: float) -> tuple[float, float]:
    """
    F(p) and E(p) by direct summation over the samples with P_k <= p.

    Returns ``(F, E)`` where F(p) = (1/n) sum_{P_k <= p} P_k and
    E(p) = (1/n) sum_{P_k <= p} C_k. Values of p below the smallest score
    give (0, 0); values at or above the largest give the overall means.
    """
    n = dataset.n
    mask = dataset.scores <= p
    f = math.fsum(dataset.scores[mask].tolist()) / n
    e = int(dataset.outcomes[mask].sum()) / n
    return f, e


def running_means(dataset: SortedDataset) -> tuple[np.ndarray, np.ndarray]:
    """F_k and E_k for k = 1..n, computed in one pass."""
    n = dataset.n
    f = compensated_cumsum(dataset.scores) / n
    # Integer prefix sums are exact.
    e = np.cumsum(dataset.outcomes) / n
    return f, e


def cumulative_curve(dataset: SortedDataset) -> CumulativeCurve:
    """Build the cumulative-difference curve of a sorted dataset."""
    n = dataset.n
    f, e = running_means(dataset)
    return CumulativeCurve(
        abscissas=np.arange(1, n + 1) / n,
        ordinates=e - f,
        triangle_half_height=triangle_half_height(dataset.scores),
        score_at_index=dataset.scores,
    )


def secant_slope(curve: CumulativeCurve, k_lo: int, k_hi: int) -> SlopeEstimate:
    """
    Slope of the secant over the half-open index range (k_lo, k_hi].

    This is (D_{k_hi} - D_{k_lo}) * n / (k_hi - k_lo), the average of the
    per-step slopes n (D_k - D_{k-1}) = C_k - P_k over k_lo < k <= k_hi. In
    expectation it is the average of (true probability - P_k) over that
    range. ``k_lo = 0`` refers to the origin, D_0 = 0.
    """
    n = curve.n
    if not (isinstance(k_lo, (int, np.integer))
            and isinstance(k_hi, (int, np.integer))):
        raise TypeError("indices must be integers")
    if not 0 <= k_lo < k_hi <= n:
        raise ValueError(
            f"need 0 <= k_lo < k_hi <= n, got k_lo={k_lo}, k_hi={k_hi}, n={n}")
    rise = curve.difference(k_hi) - curve.difference(k_lo)
    slope = rise * n / (k_hi - k_lo)
    lo_score = float(curve.score_at_index[max(k_lo, 1) - 1])
    hi_score = float(curve.score_at_index[k_hi - 1])
    return SlopeEstimate((int(k_lo), int(k_hi)), (lo_score, hi_score), slope)


def noiseless_curve(model) -> CumulativeCurve:
    """
    Expected value of the curve when outcomes follow ``model.true_probs``.

    The ordinates are (1/n) sum_{j <= k} (true_prob_j - P_j); the triangle
    half-height still comes from the predicted scores.
    """
    scores = np.asarray(model.scores, dtype=float)
    truths = np.asarray(model.true_probs, dtype=float)
    n = scores.size
    return CumulativeCurve(
        abscissas=np.arange(1, n + 1) / n,
        ordinates=compensated_cumsum(truths - scores) / n,
        triangle_half_height=triangle_half_height(scores),
        score_at_index=scores,
    )


def write_curve_csv(curve: CumulativeCurve, path: str | os.PathLike) -> None:
    """Columns ``k,k_over_n,score,diff`` after a triangle_half_height comment."""
    lines = [f"# triangle_half_height={curve.triangle_half_height:.17g}",
             "k,k_over_n,score,diff"]
    for k in range(curve.n):
        lines.append(f"{k + 1},{curve.abscissas[k]:.17g},"
                     f"{curve.score_at_index[k]:.17g},{curve.ordinates[k]:.17g}")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")


def read_curve_csv(path: str | os.PathLike) -> CumulativeCurve:
    height = None
    rows = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key.strip() == "triangle_half_height":
                    height = float(value)
                continue
            if line.startswith("k,"):
                continue
            rows.append(line.split(","))
    if height is None:
        raise ValueError(f"{path}: missing triangle_half_height comment")
    table = np.array(rows, dtype=float)
    return CumulativeCurve(abscissas=table[:, 1], ordinates=table[:, 3],
                           triangle_half_height=height,
                           score_at_index=table[:, 2])
