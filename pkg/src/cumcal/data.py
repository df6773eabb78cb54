"""
Paired observations and the score-sorted dataset used by every diagnostic.

Input files are CSV with a ``score,outcome`` header (an optional third column
``true_prob`` is read by :mod:`cumcal.synthetic`). Lines starting with ``#``
are comments.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class DataError(ValueError):
    """Raised for malformed or out-of-range input records."""


class PairedSample(NamedTuple):
    score: float
    outcome: int


def validate_sample(score: float, outcome: int) -> None:
    if not (0.0 <= score <= 1.0):  # also rejects NaN
        raise DataError(f"score {score!r} outside [0, 1]")
    if outcome not in (0, 1):
        raise DataError(f"outcome {outcome!r} not in {{0, 1}}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SortedDataset:
    """
    Observations sorted by score, ties ordered at random.

    Attributes
    ----------
    scores : ndarray of float
        predicted probabilities P_1 <= P_2 <= ... <= P_n (read-only)
    outcomes : ndarray of int
        observed outcomes C_k, still paired with ``scores`` (read-only)
    tie_seed : int
        seed that fixed the ordering within groups of equal scores
    """

    scores: np.ndarray
    outcomes: np.ndarray
    tie_seed: int = 0
    _n: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        outcomes = np.asarray(self.outcomes, dtype=np.int64)
        if scores.ndim != 1 or scores.shape != outcomes.shape:
            raise DataError("scores and outcomes must be 1-d and equally long")
        if scores.size == 0:
            raise DataError("no observations")
        if np.any(np.diff(scores) < 0):
            raise DataError("scores must be non-decreasing")
        object.__setattr__(self, "scores", _readonly(scores.copy()))
        object.__setattr__(self, "outcomes", _readonly(outcomes.copy()))
        object.__setattr__(self, "_n", int(scores.size))

    @property
    def n(self) -> int:
        return self._n

    @property
    def samples(self) -> list[PairedSample]:
        return [PairedSample(float(s), int(c))
                for s, c in zip(self.scores, self.outcomes)]

    def __len__(self):
        return self._n


def tie_order(scores: np.ndarray, tie_seed: int) -> np.ndarray:
    """Permutation sorting ``scores`` with ties broken uniformly at random."""
    scores = np.asarray(scores, dtype=float)
    rng = np.random.Generator(np.random.PCG64(tie_seed))
    # Distinct random keys make every ordering of a tie group equally likely.
    keys = rng.permutation(scores.size)
    return np.lexsort((keys, scores))


def sort_with_tie_randomization(samples: Sequence[PairedSample] | Iterable,
                                tie_seed: int) -> SortedDataset:
    """
    Sort paired samples by score, ordering ties at random.

    Scores are never perturbed numerically; only the order within groups of
    equal scores is randomized, deterministically given ``tie_seed``.
    """
    samples = list(samples)
    if not samples:
        raise DataError("no observations")
    scores = np.array([s[0] for s in samples], dtype=float)
    outcomes = np.array([s[1] for s in samples], dtype=np.int64)
    return sort_arrays(scores, outcomes, tie_seed)


def sort_arrays(scores, outcomes, tie_seed: int) -> SortedDataset:
    """Array version of :func:`sort_with_tie_randomization`."""
    scores = np.asarray(scores, dtype=float)
    outcomes = np.asarray(outcomes)
    if scores.size == 0:
        raise DataError("no observations")
    if np.any(~((scores >= 0) & (scores <= 1))):
        raise DataError("scores must lie in [0, 1]")
    if np.any((outcomes != 0) & (outcomes != 1)):
        raise DataError("outcomes must be 0 or 1")
    perm = tie_order(scores, tie_seed)
    return SortedDataset(scores[perm], outcomes[perm].astype(np.int64),
                         tie_seed)


def _parse_outcome(text: str) -> int:
    text = text.strip()
    if text in ("0", "1"):
        return int(text)
    raise ValueError(text)


def read_table(path: str | os.PathLike) -> tuple[list[PairedSample],
                                                 list[float] | None]:
    """
    Read a ``score,outcome[,true_prob]`` CSV file.

    Returns
    -------
    samples : list of PairedSample
        records in file order
    true_probs : list of float or None
        the ``true_prob`` column if the header has one

    Raises
    ------
    FileNotFoundError
        if ``path`` does not exist
    DataError
        on a bad header, an unparseable or out-of-range record (the message
        names the line number and value), or a file without records
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"input file not found: {path}")
    samples = []
    truths = []
    header = None
    with open(path, newline="", encoding="utf-8") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or not "".join(row).strip():
                continue
            if row[0].lstrip().startswith("#"):
                continue
            cells = [c.strip() for c in row]
            if header is None:
                header = cells
                if header[:2] != ["score", "outcome"] or header[2:] not in (
                        [], ["true_prob"]):
                    raise DataError(
                        f"line {lineno}: expected header 'score,outcome' "
                        f"(optionally ',true_prob'), got {','.join(row)!r}")
                continue
            if len(cells) != len(header):
                raise DataError(f"line {lineno}: expected {len(header)} "
                                f"fields, got {len(cells)}")
            try:
                score = float(cells[0])
            except ValueError:
                raise DataError(
                    f"line {lineno}: cannot parse score {cells[0]!r}") from None
            if not (0.0 <= score <= 1.0):
                raise DataError(
                    f"line {lineno}: score {cells[0]} outside [0, 1]")
            try:
                outcome = _parse_outcome(cells[1])
            except ValueError:
                raise DataError(
                    f"line {lineno}: outcome {cells[1]!r} not in {{0, 1}}"
                ) from None
            samples.append(PairedSample(score, outcome))
            if len(header) == 3:
                try:
                    truth = float(cells[2])
                except ValueError:
                    truth = math.nan
                if not (0.0 <= truth <= 1.0):
                    raise DataError(
                        f"line {lineno}: true_prob {cells[2]} outside [0, 1]")
                truths.append(truth)
    if not samples:
        raise DataError(f"{path}: no observations")
    return samples, (truths if header is not None and len(header) == 3
                     else None)


def ingest(path: str | os.PathLike, format: str = "csv") -> list[PairedSample]:
    """Read paired samples from ``path`` in file order."""
    if format != "csv":
        raise DataError(f"unsupported input format {format!r}")
    return read_table(path)[0]


def write_table(path: str | os.PathLike, samples: Iterable,
                true_probs: Sequence[float] | None = None) -> None:
    """Write samples as CSV; scores use 17 significant digits to round-trip."""
    samples = list(samples)
    if true_probs is not None and len(true_probs) != len(samples):
        raise DataError("true_probs must match samples in length")
    lines = ["score,outcome" + (",true_prob" if true_probs is not None else "")]
    for k, (score, outcome) in enumerate(samples):
        line = f"{float(score):.17g},{int(outcome)}"
        if true_probs is not None:
            line += f",{float(true_probs[k]):.17g}"
        lines.append(line)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")


serialize = write_table
