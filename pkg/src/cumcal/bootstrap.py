"""
Bootstrap replicates of reliability diagrams.

Each replicate draws n indices uniformly with replacement from the original
n pairs, re-sorts the resampled pairs (with fresh random tie-breaking) and
recomputes the diagram under the same binning scheme. Replicate r uses child
stream r of the ensemble seed (see :mod:`cumcal.rng`), so replicates are
independent and each can be regenerated alone.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .binning import BinningScheme, ReliabilityDiagram, reliability_diagram
from .data import SortedDataset, sort_arrays
from .rng import check_seed, child_generator

DEFAULT_REPLICATES = 20


@dataclass(frozen=True)
class BootstrapEnsemble:
    replicates: tuple[ReliabilityDiagram, ...]
    seed: int
    base_scheme: BinningScheme

    def __len__(self):
        return len(self.replicates)


def bootstrap_replicate(dataset: SortedDataset, scheme: BinningScheme,
                        seed: int, index: int) -> ReliabilityDiagram:
    rng = child_generator(seed, index)
    n = dataset.n
    picks = rng.integers(0, n, size=n)
    tie_seed = int(rng.integers(0, 2**63))
    resampled = sort_arrays(dataset.scores[picks], dataset.outcomes[picks],
                            tie_seed)
    return reliability_diagram(resampled, scheme)


def bootstrap_diagrams(dataset: SortedDataset, scheme: BinningScheme,
                       replicate_count: int = DEFAULT_REPLICATES,
                       seed: int = 0) -> BootstrapEnsemble:
    """
    Resampled reliability diagrams for gauging sampling variability.

    Parameters
    ----------
    dataset : SortedDataset
        the original observations
    scheme : BinningScheme
        binning applied to every replicate
    replicate_count : int, optional
        number of replicates; 20 by default
    seed : int, optional
        root seed of the ensemble

    Returns
    -------
    BootstrapEnsemble
        replicates in index order
    """
    if int(replicate_count) != replicate_count or replicate_count < 1:
        raise ValueError(
            f"replicate_count must be a positive integer, got {replicate_count}")
    seed = check_seed(seed)
    replicates = tuple(bootstrap_replicate(dataset, scheme, seed, r)
                       for r in range(int(replicate_count)))
    return BootstrapEnsemble(replicates, seed, scheme)


def write_ensemble_csv(ensemble: BootstrapEnsemble,
                       path: str | os.PathLike) -> None:
    lines = ["replicate,bin,mean_score,success_rate"]
    for r, diagram in enumerate(ensemble.replicates, start=1):
        for j, b in enumerate(diagram.bins, start=1):
            lines.append(
                f"{r},{j},{b.mean_score:.17g},{b.success_rate:.17g}")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(lines) + "\n")


def envelope(ensemble: BootstrapEnsemble) -> tuple[np.ndarray, np.ndarray]:
    """
    Per-bin minimum and maximum of the replicate success rates.

    Bins are matched by position, which is meaningful for equal-count
    schemes (every replicate has exactly ``bin_count`` bins). Positions a
    replicate lacks are ignored.
    """
    m = max(len(d.bins) for d in ensemble.replicates)
    rates = np.full((len(ensemble), m), np.nan)
    for r, d in enumerate(ensemble.replicates):
        rates[r, :len(d.bins)] = d.success_rates
    return np.nanmin(rates, axis=0), np.nanmax(rates, axis=0)
