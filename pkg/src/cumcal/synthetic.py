"""
Synthetic calibration experiments.

A :class:`TrueModel` pairs predicted scores P_k with the actual success
probabilities of the outcomes. Outcomes are then independent Bernoulli draws
from the actual probabilities.

Score families (k = 1..n):

    equispaced     P_k = (k - 0.5) / n
    dense-near-0   P_k = ((k - 0.5) / n) ** 2
    dense-near-1   P_k = sqrt((k - 0.5) / n)

Deviation families give the actual probabilities, clipped to [0, 1]:

    calibrated     P_k
    linear         P_k + s * ((2k - 1) / n - 1)
    bump-notch     P_k + h * exp(-(P_k - 0.25)**2 / (2 sigma**2)),
                   except exactly P_k where |P_k - 0.25| < w
    oscillation    P_k + a * sin(2 pi f P_k)
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .data import SortedDataset, read_table, write_table
from .rng import bernoulli

SCORE_FAMILIES = ("equispaced", "dense-near-0", "dense-near-1")
DEVIATION_FAMILIES = ("calibrated", "linear", "bump-notch", "oscillation")

DEFAULT_PARAMETERS = {
    "calibrated": {},
    "linear": {"s": 0.1},
    "bump-notch": {"h": 0.1, "sigma": 0.1, "w": 0.02, "center": 0.25},
    "oscillation": {"a": 0.06, "f": 4.0},
}

# (deviation family, score family) behind each group of three figures.
FIGURE_FAMILIES = (
    ("linear", "equispaced"),
    ("bump-notch", "dense-near-0"),
    ("oscillation", "dense-near-1"),
)
NULL_FAMILY = ("calibrated", "dense-near-0")
FIGURE_SIZES = (10_000, 1_000, 100)


class UnknownFamily(ValueError):
    pass


def score_family(name: str, n: int) -> np.ndarray:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    u = (np.arange(1, n + 1) - 0.5) / n
    if name == "equispaced":
        return u
    if name == "dense-near-0":
        return u**2
    if name == "dense-near-1":
        return np.sqrt(u)
    raise UnknownFamily(f"unknown score family {name!r}; expected one of "
                        f"{', '.join(SCORE_FAMILIES)}")


def resolve_parameters(name: str, parameters: dict | None = None) -> dict:
    if name not in DEFAULT_PARAMETERS:
        raise UnknownFamily(f"unknown deviation family {name!r}; expected one "
                            f"of {', '.join(DEVIATION_FAMILIES)}")
    params = dict(DEFAULT_PARAMETERS[name])
    for key, value in (parameters or {}).items():
        if key not in params:
            raise ValueError(f"family {name!r} has no parameter {key!r}")
        params[key] = float(value)
    return params


def deviation(name: str, scores, parameters: dict | None = None) -> np.ndarray:
    """Unclipped additive deviation of the actual probabilities from scores."""
    params = resolve_parameters(name, parameters)
    p = np.asarray(scores, dtype=float)
    n = p.size
    if name == "calibrated":
        return np.zeros(n)
    if name == "linear":
        k = np.arange(1, n + 1)
        return params["s"] * ((2 * k - 1) / n - 1)
    if name == "bump-notch":
        c, sigma = params["center"], params["sigma"]
        bump = params["h"] * np.exp(-((p - c) ** 2) / (2 * sigma**2))
        return np.where(np.abs(p - c) < params["w"], 0.0, bump)
    return params["a"] * np.sin(2 * np.pi * params["f"] * p)


def deviation_family(name: str, scores, parameters: dict | None = None
                     ) -> np.ndarray:
    """Actual success probabilities, clipped to [0, 1]."""
    p = np.asarray(scores, dtype=float)
    return np.clip(p + deviation(name, p, parameters), 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class TrueModel:
    """Predicted scores with the actual success probabilities behind them."""

    scores: np.ndarray
    true_probs: np.ndarray
    family_name: str = "custom"
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        scores = np.array(self.scores, dtype=float)
        truths = np.array(self.true_probs, dtype=float)
        if scores.ndim != 1 or scores.shape != truths.shape or scores.size == 0:
            raise ValueError("scores and true_probs must be non-empty 1-d "
                             "arrays of equal length")
        if np.any(np.diff(scores) < 0):
            raise ValueError("scores must be sorted")
        if np.any(~((truths >= 0) & (truths <= 1))):
            raise ValueError("true probabilities must lie in [0, 1]")
        scores.setflags(write=False)
        truths.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "true_probs", truths)

    @property
    def n(self) -> int:
        return int(self.scores.size)

    @property
    def slopes(self) -> np.ndarray:
        """Expected per-step slopes (actual probability minus score)."""
        return self.true_probs - self.scores


def make_model(family: str, score_family_name: str, n: int,
               parameters: dict | None = None) -> TrueModel:
    scores = score_family(score_family_name, n)
    params = resolve_parameters(family, parameters)
    return TrueModel(scores, deviation_family(family, scores, params),
                     family_name=f"{family}/{score_family_name}",
                     parameters=params)


def draw_outcomes(model: TrueModel, seed: int) -> np.ndarray:
    """Independent Bernoulli(true_prob_k) outcomes, deterministic per seed."""
    return bernoulli(model.true_probs, seed)


def sample_dataset(model: TrueModel, seed: int, tie_seed: int = 0
                   ) -> SortedDataset:
    """
    Outcomes drawn from ``model`` as a sorted dataset.

    Model scores are already sorted; ``tie_seed`` only matters when a custom
    model repeats scores.
    """
    return SortedDataset(model.scores, draw_outcomes(model, seed), tie_seed)


def write_model_csv(path: str | os.PathLike, model: TrueModel,
                    outcomes) -> None:
    write_table(path, zip(model.scores, outcomes), model.true_probs)


def read_model_csv(path: str | os.PathLike) -> tuple[TrueModel, np.ndarray]:
    """Read a CSV with a ``true_prob`` column back into (model, outcomes)."""
    samples, truths = read_table(path)
    if truths is None:
        raise ValueError(f"{path}: no true_prob column")
    scores = np.array([s.score for s in samples])
    outcomes = np.array([s.outcome for s in samples], dtype=np.int64)
    order = np.argsort(scores, kind="stable")
    return (TrueModel(scores[order], np.asarray(truths)[order], "file"),
            outcomes[order])
