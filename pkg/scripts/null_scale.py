#!/usr/bin/env python3
"""
Monte Carlo check that the triangle half-height is the standard deviation of
the final cumulative difference under perfect calibration, and a look at how
far the whole path wanders relative to it.

    python scripts/null_scale.py --n 1000 --trials 2000
"""

import argparse

import numpy as np

from cumcal.cumulative import cumulative_curve
from cumcal.synthetic import NULL_FAMILY, make_model, sample_dataset


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--score-family", default=NULL_FAMILY[1])
    args = parser.parse_args()

    model = make_model("calibrated", args.score_family, args.n)
    finals, peaks = [], []
    h = None
    for seed in range(args.trials):
        curve = cumulative_curve(sample_dataset(model, seed))
        h = curve.triangle_half_height
        finals.append(curve.ordinates[-1])
        peaks.append(np.abs(curve.ordinates).max())
    finals = np.array(finals)
    peaks = np.array(peaks)
    print(f"n={args.n} trials={args.trials} triangle_half_height={h:.6g}")
    print(f"sd(D_n)/h          = {finals.std(ddof=1) / h:.4f}")
    print(f"mean(D_n)/h        = {finals.mean() / h:.4f}")
    print(f"median max|D_k|/h  = {np.median(peaks) / h:.4f}")
    print(f"P(max|D_k| > 2h)   = {np.mean(peaks > 2 * h):.4f}")


if __name__ == "__main__":
    main()
