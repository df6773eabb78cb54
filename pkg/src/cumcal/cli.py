"""
Command-line interface.

    cumcal cumulative  --input data.csv --out plots/
    cumcal reliability --input data.csv --out plots/ --bins 10 --bootstrap 20
    cumcal simulate    --family linear --score-family equispaced --n 1000 --out d.csv
    cumcal figure-set  --family linear --score-family equispaced --n 1000 --out fig/

Every command is deterministic given its flags (``--seed`` defaults to 0).
Errors print a message to stderr and exit with status 2; files written by a
failed command are removed.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys

import numpy as np

from . import binning, bootstrap, cumulative, render, synthetic
from .data import DataError, read_table, sort_with_tie_randomization
from .rng import child_seed

DEFAULT_BINS_FINE = 20
DEFAULT_BINS_COARSE = 10
DEFAULT_SEED = 0

# Stream layout of the figure-set seed: stream 0 draws the outcomes,
# streams 1-4 seed the bootstrap ensembles of panels 3-6 in panel order.
OUTCOME_STREAM = 0
BOOTSTRAP_STREAMS = (1, 2, 3, 4)

PARAMETER_FLAGS = {
    # flag dest: (family, parameter)
    "slope_scale": ("linear", "s"),
    "bump_height": ("bump-notch", "h"),
    "bump_width": ("bump-notch", "sigma"),
    "notch_half_width": ("bump-notch", "w"),
    "amplitude": ("oscillation", "a"),
    "frequency": ("oscillation", "f"),
}


class CLIError(Exception):
    pass


class _Outputs:
    """Tracks written files and deletes them if the command fails."""

    def __init__(self, directory=None):
        self.directory = directory
        self.paths = []

    def path(self, name: str) -> str:
        p = os.path.join(self.directory, name) if self.directory else name
        self.paths.append(p)
        return p

    def cleanup(self):
        for p in self.paths:
            with contextlib.suppress(OSError):
                os.remove(p)


@contextlib.contextmanager
def _outputs(directory=None):
    if directory is not None:
        try:
            os.makedirs(directory, exist_ok=True)
        except OSError as exc:
            raise CLIError(f"cannot create output directory {directory}: "
                           f"{exc.strerror}") from None
    out = _Outputs(directory)
    try:
        yield out
    except BaseException:
        out.cleanup()
        raise


def _load(path: str, seed: int):
    try:
        samples, _ = read_table(path)
    except FileNotFoundError:
        raise CLIError(f"input file not found: {path}") from None
    except (DataError, UnicodeDecodeError) as exc:
        raise CLIError(f"{path}: {exc}") from None
    return sort_with_tie_randomization(samples, seed)


def _summary(dataset, curve) -> list[str]:
    n = dataset.n
    slope = cumulative.secant_slope(curve, 0, n).slope
    return [
        f"n={n}",
        f"mean_score={np.mean(dataset.scores):.17g}",
        f"mean_outcome={np.mean(dataset.outcomes):.17g}",
        f"final_difference={curve.difference(n):.17g}",
        f"triangle_half_height={curve.triangle_half_height:.17g}",
        f"full_range_slope={slope:.17g}",
    ]


def cmd_cumulative(args) -> int:
    dataset = _load(args.input, args.seed)
    curve = cumulative.cumulative_curve(dataset)
    with _outputs(args.out) as out:
        cumulative.write_curve_csv(curve, out.path("cumulative.csv"))
        render.render_cumulative(curve, render.PlotSpec(
            out.path("cumulative.svg"), render.CUMULATIVE,
            title=args.title or "cumulative differences"))
    print("\n".join(_summary(dataset, curve)))
    return 0


def cmd_reliability(args) -> int:
    dataset = _load(args.input, args.seed)
    try:
        scheme = binning.BinningScheme(args.scheme, args.bins)
        diagram = binning.reliability_diagram(dataset, scheme)
        ensemble = None
        if args.bootstrap > 0:
            ensemble = bootstrap.bootstrap_diagrams(
                dataset, scheme, args.bootstrap, child_seed(args.seed, 1))
    except binning.BinningError as exc:
        raise CLIError(str(exc)) from None
    with _outputs(args.out) as out:
        binning.write_diagram_csv(diagram, out.path("reliability.csv"))
        if ensemble is not None:
            bootstrap.write_ensemble_csv(ensemble, out.path("bootstrap.csv"))
        render.render_reliability(diagram, ensemble, render.PlotSpec(
            out.path("reliability.svg"), render.RELIABILITY,
            title=args.title or f"reliability diagram ({args.scheme}, "
                                f"{args.bins} bins)"))
    print(f"n={dataset.n}")
    print(f"bins={len(diagram.bins)}")
    print(f"replicates={0 if ensemble is None else len(ensemble)}")
    return 0


def _family_parameters(args) -> dict:
    params = {}
    for dest, (family, name) in PARAMETER_FLAGS.items():
        value = getattr(args, dest)
        if value is None:
            continue
        if family != args.family:
            flag = "--" + dest.replace("_", "-")
            raise CLIError(f"{flag} applies to family {family!r}, "
                           f"not {args.family!r}")
        params[name] = value
    return params


def _model(args) -> synthetic.TrueModel:
    if args.n < 1:
        raise CLIError(f"--n must be a positive integer, got {args.n}")
    return synthetic.make_model(args.family, args.score_family, args.n,
                                _family_parameters(args))


def cmd_simulate(args) -> int:
    model = _model(args)
    outcomes = synthetic.draw_outcomes(model, args.seed)
    parent = os.path.dirname(args.out)
    with _outputs(parent or None) as out:
        out.paths.append(args.out)
        synthetic.write_model_csv(args.out, model, outcomes)
    print(f"n={model.n}")
    print(f"family={model.family_name}")
    print(f"mean_score={np.mean(model.scores):.17g}")
    print(f"mean_true_prob={np.mean(model.true_probs):.17g}")
    print(f"mean_outcome={np.mean(outcomes):.17g}")
    return 0


def figure_set(model: synthetic.TrueModel, out_dir: str, seed: int = 0,
               bins_fine: int = DEFAULT_BINS_FINE,
               bins_coarse: int = DEFAULT_BINS_COARSE,
               replicates: int = bootstrap.DEFAULT_REPLICATES) -> dict:
    """
    Write the seven panels of a synthetic experiment and return the manifest.

    Panels: (1) sampled cumulative plot, (2) noiseless cumulative plot,
    (3, 4) reliability diagrams at ``bins_fine`` with equal-width and
    equal-count bins, (5, 6) the same at ``bins_coarse``, (7) the noiseless
    reliability diagram with one bin per sample. Equal-count bin counts are
    capped at n.
    """
    n = model.n
    # All randomness is drawn up front, in stream order.
    dataset = synthetic.sample_dataset(
        model, child_seed(seed, OUTCOME_STREAM), tie_seed=seed)
    boot_seeds = [child_seed(seed, s) for s in BOOTSTRAP_STREAMS]

    curve = cumulative.cumulative_curve(dataset)
    expected = cumulative.noiseless_curve(model)
    schemes = []
    for m in (bins_fine, bins_coarse):
        for kind in (binning.EQUAL_WIDTH, binning.EQUAL_COUNT):
            schemes.append(binning.BinningScheme(
                kind, min(m, n) if kind == binning.EQUAL_COUNT else m))
    diagrams = [binning.reliability_diagram(dataset, s) for s in schemes]
    ensembles = ([bootstrap.bootstrap_diagrams(dataset, s, replicates, b)
                  for s, b in zip(schemes, boot_seeds)]
                 if replicates > 0 else [None] * 4)
    exact = binning.noiseless_diagram(
        model, binning.BinningScheme(binning.EQUAL_COUNT, n))

    panels = []
    with _outputs(out_dir) as out:
        synthetic.write_model_csv(out.path("sample.csv"), model,
                                  dataset.outcomes)
        cumulative.write_curve_csv(curve, out.path("cumulative.csv"))
        cumulative.write_curve_csv(expected,
                                   out.path("cumulative_noiseless.csv"))
        binning.write_diagram_csv(exact, out.path("reliability_noiseless.csv"))

        def panel(role, name, draw):
            path = out.path(name)
            draw(path)
            panels.append({"panel": len(panels) + 1, "role": role,
                           "path": name})

        panel("cumulative", "cumulative.svg",
              lambda p: render.render_cumulative(curve, render.PlotSpec(
                  p, render.CUMULATIVE, title="cumulative differences")))
        panel("cumulative-noiseless", "cumulative_noiseless.svg",
              lambda p: render.render_cumulative(expected, render.PlotSpec(
                  p, render.CUMULATIVE, title="expected cumulative differences")))
        for scheme, diagram, ensemble, row in zip(
                schemes, diagrams, ensembles,
                ("fine", "fine", "coarse", "coarse")):
            kind = scheme.kind.replace("-", "_")
            panel(f"reliability-{row}-{scheme.kind}",
                  f"reliability_{row}_{kind}.svg",
                  lambda p, d=diagram, e=ensemble, s=scheme: (
                      render.render_reliability(d, e, render.PlotSpec(
                          p, render.RELIABILITY,
                          title=f"{s.kind}, {s.bin_count} bins"))))
        panel("reliability-noiseless", "reliability_noiseless.svg",
              lambda p: render.render_reliability(exact, None, render.PlotSpec(
                  p, render.RELIABILITY, title="expected reliability")))
        manifest = {
            "family": model.family_name,
            "parameters": model.parameters,
            "n": n,
            "seed": seed,
            "bins_fine": bins_fine,
            "bins_coarse": bins_coarse,
            "bootstrap_replicates": replicates,
            "panels": panels,
        }
        with open(out.path("figure_set.json"), "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
    return manifest


def cmd_figure_set(args) -> int:
    model = _model(args)
    for flag, m in (("--bins-fine", args.bins_fine),
                    ("--bins-coarse", args.bins_coarse)):
        if m < 1:
            raise CLIError(f"{flag} must be a positive integer, got {m}")
    manifest = figure_set(model, args.out, args.seed, args.bins_fine,
                          args.bins_coarse, args.bootstrap)
    for p in manifest["panels"]:
        print(os.path.join(args.out, p["path"]))
    return 0


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, "
                                         f"got {text}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, "
                                         f"got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="cumcal", formatter_class=fmt,
        description="Calibration diagnostics for probabilistic binary "
                    "predictions: cumulative-difference plots and "
                    "reliability diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, data_input=True):
        if data_input:
            p.add_argument("--input", required=True,
                           help="CSV file with header 'score,outcome'")
        p.add_argument("--seed", type=_nonneg_int, default=DEFAULT_SEED,
                       help="random seed (tie-breaking, sampling, bootstrap)")

    p = sub.add_parser("cumulative", formatter_class=fmt,
                       help="plot cumulative differences of a dataset")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--title", default=None, help="plot title")
    p.set_defaults(func=cmd_cumulative)

    p = sub.add_parser("reliability", formatter_class=fmt,
                       help="plot a reliability diagram of a dataset")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--bins", type=_pos_int, default=DEFAULT_BINS_FINE,
                   help="number of bins")
    p.add_argument("--scheme", choices=binning.SCHEME_KINDS,
                   default=binning.EQUAL_WIDTH, help="bin policy")
    p.add_argument("--bootstrap", type=_nonneg_int,
                   default=bootstrap.DEFAULT_REPLICATES,
                   help="number of bootstrap replicates drawn in gray "
                        "(0 disables)")
    p.add_argument("--title", default=None, help="plot title")
    p.set_defaults(func=cmd_reliability)

    def family_flags(p):
        p.add_argument("--family", choices=synthetic.DEVIATION_FAMILIES,
                       default="linear",
                       help="deviation of the actual probabilities")
        p.add_argument("--score-family", choices=synthetic.SCORE_FAMILIES,
                       default="equispaced", help="predicted score layout")
        p.add_argument("--n", type=int, default=1000, help="sample size")
        p.add_argument("--slope-scale", type=float, default=None,
                       help="linear: deviation at the extremes "
                            f"(default {synthetic.DEFAULT_PARAMETERS['linear']['s']})")
        p.add_argument("--bump-height", type=float, default=None,
                       help="bump-notch: peak deviation (default 0.1)")
        p.add_argument("--bump-width", type=float, default=None,
                       help="bump-notch: Gaussian width (default 0.1)")
        p.add_argument("--notch-half-width", type=float, default=None,
                       help="bump-notch: calibrated notch half-width "
                            "around 0.25 (default 0.02)")
        p.add_argument("--amplitude", type=float, default=None,
                       help="oscillation: amplitude (default 0.06)")
        p.add_argument("--frequency", type=float, default=None,
                       help="oscillation: cycles over [0, 1] (default 4)")

    p = sub.add_parser("simulate", formatter_class=fmt,
                       help="write a synthetic dataset with true probabilities")
    common(p, data_input=False)
    family_flags(p)
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure-set", formatter_class=fmt,
                       help="write the seven panels of a synthetic experiment")
    common(p, data_input=False)
    family_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--bins-fine", type=_pos_int, default=DEFAULT_BINS_FINE,
                   help="bin count of the finer reliability diagrams")
    p.add_argument("--bins-coarse", type=_pos_int, default=DEFAULT_BINS_COARSE,
                   help="bin count of the coarser reliability diagrams")
    p.add_argument("--bootstrap", type=_nonneg_int,
                   default=bootstrap.DEFAULT_REPLICATES,
                   help="bootstrap replicates per sampled reliability diagram")
    p.set_defaults(func=cmd_figure_set)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"cumcal {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        name = exc.filename or ""
        print(f"cumcal {args.command}: error: {exc.strerror or exc} {name}",
              file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"cumcal {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
