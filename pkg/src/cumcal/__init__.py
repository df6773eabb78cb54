"""Calibration diagnostics: cumulative differences and reliability diagrams."""

from .binning import (BinningScheme, ReliabilityDiagram, assign_bins,
                      noiseless_diagram, reliability_diagram)
from .bootstrap import BootstrapEnsemble, bootstrap_diagrams
from .cumulative import (CumulativeCurve, SlopeEstimate, cumulative_at,
                         cumulative_curve, noiseless_curve, secant_slope)
from .data import (DataError, PairedSample, SortedDataset, ingest,
                   sort_with_tie_randomization)
from .render import PlotSpec, render_cumulative, render_reliability
from .synthetic import (TrueModel, deviation_family, draw_outcomes,
                        make_model, score_family)

__version__ = "0.1.0"
