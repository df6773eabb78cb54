import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cumcal.binning import EQUAL_COUNT, BinningScheme, noiseless_diagram, \
    reliability_diagram
from cumcal.bootstrap import bootstrap_diagrams
from cumcal.cumulative import cumulative_curve, read_curve_csv, write_curve_csv
from cumcal.data import SortedDataset
from cumcal.render import (MARGIN_BOTTOM, MARGIN_LEFT, MARGIN_RIGHT,
                           MARGIN_TOP, REPLICATE_STROKE, PlotSpec,
                           cumulative_svg, lower_tick_indices, nice_ticks,
                           render_cumulative, render_reliability,
                           reliability_svg, vertical_range)
from cumcal.synthetic import make_model, sample_dataset

NS = {"svg": "http://www.w3.org/2000/svg"}


def parse(path):
    return ET.parse(path).getroot()


def by_class(root, cls):
    return [e for e in root.iter() if e.get("class") == cls]


def coords(element):
    return [tuple(map(float, p.split(",")))
            for p in element.get("points").split()]


@pytest.fixture
def null_curve():
    model = make_model("calibrated", "dense-near-0", 1000)
    return cumulative_curve(sample_dataset(model, seed=5))


def test_cumulative_elements(tmp_path, null_curve):
    path = render_cumulative(null_curve, PlotSpec(str(tmp_path / "c.svg")))
    root = parse(path)
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    (curve,) = by_class(root, "curve")
    pts = coords(curve)
    assert len(pts) == 1001
    (triangle,) = by_class(root, "triangle")
    tri = coords(triangle)
    # Both apexes sit on the vertical axis, symmetric about the origin.
    origin = pts[0]
    assert tri[0][0] == tri[2][0] == origin[0] == MARGIN_LEFT
    assert tri[0][1] - origin[1] == pytest.approx(origin[1] - tri[2][1],
                                                  abs=2e-3)
    uppers = [e.text for e in by_class(root, "upper-tick-label")]
    assert uppers == ["0", "0.25", "0.5", "0.75", "1"]
    lowers = [e.text for e in by_class(root, "lower-tick-label")]
    assert lowers == [f"{null_curve.score_at_index[k - 1]:.2f}"
                      for k in lower_tick_indices(1000)]


def test_lower_tick_positions(tmp_path, null_curve):
    root = parse(render_cumulative(null_curve,
                                   PlotSpec(str(tmp_path / "c.svg"))))
    xs = [float(e.get("x1")) for e in by_class(root, "lower-tick")]
    width = 640 - MARGIN_LEFT - MARGIN_RIGHT
    expected = [MARGIN_LEFT + k / 1000 * width for k in lower_tick_indices(1000)]
    np.testing.assert_allclose(xs, expected, atol=1e-3)
    assert lower_tick_indices(1000) == [1, 250, 500, 750, 1000]
    assert lower_tick_indices(1) == [1] * 5


def test_null_curve_range_is_tight(null_curve):
    h = null_curve.triangle_half_height
    assert np.max(np.abs(null_curve.ordinates)) <= 4 * h
    lo, hi = vertical_range(null_curve)
    assert hi - lo <= 10 * h
    assert lo <= min(null_curve.ordinates.min(), 0) - h + 1e-15
    assert hi >= max(null_curve.ordinates.max(), 0) + h - 1e-15


def test_minimal_curve(tmp_path):
    curve = cumulative_curve(SortedDataset([0.4], [1]))
    root = parse(render_cumulative(curve, PlotSpec(str(tmp_path / "c.svg"))))
    (line,) = by_class(root, "curve")
    assert len(coords(line)) == 2


def test_degenerate_zero_curve(tmp_path):
    curve = cumulative_curve(SortedDataset([0.0, 1.0], [0, 1]))
    parse(render_cumulative(curve, PlotSpec(str(tmp_path / "c.svg"))))


def test_round_trip_through_csv_is_byte_identical(tmp_path, null_curve):
    spec = PlotSpec(str(tmp_path / "a.svg"), title="t")
    first = cumulative_svg(null_curve, spec)
    write_curve_csv(null_curve, tmp_path / "c.csv")
    again = cumulative_svg(read_curve_csv(tmp_path / "c.csv"), spec)
    assert first == again
    assert first == cumulative_svg(null_curve, spec)


def test_reliability_with_replicates(tmp_path):
    model = make_model("linear", "equispaced", 500)
    ds = sample_dataset(model, seed=1)
    scheme = BinningScheme(EQUAL_COUNT, 10)
    d = reliability_diagram(ds, scheme)
    ens = bootstrap_diagrams(ds, scheme, 20, seed=3)
    root = parse(render_reliability(d, ens, PlotSpec(str(tmp_path / "r.svg"),
                                                     "reliability")))
    reps = by_class(root, "replicate")
    assert len(reps) == 20
    assert all(r.get("stroke") == REPLICATE_STROKE for r in reps)
    # Replicates are drawn before (beneath) the main line.
    order = [e.get("class") for e in root]
    assert max(i for i, c in enumerate(order) if c == "replicate") < \
        order.index("main")
    assert len(by_class(root, "marker")) == 10


def test_reliability_diagonal_hits_corners(tmp_path):
    model = make_model("calibrated", "equispaced", 100)
    d = noiseless_diagram(model, BinningScheme(EQUAL_COUNT, 10))
    root = parse(render_reliability(d, None, PlotSpec(str(tmp_path / "r.svg"),
                                                      "reliability")))
    (diag,) = by_class(root, "diagonal")
    assert float(diag.get("x1")) == MARGIN_LEFT
    assert float(diag.get("y1")) == 480 - MARGIN_BOTTOM
    assert float(diag.get("x2")) == 640 - MARGIN_RIGHT
    assert float(diag.get("y2")) == MARGIN_TOP
    # Perfect calibration: every plotted point lies on the diagonal.
    (main,) = by_class(root, "main")
    for x, y in coords(main):
        u = (x - MARGIN_LEFT) / (640 - MARGIN_LEFT - MARGIN_RIGHT)
        v = (480 - MARGIN_BOTTOM - y) / (480 - MARGIN_TOP - MARGIN_BOTTOM)
        assert u == pytest.approx(v, abs=2e-5)
    assert by_class(root, "replicate") == []


def test_single_bin_has_marker_only(tmp_path):
    ds = SortedDataset([0.2, 0.7], [0, 1])
    d = reliability_diagram(ds, BinningScheme(EQUAL_COUNT, 1))
    root = parse(render_reliability(d, None, PlotSpec(str(tmp_path / "r.svg"),
                                                      "reliability")))
    assert by_class(root, "main") == []
    assert len(by_class(root, "marker")) == 1


def test_rendering_is_deterministic():
    model = make_model("oscillation", "dense-near-1", 300)
    d = noiseless_diagram(model, BinningScheme(EQUAL_COUNT, 12))
    spec = PlotSpec("unused.svg", "reliability")
    assert reliability_svg(d, None, spec) == reliability_svg(d, None, spec)


def test_unwritable_path(tmp_path, null_curve):
    with pytest.raises(OSError):
        render_cumulative(null_curve,
                          PlotSpec(str(tmp_path / "missing" / "c.svg")))


def test_bad_spec():
    with pytest.raises(ValueError):
        PlotSpec("x.svg", kind="pie")
    with pytest.raises(ValueError):
        PlotSpec("x.svg", width_px=50)


@pytest.mark.parametrize("lo,hi", [(-0.123, 0.0408), (-0.0886, 0.00826),
                                   (0.0, 1.0), (-1e-5, 3e-5)])
def test_nice_ticks_inside_range(lo, hi):
    ticks = nice_ticks(lo, hi)
    assert 2 <= ticks.size <= 11
    assert ticks.min() >= lo - 1e-12 and ticks.max() <= hi + 1e-12
    steps = np.diff(ticks)
    np.testing.assert_allclose(steps, steps[0], rtol=1e-9)
