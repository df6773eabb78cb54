"""
Standalone SVG rendering of cumulative plots and reliability diagrams.

Output is plain SVG text built with fixed-precision number formatting, so a
given input always yields the same bytes. Drawn elements carry ``class``
attributes (``curve``, ``triangle``, ``diagonal``, ``main``, ``marker``,
``replicate``) to keep the files easy to inspect programmatically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .binning import ReliabilityDiagram
from .cumulative import CumulativeCurve

CUMULATIVE = "cumulative"
RELIABILITY = "reliability"

REPLICATE_STROKE = "#808080"
MAIN_STROKE = "#000000"
TICK_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)

MARGIN_LEFT = 84
MARGIN_RIGHT = 24
MARGIN_TOP = 64
MARGIN_BOTTOM = 56


@dataclass(frozen=True)
class PlotSpec:
    output_path: str
    kind: str = CUMULATIVE
    title: str = ""
    width_px: int = 640
    height_px: int = 480

    def __post_init__(self):
        if self.kind not in (CUMULATIVE, RELIABILITY):
            raise ValueError(f"unknown plot kind {self.kind!r}")
        if self.width_px <= MARGIN_LEFT + MARGIN_RIGHT or \
                self.height_px <= MARGIN_TOP + MARGIN_BOTTOM:
            raise ValueError(
                f"plot size {self.width_px}x{self.height_px} is too small")


def _num(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class _Canvas:
    """Affine map from a data box onto the plot area of an SVG canvas."""

    def __init__(self, spec: PlotSpec, xlim, ylim):
        self.spec = spec
        self.left = MARGIN_LEFT
        self.right = spec.width_px - MARGIN_RIGHT
        self.top = MARGIN_TOP
        self.bottom = spec.height_px - MARGIN_BOTTOM
        self.xlim = xlim
        self.ylim = ylim
        self.parts = []

    def px(self, x: float) -> float:
        x0, x1 = self.xlim
        return self.left + (x - x0) / (x1 - x0) * (self.right - self.left)

    def py(self, y: float) -> float:
        y0, y1 = self.ylim
        return self.bottom - (y - y0) / (y1 - y0) * (self.bottom - self.top)

    def points(self, xs, ys) -> str:
        return " ".join(f"{_num(self.px(x))},{_num(self.py(y))}"
                        for x, y in zip(xs, ys))

    def add(self, element: str):
        self.parts.append(element)

    def text(self, x, y, label, anchor="middle", size=12, cls=None,
             vertical=False):
        extra = f' class="{cls}"' if cls else ""
        if vertical:
            extra += f' transform="rotate(-90 {_num(x)} {_num(y)})"'
        self.add(f'<text x="{_num(x)}" y="{_num(y)}" font-size="{size}" '
                 f'text-anchor="{anchor}"{extra}>{escape(label)}</text>')

    def frame(self):
        self.add(f'<rect class="frame" x="{_num(self.left)}" '
                 f'y="{_num(self.top)}" '
                 f'width="{_num(self.right - self.left)}" '
                 f'height="{_num(self.bottom - self.top)}" fill="none" '
                 f'stroke="#000000" stroke-width="1"/>')

    def xtick(self, x, label, side="bottom", cls="xtick"):
        px = self.px(x)
        if side == "bottom":
            y0, y1, ty = self.bottom, self.bottom + 5, self.bottom + 18
        else:
            y0, y1, ty = self.top, self.top - 5, self.top - 9
        self.add(f'<line class="{cls}" x1="{_num(px)}" y1="{_num(y0)}" '
                 f'x2="{_num(px)}" y2="{_num(y1)}" stroke="#000000"/>')
        self.text(px, ty, label, cls=f"{cls}-label")

    def ytick(self, y, label):
        py = self.py(y)
        self.add(f'<line class="ytick" x1="{_num(self.left - 5)}" '
                 f'y1="{_num(py)}" x2="{_num(self.left)}" y2="{_num(py)}" '
                 f'stroke="#000000"/>')
        self.text(self.left - 8, py + 4, label, anchor="end",
                  cls="ytick-label")

    def svg(self) -> str:
        w, h = self.spec.width_px, self.spec.height_px
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">')
        body = [f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>']
        if self.spec.title:
            body.append(f'<text x="{_num(w / 2)}" y="20" font-size="14" '
                        f'text-anchor="middle" class="title">'
                        f'{escape(self.spec.title)}</text>')
        return "\n".join([head, *body, *self.parts, "</svg>"]) + "\n"


def _write(text: str, path) -> str:
    path = os.fspath(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def vertical_range(curve: CumulativeCurve) -> tuple[float, float]:
    """[min(0, min D) - h, max(0, max D) + h], widened if degenerate."""
    h = curve.triangle_half_height
    lo = min(0.0, float(curve.ordinates.min())) - h
    hi = max(0.0, float(curve.ordinates.max())) + h
    if not hi > lo:
        lo, hi = lo - 1.0 / curve.n, hi + 1.0 / curve.n
    return lo, hi


def nice_ticks(lo: float, hi: float, target: int = 5) -> np.ndarray:
    """Round-numbered ticks (steps of 1, 2 or 5 times a power of 10)."""
    raw = (hi - lo) / max(target - 1, 1)
    base = 10.0 ** np.floor(np.log10(raw))
    step = next(m * base for m in (1, 2, 5, 10) if m * base >= raw)
    first = np.ceil(lo / step - 1e-9)
    last = np.floor(hi / step + 1e-9)
    ticks = np.arange(first, last + 1) * step
    return np.where(np.abs(ticks) < step * 1e-9, 0.0, ticks)


def lower_tick_indices(n: int) -> list[int]:
    """1-based k nearest to each of the five evenly spaced k/n positions."""
    return [min(max(int(round(t * n)), 1), n) for t in TICK_FRACTIONS]


def cumulative_svg(curve: CumulativeCurve, spec: PlotSpec) -> str:
    """SVG text of a cumulative-difference plot."""
    n = curve.n
    h = curve.triangle_half_height
    ylim = vertical_range(curve)
    cv = _Canvas(spec, (0.0, 1.0), ylim)
    cv.frame()
    cv.add(f'<line class="zero" x1="{_num(cv.px(0))}" y1="{_num(cv.py(0))}" '
           f'x2="{_num(cv.px(1))}" y2="{_num(cv.py(0))}" stroke="#c0c0c0" '
           f'stroke-dasharray="4,4"/>')
    # Scale bar: base on the vertical axis from -h to +h, apex pointing right.
    width = 0.04
    cv.add(f'<polygon class="triangle" points="'
           f'{cv.points([0.0, width, 0.0], [h, 0.0, -h])}" '
           f'fill="#000000" stroke="none"/>')
    xs = np.concatenate([[0.0], curve.abscissas])
    ys = np.concatenate([[0.0], curve.ordinates])
    cv.add(f'<polyline class="curve" fill="none" stroke="{MAIN_STROKE}" '
           f'stroke-width="1.5" points="{cv.points(xs, ys)}"/>')
    for t in TICK_FRACTIONS:
        cv.xtick(t, f"{t:g}", side="top", cls="upper-tick")
    for k in lower_tick_indices(n):
        cv.xtick(k / n, f"{curve.score_at_index[k - 1]:.2f}",
                 cls="lower-tick")
    for y in nice_ticks(*ylim):
        cv.ytick(y, f"{y:.3g}")
    cv.text((cv.left + cv.right) / 2, cv.top - 26, "k/n")
    cv.text((cv.left + cv.right) / 2, cv.bottom + 40, "P_k")
    cv.text(16, (cv.top + cv.bottom) / 2, "E_k - F_k", vertical=True)
    return cv.svg()


def reliability_svg(diagram: ReliabilityDiagram, ensemble=None,
                    spec: PlotSpec | None = None) -> str:
    """SVG text of a reliability diagram, replicates drawn beneath in gray."""
    cv = _Canvas(spec, (0.0, 1.0), (0.0, 1.0))
    cv.frame()
    cv.add(f'<line class="diagonal" x1="{_num(cv.px(0))}" '
           f'y1="{_num(cv.py(0))}" x2="{_num(cv.px(1))}" '
           f'y2="{_num(cv.py(1))}" stroke="#000000" stroke-dasharray="6,4"/>')
    if ensemble is not None:
        for rep in ensemble.replicates:
            cv.add(f'<polyline class="replicate" fill="none" '
                   f'stroke="{REPLICATE_STROKE}" stroke-width="1" points="'
                   f'{cv.points(rep.mean_scores, rep.success_rates)}"/>')
    a, b = diagram.mean_scores, diagram.success_rates
    if len(a) >= 2:
        cv.add(f'<polyline class="main" fill="none" stroke="{MAIN_STROKE}" '
               f'stroke-width="1.5" points="{cv.points(a, b)}"/>')
    if len(a) <= 200:
        for x, y in zip(a, b):
            cv.add(f'<circle class="marker" cx="{_num(cv.px(x))}" '
                   f'cy="{_num(cv.py(y))}" r="2.5" fill="{MAIN_STROKE}"/>')
    for t in np.linspace(0, 1, 6):
        cv.xtick(t, f"{t:.1f}")
        cv.ytick(t, f"{t:.1f}")
    cv.text((cv.left + cv.right) / 2, cv.bottom + 40, "A_j (mean score)")
    cv.text(16, (cv.top + cv.bottom) / 2, "B_j (success rate)",
            vertical=True)
    return cv.svg()


def render_cumulative(curve: CumulativeCurve, spec: PlotSpec) -> str:
    """Write a cumulative plot to ``spec.output_path``; returns the path."""
    return _write(cumulative_svg(curve, spec), spec.output_path)


def render_reliability(diagram: ReliabilityDiagram, ensemble=None,
                       spec: PlotSpec | None = None) -> str:
    if spec is None:
        raise ValueError("a PlotSpec with an output path is required")
    return _write(reliability_svg(diagram, ensemble, spec), spec.output_path)
