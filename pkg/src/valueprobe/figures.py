"""Static SVG figures built from report files.

The markup is written by hand so the package needs no plotting stack.
Data-bearing elements carry ``data-*`` attributes so tests can read the
plotted values back without parsing geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .core import human_benchmark_profile
from .errors import MalformedReport, MissingInput
from .prompts import STRATEGY_KINDS
from .report import load_report

FIGURE_KINDS = ("rank-heatmap", "mds-scatter", "anchored-curve", "value-ranking-sort")
STRATEGY_ORDER = STRATEGY_KINDS


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: Sequence[str | Path] = field(default_factory=tuple)
    output: str | Path = "figure.svg"

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"figure kind must be one of {', '.join(FIGURE_KINDS)}")


class _Svg:
    def __init__(self, width: float, height: float, title: str):
        self.w, self.h = width, height
        self.parts = [f'<title>{escape(title)}</title>',
                      f'<rect x="0" y="0" width="{width:g}" height="{height:g}" fill="white"/>']

    def add(self, tag: str, text: str | None = None, **attrs) -> None:
        a = " ".join(f"{k.rstrip('_').replace('_', '-')}={quoteattr(_fmt(v))}" for k, v in attrs.items())
        if text is None:
            self.parts.append(f"<{tag} {a}/>")
        else:
            self.parts.append(f"<{tag} {a}>{escape(text)}</{tag}>")

    def text(self, x, y, s, size=11, anchor="middle", **attrs) -> None:
        self.add("text", s, x=x, y=y, font_size=size, text_anchor=anchor, font_family="sans-serif", **attrs)

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.w:g}" height="{self.h:g}" '
                f'viewBox="0 0 {self.w:g} {self.h:g}">')
        return "\n".join(['<?xml version="1.0" encoding="UTF-8"?>', head, *self.parts, "</svg>"]) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3f}".rstrip("0").rstrip(".") if math.isfinite(v) else "nan"
    return str(v)


def _color(r: float | None) -> str:
    """Diverging blue-white-red scale for r in [-1, 1]."""
    if r is None or not math.isfinite(r):
        return "#cccccc"
    t = max(-1.0, min(1.0, r))
    if t >= 0:
        c = (255, int(255 * (1 - t)), int(255 * (1 - t)))
    else:
        c = (int(255 * (1 + t)), int(255 * (1 + t)), 255)
    return "#%02x%02x%02x" % c


def _need(report: dict, key: str, path) -> object:
    val = report.get(key)
    if val is None:
        raise MalformedReport(f"{path}: {key} is missing or null")
    return val


# -- individual figures -----------------------------------------------------


def rank_heatmap(reports: Sequence[dict]) -> str:
    """Grid of Spearman rho against the human ranking: rows models, columns prompts."""
    rows = sorted({(r["dataset"]["model"], r["dataset"]["temperature"]) for r in reports},
                  key=lambda k: (str(k[0]), k[1]))
    cols = [s for s in STRATEGY_ORDER if any(r["dataset"]["strategy"] == s for r in reports)]
    cols += sorted({r["dataset"]["strategy"] for r in reports} - set(cols))
    cell = {(r["dataset"]["model"], r["dataset"]["temperature"], r["dataset"]["strategy"]):
            r.get("spearman_vs_human") for r in reports}
    cw, ch, left, top = 90, 34, 170, 60
    svg = _Svg(left + cw * len(cols) + 90, top + ch * len(rows) + 30, "Spearman rho vs human ranking")
    svg.text(left + cw * len(cols) / 2, 24, "Spearman rho vs human value ranking", size=14)
    for j, s in enumerate(cols):
        svg.text(left + cw * (j + 0.5), top - 8, s)
    for i, (model, temp) in enumerate(rows):
        y = top + ch * i
        svg.text(left - 8, y + ch / 2 + 4, f"{model} t={temp:g}", anchor="end")
        for j, s in enumerate(cols):
            r = cell.get((model, temp, s))
            x = left + cw * j
            svg.add("rect", x=x, y=y, width=cw, height=ch, fill=_color(r), stroke="#888888",
                    class_="cell", data_rho="" if r is None else repr(float(r)))
            svg.text(x + cw / 2, y + ch / 2 + 4, "n/a" if r is None else f"{r:.2f}", class_="cell-label")
    # colour bar
    bx = left + cw * len(cols) + 30
    for k in range(21):
        v = 1 - k / 10
        svg.add("rect", x=bx, y=top + k * 6, width=14, height=6, fill=_color(v))
    svg.text(bx + 18, top + 8, "1", anchor="start", size=9)
    svg.text(bx + 18, top + 126, "-1", anchor="start", size=9)
    return svg.render()


def mds_scatter(report: dict, path="report") -> str:
    """Aligned model embedding (circles) over the human reference (squares)."""
    emb = _need(report, "embedding", path)
    labels = emb["labels"]
    ref = np.array(emb["reference"], dtype=float)
    got = np.array(emb["aligned"], dtype=float)
    if ref.shape != (len(labels), 2) or got.shape != ref.shape:
        raise MalformedReport(f"{path}: embedding arrays do not match labels")
    size, pad = 420, 40
    span = float(np.abs(np.vstack([ref, got])).max()) or 1.0

    def px(p):
        return (pad + (p[0] / span + 1) / 2 * (size - 2 * pad),
                pad + (1 - p[1] / span) / 2 * (size - 2 * pad))

    svg = _Svg(size, size + 30, "MDS embedding aligned to human reference")
    ssd = report.get("procrustes_ssd")
    svg.text(size / 2, 22, f"{report['dataset'].get('label', '')}  SSD={'n/a' if ssd is None else _fmt(float(ssd))}",
             size=12)
    for lab, r, g in zip(labels, ref, got):
        rx, ry = px(r)
        gx, gy = px(g)
        svg.add("line", x1=rx, y1=ry, x2=gx, y2=gy, stroke="#bbbbbb")
        svg.add("rect", x=rx - 4, y=ry - 4, width=8, height=8, fill="#d62728", class_="reference",
                data_label=lab, data_x=float(r[0]), data_y=float(r[1]))
        svg.add("circle", cx=gx, cy=gy, r=4, fill="#1f77b4", class_="model",
                data_label=lab, data_x=float(g[0]), data_y=float(g[1]))
        svg.text(gx + 6, gy - 6, lab, size=9, anchor="start")
    svg.add("rect", x=10, y=size + 8, width=8, height=8, fill="#d62728")
    svg.text(22, size + 16, "human reference", size=10, anchor="start")
    svg.add("circle", cx=134, cy=size + 12, r=4, fill="#1f77b4")
    svg.text(142, size + 16, "model (aligned)", size=10, anchor="start")
    return svg.render()


def anchored_curve_figure(report: dict, path="report") -> str:
    """Mean centered score by circular offset from the anchor, with the sine fit."""
    curve = _need(report, "anchored_curve", path)
    fit = _need(report, "sine_fit", path)
    y = np.array([np.nan if v is None else v for v in curve["y"]], dtype=float)
    m = len(y)
    ang = 2 * np.pi * np.arange(m) / m
    f = fit["offset"] + fit["amplitude"] * np.cos(ang - fit["phase"])
    w, h, left, top = 560, 320, 50, 40
    lo = float(np.nanmin(np.concatenate([y, f]))) - 0.1
    hi = float(np.nanmax(np.concatenate([y, f]))) + 0.1

    def px(k, v):
        return left + k * (w - left - 20) / (m - 1), top + (hi - v) / (hi - lo) * (h - top - 40)

    svg = _Svg(w, h, "Anchored score curve")
    svg.text(w / 2, 22, f"Anchored curve, sine fit r2={_fmt(fit['r_squared'])}", size=13)
    x0, y0 = px(0, lo)
    x1, _ = px(m - 1, lo)
    svg.add("line", x1=x0, y1=y0, x2=x1, y2=y0, stroke="black")
    fine = np.linspace(0, m - 1, 200)
    fy = fit["offset"] + fit["amplitude"] * np.cos(2 * np.pi * fine / m - fit["phase"])
    pts = " ".join("%.2f,%.2f" % px(k, v) for k, v in zip(fine, fy))
    svg.add("polyline", points=pts, fill="none", stroke="#d62728", stroke_width=1.5, class_="fit")
    for k in range(m):
        cx, _ = px(k, lo)
        svg.text(cx, y0 + 14, str(k), size=9)
        if math.isfinite(y[k]):
            px_, py_ = px(k, y[k])
            svg.add("circle", cx=px_, cy=py_, r=3.5, fill="#1f77b4", class_="point",
                    data_offset=k, data_y=repr(float(y[k])), data_fit=repr(float(f[k])))
    svg.text(w / 2, h - 6, "offset from anchored value", size=10)
    return svg.render()


def value_ranking_sort(reports: Sequence[dict], paths=()) -> str:
    """Per-value mean centered scores with values ordered by human rank; humans in red."""
    human = human_benchmark_profile()
    ranked = human.by_rank()
    order = [v.name for v in ranked]
    series = [("human", [human.means[v] for v in ranked], "#d62728")]
    palette = ["#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]
    for k, r in enumerate(reports):
        mp = r.get("mean_profile")
        if not isinstance(mp, dict):
            raise MalformedReport(f"{paths[k] if k < len(paths) else 'report'}: mean_profile missing")
        series.append((r["dataset"].get("label", f"report {k + 1}"),
                       [mp.get(c) for c in order], palette[k % len(palette)]))
    vals = [v for _, ys, _ in series for v in ys if v is not None]
    lo, hi = min(vals) - 0.1, max(vals) + 0.1
    w, h, left, top = 640, 360, 50, 40
    m = len(order)

    def px(k, v):
        return left + k * (w - left - 20) / (m - 1), top + (hi - v) / (hi - lo) * (h - top - 70)

    svg = _Svg(w, h + 20 * len(series), "Value means in human rank order")
    svg.text(w / 2, 22, "Mean centered value scores, ordered by human ranking", size=13)
    for k, code in enumerate(order):
        x, y = px(k, lo)
        svg.text(x, y + 16, code, size=9, class_="xlabel")
    for s, (name, ys, color) in enumerate(series):
        pts = [px(k, v) for k, v in enumerate(ys) if v is not None]
        svg.add("polyline", points=" ".join("%.2f,%.2f" % p for p in pts), fill="none",
                stroke=color, stroke_width=2 if name == "human" else 1.5,
                class_="series", data_name=name)
        ly = h + 20 * s
        svg.add("line", x1=left, y1=ly, x2=left + 20, y2=ly, stroke=color, stroke_width=2)
        svg.text(left + 26, ly + 4, name, size=10, anchor="start")
    return svg.render()


# -- entry point ------------------------------------------------------------


def _load_all(paths) -> list[dict]:
    if not paths:
        raise MissingInput("no input reports given")
    return [load_report(p) for p in paths]


def render_figures(spec: FigureSpec) -> Path:
    """Render one figure; every input must exist and parse."""
    reports = _load_all(spec.inputs) if spec.kind != "value-ranking-sort" or spec.inputs else []
    if spec.kind == "rank-heatmap":
        svg = rank_heatmap(reports)
    elif spec.kind == "mds-scatter":
        svg = mds_scatter(reports[0], spec.inputs[0])
    elif spec.kind == "anchored-curve":
        svg = anchored_curve_figure(reports[0], spec.inputs[0])
    else:
        svg = value_ranking_sort(reports, list(spec.inputs))
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg, encoding="utf-8")
    return out


__all__ = ["FIGURE_KINDS", "FigureSpec", "render_figures", "rank_heatmap", "mds_scatter",
           "anchored_curve_figure", "value_ranking_sort"]
