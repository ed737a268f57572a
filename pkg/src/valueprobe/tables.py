"""CSV tables built from report files."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

from .core import CIRCLE, human_benchmark_profile
from .errors import MalformedReport
from .figures import STRATEGY_ORDER

N_OFFSETS = len(CIRCLE)


def _check(report: dict, k: int) -> dict:
    d = report.get("dataset")
    if not isinstance(d, dict) or not isinstance(report.get("mean_profile"), dict):
        raise MalformedReport(f"report {k + 1} lacks dataset or mean_profile")
    for key in ("model", "strategy", "temperature"):
        if key not in d:
            raise MalformedReport(f"report {k + 1}: dataset.{key} missing")
    return d


def _cell(v) -> str:
    return "" if v is None else repr(float(v)) if isinstance(v, float) else str(v)


def _write(path: Path, header: list[str], rows: list[list]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
    return path


def value_rankings_rows(reports: Sequence[dict]) -> tuple[list[str], list[list]]:
    """One row per value in human rank order; human columns then each report's mean and rank."""
    human = human_benchmark_profile()
    header = ["value", "name", "human_mean", "human_rank"]
    for k, r in enumerate(reports):
        label = _check(r, k).get("label") or f"report{k + 1}"
        header += [f"{label}:mean", f"{label}:rank"]
    rows = []
    for v in human.by_rank():
        row = [v.name, v.display_name, human.means[v], human.ranks[v]]
        for r in reports:
            row += [r["mean_profile"].get(v.name), (r.get("ranks") or {}).get(v.name)]
        rows.append(row)
    return header, rows


def ssd_rows(reports: Sequence[dict]) -> tuple[list[str], list[list]]:
    """Rows are (model, temperature, mode), columns are prompt strategies."""
    table: dict[tuple, dict[str, float | None]] = {}
    for k, r in enumerate(reports):
        d = _check(r, k)
        table.setdefault((d["model"], d["temperature"], d.get("mode", "batch")), {})[d["strategy"]] = \
            r.get("procrustes_ssd")
    strategies = [s for s in STRATEGY_ORDER if any(s in by for by in table.values())]
    strategies += sorted({s for by in table.values() for s in by} - set(strategies))
    header = ["model", "temperature", "mode", *strategies]
    rows = [[m, t, mode, *(by.get(s) for s in strategies)]
            for (m, t, mode), by in sorted(table.items(), key=lambda kv: (str(kv[0][0]), kv[0][1], kv[0][2]))]
    return header, rows


def anchored_rows(reports: Sequence[dict]) -> tuple[list[str], list[list]]:
    header = ["dataset", *(f"offset{k}" for k in range(N_OFFSETS)),
              "amplitude", "phase", "offset", "r_squared"]
    rows = []
    for k, r in enumerate(reports):
        d = _check(r, k)
        curve, fit = r.get("anchored_curve"), r.get("sine_fit")
        ys = curve["y"] if curve else [None] * N_OFFSETS
        fs = [fit[f] for f in ("amplitude", "phase", "offset", "r_squared")] if fit else [None] * 4
        rows.append([d.get("label") or f"report{k + 1}", *ys, *fs])
    return header, rows


def export_tables(reports: Sequence[dict], out_dir: str | Path) -> list[Path]:
    """Write value_rankings.csv, ssd.csv and anchored_curves.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        _write(out / "value_rankings.csv", *value_rankings_rows(reports)),
        _write(out / "ssd.csv", *ssd_rows(reports)),
        _write(out / "anchored_curves.csv", *anchored_rows(reports)),
    ]
