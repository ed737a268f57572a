"""StructureReport: every statistic for one dataset, serialized as JSON."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .analysis import (
    align_labelled,
    anchored_curve,
    centered_profiles,
    correlation_from_profiles,
    fit_sine,
    human_reference_embedding,
    item_alphas,
    mds_embed,
    rank_profile,
    spearman_rho,
)
from .core import CODES, human_benchmark_profile
from .errors import AnalysisError, MalformedReport, MissingInput
from .parser import ResponseMatrix

REQUIRED_FIELDS = (
    "dataset", "mean_profile", "ranks", "spearman_vs_human", "correlation_matrix",
    "embedding", "stress1", "procrustes_ssd", "anchored_curve", "sine_fit",
)


@dataclass(frozen=True)
class AnalysisSettings:
    seed: int = 0
    restarts: int = 8
    transform: str = "sqrt_two_one_minus_r"
    prescale: bool = True
    reference_path: str | None = None

    def to_dict(self) -> dict:
        return {"seed": self.seed, "restarts": self.restarts, "dissimilarity": self.transform,
                "prescale": self.prescale,
                "reference": Path(self.reference_path).name if self.reference_path else "ideal-circumplex"}


def _num(x) -> float | None:
    """JSON-safe float rounded for platform-stable output; NaN/inf become null."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    r = round(x, 10)
    return 0.0 if r == 0 else r


def _matrix(M) -> list[list[float | None]]:
    return [[_num(v) for v in row] for row in np.asarray(M)]


def dataset_info(dataset: ResponseMatrix, n_excluded: int = 0) -> dict:
    first = dataset.sessions[0] if dataset.sessions else {}
    strategy = first.get("strategy", {}).get("kind", "unknown")
    model = first.get("model", "") or "unknown"
    temp = first.get("temperature", 0.0)
    mode = first.get("mode", "batch")
    return {
        "label": f"{model}/{strategy}/t{temp:g}/{mode}",
        "model": model,
        "strategy": strategy,
        "temperature": temp,
        "mode": mode,
        "n_sessions": dataset.n_sessions,
        "n_excluded": n_excluded,
    }


def build_report(dataset: ResponseMatrix, settings: AnalysisSettings | None = None,
                 n_excluded: int = 0) -> dict:
    """Run the full analysis on one dataset.

    Sections that cannot be computed (too few sessions, degenerate input)
    are left null and the reason is recorded under ``errors``.
    """
    settings = settings or AnalysisSettings()
    errors: dict[str, str] = {}
    profiles = centered_profiles(dataset)
    mean = profiles.mean(axis=0)
    ranks = rank_profile(mean)
    human = human_benchmark_profile()

    report: dict = {
        "dataset": dataset_info(dataset, n_excluded),
        "settings": settings.to_dict(),
        "values": list(CODES),
        "mean_profile": {c: _num(v) for c, v in zip(CODES, mean)},
        "ranks": {c: _num(r) for c, r in zip(CODES, ranks)},
        "spearman_vs_human": None,
        "cronbach_alpha": {c: _num(a) for c, a in item_alphas(dataset).items()},
        "correlation_matrix": None,
        "embedding": None,
        "stress1": None,
        "procrustes_ssd": None,
        "anchored_curve": None,
        "sine_fit": None,
    }
    try:
        report["spearman_vs_human"] = _num(spearman_rho(mean, human.mean_vector()))
    except AnalysisError as exc:
        errors["spearman_vs_human"] = f"{exc.kind}: {exc}"

    try:
        C = correlation_from_profiles(profiles)
        report["correlation_matrix"] = {"labels": list(C.labels), "valid": C.valid.tolist(),
                                        "rows": _matrix(C.C)}
        emb = mds_embed(C, seed=settings.seed, restarts=settings.restarts, transform=settings.transform)
        ref = human_reference_embedding(settings.reference_path, restarts=settings.restarts)
        pr, common = align_labelled(emb.P, emb.labels, ref.P, ref.labels, prescale=settings.prescale)
        report["embedding"] = {"labels": list(common), "coords": _matrix(emb.P),
                               "aligned": _matrix(pr.aligned), "reference": _matrix(pr.target),
                               "restart": emb.restart}
        report["stress1"] = _num(emb.stress1)
        report["procrustes_ssd"] = _num(pr.ssd)
    except AnalysisError as exc:
        errors["structure"] = f"{exc.kind}: {exc}"

    anchors = dataset.anchors()
    if any(a is not None for a in anchors):
        try:
            curve = anchored_curve(profiles, anchors)
            fit = fit_sine(curve)
            report["anchored_curve"] = {"y": [_num(v) for v in curve.y],
                                        "counts": curve.counts.tolist(),
                                        "n_sessions": curve.n_sessions}
            report["sine_fit"] = {"amplitude": _num(fit.amplitude), "phase": _num(fit.phase),
                                  "offset": _num(fit.offset), "r_squared": _num(fit.r_squared)}
        except AnalysisError as exc:
            errors["anchored_curve"] = f"{exc.kind}: {exc}"
    report["errors"] = errors
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def write_report(path: str | Path, report: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report), encoding="utf-8")
    return path


def load_report(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MissingInput(f"{path} does not exist")
    try:
        doc = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedReport(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedReport(f"{path}: top level is not an object")
    missing = [f for f in REQUIRED_FIELDS if f not in doc]
    if missing:
        raise MalformedReport(f"{path}: missing {', '.join(missing)}")
    return doc


# -- cross-report comparisons -----------------------------------------------


def ssd_ordering(reports: Iterable[dict], lower: str = "value_anchor", higher: str = "names") -> list[dict]:
    """Pair reports by (model, temperature, mode) and compare their Procrustes SSD."""
    table: dict[tuple, dict[str, float | None]] = {}
    for r in reports:
        d = r["dataset"]
        table.setdefault((d["model"], d["temperature"], d["mode"]), {})[d["strategy"]] = r.get("procrustes_ssd")
    rows = []
    for (model, temp, mode), by in sorted(table.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        if lower in by and higher in by and by[lower] is not None and by[higher] is not None:
            rows.append({"model": model, "temperature": temp, "mode": mode,
                         lower: by[lower], higher: by[higher], "holds": by[lower] < by[higher]})
    return rows


def assert_ssd_ordering(reports: Iterable[dict], lower: str = "value_anchor", higher: str = "names") -> list[dict]:
    """Raise AssertionError unless every paired dataset has SSD(lower) < SSD(higher)."""
    rows = ssd_ordering(reports, lower, higher)
    if not rows:
        raise AssertionError(f"no (model, temperature, mode) has both {lower} and {higher} reports")
    bad = [r for r in rows if not r["holds"]]
    if bad:
        detail = "; ".join(f"{r['model']} t={r['temperature']}: {r[lower]} >= {r[higher]}" for r in bad)
        raise AssertionError(f"SSD ordering {lower} < {higher} violated: {detail}")
    return rows
