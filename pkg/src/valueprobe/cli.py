"""Command line entry point: collect, synth, analyze, figures, tables."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigError, ProviderError, ValueProbeError
from .figures import FIGURE_KINDS, FigureSpec, render_figures
from .pipeline import RunConfig, cmd_analyze, cmd_collect, cmd_synth
from .prompts import STRATEGY_KINDS
from .report import AnalysisSettings, load_report
from .tables import export_tables

EXIT_OK, EXIT_CONFIG, EXIT_PROVIDER, EXIT_ANALYSIS = 0, 2, 3, 4


def _read_config(path: str | None) -> tuple[dict, dict]:
    """Return (run section, analysis section) of a JSON config file."""
    if not path:
        return {}, {}
    try:
        doc = json.loads(Path(path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    analysis = doc.pop("analysis", {})
    return doc, analysis


def _run_config(args) -> RunConfig:
    doc, _ = _read_config(args.config)
    prov = dict(doc.pop("provider", {}))
    for flag, key in (("model", "model"), ("temperature", "temperature"), ("provider", "kind")):
        if getattr(args, flag, None) is not None:
            prov[key] = getattr(args, flag)
    for flag, key in (("strategy", "strategy"), ("n", "n_sessions"), ("mode", "mode"),
                      ("parallelism", "parallelism")):
        if getattr(args, flag, None) is not None:
            doc[key] = getattr(args, flag)
    if args.seed is not None:
        doc["seed"] = args.seed
        prov["seed"] = args.seed
    if args.out is not None:
        doc["out"] = args.out
    return RunConfig.from_dict({**doc, "provider": prov})


def _settings(args) -> AnalysisSettings:
    _, section = _read_config(args.config)
    known = {f.name for f in dataclasses.fields(AnalysisSettings)}
    section = {("transform" if k == "dissimilarity" else k): v for k, v in section.items()}
    extra = set(section) - known
    if extra:
        raise ConfigError(f"unknown analysis fields: {', '.join(sorted(extra))}")
    s = AnalysisSettings(**section)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.restarts is not None:
        changes["restarts"] = args.restarts
    if args.dissimilarity is not None:
        changes["transform"] = args.dissimilarity
    if args.reference is not None:
        changes["reference_path"] = args.reference
    if args.no_prescale:
        changes["prescale"] = False
    return dataclasses.replace(s, **changes)


def do_collect(args) -> int:
    store = cmd_collect(_run_config(args))
    print(store)
    return EXIT_OK


def do_synth(args) -> int:
    store = cmd_synth(_run_config(args))
    print(store)
    return EXIT_OK


def do_analyze(args) -> int:
    out = args.out or "reports"
    written, failures = cmd_analyze(args.stores, out, _settings(args), strict=args.strict)
    for p in written:
        print(p)
    for store, exc in failures:
        print(f"error: {store}: {exc}", file=sys.stderr)
    return EXIT_ANALYSIS if failures else EXIT_OK


def do_figures(args) -> int:
    out = render_figures(FigureSpec(args.kind, tuple(args.reports), args.output))
    print(out)
    return EXIT_OK


def do_tables(args) -> int:
    reports = [load_report(p) for p in args.reports]
    for p in export_tables(reports, args.out or "tables"):
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valueprobe", description=__doc__)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="seed for every random draw in this command")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("collect", do_collect, "administer the questionnaire and store transcripts"),
                               ("synth", do_synth, "collect from the synthetic respondent model")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--strategy", choices=STRATEGY_KINDS)
        p.add_argument("-n", type=int, help="number of sessions")
        p.add_argument("--mode", choices=("batch", "serial"))
        p.add_argument("--model")
        p.add_argument("--temperature", type=float)
        p.add_argument("--parallelism", type=int)
        if name == "collect":
            p.add_argument("--provider", choices=("live", "synthetic", "replay"))
        p.set_defaults(func=fn)

    p = sub.add_parser("analyze", help="write report.json for each transcript store")
    p.add_argument("stores", nargs="+")
    p.add_argument("--reference", help="human 19x2 configuration (CSV value,x,y or JSON)")
    p.add_argument("--restarts", type=int)
    p.add_argument("--dissimilarity", choices=("sqrt_two_one_minus_r", "one_minus_r"))
    p.add_argument("--no-prescale", action="store_true")
    p.add_argument("--strict", action="store_true", help="reject completions with stray text")
    p.set_defaults(func=do_analyze)

    p = sub.add_parser("figures", help="render an SVG figure from reports")
    p.add_argument("kind", choices=FIGURE_KINDS)
    p.add_argument("reports", nargs="*")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=do_figures)

    p = sub.add_parser("tables", help="export CSV tables from reports")
    p.add_argument("reports", nargs="+")
    p.set_defaults(func=do_tables)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except ValueProbeError as exc:
        print(f"{exc.kind}: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
