"""Collection and analysis commands behind the CLI."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .core import Questionnaire, load_questionnaire
from .errors import ConfigError, EmptyDataset, ParseError, ProviderError, ValueProbeError
from .gateway import (
    Exchange,
    Provider,
    ProviderConfig,
    SessionTranscript,
    administer,
    generate_personas,
    load_transcripts,
    make_provider,
    run_sessions,
    scrub,
    write_transcripts,
)
from .parser import Exclusion, assemble_dataset, parse_transcript, write_dataset_csv, write_exclusions
from .prompts import STRATEGY_KINDS, ListData, plan_run_set, render_prompt
from .report import AnalysisSettings, build_report, write_report

log = logging.getLogger(__name__)

TRANSCRIPTS = "transcripts.jsonl"
EXCLUSIONS = "exclusions.csv"
DATASET = "dataset.csv"
PLAN = "plan.json"
PERSONAS = "personas.json"


def slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", str(text)).strip("-") or "x"


@dataclass
class RunConfig:
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    strategy: str = "value_anchor"
    n_sessions: int = 300
    mode: str = "batch"
    seed: int = 0
    out: str = "runs"
    questionnaire: str | None = None
    parallelism: int = 1
    include_animal_welfare: bool = False
    strict: bool = False
    occupations: str | None = None
    hobbies: str | None = None
    names: str | None = None

    def __post_init__(self):
        if self.strategy not in STRATEGY_KINDS:
            raise ConfigError(f"strategy must be one of {', '.join(STRATEGY_KINDS)}")
        if self.mode not in ("batch", "serial"):
            raise ConfigError("mode must be batch or serial")
        if self.n_sessions < 0:
            raise ConfigError("n_sessions must be >= 0")

    @property
    def out_dir(self) -> Path:
        """One directory per (model, strategy, temperature, mode)."""
        p = self.provider
        return Path(self.out) / slug(p.model) / self.strategy / f"t{p.temperature:g}" / self.mode

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        prov = d.pop("provider", {})
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config fields: {', '.join(sorted(extra))}")
        try:
            return cls(provider=ProviderConfig.from_dict(prov), **d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text("utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None


def _personas(config: RunConfig, provider: Provider, out_dir: Path) -> list[str] | None:
    if config.strategy != "persona":
        return None
    path = out_dir / PERSONAS
    if path.exists():
        personas = json.loads(path.read_text("utf-8"))
        if len(personas) >= config.n_sessions:
            return personas
    personas = generate_personas(config.n_sessions, provider, config.seed)
    path.write_text(json.dumps(personas, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    return personas


def _exclusions(transcripts, questionnaire, strict) -> list[Exclusion]:
    out = []
    for t in transcripts:
        try:
            parse_transcript(t, len(questionnaire), strict)
        except ParseError as exc:
            out.append(Exclusion(t.session_id, exc.kind, str(exc)))
    return out


def _scrubbed(t: SessionTranscript, secrets) -> SessionTranscript:
    if not secrets:
        return t
    t.raw_exchanges = [Exchange(scrub(e.prompt, secrets), scrub(e.completion, secrets))
                       for e in t.raw_exchanges]
    return t


def cmd_collect(config: RunConfig, provider: Provider | None = None,
                questionnaire: Questionnaire | None = None) -> Path:
    """Plan, administer and persist every session of one run set.

    Sessions already in the store are skipped, so re-running resumes an
    interrupted collection. Completed sessions are written before any
    provider error is re-raised.
    """
    provider = provider or make_provider(config.provider)
    questionnaire = questionnaire or load_questionnaire(config.questionnaire)
    out_dir = config.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    store = out_dir / TRANSCRIPTS

    existing = load_transcripts(store) if store.exists() else []
    have = {t.session_id for t in existing}
    lists = ListData.from_paths(config.occupations, config.hobbies, config.names)
    personas = _personas(config, provider, out_dir)
    plan = plan_run_set(config.strategy, config.n_sessions, config.seed, config.provider.temperature,
                        lists=lists, personas=personas,
                        include_animal_welfare=config.include_animal_welfare)
    (out_dir / PLAN).write_text(json.dumps(
        [{"session_id": s.session_id, "strategy": s.strategy.to_dict(),
          "gender_version": s.gender_version, "temperature": s.temperature} for s in plan],
        indent=1, ensure_ascii=False) + "\n", encoding="utf-8")

    def work(spec) -> SessionTranscript:
        t = administer(spec, render_prompt(spec.strategy), questionnaire, provider, config.mode)
        t = _scrubbed(t, provider.secrets())
        try:
            t.parsed_scores = parse_transcript(t, len(questionnaire), config.strict)
        except ParseError:
            t.parsed_scores = None
        return t

    pending = [s for s in plan if s.session_id not in have]
    log.info("%d sessions planned, %d already stored, %d to run", len(plan), len(have), len(pending))
    done, failed = run_sessions(pending, work, config.parallelism)
    transcripts = existing + done
    write_transcripts(store, transcripts)

    if transcripts:
        try:
            dataset, excluded = assemble_dataset(transcripts, questionnaire, config.strict)
            write_dataset_csv(out_dir / DATASET, dataset)
        except EmptyDataset:
            excluded = _exclusions(transcripts, questionnaire, config.strict)
        write_exclusions(out_dir / EXCLUSIONS, excluded)

    if failed:
        spec, exc = failed[0]
        log.error("%d sessions failed; first was %s: %s", len(failed), spec.session_id, exc)
        raise exc
    return store


def cmd_synth(config: RunConfig) -> Path:
    """Collect with the synthetic oracle regardless of the configured provider."""
    p = config.provider
    synth = ProviderConfig(kind="synthetic", model=p.model if p.kind == "synthetic" else "synthetic",
                           temperature=p.temperature, amplitude=p.amplitude, baseline=p.baseline,
                           noise_sigma=p.noise_sigma, seed=config.seed)
    cfg = RunConfig(**{**config.__dict__, "provider": synth})
    return cmd_collect(cfg)


def analyze_store(store: str | Path, settings: AnalysisSettings,
                  questionnaire: Questionnaire | None = None, strict: bool = False) -> dict:
    questionnaire = questionnaire or load_questionnaire()
    transcripts = load_transcripts(store)
    dataset, excluded = assemble_dataset(transcripts, questionnaire, strict)
    return build_report(dataset, settings, n_excluded=len(excluded))


def cmd_analyze(store_paths: Sequence[str | Path], out: str | Path,
                settings: AnalysisSettings | None = None,
                questionnaire: Questionnaire | None = None,
                strict: bool = False) -> tuple[list[Path], list[tuple[str, Exception]]]:
    """Write one report.json per store; failures are collected, not fatal."""
    settings = settings or AnalysisSettings()
    written, failures = [], []
    for store in store_paths:
        try:
            report = analyze_store(store, settings, questionnaire, strict)
        except (ValueProbeError, OSError) as exc:
            log.error("analysis of %s failed: %s", store, exc)
            failures.append((str(store), exc))
            continue
        d = report["dataset"]
        target = Path(out) / slug(d["model"]) / d["strategy"] / f"t{d['temperature']:g}" / d["mode"] / "report.json"
        written.append(write_report(target, report))
    return written, failures


__all__ = [
    "RunConfig", "cmd_collect", "cmd_synth", "cmd_analyze", "analyze_store", "ProviderError",
]
