"""Turn raw completions into score vectors and assemble the response tensor."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import N_ITEMS, SCALE_MAX, SCALE_MIN, Questionnaire
from .errors import (
    AmbiguousScore,
    CountMismatch,
    EmptyDataset,
    NonNumeric,
    OutOfRange,
    ParseError,
    RefusalDetected,
)
from .gateway import SessionTranscript
from .prompts import session_number

_NUMBERED = re.compile(r"^\s*\**\s*(\d+)\s*([.):])\s*(.*?)\s*$")
_STRICT = re.compile(r"^\s*(\d+)\.\s*(.*?)\s*$")
_BARE = re.compile(r"^[\s,;]*\d+(?:[\s,;]+\d+)*[\s,;]*$")
_INT = re.compile(r"-?\d+")

FORMATS = ("dot", "paren", "colon", "space", "comma", "lines")


def format_scores(scores: Sequence[int], style: str = "dot") -> str:
    """Render scores in one of the accepted completion formats."""
    if style == "dot":
        return "\n".join(f"{n}. {s}" for n, s in enumerate(scores, 1))
    if style == "paren":
        return "\n".join(f"{n}) {s}" for n, s in enumerate(scores, 1))
    if style == "colon":
        return "\n".join(f"{n}: {s}" for n, s in enumerate(scores, 1))
    if style == "space":
        return " ".join(map(str, scores))
    if style == "comma":
        return ", ".join(map(str, scores))
    if style == "lines":
        return "\n".join(map(str, scores))
    raise ValueError(f"unknown format {style!r}")


def _check(item: int, value: int) -> int:
    if not SCALE_MIN <= value <= SCALE_MAX:
        raise OutOfRange(item, value)
    return value


def _score_field(item: int, rest: str) -> int:
    # "5", "5 (Like me)", "**5**" are fine; "4-5" or "Like me" are not
    rest = rest.strip().strip("*").strip()
    nums = _INT.findall(rest)
    if not nums or not re.match(r"^-?\d+", rest):
        raise NonNumeric(item, rest)
    if len(nums) > 1:
        raise NonNumeric(item, rest)
    return _check(item, int(nums[0]))


def _parse_numbered(lines: list[tuple[int, str]], expected: int) -> list[int]:
    seen: dict[int, int] = {}
    for idx, rest in lines:
        if idx in seen:
            raise CountMismatch(len(lines), expected, f"item {idx} answered twice")
        seen[idx] = _score_field(idx, rest)
    if len(seen) != expected:
        raise CountMismatch(len(seen), expected)
    if sorted(seen) != list(range(1, expected + 1)):
        raise CountMismatch(len(seen), expected, f"numbering is not 1..{expected}")
    return [seen[i] for i in range(1, expected + 1)]


def parse_scores(raw: str, expected_count: int = N_ITEMS, strict: bool = False) -> list[int]:
    """Extract ``expected_count`` scores in item order from a completion.

    Accepted: ``n. s``, ``n) s``, ``n: s`` lines (other lines are ignored as
    chatter), or a bare whitespace/comma separated run of integers, which
    also covers one unnumbered score per line and may be wrapped in lines
    without digits. ``strict`` accepts only the
    ``n. s`` form.
    """
    if not re.search(r"\d", raw):
        raise RefusalDetected("completion contains no digits")
    text_lines = raw.splitlines()

    if strict:
        found = [(int(m.group(1)), m.group(2)) for m in map(_STRICT.match, text_lines) if m]
        return _parse_numbered(found, expected_count)

    # digit-free preamble or sign-off lines around an unnumbered run are chatter
    core = list(text_lines)
    while core and not re.search(r"\d", core[0]):
        core.pop(0)
    while core and not re.search(r"\d", core[-1]):
        core.pop()
    body = "\n".join(core)
    if _BARE.match(body):
        values = [int(x) for x in _INT.findall(body)]
        if len(values) != expected_count:
            raise CountMismatch(len(values), expected_count)
        return [_check(n, v) for n, v in enumerate(values, 1)]

    found = []
    for line in text_lines:
        m = _NUMBERED.match(line)
        if m:
            found.append((int(m.group(1)), m.group(3)))
    if not found:
        raise CountMismatch(0, expected_count, "no numbered answers")
    return _parse_numbered(found, expected_count)


def parse_single_score(raw: str, item: int) -> int:
    """Parse a serial-mode completion that should carry exactly one score."""
    nums = _INT.findall(raw)
    if not nums:
        raise RefusalDetected(f"item {item}: completion contains no digits")
    if len(nums) > 1:
        raise AmbiguousScore(f"item {item}: several numbers in {raw.strip()!r}")
    return _check(item, int(nums[0]))


def parse_transcript(t: SessionTranscript, expected_count: int = N_ITEMS, strict: bool = False) -> list[int]:
    if t.mode == "batch":
        return parse_scores(t.raw_exchanges[0].completion, expected_count, strict)
    return [parse_single_score(c, n) for n, c in enumerate(t.completions, 1)]


# -- dataset ----------------------------------------------------------------


@dataclass(frozen=True)
class Exclusion:
    session_id: str
    error_kind: str
    detail: str


@dataclass
class ResponseMatrix:
    """Scores for N sessions, both flat (N x 57) and as X[value, variant, session]."""

    scores: np.ndarray
    questionnaire: Questionnaire
    sessions: list[dict] = field(default_factory=list)

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=int)
        if self.scores.ndim != 2 or self.scores.shape[1] != N_ITEMS or self.scores.shape[0] < 1:
            raise ValueError(f"scores must have shape (N>=1, {N_ITEMS}), got {self.scores.shape}")
        if self.scores.min() < SCALE_MIN or self.scores.max() > SCALE_MAX:
            raise ValueError("scores must lie in 1..6")

    @property
    def n_sessions(self) -> int:
        return self.scores.shape[0]

    @property
    def X(self) -> np.ndarray:
        idx = np.array(self.questionnaire.value_index_matrix())  # 19 x 3
        return self.scores[:, idx].transpose(1, 2, 0)

    def anchors(self) -> list[str | None]:
        return [s.get("strategy", {}).get("anchor") for s in self.sessions]


def assemble_dataset(transcripts: Iterable[SessionTranscript], questionnaire: Questionnaire,
                     strict: bool = False) -> tuple[ResponseMatrix, list[Exclusion]]:
    """Parse every transcript; failures go to the exclusion report, never silently."""
    rows, meta, excluded = [], [], []
    for t in sorted(transcripts, key=lambda t: session_number(t.session_id)):
        try:
            scores = parse_transcript(t, len(questionnaire), strict)
        except ParseError as exc:
            excluded.append(Exclusion(t.session_id, exc.kind, str(exc)))
            continue
        rows.append(scores)
        meta.append({
            "session_id": t.session_id,
            "strategy": t.strategy,
            "gender_version": t.gender_version,
            "mode": t.mode,
            "model": t.model,
            "temperature": t.temperature,
        })
    if not rows:
        raise EmptyDataset(f"no parseable sessions ({len(excluded)} excluded)")
    return ResponseMatrix(np.array(rows), questionnaire, meta), excluded


def write_exclusions(path: str | Path, exclusions: Sequence[Exclusion]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["session_id", "error_kind", "detail"])
        for e in exclusions:
            w.writerow([e.session_id, e.error_kind, e.detail])


_META_COLUMNS = ("session_id", "model", "temperature", "mode", "gender_version", "strategy_kind", "strategy_detail")


def _strategy_detail(s: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(s.items()) if k != "kind")


def write_dataset_csv(path: str | Path, dataset: ResponseMatrix) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*_META_COLUMNS, *(f"q{i}" for i in range(1, N_ITEMS + 1))])
        for meta, row in zip(dataset.sessions, dataset.scores):
            strat = meta.get("strategy", {})
            w.writerow([meta["session_id"], meta.get("model", ""), meta.get("temperature", ""),
                        meta.get("mode", ""), meta.get("gender_version", ""), strat.get("kind", ""),
                        _strategy_detail(strat), *row.tolist()])


def read_dataset_csv(path: str | Path, questionnaire: Questionnaire) -> ResponseMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise EmptyDataset(f"{path} has no rows")
    scores = [[int(r[f"q{i}"]) for i in range(1, N_ITEMS + 1)] for r in rows]
    meta = []
    for r in rows:
        strat = {"kind": r["strategy_kind"]}
        for part in filter(None, r["strategy_detail"].split(";")):
            k, _, v = part.partition("=")
            strat[k] = v
        meta.append({"session_id": r["session_id"], "model": r["model"],
                     "temperature": float(r["temperature"]) if r["temperature"] else 0.0,
                     "mode": r["mode"], "gender_version": r["gender_version"], "strategy": strat})
    return ResponseMatrix(np.array(scores), questionnaire, meta)

