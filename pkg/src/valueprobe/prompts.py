"""Prompt strategies, list data and run planning."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .core import CIRCLE, ValueId
from .errors import EmptyList, UnfilledPlaceholder

_ANSWER = "please answer how much the person described is like you from 1 (Not like me at all) to 6 (Very much like me)"
_RATE = (
    "please rate how much the person described is like you, "
    "using a scale from 1 (Not like me at all) to 6 (Very much like me)"
)
_HEAD = "For each of the following descriptions, "
_TAIL = ", without elaborating on your reasoning."

BASIC_PROMPT = _HEAD + _ANSWER + _TAIL
RATE_PROMPT = _HEAD + _RATE + _TAIL
PERSONA_REQUEST = "Create a persona (2-3 sentences long):"
PERSONA_TEMPERATURE = 0.7

GENDERS = ("male", "female", "non-binary", "other")
TITLES = ("Mr.", "Ms.", "Mx.")
AGE_RANGE = (18, 75)

# Best-Worst refined value descriptions used as anchors.
ANCHOR_PHRASES = {
    ValueId.SDT: "developing your own original ideas and opinions",
    ValueId.SDA: "being free to act independently",
    ValueId.ST: "having an exciting life; having all sorts of new experiences",
    ValueId.HE: "taking advantage of every opportunity to enjoy life’s pleasures",
    ValueId.AC: "being ambitious and successful",
    ValueId.POD: "having the power that money and possessions can bring",
    ValueId.POR: "having the authority to get others to do what you want",
    ValueId.FAC: "protecting your public image and avoiding being shamed",
    ValueId.SEP: "living and acting in ways that ensure that you are personally safe and secure",
    ValueId.SES: "living in a safe and stable society",
    ValueId.TR: "following cultural family or religious practices",
    ValueId.COR: "obeying all rules and laws",
    ValueId.COI: "making sure you never upset or annoy others",
    ValueId.HUM: "being humble and avoiding public recognition",
    ValueId.BED: "being a completely dependable and trustworthy friend and family member",
    ValueId.BEC: "helping and caring for the wellbeing of those who are close",
    ValueId.UNC: "caring and seeking justice for everyone especially the weak and vulnerable in society",
    ValueId.UNN: "protecting the natural environment from destruction or pollution",
    ValueId.UNT: "being open-minded and accepting of people and ideas, even when you disagree with them",
}
ANIMAL_WELFARE_PHRASE = "caring for the welfare of animals"


@dataclass(frozen=True)
class AnchorItem:
    value: ValueId | None  # None only for the opt-in animal-welfare anchor
    phrase: str

    @property
    def code(self) -> str:
        return self.value.name if self.value is not None else "ANW"


def anchor_items(include_animal_welfare: bool = False) -> list[AnchorItem]:
    """Default anchors in circle order; optionally append the animal-welfare item."""
    out = [AnchorItem(v, ANCHOR_PHRASES[v]) for v in CIRCLE]
    if include_animal_welfare:
        out.append(AnchorItem(None, ANIMAL_WELFARE_PHRASE))
    return out


def anchor_for(code: str) -> AnchorItem:
    if code.upper() == "ANW":
        return AnchorItem(None, ANIMAL_WELFARE_PHRASE)
    v = ValueId.parse(code)
    return AnchorItem(v, ANCHOR_PHRASES[v])


@dataclass(frozen=True)
class DemographicProfile:
    age: int
    gender: str
    occupation: str
    hobby: str

    def __post_init__(self):
        lo, hi = AGE_RANGE
        if not lo <= self.age <= hi:
            raise ValueError(f"age {self.age} outside {lo}..{hi}")


# -- strategies -------------------------------------------------------------


@dataclass(frozen=True)
class Basic:
    kind = "basic"

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class ValueAnchor:
    anchor: AnchorItem
    kind = "value_anchor"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "anchor": self.anchor.code, "phrase": self.anchor.phrase}


@dataclass(frozen=True)
class Demographic:
    profile: DemographicProfile
    kind = "demographic"

    def to_dict(self) -> dict:
        p = self.profile
        return {"kind": self.kind, "age": p.age, "gender": p.gender,
                "occupation": p.occupation, "hobby": p.hobby}


@dataclass(frozen=True)
class GeneratedPersona:
    text: str
    kind = "persona"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "persona": self.text}


@dataclass(frozen=True)
class Names:
    title: str
    surname: str
    ethnicity_tag: str
    kind = "names"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "title": self.title, "surname": self.surname,
                "ethnicity": self.ethnicity_tag}


PromptStrategy = Basic | ValueAnchor | Demographic | GeneratedPersona | Names
STRATEGY_KINDS = ("basic", "value_anchor", "demographic", "persona", "names")
STRATEGY_LABELS = {
    "basic": "Basic",
    "value_anchor": "Value Anchor",
    "demographic": "Demographic",
    "persona": "Generated Persona",
    "names": "Names",
}


def strategy_from_dict(d: dict) -> PromptStrategy:
    kind = d.get("kind")
    if kind == "basic":
        return Basic()
    if kind == "value_anchor":
        a = anchor_for(d["anchor"])
        return ValueAnchor(AnchorItem(a.value, d.get("phrase", a.phrase)))
    if kind == "demographic":
        return Demographic(DemographicProfile(int(d["age"]), d["gender"], d["occupation"], d["hobby"]))
    if kind == "persona":
        return GeneratedPersona(d["persona"])
    if kind == "names":
        return Names(d["title"], d["surname"], d["ethnicity"])
    raise ValueError(f"unknown strategy kind {kind!r}")


def _require(**slots: object) -> None:
    for name, value in slots.items():
        if value is None or (isinstance(value, str) and not value.strip()):
            raise UnfilledPlaceholder(f"slot [{name}] is empty")


def render_prompt(strategy: PromptStrategy) -> str:
    """Render the instruction text that precedes the questionnaire items."""
    if isinstance(strategy, Basic):
        return BASIC_PROMPT
    if isinstance(strategy, ValueAnchor):
        _require(value=strategy.anchor.phrase)
        return f"{BASIC_PROMPT} Answer as a person that is {strategy.anchor.phrase}"
    if isinstance(strategy, Demographic):
        p = strategy.profile
        _require(age=p.age, gender=p.gender, occupation=p.occupation, hobby=p.hobby)
        return (f"{RATE_PROMPT} Answer as a {p.age}-year-old who identifies as {p.gender}, "
                f"working in the field of {p.occupation}, and enjoys {p.hobby}.")
    if isinstance(strategy, GeneratedPersona):
        _require(persona=strategy.text)
        return f"{RATE_PROMPT} Answer as: {strategy.text.strip().rstrip('.')}."
    if isinstance(strategy, Names):
        _require(title=strategy.title, name=strategy.surname)
        return f"{RATE_PROMPT} Answer as {strategy.title} {strategy.surname}"
    raise TypeError(f"not a prompt strategy: {strategy!r}")


# -- list files -------------------------------------------------------------


def _read_data(name: str, path: str | Path | None) -> str:
    if path is None:
        return resources.files("valueprobe.data").joinpath(name).read_text("utf-8")
    return Path(path).read_text("utf-8")


def load_list(name: str, path: str | Path | None = None) -> list[str]:
    """One entry per line; blank lines and ``#`` comments are skipped."""
    lines = [ln.strip() for ln in _read_data(name, path).splitlines()]
    entries = [ln for ln in lines if ln and not ln.startswith("#")]
    if not entries:
        raise EmptyList(f"{path or name} has no entries")
    return entries


def load_names(path: str | Path | None = None) -> list[tuple[str, str, str]]:
    """Rows of (title, surname, ethnicity); a blank title means any of Mr./Ms./Mx."""
    reader = csv.DictReader(io.StringIO(_read_data("names.csv", path)))
    rows = [((r.get("title") or "").strip(), r["surname"].strip(), r["ethnicity"].strip())
            for r in reader if (r.get("surname") or "").strip()]
    if not rows:
        raise EmptyList(f"{path or 'names.csv'} has no entries")
    return rows


@dataclass
class ListData:
    occupations: list[str] = field(default_factory=lambda: load_list("occupations.txt"))
    hobbies: list[str] = field(default_factory=lambda: load_list("hobbies.txt"))
    names: list[tuple[str, str, str]] = field(default_factory=load_names)

    @classmethod
    def from_paths(cls, occupations=None, hobbies=None, names=None) -> "ListData":
        return cls(load_list("occupations.txt", occupations),
                   load_list("hobbies.txt", hobbies),
                   load_names(names))


def sample_demographic_profile(rng: np.random.Generator, lists: ListData | None = None) -> DemographicProfile:
    lists = lists or ListData()
    if not lists.occupations or not lists.hobbies:
        raise EmptyList("occupation and hobby lists must be nonempty")
    lo, hi = AGE_RANGE
    age = int(rng.integers(lo, hi + 1))
    gender = GENDERS[int(rng.integers(len(GENDERS)))]
    occupation = lists.occupations[int(rng.integers(len(lists.occupations)))]
    hobby = lists.hobbies[int(rng.integers(len(lists.hobbies)))]
    return DemographicProfile(age, gender, occupation, hobby)


# -- run planning -----------------------------------------------------------


@dataclass(frozen=True)
class SessionSpec:
    session_id: str
    strategy: PromptStrategy
    gender_version: str
    temperature: float

    @property
    def number(self) -> int:
        return session_number(self.session_id)


@dataclass(frozen=True)
class RunPlan:
    sessions: tuple[SessionSpec, ...]

    def __len__(self) -> int:
        return len(self.sessions)

    def __iter__(self):
        return iter(self.sessions)


def session_id(k: int) -> str:
    return f"s{k:05d}"


def session_number(sid: str) -> int:
    return int(sid.lstrip("s"))


def _name_combos(rows, n: int, rng: np.random.Generator) -> list[Names]:
    by_group: dict[str, list[tuple[str, str]]] = {}
    for title, surname, group in rows:
        pool = by_group.setdefault(group, [])
        for combo in [(title, surname)] if title else [(t, surname) for t in TITLES]:
            if combo not in pool:
                pool.append(combo)
    groups = sorted(by_group)
    quota = [n // len(groups) + (1 if i < n % len(groups) else 0) for i in range(len(groups))]
    picked: list[Names] = []
    for group, q in zip(groups, quota):
        pool = by_group[group]
        if q > len(pool):
            raise EmptyList(f"only {len(pool)} unique title+surname combinations for {group!r}, need {q}")
        for i in rng.choice(len(pool), size=q, replace=False):
            picked.append(Names(pool[i][0], pool[i][1], group))
    order = rng.permutation(len(picked))
    return [picked[i] for i in order]


def plan_run_set(
    kind: str,
    n: int,
    seed: int,
    temperature: float = 0.0,
    *,
    lists: ListData | None = None,
    personas: list[str] | None = None,
    include_animal_welfare: bool = False,
) -> RunPlan:
    """Build ``n`` session specs for one strategy kind.

    Value anchors are assigned round-robin in circle order and gender
    versions alternate male/female, so both are balanced to within one.
    Persona runs need the generated persona texts passed in.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if kind not in STRATEGY_KINDS:
        raise ValueError(f"unknown strategy kind {kind!r}; choose from {STRATEGY_KINDS}")
    rng = np.random.default_rng(seed)
    lists = lists or ListData()

    if kind == "basic":
        strategies = [Basic()] * n
    elif kind == "value_anchor":
        anchors = anchor_items(include_animal_welfare)
        strategies = [ValueAnchor(anchors[k % len(anchors)]) for k in range(n)]
    elif kind == "demographic":
        strategies = [Demographic(sample_demographic_profile(rng, lists)) for _ in range(n)]
    elif kind == "persona":
        if personas is None or len(personas) < n:
            raise ValueError(f"persona plan needs {n} persona texts")
        strategies = [GeneratedPersona(t) for t in personas[:n]]
    else:
        strategies = _name_combos(lists.names, n, rng) if n else []

    sessions = tuple(
        SessionSpec(session_id(k + 1), s, "male" if k % 2 == 0 else "female", float(temperature))
        for k, s in enumerate(strategies)
    )
    return RunPlan(sessions)
