"""Value taxonomy, circular ordering, questionnaire schema and human benchmark."""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import FileUnreadable, SchemaViolation

N_VALUES = 19
N_VARIANTS = 3
N_ITEMS = N_VALUES * N_VARIANTS
SCALE_MIN = 1
SCALE_MAX = 6
SCALE_LABELS = {
    1: "Not like me at all",
    2: "Not like me",
    3: "A little like me",
    4: "Somewhat like me",
    5: "Like me",
    6: "Very much like me",
}


class ValueId(enum.Enum):
    """The 19 refined basic values, declared in circle order."""

    SDT = "Self-Direction Thought"
    SDA = "Self-Direction Action"
    ST = "Stimulation"
    HE = "Hedonism"
    AC = "Achievement"
    POD = "Power-Dominance"
    POR = "Power-Resources"
    FAC = "Face"
    SEP = "Security-Personal"
    SES = "Security-Societal"
    TR = "Tradition"
    COR = "Conformity-Rules"
    COI = "Conformity-Interpersonal"
    HUM = "Humility"
    BED = "Benevolence-Dependability"
    BEC = "Benevolence-Caring"
    UNC = "Universalism-Concern"
    UNN = "Universalism-Nature"
    UNT = "Universalism-Tolerance"

    @property
    def code(self) -> str:
        return self.name

    @property
    def display_name(self) -> str:
        return self.value

    @property
    def position(self) -> int:
        return CIRCLE.position(self)

    @property
    def angle(self) -> float:
        return CIRCLE.angle(self)

    @classmethod
    def parse(cls, code: "str | ValueId") -> "ValueId":
        if isinstance(code, ValueId):
            return code
        try:
            return cls[code.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown value code {code!r}") from None


@dataclass(frozen=True)
class ValueCircle:
    ordering: tuple[ValueId, ...]

    def __post_init__(self):
        if sorted(v.name for v in self.ordering) != sorted(v.name for v in ValueId):
            raise ValueError("ordering must be a permutation of the 19 values")

    def __len__(self) -> int:
        return len(self.ordering)

    def __iter__(self):
        return iter(self.ordering)

    def position(self, value: ValueId) -> int:
        return self.ordering.index(value)

    def angle(self, value: ValueId) -> float:
        return 2.0 * math.pi * self.position(value) / len(self.ordering)

    def at(self, position: int) -> ValueId:
        return self.ordering[position % len(self.ordering)]

    def neighbors(self, value: ValueId) -> tuple[ValueId, ValueId]:
        p = self.position(value)
        return self.at(p - 1), self.at(p + 1)

    def offset(self, anchor: ValueId, value: ValueId) -> int:
        """Signed circular offset of ``value`` from ``anchor``, folded into 0..18."""
        return (self.position(value) - self.position(anchor)) % len(self.ordering)


CIRCLE = ValueCircle(tuple(ValueId))
CODES = tuple(v.name for v in CIRCLE)


def circle_distance(a: ValueId, b: ValueId) -> int:
    """Number of steps between two values along the shorter arc (0..9)."""
    d = abs(CIRCLE.position(a) - CIRCLE.position(b))
    return min(d, N_VALUES - d)


# -- questionnaire ----------------------------------------------------------


@dataclass(frozen=True)
class QuestionnaireItem:
    index: int
    value: ValueId
    variant: int
    text_male: str
    text_female: str

    def text(self, gender_version: str) -> str:
        if gender_version == "male":
            return self.text_male
        if gender_version == "female":
            return self.text_female
        raise ValueError(f"gender_version must be 'male' or 'female', got {gender_version!r}")


@dataclass(frozen=True)
class Questionnaire:
    items: tuple[QuestionnaireItem, ...]
    scale_min: int = SCALE_MIN
    scale_max: int = SCALE_MAX
    instructions: str = ""

    def __len__(self) -> int:
        return len(self.items)

    def item(self, index: int) -> QuestionnaireItem:
        return self.items[index - 1]

    def items_for(self, value: ValueId) -> list[QuestionnaireItem]:
        return sorted((it for it in self.items if it.value is value), key=lambda it: it.variant)

    def value_index_matrix(self) -> list[list[int]]:
        """Zero-based item positions, shape 19 x 3, rows in circle order."""
        return [[it.index - 1 for it in self.items_for(v)] for v in CIRCLE]


def _validate(items: list[QuestionnaireItem], scale_min: int, scale_max: int) -> None:
    if (scale_min, scale_max) != (SCALE_MIN, SCALE_MAX):
        raise SchemaViolation(f"scale must be {SCALE_MIN}..{SCALE_MAX}, got {scale_min}..{scale_max}")
    if len(items) != N_ITEMS:
        raise SchemaViolation(f"item count {len(items)} ≠ {N_ITEMS}")
    dup = sorted(i for i, c in Counter(it.index for it in items).items() if c > 1)
    if dup:
        raise SchemaViolation(f"duplicate item index: {', '.join(map(str, dup))}")
    if {it.index for it in items} != set(range(1, N_ITEMS + 1)):
        raise SchemaViolation(f"item indices must cover 1..{N_ITEMS}")
    per_value = Counter(it.value for it in items)
    bad = [v for v in CIRCLE if per_value.get(v, 0) != N_VARIANTS]
    if bad:
        detail = ", ".join(f"{v.name} has {per_value.get(v, 0)} items" for v in bad)
        raise SchemaViolation(f"each value needs exactly {N_VARIANTS} items: {detail}")
    for v in CIRCLE:
        variants = sorted(it.variant for it in items if it.value is v)
        if variants != list(range(1, N_VARIANTS + 1)):
            raise SchemaViolation(f"{v.name} variants must be 1..{N_VARIANTS}, got {variants}")


def parse_questionnaire(doc: dict) -> Questionnaire:
    if not isinstance(doc, dict) or not isinstance(doc.get("items"), list):
        raise SchemaViolation("expected an object with an 'items' list")
    scale = doc.get("scale", {})
    items = []
    for n, raw in enumerate(doc["items"], start=1):
        try:
            value = ValueId.parse(raw["value"])
            index, variant = int(raw["index"]), int(raw["variant"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(f"item #{n}: {exc}") from None
        male, female = raw.get("text_male"), raw.get("text_female")
        if not male or not female:
            raise SchemaViolation(f"item {index}: missing gender variant text")
        items.append(QuestionnaireItem(index, value, variant, male, female))
    _validate(items, int(scale.get("min", SCALE_MIN)), int(scale.get("max", SCALE_MAX)))
    items.sort(key=lambda it: it.index)
    return Questionnaire(tuple(items), instructions=doc.get("instructions", ""))


def load_questionnaire(path: str | Path | None = None) -> Questionnaire:
    """Load a questionnaire JSON file; ``None`` loads the bundled synthetic one."""
    try:
        if path is None:
            text = resources.files("valueprobe.data").joinpath("questionnaire.json").read_text("utf-8")
        else:
            text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise FileUnreadable(str(exc)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid JSON: {exc}") from None
    return parse_questionnaire(doc)


# -- human benchmark --------------------------------------------------------

# Mean centered importance across 49 cultural groups, with published rank.
_HUMAN = {
    ValueId.BEC: (0.79, 1),
    ValueId.BED: (0.72, 2),
    ValueId.SDA: (0.60, 3),
    ValueId.SDT: (0.58, 4),
    ValueId.UNC: (0.50, 5),
    ValueId.UNT: (0.37, 6),
    ValueId.SES: (0.32, 7),
    ValueId.SEP: (0.28, 8),
    ValueId.HE: (0.23, 9),
    ValueId.AC: (0.08, 10),
    ValueId.FAC: (0.05, 11),
    ValueId.UNN: (-0.10, 12),
    ValueId.ST: (-0.11, 13),
    ValueId.COI: (-0.16, 14),
    ValueId.HUM: (-0.20, 15),
    ValueId.COR: (-0.26, 16),
    ValueId.TR: (-0.72, 17),
    ValueId.POR: (-1.33, 18),
    ValueId.POD: (-1.40, 19),
}


@dataclass(frozen=True)
class HumanBenchmark:
    means: dict[ValueId, float]
    ranks: dict[ValueId, int]

    def mean_vector(self) -> list[float]:
        """Means in circle order."""
        return [self.means[v] for v in CIRCLE]

    def rank_vector(self) -> list[int]:
        return [self.ranks[v] for v in CIRCLE]

    def by_rank(self) -> list[ValueId]:
        return sorted(self.ranks, key=self.ranks.__getitem__)


def human_benchmark_profile() -> HumanBenchmark:
    return HumanBenchmark(
        means={v: m for v, (m, _) in _HUMAN.items()},
        ranks={v: r for v, (_, r) in _HUMAN.items()},
    )
