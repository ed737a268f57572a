"""Probe the value structure of language models with a 57-item values questionnaire."""

from .core import (
    CIRCLE,
    CODES,
    HumanBenchmark,
    Questionnaire,
    QuestionnaireItem,
    ValueCircle,
    ValueId,
    circle_distance,
    human_benchmark_profile,
    load_questionnaire,
)
from .errors import ValueProbeError

__version__ = "0.1.0"

__all__ = [
    "CIRCLE",
    "CODES",
    "HumanBenchmark",
    "Questionnaire",
    "QuestionnaireItem",
    "ValueCircle",
    "ValueId",
    "ValueProbeError",
    "circle_distance",
    "human_benchmark_profile",
    "load_questionnaire",
]
