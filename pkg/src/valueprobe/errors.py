"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ValueProbeError(Exception):
    """Base class for every error raised by valueprobe."""

    kind = "error"


# -- core model -------------------------------------------------------------


class FileUnreadable(ValueProbeError):
    kind = "file_unreadable"


class SchemaViolation(ValueProbeError):
    kind = "schema_violation"


# -- prompt engine ----------------------------------------------------------


class UnfilledPlaceholder(ValueProbeError):
    kind = "unfilled_placeholder"


class EmptyList(ValueProbeError):
    kind = "empty_list"


# -- gateway ----------------------------------------------------------------


class ConfigError(ValueProbeError):
    kind = "config_error"


class ProviderError(ValueProbeError):
    kind = "provider_error"


class TransportError(ProviderError):
    kind = "transport_error"

    def __init__(self, detail: str, status: int | None = None):
        super().__init__(detail if status is None else f"HTTP {status}: {detail}")
        self.status = status
        self.detail = detail


class Timeout(TransportError):
    kind = "timeout"


class RetryExhausted(TransportError):
    kind = "retry_exhausted"

    def __init__(self, attempts: int, last_error: Exception):
        super().__init__(f"gave up after {attempts} attempts: {last_error}")
        self.attempts = attempts
        self.last_error = last_error


class ContextOverflow(ProviderError):
    kind = "context_overflow"


class EmptyCompletion(ProviderError):
    kind = "empty_completion"


class ModeMismatch(ProviderError):
    kind = "mode_mismatch"


class CorruptRecord(ValueProbeError):
    kind = "corrupt_record"

    def __init__(self, line_number: int, detail: str = ""):
        msg = f"corrupt record at line {line_number}"
        super().__init__(f"{msg}: {detail}" if detail else msg)
        self.line_number = line_number


# -- response parser --------------------------------------------------------


class ParseError(ValueProbeError):
    kind = "parse_error"


class CountMismatch(ParseError):
    kind = "count_mismatch"

    def __init__(self, found: int, expected: int = 57, detail: str = ""):
        msg = f"found {found} scores, expected {expected}"
        super().__init__(f"{msg} ({detail})" if detail else msg)
        self.found = found
        self.expected = expected


class OutOfRange(ParseError):
    kind = "out_of_range"

    def __init__(self, item: int, value: int):
        super().__init__(f"item {item}: score {value} outside 1..6")
        self.item = item
        self.value = value


class NonNumeric(ParseError):
    kind = "non_numeric"

    def __init__(self, item: int, text: str = ""):
        super().__init__(f"item {item}: no usable score in {text!r}")
        self.item = item
        self.text = text


class AmbiguousScore(ParseError):
    kind = "ambiguous_score"


class RefusalDetected(ParseError):
    kind = "refusal_detected"


class EmptyDataset(ValueProbeError):
    kind = "empty_dataset"


# -- analysis ---------------------------------------------------------------


class AnalysisError(ValueProbeError):
    kind = "analysis_error"


class DegenerateInput(AnalysisError):
    kind = "degenerate_input"


class ZeroVariance(AnalysisError):
    kind = "zero_variance"


class TooFewSessions(AnalysisError):
    kind = "too_few_sessions"


class DegenerateDissimilarity(AnalysisError):
    kind = "degenerate_dissimilarity"


class DegenerateConfiguration(AnalysisError):
    kind = "degenerate_configuration"


class NoAnchoredSessions(AnalysisError):
    kind = "no_anchored_sessions"


class AllZeroDifferences(AnalysisError):
    kind = "all_zero_differences"


class TooFewDifferences(AnalysisError):
    kind = "too_few_differences"


# -- reports ----------------------------------------------------------------


class MissingInput(ValueProbeError):
    kind = "missing_input"


class MalformedReport(ValueProbeError):
    kind = "malformed_report"
