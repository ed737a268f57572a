"""Questionnaire administration against live, synthetic or recorded providers."""

from __future__ import annotations

import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

import httpx
import numpy as np

from .core import CIRCLE, N_ITEMS, Questionnaire, QuestionnaireItem
from .errors import (
    ConfigError,
    ContextOverflow,
    CorruptRecord,
    EmptyCompletion,
    ModeMismatch,
    RetryExhausted,
    Timeout,
    TransportError,
)
from .prompts import (
    PERSONA_REQUEST,
    PERSONA_TEMPERATURE,
    PromptStrategy,
    SessionSpec,
    ValueAnchor,
    session_number,
)

log = logging.getLogger(__name__)

DEFAULT_CREDENTIAL_ENV = "VALUE_PROBE_API_KEY"
STANDARD_TEMPERATURES = (0.0, 0.7)
RETRYABLE_STATUS = {408, 409, 425, 429, 500, 502, 503, 504}
SYNTHETIC_PERSONA = (
    "Sam is a 34-year-old librarian who enjoys quiet evenings with a good book. "
    "They value honesty and like helping neighbours with small projects."
)
REDACTED = "[REDACTED]"


@dataclass
class ProviderConfig:
    kind: str = "synthetic"  # live | synthetic | replay
    model: str = "synthetic"
    temperature: float = 0.0
    endpoint_url: str = ""
    credential_env_var: str = DEFAULT_CREDENTIAL_ENV
    timeout: float = 120.0
    max_retries: int = 3
    backoff_base: float = 1.0
    # synthetic oracle
    amplitude: float = 1.5
    baseline: float = 3.5
    noise_sigma: float = 0.5
    seed: int = 0
    # replay
    replay_path: str = ""

    def __post_init__(self):
        if self.kind not in ("live", "synthetic", "replay"):
            raise ConfigError(f"provider kind must be live, synthetic or replay, got {self.kind!r}")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.temperature not in STANDARD_TEMPERATURES:
            log.warning("temperature %s is outside the standard settings %s",
                        self.temperature, STANDARD_TEMPERATURES)

    @classmethod
    def from_dict(cls, d: dict) -> "ProviderConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown provider fields: {', '.join(sorted(extra))}")
        return cls(**d)


# -- transcripts ------------------------------------------------------------


@dataclass
class Exchange:
    prompt: str
    completion: str


@dataclass
class SessionTranscript:
    session_id: str
    strategy: dict
    gender_version: str
    mode: str
    raw_exchanges: list[Exchange]
    timestamps: list[str] = field(default_factory=list)
    parsed_scores: list[int] | None = None
    model: str = ""
    temperature: float = 0.0

    def __post_init__(self):
        self.raw_exchanges = [e if isinstance(e, Exchange) else Exchange(**e) for e in self.raw_exchanges]
        expected = {"batch": 1, "serial": N_ITEMS}.get(self.mode)
        if expected is None:
            raise ValueError(f"mode must be batch or serial, got {self.mode!r}")
        if len(self.raw_exchanges) != expected:
            raise ModeMismatch(f"{self.mode} transcript needs {expected} exchanges, "
                               f"has {len(self.raw_exchanges)}")

    @property
    def completions(self) -> list[str]:
        return [e.completion for e in self.raw_exchanges]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SessionTranscript":
        return cls(**d)


def _dump(t: SessionTranscript) -> str:
    return json.dumps(t.to_dict(), ensure_ascii=False, sort_keys=True)


def record_transcript(path: str | Path, transcript: SessionTranscript) -> None:
    """Append one transcript to a JSON-lines store."""
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(_dump(transcript) + "\n")


def write_transcripts(path: str | Path, transcripts: Iterable[SessionTranscript]) -> None:
    """Rewrite a store atomically, ordered by session id."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    ordered = sorted(transcripts, key=lambda t: session_number(t.session_id))
    with open(tmp, "w", encoding="utf-8") as fh:
        for t in ordered:
            fh.write(_dump(t) + "\n")
    os.replace(tmp, path)


def load_transcripts(path: str | Path) -> list[SessionTranscript]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(SessionTranscript.from_dict(json.loads(line)))
            except (json.JSONDecodeError, TypeError, KeyError, ValueError) as exc:
                raise CorruptRecord(n, str(exc)) from None
    return out


def scrub(text: str, secrets: Sequence[str]) -> str:
    for s in secrets:
        if s:
            text = text.replace(s, REDACTED)
    return text


# -- synthetic oracle -------------------------------------------------------


@dataclass(frozen=True)
class SyntheticPersonaParams:
    theta: float
    amplitude: float = 1.5
    baseline: float = 3.5
    noise_sigma: float = 0.0
    seed: int = 0


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def synthetic_respond(item: QuestionnaireItem, params: SyntheticPersonaParams) -> int:
    """Score an item from a cosine circumplex persona with optional noise."""
    mu = params.baseline + params.amplitude * math.cos(CIRCLE.angle(item.value) - params.theta)
    if params.noise_sigma > 0:
        # one stream per (persona, item) so answers do not depend on asking order
        rng = np.random.default_rng([params.seed, item.index])
        mu += params.noise_sigma * rng.standard_normal()
    return min(6, max(1, round_half_away(mu)))


# -- providers --------------------------------------------------------------


@dataclass(frozen=True)
class ExchangeContext:
    session_id: str
    strategy: PromptStrategy | None
    items: tuple[QuestionnaireItem, ...]
    mode: str
    exchange_index: int = 0


class Provider:
    kind = "abstract"
    model = ""

    def complete(self, messages: list[dict], *, temperature: float, context: ExchangeContext) -> str:
        raise NotImplementedError

    def recorded(self, session_id: str) -> SessionTranscript | None:
        return None

    def timestamp(self, context: ExchangeContext) -> str:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")

    def secrets(self) -> tuple[str, ...]:
        return ()


class SyntheticProvider(Provider):
    """Deterministic circumplex respondent, independent of scheduling."""

    kind = "synthetic"

    def __init__(self, amplitude=1.5, baseline=3.5, noise_sigma=0.5, seed=0, model="synthetic"):
        self.amplitude = amplitude
        self.baseline = baseline
        self.noise_sigma = noise_sigma
        self.seed = seed
        self.model = model

    def persona_params(self, session_id: str, strategy: PromptStrategy | None) -> SyntheticPersonaParams:
        ss = np.random.SeedSequence([self.seed, session_number(session_id)])
        persona_seed = int(ss.generate_state(1)[0])
        if isinstance(strategy, ValueAnchor) and strategy.anchor.value is not None:
            theta = CIRCLE.angle(strategy.anchor.value)
        else:
            theta = 2 * math.pi * np.random.default_rng(ss).random()
        return SyntheticPersonaParams(theta, self.amplitude, self.baseline, self.noise_sigma, persona_seed)

    def complete(self, messages, *, temperature, context):
        if not context.items:
            return SYNTHETIC_PERSONA
        params = self.persona_params(context.session_id, context.strategy)
        scores = [synthetic_respond(it, params) for it in context.items]
        if context.mode == "serial":
            return str(scores[0])
        return "\n".join(f"{n}. {s}" for n, s in enumerate(scores, start=1))

    def timestamp(self, context):
        return "synthetic"


class ReplayProvider(Provider):
    """Serves previously recorded transcripts and persona texts."""

    kind = "replay"

    def __init__(self, transcripts: Iterable[SessionTranscript] = (), personas: Sequence[str] = (), model=""):
        self._by_id = {t.session_id: t for t in transcripts}
        self._personas = list(personas)
        self._next_persona = 0
        self.model = model

    @classmethod
    def from_store(cls, path: str | Path, personas: Sequence[str] = ()) -> "ReplayProvider":
        return cls(load_transcripts(path), personas)

    def recorded(self, session_id):
        t = self._by_id.get(session_id)
        if t is None:
            raise ConfigError(f"no recording for session {session_id}")
        return t

    def complete(self, messages, *, temperature, context):
        if context.items:
            t = self.recorded(context.session_id)
            return t.raw_exchanges[context.exchange_index].completion
        if self._next_persona >= len(self._personas):
            raise ConfigError("replay provider has no more recorded personas")
        text = self._personas[self._next_persona]
        self._next_persona += 1
        return text


class LiveProvider(Provider):
    """Chat-completion style HTTP+JSON endpoint with retry and backoff."""

    kind = "live"

    def __init__(self, config: ProviderConfig, *, client: httpx.Client | None = None,
                 sleep: Callable[[float], None] = time.sleep):
        key = os.environ.get(config.credential_env_var)
        if not key:
            raise ConfigError(f"credential environment variable {config.credential_env_var} is not set")
        if not config.endpoint_url:
            raise ConfigError("live provider needs endpoint_url")
        self.config = config
        self.model = config.model
        self._key = key
        self._client = client or httpx.Client(timeout=config.timeout)
        self._sleep = sleep

    def secrets(self):
        return (self._key,)

    def _post(self, payload: dict) -> dict:
        headers = {"Authorization": f"Bearer {self._key}", "Content-Type": "application/json"}
        resp = self._client.post(self.config.endpoint_url, json=payload, headers=headers,
                                 timeout=self.config.timeout)
        if resp.status_code == 200:
            return resp.json()
        body = scrub(resp.text[:500], self.secrets())
        if resp.status_code in (400, 413) and "context" in body.lower():
            raise ContextOverflow(body)
        raise TransportError(body, status=resp.status_code)

    def complete(self, messages, *, temperature, context):
        payload = {"model": self.config.model, "messages": messages, "temperature": temperature}
        attempts = max(1, self.config.max_retries)
        last: Exception | None = None
        for attempt in range(attempts):
            try:
                data = self._post(payload)
                return scrub(_completion_text(data), self.secrets())
            except httpx.TimeoutException as exc:
                last = Timeout(str(exc))
            except httpx.TransportError as exc:
                last = TransportError(scrub(str(exc), self.secrets()))
            except TransportError as exc:
                if exc.status not in RETRYABLE_STATUS:
                    raise
                last = exc
            if attempt + 1 < attempts:
                delay = self.config.backoff_base * 2 ** attempt
                log.warning("session %s attempt %d failed (%s); retrying in %.1fs",
                            context.session_id, attempt + 1, last, delay)
                self._sleep(delay)
        raise RetryExhausted(attempts, last)


def _completion_text(data: dict) -> str:
    try:
        content = data["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise TransportError(f"unexpected response shape: {str(data)[:200]}") from None
    if isinstance(content, list):
        content = "".join(part.get("text", "") for part in content if isinstance(part, dict))
    return content or ""


def make_provider(config: ProviderConfig, **kwargs) -> Provider:
    if config.kind == "synthetic":
        return SyntheticProvider(config.amplitude, config.baseline, config.noise_sigma,
                                 config.seed, config.model)
    if config.kind == "replay":
        if not config.replay_path:
            raise ConfigError("replay provider needs replay_path")
        prov = ReplayProvider.from_store(config.replay_path)
        prov.model = config.model
        return prov
    return LiveProvider(config, **kwargs)


# -- administration ---------------------------------------------------------


def batch_prompt(prompt: str, questionnaire: Questionnaire, gender_version: str) -> str:
    lines = [f"{it.index}. {it.text(gender_version)}" for it in questionnaire.items]
    return prompt + "\n\n" + "\n".join(lines)


def _check_replay(t: SessionTranscript, mode: str) -> SessionTranscript:
    if t.mode != mode:
        raise ModeMismatch(f"session {t.session_id} was recorded in {t.mode} mode, not {mode}")
    return t


def administer_batch(prompt: str, questionnaire: Questionnaire, gender_version: str,
                     provider: Provider, *, session_id: str = "s00001",
                     strategy: PromptStrategy | None = None, temperature: float = 0.0) -> SessionTranscript:
    """Present every item in a single exchange."""
    recorded = provider.recorded(session_id)
    if recorded is not None:
        return _check_replay(recorded, "batch")
    text = batch_prompt(prompt, questionnaire, gender_version)
    ctx = ExchangeContext(session_id, strategy, questionnaire.items, "batch")
    completion = provider.complete([{"role": "user", "content": text}], temperature=temperature, context=ctx)
    return SessionTranscript(
        session_id=session_id,
        strategy=strategy.to_dict() if strategy is not None else {},
        gender_version=gender_version,
        mode="batch",
        raw_exchanges=[Exchange(text, completion)],
        timestamps=[provider.timestamp(ctx)],
        model=provider.model,
        temperature=temperature,
    )


def administer_serial(prompt: str, questionnaire: Questionnaire, gender_version: str,
                      provider: Provider, *, session_id: str = "s00001",
                      strategy: PromptStrategy | None = None, temperature: float = 0.0) -> SessionTranscript:
    """Present items one per turn, resending the whole conversation each time."""
    recorded = provider.recorded(session_id)
    if recorded is not None:
        return _check_replay(recorded, "serial")
    messages: list[dict] = []
    exchanges, stamps = [], []
    for n, item in enumerate(questionnaire.items):
        turn = f"{item.index}. {item.text(gender_version)}"
        if n == 0:
            turn = prompt + "\n\n" + turn
        messages.append({"role": "user", "content": turn})
        ctx = ExchangeContext(session_id, strategy, (item,), "serial", exchange_index=n)
        completion = provider.complete(list(messages), temperature=temperature, context=ctx)
        messages.append({"role": "assistant", "content": completion})
        exchanges.append(Exchange(turn, completion))
        stamps.append(provider.timestamp(ctx))
    return SessionTranscript(
        session_id=session_id,
        strategy=strategy.to_dict() if strategy is not None else {},
        gender_version=gender_version,
        mode="serial",
        raw_exchanges=exchanges,
        timestamps=stamps,
        model=provider.model,
        temperature=temperature,
    )


def administer(spec: SessionSpec, prompt: str, questionnaire: Questionnaire, provider: Provider,
               mode: str = "batch") -> SessionTranscript:
    fn = {"batch": administer_batch, "serial": administer_serial}[mode]
    return fn(prompt, questionnaire, spec.gender_version, provider, session_id=spec.session_id,
              strategy=spec.strategy, temperature=spec.temperature)


def run_sessions(specs: Sequence[SessionSpec], work: Callable[[SessionSpec], SessionTranscript],
                 parallelism: int = 1) -> tuple[list[SessionTranscript], list[tuple[SessionSpec, Exception]]]:
    """Run ``work`` over specs with bounded parallelism.

    Returns finished transcripts in session order plus the failures, so
    callers can persist partial progress before surfacing an error.
    """
    done: dict[str, SessionTranscript] = {}
    failed: list[tuple[SessionSpec, Exception]] = []
    if parallelism <= 1:
        for spec in specs:
            try:
                done[spec.session_id] = work(spec)
            except Exception as exc:  # noqa: BLE001 - reported to caller
                failed.append((spec, exc))
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = {pool.submit(work, spec): spec for spec in specs}
            for fut in as_completed(futures):
                spec = futures[fut]
                try:
                    done[spec.session_id] = fut.result()
                except Exception as exc:  # noqa: BLE001
                    failed.append((spec, exc))
    ordered = [done[s.session_id] for s in specs if s.session_id in done]
    failed.sort(key=lambda f: f[0].number)
    return ordered, failed


def generate_personas(n: int, provider: Provider, seed: int = 0) -> list[str]:
    """Ask the provider for ``n`` short personas at the creative temperature."""
    out = []
    for k in range(n):
        ctx = ExchangeContext(f"persona-{seed}-{k}", None, (), "batch")
        text = provider.complete([{"role": "user", "content": PERSONA_REQUEST}],
                                 temperature=PERSONA_TEMPERATURE, context=ctx)
        if not text or not text.strip():
            raise EmptyCompletion(f"persona {k + 1} came back blank")
        out.append(text.strip())
    return out
