"""Prompt-based similarity scoring through a chat-completion service.

The prompt template asks for a bracketed three-decimal score ([[0.777]])
between sentinel-delimited code blocks.  Scores are extracted strictly:
missing brackets or out-of-range values raise, and score_pair retries a few
times with a reminder suffix before giving up.

Two transports ship: HttpTransport for live calls (key via environment
variable, temperature pinned to 0) and ReplayTransport, which serves
recorded responses keyed by prompt hash so tests and CI never touch the
network.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import re
import threading
import time
from dataclasses import dataclass, field
from typing import Protocol

from . import parsing

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 3
RETRY_REMINDER = "Respond ONLY with the bracketed score."
API_KEY_ENV = "TREESIM_LLM_API_KEY"

_DISPLAY_NAMES = {
    "python": "Python",
    "java": "Java",
    "javascript": "JavaScript",
    "typescript": "TypeScript",
    "csharp": "C#",
    "ruby": "Ruby",
    "kotlin": "Kotlin",
    "bash": "Bash",
    "sql": "SQL",
}

_TEMPLATE = (
    "Given 2 {language} code paragraphs, please generate a similarity score "
    "from 0 to 1 (to three decimal places), by grammar parsing structure. "
    "Answer with a format like [[0.777]].\n"
    "\n"
    "=====Code 1=====\n"
    "\n"
    "{code1}\n"
    "\n"
    "=====Code 2=====\n"
    "\n"
    "{code2}\n"
    "\n"
    "=====End====="
)


class ScoreExtractionError(ValueError):
    """Response carries no [[...]] score."""


class ScoreOutOfRangeError(ValueError):
    """Bracketed score falls outside [0, 1]."""


class TransportError(RuntimeError):
    """The transport could not produce a response."""


class ExtractionExhaustedError(RuntimeError):
    """No usable score after all retry attempts."""


@dataclass(frozen=True)
class ScoringPrompt:
    language_name: str
    code1: str
    code2: str
    rendered: str


@dataclass(frozen=True)
class LlmScore:
    value: float
    raw_response: str
    attempt: int


@dataclass(frozen=True)
class StabilityReport:
    run_count: int
    mse_per_run: list[float]
    mae_per_run: list[float]


def display_name(language: str) -> str:
    return _DISPLAY_NAMES.get(language, language.capitalize())


def build_prompt(language, code1: str, code2: str) -> ScoringPrompt:
    name = str(language).strip().lower()
    if name not in parsing.supported_languages():
        known = ", ".join(parsing.supported_languages())
        raise parsing.UnknownLanguageError(f"unknown language {language!r}; supported: {known}")
    shown = display_name(name)
    rendered = _TEMPLATE.format(language=shown, code1=code1, code2=code2)
    return ScoringPrompt(language_name=shown, code1=code1, code2=code2, rendered=rendered)


_SCORE_RE = re.compile(r"\[\[\s*([+-]?(?:\d+\.\d*|\.\d+|\d+))\s*\]\]")


def extract_score(response: str) -> float:
    matches = _SCORE_RE.findall(response)
    if not matches:
        raise ScoreExtractionError(f"no [[score]] found in response: {response!r:.200}")
    if len(matches) > 1:
        log.warning("response contains %d bracketed scores; using the first", len(matches))
    value = float(matches[0])
    if value < 0.0 or value > 1.0:
        raise ScoreOutOfRangeError(f"score {value} outside [0, 1]")
    return value


def prompt_hash(rendered: str) -> str:
    return hashlib.sha256(rendered.encode("utf-8")).hexdigest()


class ChatTransport(Protocol):
    def complete(self, prompt: str) -> str: ...


@dataclass
class ReplayTransport:
    """Serves recorded responses; unknown prompts are a hard error.

    Fixture format: JSON array of {"prompt_hash": ..., "response_text": ...}.
    """

    responses: dict[str, str]

    @classmethod
    def from_file(cls, path) -> "ReplayTransport":
        with open(path, encoding="utf-8") as handle:
            entries = json.load(handle)
        return cls(responses={e["prompt_hash"]: e["response_text"] for e in entries})

    def complete(self, prompt: str) -> str:
        digest = prompt_hash(prompt)
        try:
            return self.responses[digest]
        except KeyError:
            raise TransportError(f"no recorded response for prompt hash {digest[:16]}...") from None


@dataclass
class HttpTransport:
    """Live chat-completion calls with pinned sampling parameters.

    Requests are serialized through a simple rate limiter; at most
    `max_in_flight` calls run concurrently.  The API key is read from the
    environment, never from configuration files.
    """

    base_url: str
    model: str
    api_key_env: str = API_KEY_ENV
    temperature: float = 0.0
    max_tokens: int = 64
    timeout: float = 60.0
    min_interval: float = 0.0
    max_in_flight: int = 4
    _gate: threading.Semaphore = field(init=False, repr=False)
    _lock: threading.Lock = field(init=False, repr=False)
    _last_call: float = field(default=0.0, init=False, repr=False)

    def __post_init__(self):
        self._gate = threading.Semaphore(self.max_in_flight)
        self._lock = threading.Lock()

    def settings(self) -> dict:
        """Pinned sampling parameters, for run manifests."""
        return {
            "base_url": self.base_url,
            "model": self.model,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }

    def complete(self, prompt: str) -> str:
        import os

        import requests

        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise TransportError(f"API key environment variable {self.api_key_env} is not set")
        with self._gate:
            if self.min_interval > 0:
                with self._lock:
                    wait = self._last_call + self.min_interval - time.monotonic()
                    if wait > 0:
                        time.sleep(wait)
                    self._last_call = time.monotonic()
            try:
                resp = requests.post(
                    f"{self.base_url.rstrip('/')}/chat/completions",
                    headers={"Authorization": f"Bearer {api_key}"},
                    json={
                        "model": self.model,
                        "messages": [{"role": "user", "content": prompt}],
                        "temperature": self.temperature,
                        "max_tokens": self.max_tokens,
                    },
                    timeout=self.timeout,
                )
                resp.raise_for_status()
                payload = resp.json()
                return payload["choices"][0]["message"]["content"]
            except Exception as exc:
                raise TransportError(f"chat completion failed: {exc}") from exc


def score_pair(language, code1: str, code2: str, transport: ChatTransport) -> LlmScore:
    """Render the prompt, call the transport, extract; retry with a nudge."""
    prompt = build_prompt(language, code1, code2)
    text = prompt.rendered
    last_error: Exception | None = None
    for attempt in range(1, MAX_ATTEMPTS + 1):
        try:
            response = transport.complete(text)
        except TransportError as exc:
            last_error = exc
            continue
        try:
            value = extract_score(response)
            return LlmScore(value=value, raw_response=response, attempt=attempt)
        except (ScoreExtractionError, ScoreOutOfRangeError) as exc:
            last_error = exc
            text = prompt.rendered + "\n\n" + RETRY_REMINDER
    if isinstance(last_error, TransportError):
        raise TransportError(f"transport failed on all {MAX_ATTEMPTS} attempts: {last_error}")
    raise ExtractionExhaustedError(
        f"no usable score after {MAX_ATTEMPTS} attempts: {last_error}"
    )


def stability_report(scores_by_run) -> StabilityReport:
    """Per-run drift vs the first run: MSE and MAE for runs 2..K."""
    runs = [list(run) for run in scores_by_run]
    if len(runs) < 2:
        raise ValueError(f"stability_report needs >= 2 runs, got {len(runs)}")
    width = len(runs[0])
    for index, run in enumerate(runs[1:], start=2):
        if len(run) != width:
            raise ValueError(
                f"run {index} has {len(run)} scores, expected {width} (aligned samples)"
            )
    if width == 0:
        raise ValueError("stability_report needs non-empty runs")
    baseline = runs[0]
    mse = []
    mae = []
    for run in runs[1:]:
        diffs = [a - b for a, b in zip(run, baseline)]
        mse.append(math.fsum(d * d for d in diffs) / width)
        mae.append(math.fsum(abs(d) for d in diffs) / width)
    return StabilityReport(run_count=len(runs), mse_per_run=mse, mae_per_run=mae)
