"""Client for an external vision-language endpoint used to pseudo-label
unlabeled images.

The wire contract is a small vendor-neutral JSON shape:

    request:  {"model": str, "prompt": str, "image_b64": str}
    response: {"text": str}            (or {"error": ..., "retryable": bool})

Concrete vendors are bridged by Provider adapters; tests and offline runs
use in-process mocks. Responses are cached by (image digest, prompt
digest, model) under ``cache/{model}/{digest}.json`` so reruns cost no
network calls. The credential is read from an environment variable and
never written to logs, caches, or reports.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

from .dataset import Manifest
from .errors import AuthError, ExtractionError, RateLimited

DEFAULT_PROMPT = (
    "Transcribe all visible Arabic/Darija text exactly as written. "
    "Preserve line breaks. Output the text only, with no commentary."
)


@dataclass(frozen=True)
class LabelerConfig:
    endpoint: str = ""
    credential_env: str = "OCRFORGE_LABELER_KEY"
    model_id: str = "mock"
    prompt_template: str = DEFAULT_PROMPT
    max_retries: int = 3
    backoff_initial_ms: int = 250
    backoff_multiplier: float = 2.0
    rate_limit_per_minute: int = 60
    concurrency: int = 4
    cache_dir: str = "cache"

    def __post_init__(self):
        if self.rate_limit_per_minute <= 0:
            raise ValueError("rate_limit_per_minute must be > 0")
        if not self.prompt_template:
            raise ValueError("prompt_template must be non-empty")

    def credential(self) -> str | None:
        return os.environ.get(self.credential_env)


@dataclass(frozen=True)
class PseudoLabel:
    sample_id: str
    text: str
    model_id: str
    latency_ms: float
    attempt_count: int
    raw_response_digest: str
    failed: bool = False
    failure_reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "text": self.text,
            "model_id": self.model_id,
            "latency_ms": self.latency_ms,
            "attempt_count": self.attempt_count,
            "raw_response_digest": self.raw_response_digest,
            "failed": self.failed,
            "failure_reason": self.failure_reason,
        }


class Provider(Protocol):
    def complete(self, request: dict) -> dict: ...


class HttpProvider:
    """POSTs the internal request shape to a conforming JSON endpoint."""

    def __init__(self, endpoint: str, credential: str | None,
                 timeout_s: float = 60.0):
        self.endpoint = endpoint
        self._credential = credential
        self.timeout_s = timeout_s

    def complete(self, request: dict) -> dict:
        import httpx
        headers = {}
        if self._credential:
            headers["Authorization"] = f"Bearer {self._credential}"
        resp = httpx.post(self.endpoint, json=request, headers=headers,
                          timeout=self.timeout_s)
        if resp.status_code in (401, 403):
            raise AuthError(f"endpoint returned {resp.status_code}")
        if resp.status_code == 429:
            raise RateLimited("endpoint returned 429")
        resp.raise_for_status()
        return resp.json()


class SlidingWindowRateLimiter:
    """At most `per_minute` acquisitions inside any 60 s window."""

    def __init__(self, per_minute: int, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.per_minute = per_minute
        self.clock = clock
        self.sleep = sleep
        self._stamps: list[float] = []
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self.clock()
                self._stamps = [t for t in self._stamps if now - t < 60.0]
                if len(self._stamps) < self.per_minute:
                    self._stamps.append(now)
                    return
                wait = 60.0 - (now - self._stamps[0])
            self.sleep(max(wait, 0.001))


def extract_transcription(response: dict) -> str:
    """Pull the transcription out of a response; fenced code blocks are
    unwrapped. Raises ExtractionError when no text field is present."""
    text = response.get("text")
    if text is None or not isinstance(text, str):
        raise ExtractionError("response lacked a 'text' field")
    stripped = text.strip()
    if stripped.startswith("```") and stripped.endswith("```"):
        inner = stripped[3:-3]
        # Drop a language tag on the opening fence.
        if "\n" in inner:
            first, rest = inner.split("\n", 1)
            if first.strip() and " " not in first.strip():
                inner = rest
        text = inner.strip("\n")
    return text


@dataclass
class Labeler:
    cfg: LabelerConfig
    provider: Provider | None = None
    clock: Callable[[], float] = time.monotonic
    sleep: Callable[[float], None] = time.sleep
    _limiter: SlidingWindowRateLimiter = field(init=False)

    def __post_init__(self):
        if self.provider is None:
            self.provider = HttpProvider(self.cfg.endpoint,
                                         self.cfg.credential())
        self._limiter = SlidingWindowRateLimiter(
            self.cfg.rate_limit_per_minute, self.clock, self.sleep)

    # -------------------------------------------------------------- cache

    def _cache_path(self, image: bytes) -> Path:
        key = hashlib.sha256()
        key.update(hashlib.sha256(image).digest())
        key.update(hashlib.sha256(self.cfg.prompt_template.encode()).digest())
        key.update(self.cfg.model_id.encode())
        return (Path(self.cfg.cache_dir) / self.cfg.model_id
                / (key.hexdigest() + ".json"))

    # -------------------------------------------------------------- label

    def label_image(self, sample_id: str, image: bytes) -> PseudoLabel:
        cache_path = self._cache_path(image)
        if cache_path.exists():
            cached = json.loads(cache_path.read_text(encoding="utf-8"))
            return PseudoLabel(sample_id=sample_id, text=cached["text"],
                               model_id=self.cfg.model_id, latency_ms=0.0,
                               attempt_count=0,
                               raw_response_digest=cached["raw_response_digest"])

        request = {
            "model": self.cfg.model_id,
            "prompt": self.cfg.prompt_template,
            "image_b64": base64.b64encode(image).decode("ascii"),
        }
        start = self.clock()
        attempts = 0
        backoff = self.cfg.backoff_initial_ms / 1000.0
        while True:
            attempts += 1
            self._limiter.acquire()
            try:
                response = self.provider.complete(request)
                break
            except AuthError:
                raise
            except RateLimited:
                if attempts > self.cfg.max_retries:
                    raise
                self.sleep(backoff)
                backoff *= self.cfg.backoff_multiplier
            except ExtractionError:
                raise
            except Exception:
                if attempts > self.cfg.max_retries:
                    raise
                self.sleep(backoff)
                backoff *= self.cfg.backoff_multiplier

        latency_ms = (self.clock() - start) * 1000.0
        digest = hashlib.sha256(
            json.dumps(response, sort_keys=True, ensure_ascii=False)
            .encode("utf-8")).hexdigest()
        text = extract_transcription(response)  # may raise ExtractionError

        cache_path.parent.mkdir(parents=True, exist_ok=True)
        tmp = cache_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(
            {"text": text, "raw_response_digest": digest},
            ensure_ascii=False), encoding="utf-8")
        tmp.replace(cache_path)
        return PseudoLabel(sample_id=sample_id, text=text,
                           model_id=self.cfg.model_id, latency_ms=latency_ms,
                           attempt_count=attempts, raw_response_digest=digest)

    def label_batch(self, manifest: Manifest, image_root: str | Path = "."
                    ) -> tuple[list[PseudoLabel], list[dict]]:
        """Label every record lacking ground truth. Returns
        (labels, failure report). Only AuthError aborts the batch."""
        image_root = Path(image_root)
        todo = [r for r in manifest.records if not r.ground_truth]
        labels: list[PseudoLabel] = []
        failures: list[dict] = []

        def one(record):
            path = Path(record.image_path)
            if not path.is_absolute():
                path = image_root / path
            return self.label_image(record.sample_id, path.read_bytes())

        with ThreadPoolExecutor(max_workers=self.cfg.concurrency) as pool:
            futures = {pool.submit(one, r): r for r in todo}
            for fut, record in futures.items():
                try:
                    labels.append(fut.result())
                except AuthError:
                    raise
                except Exception as e:
                    failures.append({"sample_id": record.sample_id,
                                     "error": type(e).__name__,
                                     "reason": str(e)})
        labels.sort(key=lambda l: l.sample_id)
        failures.sort(key=lambda f: f["sample_id"])
        return labels, failures


def write_labels(labels: list[PseudoLabel], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for label in labels:
            f.write(json.dumps(label.to_dict(), ensure_ascii=False) + "\n")


def read_labels(path: str | Path) -> list[PseudoLabel]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                out.append(PseudoLabel(**json.loads(line)))
    return out
