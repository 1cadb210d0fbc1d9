# -*- coding: utf-8 -*-
import base64
import json

import pytest
from PIL import Image

from ocrforge.dataset import Manifest, SampleRecord
from ocrforge.errors import AuthError, ExtractionError, RateLimited
from ocrforge.pseudolabel import (DEFAULT_PROMPT, Labeler, LabelerConfig,
                                  SlidingWindowRateLimiter,
                                  extract_transcription, read_labels,
                                  write_labels)


class MockProvider:
    """Scripted provider: pops one canned behaviour per call."""

    def __init__(self, script):
        self.script = list(script)
        self.requests = []

    def complete(self, request):
        self.requests.append(request)
        step = self.script.pop(0)
        if isinstance(step, Exception):
            raise step
        return step


def make_labeler(tmp_path, script, **cfg_kw):
    cfg = LabelerConfig(cache_dir=str(tmp_path / "cache"), **cfg_kw)
    provider = MockProvider(script)
    fake_now = [0.0]

    def clock():
        fake_now[0] += 0.001
        return fake_now[0]

    sleeps = []
    labeler = Labeler(cfg, provider=provider, clock=clock,
                      sleep=sleeps.append)
    return labeler, provider, sleeps


# -------------------------------------------------------------- extraction

def test_extract_plain():
    assert extract_transcription({"text": "سلام"}) == "سلام"


def test_extract_fenced():
    assert extract_transcription({"text": "```\nسلام عليكم\n```"}) == "سلام عليكم"


def test_extract_fenced_language_tag():
    assert extract_transcription({"text": "```text\nسلام\n```"}) == "سلام"


def test_extract_missing_field():
    with pytest.raises(ExtractionError):
        extract_transcription({"error": "nope"})


# ------------------------------------------------------------ rate limiter

def test_rate_limiter_window():
    now = [0.0]
    sleeps = []

    def sleep(s):
        sleeps.append(s)
        now[0] += s

    rl = SlidingWindowRateLimiter(3, clock=lambda: now[0], sleep=sleep)
    for _ in range(3):
        rl.acquire()
    assert sleeps == []
    rl.acquire()  # fourth call must wait for the window to roll
    assert sleeps and sleeps[0] == pytest.approx(60.0)


def test_rate_limiter_rolls_forward():
    now = [0.0]
    rl = SlidingWindowRateLimiter(2, clock=lambda: now[0],
                                  sleep=lambda s: None)
    rl.acquire()
    rl.acquire()
    now[0] = 61.0  # old stamps expired; no blocking
    rl.acquire()


# ------------------------------------------------------------- label_image

def test_label_request_shape(tmp_path):
    labeler, provider, _ = make_labeler(tmp_path, [{"text": "نص"}])
    label = labeler.label_image("s1", b"PNGBYTES")
    req = provider.requests[0]
    assert req == {"model": "mock", "prompt": DEFAULT_PROMPT,
                   "image_b64": base64.b64encode(b"PNGBYTES").decode()}
    assert label.text == "نص" and label.attempt_count == 1
    assert not label.failed


def test_cache_hit_skips_network(tmp_path):
    labeler, provider, _ = make_labeler(
        tmp_path, [{"text": "أ"}, {"text": "SHOULD NOT BE CALLED"}])
    first = labeler.label_image("s1", b"img")
    second = labeler.label_image("s1", b"img")
    assert len(provider.requests) == 1
    assert second.text == first.text
    assert second.attempt_count == 0  # served from cache


def test_cache_keyed_by_image_and_model(tmp_path):
    labeler, provider, _ = make_labeler(tmp_path, [{"text": "a"}, {"text": "b"}])
    labeler.label_image("s1", b"one")
    labeler.label_image("s2", b"two")
    assert len(provider.requests) == 2


def test_retry_then_success(tmp_path):
    labeler, provider, sleeps = make_labeler(
        tmp_path, [RateLimited("429"), RateLimited("429"), {"text": "ok"}])
    label = labeler.label_image("s1", b"img")
    assert label.attempt_count == 3
    # exponential backoff: second wait doubles the first
    assert sleeps[1] == pytest.approx(sleeps[0] * 2.0)


def test_retries_exhausted(tmp_path):
    script = [RateLimited("429")] * 5
    labeler, _, _ = make_labeler(tmp_path, script, max_retries=2)
    with pytest.raises(RateLimited):
        labeler.label_image("s1", b"img")


def test_auth_error_not_retried(tmp_path):
    labeler, provider, _ = make_labeler(
        tmp_path, [AuthError("401"), {"text": "never"}])
    with pytest.raises(AuthError):
        labeler.label_image("s1", b"img")
    assert len(provider.requests) == 1


def test_credential_never_in_cache_or_labels(tmp_path, monkeypatch):
    monkeypatch.setenv("OCRFORGE_LABELER_KEY", "sk-supersecret")
    labeler, _, _ = make_labeler(tmp_path, [{"text": "نص"}])
    label = labeler.label_image("s1", b"img")
    out = tmp_path / "labels.jsonl"
    write_labels([label], out)
    blob = out.read_text() + "".join(
        p.read_text() for p in (tmp_path / "cache").rglob("*.json"))
    assert "sk-supersecret" not in blob


# ------------------------------------------------------------- label_batch

@pytest.fixture()
def unlabeled(tmp_path):
    img_dir = tmp_path / "images"
    img_dir.mkdir()
    records = []
    for i in range(4):
        p = img_dir / f"u{i}.png"
        Image.new("RGB", (10 + i, 10), (255, 255, 255)).save(p)
        records.append(SampleRecord(sample_id=f"u{i}", image_path=str(p),
                                    ground_truth="", provenance="external"))
    return Manifest.from_records(records)


def test_label_batch(tmp_path, unlabeled):
    labeler, provider, _ = make_labeler(tmp_path, [{"text": "نص"}] * 4)
    labels, failures = labeler.label_batch(unlabeled)
    assert [l.sample_id for l in labels] == ["u0", "u1", "u2", "u3"]
    assert failures == []


def test_label_batch_skips_labeled(tmp_path, unlabeled):
    records = list(unlabeled.records)
    records[0] = SampleRecord(sample_id="u0", image_path=records[0].image_path,
                              ground_truth="موجود", provenance="external")
    m = Manifest.from_records(records)
    labeler, provider, _ = make_labeler(tmp_path, [{"text": "نص"}] * 3)
    labels, _ = labeler.label_batch(m)
    assert len(labels) == 3 and len(provider.requests) == 3


def test_label_batch_partial_failure(tmp_path, unlabeled):
    # concurrency=1 keeps the scripted order deterministic
    labeler, _, _ = make_labeler(
        tmp_path,
        [{"text": "a"}, {"no_text": 1}, {"text": "c"}, {"text": "d"}],
        concurrency=1, max_retries=0)
    labels, failures = labeler.label_batch(unlabeled)
    assert len(labels) == 3
    assert len(failures) == 1
    assert failures[0]["error"] == "ExtractionError"


def test_label_batch_auth_aborts(tmp_path, unlabeled):
    labeler, _, _ = make_labeler(
        tmp_path, [AuthError("401")] * 4, concurrency=1)
    with pytest.raises(AuthError):
        labeler.label_batch(unlabeled)


# ------------------------------------------------------------------- files

def test_labels_roundtrip(tmp_path):
    labeler, _, _ = make_labeler(tmp_path, [{"text": "سطر\nثاني"}])
    label = labeler.label_image("s1", b"img")
    path = tmp_path / "labels.jsonl"
    write_labels([label], path)
    back = read_labels(path)
    assert back == [label]
    assert json.loads(path.read_text())["text"] == "سطر\nثاني"


def test_config_validation():
    with pytest.raises(ValueError):
        LabelerConfig(rate_limit_per_minute=0)
    with pytest.raises(ValueError):
        LabelerConfig(prompt_template="")
