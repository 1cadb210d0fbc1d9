"""Benchmark runner: pluggable model adapters over a bench manifest,
scored with the shared CER/WER protocol.

Adapter kinds:

    echo_oracle        returns ground truth verbatim (identity model)
    noisy_oracle       corrupts each non-whitespace ground-truth character
                       independently with probability p (seeded, so runs
                       are exactly reproducible)
    subprocess         command gets the image path as its last argument
                       and prints the transcription to stdout
    http_endpoint      POST {"image": <base64>, "prompt": <str>} -> {"text": str}

Adapter failures on a sample exclude it with a reason; they are never
scored as empty output. Scored + excluded always equals the manifest
size.
"""

from __future__ import annotations

import base64
import csv
import hashlib
import json
import random
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, metrics
from .dataset import Manifest, SampleRecord
from .errors import (AdapterUnavailable, EmptyReference, EmptyRunError,
                     LayoutError, MismatchedBenchmark)
from .textnorm import NormalizationConfig


@dataclass(frozen=True)
class ModelAdapter:
    kind: str                       # echo_oracle | noisy_oracle | subprocess | http_endpoint
    command: tuple[str, ...] = ()   # subprocess
    endpoint: str = ""              # http_endpoint
    prompt: str = ""
    noise_p: float = 0.0            # noisy_oracle
    seed: int = 0
    timeout_ms: int = 60_000
    max_retries: int = 1

    @classmethod
    def from_spec(cls, spec: str) -> "ModelAdapter":
        """Parse a CLI adapter spec like "echo_oracle",
        "noisy_oracle:p=0.1,seed=7", "subprocess:cmd=./run.sh",
        "http_endpoint:url=http://host/ocr"."""
        kind, _, rest = spec.partition(":")
        kv = dict(item.split("=", 1) for item in rest.split(",") if item)
        if kind == "noisy_oracle":
            return cls(kind=kind, noise_p=float(kv.get("p", 0.1)),
                       seed=int(kv.get("seed", 0)))
        if kind == "subprocess":
            return cls(kind=kind, command=tuple(kv["cmd"].split()))
        if kind == "http_endpoint":
            return cls(kind=kind, endpoint=kv["url"], prompt=kv.get("prompt", ""))
        if kind == "echo_oracle":
            return cls(kind=kind)
        raise ValueError(f"unknown adapter kind {kind!r}")

    def model_id(self) -> str:
        if self.kind == "noisy_oracle":
            return f"noisy_oracle(p={self.noise_p},seed={self.seed})"
        if self.kind == "subprocess":
            return "subprocess:" + " ".join(self.command)
        if self.kind == "http_endpoint":
            return "http:" + self.endpoint
        return self.kind


# Alphabet for noisy_oracle substitutions: Arabic letters + Latin + digits.
_NOISE_ALPHABET = ([chr(c) for c in range(0x0621, 0x064B)]
                   + list("abcdefghijklmnopqrstuvwxyz0123456789"))


def corrupt_text(text: str, p: float, seed: int, sample_id: str) -> str:
    """Flip each non-whitespace character to a different alphabet symbol
    with probability p. Per-sample RNG so concurrency cannot reorder
    draws."""
    rng = random.Random(f"{seed}:{sample_id}")
    out = []
    for ch in text:
        if not ch.isspace() and rng.random() < p:
            repl = rng.choice(_NOISE_ALPHABET)
            while repl == ch:
                repl = rng.choice(_NOISE_ALPHABET)
            out.append(repl)
        else:
            out.append(ch)
    return "".join(out)


def _call_adapter(adapter: ModelAdapter, record: SampleRecord,
                  image_root: Path) -> str:
    if adapter.kind == "echo_oracle":
        return record.ground_truth
    if adapter.kind == "noisy_oracle":
        return corrupt_text(record.ground_truth, adapter.noise_p,
                            adapter.seed, record.sample_id)

    path = Path(record.image_path)
    if not path.is_absolute():
        path = image_root / path
    if adapter.kind == "subprocess":
        proc = subprocess.run(
            list(adapter.command) + [str(path)],
            capture_output=True, timeout=adapter.timeout_ms / 1000.0)
        if proc.returncode != 0:
            raise RuntimeError(
                f"exit {proc.returncode}: {proc.stderr.decode(errors='replace')[:200]}")
        return proc.stdout.decode("utf-8")
    if adapter.kind == "http_endpoint":
        import httpx
        body = {"image": base64.b64encode(path.read_bytes()).decode("ascii")}
        if adapter.prompt:
            body["prompt"] = adapter.prompt
        resp = httpx.post(adapter.endpoint, json=body,
                          timeout=adapter.timeout_ms / 1000.0)
        resp.raise_for_status()
        return resp.json()["text"]
    raise ValueError(f"unknown adapter kind {adapter.kind!r}")


@dataclass
class BenchReport:
    benchmark_digest: str
    model_id: str
    cards: list[metrics.ScoreCard]
    aggregate: metrics.AggregateScore
    excluded: list[dict]
    normalization: dict
    wall_clock_s: float
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "benchmark_digest": self.benchmark_digest,
            "model_id": self.model_id,
            "cards": [c.to_dict() for c in self.cards],
            "aggregate": self.aggregate.to_dict(),
            "excluded": self.excluded,
            "normalization": self.normalization,
            "wall_clock_s": self.wall_clock_s,
            "tool_version": self.tool_version,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False,
                                         sort_keys=True, indent=2) + "\n",
                              encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "BenchReport":
        d = json.loads(Path(path).read_text(encoding="utf-8"))
        agg = metrics.AggregateScore(**d["aggregate"])
        cards = [metrics.ScoreCard.from_dict(c) for c in d["cards"]]
        return cls(benchmark_digest=d["benchmark_digest"],
                   model_id=d["model_id"], cards=cards, aggregate=agg,
                   excluded=d["excluded"], normalization=d["normalization"],
                   wall_clock_s=d["wall_clock_s"],
                   tool_version=d.get("tool_version", "?"))


def run_benchmark(manifest: Manifest, adapter: ModelAdapter,
                  norm: NormalizationConfig | None = None,
                  image_root: str | Path = ".",
                  concurrency: int = 4) -> BenchReport:
    """Score every bench sample; adapter failures become exclusions."""
    if norm is None:
        norm = NormalizationConfig()
    image_root = Path(image_root)
    records = manifest.records_in_split("bench") or manifest.records
    start = time.monotonic()

    def one(record: SampleRecord):
        try:
            hyp = _call_adapter(adapter, record, image_root)
        except subprocess.TimeoutExpired:
            return record, None, "timeout"
        except Exception as e:
            return record, None, f"{type(e).__name__}: {e}"
        try:
            card = metrics.score(record.sample_id, record.ground_truth,
                                 hyp, norm)
        except EmptyReference as e:
            return record, None, f"EmptyReference: {e}"
        return record, card, None

    if adapter.kind in ("echo_oracle", "noisy_oracle") or concurrency <= 1:
        results = [one(r) for r in records]
    else:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            results = list(pool.map(one, records))

    # Manifest order, so concurrency never changes the report.
    cards = [card for _, card, _ in results if card is not None]
    excluded = [{"sample_id": r.sample_id, "reason": reason}
                for r, card, reason in results if card is None]
    if not cards and excluded:
        if all(e["reason"].startswith(("ConnectError", "ConnectionError"))
               for e in excluded):
            raise AdapterUnavailable("adapter failed on every sample")
        reasons = "; ".join(e["reason"] for e in excluded[:3])
        raise EmptyRunError(
            f"all {len(excluded)} samples excluded ({reasons} ...)")

    return BenchReport(
        benchmark_digest=manifest.digest(),
        model_id=adapter.model_id(),
        cards=cards,
        aggregate=metrics.aggregate(cards),
        excluded=excluded,
        normalization=norm.to_dict(),
        wall_clock_s=time.monotonic() - start,
    )


def compare(reports: list[BenchReport]) -> dict:
    """Leaderboard sorted ascending by micro CER (lower is better)."""
    if not reports:
        raise ValueError("no reports to compare")
    digest0 = reports[0].benchmark_digest
    norm0 = reports[0].normalization
    for r in reports[1:]:
        if r.benchmark_digest != digest0:
            raise MismatchedBenchmark(
                f"{r.model_id} was run on a different benchmark version")
        if r.normalization != norm0:
            raise MismatchedBenchmark(
                f"{r.model_id} was scored under a different normalization")
    rows = sorted(({"model_id": r.model_id,
                    "micro_cer": r.aggregate.micro_cer,
                    "micro_wer": r.aggregate.micro_wer,
                    "macro_cer": r.aggregate.macro_cer,
                    "macro_wer": r.aggregate.macro_wer,
                    "n_samples": r.aggregate.n_samples,
                    "n_excluded": len(r.excluded)} for r in reports),
                  key=lambda row: row["micro_cer"])
    return {
        "benchmark_digest": digest0,
        "metric": "micro_cer",
        "rows": rows,
        "plot": {
            "kind": "bar",
            "title": "Benchmark leaderboard (lower CER is better)",
            "x": [r["model_id"] for r in rows],
            "y": [r["micro_cer"] for r in rows],
            "ylabel": "micro CER",
        },
    }


def write_leaderboard_csv(board: dict, path: str | Path) -> None:
    rows = board["rows"]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def plot_leaderboard(board: dict, path: str | Path) -> None:
    """Render the plot description to a static image file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    p = board["plot"]
    fig, ax = plt.subplots(figsize=(max(4, len(p["x"])), 4))
    ax.bar(range(len(p["x"])), p["y"], color="#4878a8")
    ax.set_xticks(range(len(p["x"])))
    ax.set_xticklabels(p["x"], rotation=30, ha="right", fontsize=8)
    ax.set_ylabel(p["ylabel"])
    ax.set_title(p["title"])
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def import_external_benchmark(directory: str | Path,
                              layout: str = "images+txt") -> Manifest:
    """Convert a third-party benchmark layout into a native bench
    manifest with provenance "external".

    images+txt:   every image has a same-stem .txt transcript
    images+jsonl: a .jsonl file of {"image": name, "text": str} rows
    """
    directory = Path(directory)
    exts = {".png", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp", ".webp"}
    images = sorted(p for p in directory.iterdir() if p.suffix.lower() in exts)
    records = []

    if layout == "images+txt":
        for img in images:
            txt = img.with_suffix(".txt")
            if not txt.exists():
                raise LayoutError(f"missing transcript for stem {img.stem!r}")
            records.append((img, txt.read_text(encoding="utf-8")))
    elif layout == "images+jsonl":
        jsonls = sorted(directory.glob("*.jsonl"))
        if not jsonls:
            raise LayoutError(f"no .jsonl file in {directory}")
        by_name: dict[str, str] = {}
        with open(jsonls[0], encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    d = json.loads(line)
                    by_name[d["image"]] = d["text"]
        for img in images:
            text = by_name.get(img.name, by_name.get(img.stem))
            if text is None:
                raise LayoutError(f"no jsonl row for image {img.name!r}")
            records.append((img, text))
    else:
        raise ValueError(f"unknown layout {layout!r}")

    samples = []
    for img, text in records:
        digest = hashlib.sha256(img.read_bytes()).hexdigest()
        sid = hashlib.sha256(f"{img.name}:{digest}".encode()).hexdigest()
        samples.append(SampleRecord(
            sample_id=sid[:16], image_path=str(img), ground_truth=text,
            provenance="external", image_sha256=digest))
    manifest = Manifest.from_records(
        samples,
        split_assignments={s.sample_id: "bench" for s in samples})
    return manifest
