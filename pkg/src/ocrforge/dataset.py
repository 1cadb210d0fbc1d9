"""Manifest model shared by the forge, ingested real-world data, and
benchmarks.

A manifest on disk is a directory holding ``manifest.jsonl`` (one sample
record per line) and ``stats.json`` (schema version, split assignments,
and corpus statistics). Records are immutable values; every operation
returns a new manifest.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import (DuplicateSampleId, MissingTranscript, SchemaVersionError,
                     UnreadableImage)

SCHEMA_VERSION = 1

PROVENANCE_TAGS = ("synthetic", "scanned_literature", "social_media",
                   "educational", "recipe", "external")


@dataclass(frozen=True)
class SampleRecord:
    sample_id: str
    image_path: str
    ground_truth: str
    line_boxes: tuple = ()          # ((x, y, w, h), ...)
    word_boxes: tuple = ()          # (((x, y, w, h), word), ...)
    provenance: str = "synthetic"
    render_meta: dict = field(default_factory=dict)
    image_sha256: str | None = None

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "image_path": self.image_path,
            "ground_truth": self.ground_truth,
            "line_boxes": [list(b) for b in self.line_boxes],
            "word_boxes": [[list(b), w] for b, w in self.word_boxes],
            "provenance": self.provenance,
            "render_meta": self.render_meta,
            "image_sha256": self.image_sha256,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampleRecord":
        return cls(
            sample_id=d["sample_id"],
            image_path=d["image_path"],
            ground_truth=d["ground_truth"],
            line_boxes=tuple(tuple(b) for b in d.get("line_boxes", [])),
            word_boxes=tuple((tuple(b), w) for b, w in d.get("word_boxes", [])),
            provenance=d.get("provenance", "synthetic"),
            render_meta=d.get("render_meta", {}),
            image_sha256=d.get("image_sha256"),
        )

    def word_count(self) -> int:
        return len(self.ground_truth.split())


def compute_stats(records) -> dict:
    hist: dict[str, int] = {}
    for r in records:
        hist[r.provenance] = hist.get(r.provenance, 0) + 1
    return {
        "samples": len(records),
        "total_words": sum(r.word_count() for r in records),
        "provenance_histogram": dict(sorted(hist.items())),
    }


@dataclass(frozen=True)
class Manifest:
    records: tuple[SampleRecord, ...]
    split_assignments: dict = field(default_factory=dict)  # sample_id -> split
    stats: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    meta: dict = field(default_factory=dict)  # provenance of the run itself

    def __post_init__(self):
        ids = [r.sample_id for r in self.records]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise DuplicateSampleId(", ".join(dupes))
        if not self.stats:
            object.__setattr__(self, "stats", compute_stats(self.records))

    @classmethod
    def from_records(cls, records, **kw) -> "Manifest":
        return cls(records=tuple(records), **kw)

    def by_id(self, sample_id: str) -> SampleRecord:
        return self._index()[sample_id]

    def _index(self) -> dict[str, SampleRecord]:
        return {r.sample_id: r for r in self.records}

    def records_in_split(self, split: str) -> tuple[SampleRecord, ...]:
        return tuple(r for r in self.records
                     if self.split_assignments.get(r.sample_id) == split)

    # ------------------------------------------------------------------ io

    def save(self, out_dir: str | Path) -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "manifest.jsonl", "w", encoding="utf-8") as f:
            for r in self.records:
                d = r.to_dict()
                if r.sample_id in self.split_assignments:
                    d["split"] = self.split_assignments[r.sample_id]
                f.write(json.dumps(d, ensure_ascii=False, sort_keys=True) + "\n")
        side = {
            "schema_version": self.schema_version,
            "stats": self.stats,
            "meta": self.meta,
        }
        with open(out_dir / "stats.json", "w", encoding="utf-8") as f:
            json.dump(side, f, ensure_ascii=False, sort_keys=True, indent=2)
            f.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "Manifest":
        """Load from a manifest directory or a manifest.jsonl path."""
        path = Path(path)
        if path.is_dir():
            jsonl = path / "manifest.jsonl"
        else:
            jsonl = path
        records = []
        splits = {}
        with open(jsonl, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                d = json.loads(line)
                rec = SampleRecord.from_dict(d)
                records.append(rec)
                if "split" in d:
                    splits[rec.sample_id] = d["split"]
        stats = {}
        meta = {}
        version = SCHEMA_VERSION
        side_path = jsonl.parent / "stats.json"
        if side_path.exists():
            side = json.loads(side_path.read_text(encoding="utf-8"))
            version = side.get("schema_version", SCHEMA_VERSION)
            if version > SCHEMA_VERSION:
                raise SchemaVersionError(
                    f"manifest schema {version} is newer than supported "
                    f"{SCHEMA_VERSION}")
            stats = side.get("stats", {})
            meta = side.get("meta", {})
        return cls(records=tuple(records), split_assignments=splits,
                   stats=stats, schema_version=version, meta=meta)

    def digest(self) -> str:
        """Content digest pinning the exact benchmark/dataset version."""
        h = hashlib.sha256()
        for r in self.records:
            h.update(json.dumps(r.to_dict(), ensure_ascii=False,
                                sort_keys=True).encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()


# ---------------------------------------------------------------------- ops

def ingest_real(image_dir: str | Path, provenance: str,
                transcripts: str | Path | None = None
                ) -> tuple[Manifest, list[str]]:
    """Pair images with same-stem transcripts (or a transcript JSONL).

    Returns (manifest, diagnostics). Ingest is lossless: transcripts are
    stored verbatim, no normalization. Real data carries no geometry, so
    box lists are empty.
    """
    image_dir = Path(image_dir)
    diagnostics: list[str] = []
    jsonl_map: dict[str, str] = {}
    if transcripts is not None and Path(transcripts).suffix == ".jsonl":
        with open(transcripts, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    d = json.loads(line)
                    jsonl_map[d["image"]] = d["text"]

    records = []
    exts = {".png", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp", ".webp"}
    for img in sorted(image_dir.iterdir()):
        if img.suffix.lower() not in exts:
            continue
        try:
            from PIL import Image
            with Image.open(img) as im:
                im.verify()
        except Exception as e:
            diagnostics.append(f"UnreadableImage: {img.name}: {e}")
            continue
        text = None
        if jsonl_map:
            text = jsonl_map.get(img.name, jsonl_map.get(img.stem))
        else:
            txt = img.with_suffix(".txt")
            if txt.exists():
                text = txt.read_text(encoding="utf-8")
        if text is None:
            diagnostics.append(f"MissingTranscript: {img.name}")
            continue
        digest = hashlib.sha256(img.read_bytes()).hexdigest()
        sid = hashlib.sha256(f"{img.name}:{digest}".encode()).hexdigest()
        records.append(SampleRecord(
            sample_id=sid[:16],
            image_path=str(img),
            ground_truth=text,
            provenance=provenance,
            image_sha256=digest,
        ))
    return Manifest.from_records(records), diagnostics


def split(manifest: Manifest, ratios: dict[str, float], seed: int) -> Manifest:
    """Seeded shuffle + contiguous assignment.

    Counts are floor(fraction * n); the remainder goes to the largest
    split.
    """
    total = sum(ratios.values())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"split fractions sum to {total}, expected 1")
    ids = [r.sample_id for r in manifest.records]
    rng = random.Random(seed)
    rng.shuffle(ids)
    n = len(ids)
    names = list(ratios)
    counts = {name: int(ratios[name] * n) for name in names}
    largest = max(names, key=lambda k: (ratios[k], k))
    counts[largest] += n - sum(counts.values())
    assignments = {}
    pos = 0
    for name in names:
        for sid in ids[pos:pos + counts[name]]:
            assignments[sid] = name
        pos += counts[name]
    return replace(manifest, split_assignments=assignments)


def merge(a: Manifest, b: Manifest,
          target_mix: dict[str, float] | None = None,
          seed: int = 0) -> Manifest:
    """Union of two manifests, optionally downsampled toward a
    synthetic/real provenance mix.

    Mix classes: "synthetic" covers provenance == synthetic; "real"
    covers everything else. The overrepresented class is downsampled
    (seeded) to approach the mix within one sample.
    """
    records = list(a.records) + list(b.records)
    manifest = Manifest.from_records(records)  # raises DuplicateSampleId
    if not target_mix:
        return manifest

    def mix_class(r: SampleRecord) -> str:
        return "synthetic" if r.provenance == "synthetic" else "real"

    groups: dict[str, list[SampleRecord]] = {"synthetic": [], "real": []}
    for r in records:
        groups[mix_class(r)].append(r)
    fs = target_mix.get("synthetic", 0.0)
    fr = target_mix.get("real", 1.0 - fs)
    s, r_ = len(groups["synthetic"]), len(groups["real"])

    keep_s, keep_r = s, r_
    if fr > 0 and s * fr > r_ * fs:        # synthetic overrepresented
        keep_s = round(r_ * fs / fr)
    elif fs > 0 and r_ * fs > s * fr:      # real overrepresented
        keep_r = round(s * fr / fs)

    rng = random.Random(seed)

    def sample(group: list[SampleRecord], k: int) -> list[SampleRecord]:
        if k >= len(group):
            return group
        chosen = set(rng.sample(range(len(group)), k))
        return [g for i, g in enumerate(group) if i in chosen]

    kept_ids = {g.sample_id
                for g in sample(groups["synthetic"], keep_s)
                + sample(groups["real"], keep_r)}
    return Manifest.from_records([r for r in records if r.sample_id in kept_ids])


def verify(manifest: Manifest, root: str | Path = ".") -> list[str]:
    """Integrity diagnostics: file existence, content hashes, stats
    consistency, box bounds. Empty list means clean."""
    root = Path(root)
    diags: list[str] = []
    for r in manifest.records:
        img = Path(r.image_path)
        if not img.is_absolute():
            img = root / img
        if not img.exists():
            diags.append(f"{r.sample_id}: image missing: {r.image_path}")
            continue
        if r.image_sha256:
            actual = hashlib.sha256(img.read_bytes()).hexdigest()
            if actual != r.image_sha256:
                diags.append(f"{r.sample_id}: content hash mismatch")
        size = r.render_meta.get("image_size")
        if size:
            w, h = size
            for box in list(r.line_boxes) + [b for b, _ in r.word_boxes]:
                x, y, bw, bh = box
                if x < 0 or y < 0 or x + bw > w or y + bh > h:
                    diags.append(f"{r.sample_id}: box out of bounds: {box}")
    expected = compute_stats(manifest.records)
    for key, val in expected.items():
        if manifest.stats.get(key) != val:
            diags.append(f"stats mismatch: {key}: stored "
                         f"{manifest.stats.get(key)!r} != computed {val!r}")
    return diags
