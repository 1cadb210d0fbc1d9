# -*- coding: utf-8 -*-
"""Scripted tour of the review workflow: pseudo-labels in, an approved
benchmark manifest out, with a crash-recovery detour in the middle.

Run:  python demos/demo_review.py
"""
import tempfile
from pathlib import Path

from PIL import Image

from ocrforge.dataset import Manifest, SampleRecord
from ocrforge.pseudolabel import PseudoLabel
from ocrforge.review import ReviewStore

LABELS = {
    "p0": "سلام عليكم",
    "p1": "المغرب بلاد زوينة",   # the model got this one wrong on purpose
    "p2": "نص غير مقروء",
}


def main():
    root = Path(tempfile.mkdtemp(prefix="ocrforge_review_"))
    imgs = root / "imgs"
    imgs.mkdir()
    records, labels = [], []
    for sid, text in LABELS.items():
        p = imgs / f"{sid}.png"
        Image.new("RGB", (80, 40), (255, 255, 255)).save(p)
        records.append(SampleRecord(sample_id=sid, image_path=str(p),
                                    ground_truth="",
                                    provenance="social_media"))
        labels.append(PseudoLabel(sample_id=sid, text=text, model_id="demo",
                                  latency_ms=1.0, attempt_count=1,
                                  raw_response_digest="0" * 64))

    store = ReviewStore.create_project(root / "project", labels,
                                       Manifest.from_records(records))
    print("project created:", store.progress())

    t = store.claim_next("amal")
    store.submit(t.task_id, "approve", "amal")
    print(f"{t.task_id}: approved as-is")

    t = store.claim_next("amal")
    store.submit(t.task_id, "correct", "amal", text="المغرب بلاد جميلة")
    print(f"{t.task_id}: corrected (auto-approved)")

    # Simulate a crash: the event log is the only storage, so a fresh
    # load is exactly what a restarted process would see.
    store = ReviewStore.load(root / "project")
    print("after reload:", store.progress())

    t = store.claim_next("badr")
    store.submit(t.task_id, "reject", "badr", reason="illegible scan")
    print(f"{t.task_id}: rejected")

    bench = store.export_benchmark()
    print("\nexported benchmark:", bench.stats)
    for r in bench.records:
        print(f"  {r.sample_id}: {r.ground_truth}")


if __name__ == "__main__":
    main()
