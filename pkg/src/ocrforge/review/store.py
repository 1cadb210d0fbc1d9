"""Append-only event log backing the human review workflow.

Every state change is one JSON line in ``events.jsonl``, fsynced before
the operation is acknowledged; replaying the log from empty reconstructs
the exact task states, so a crash at any point loses at most an
unacknowledged operation. A torn trailing line (crash mid-write) is
detected and ignored on replay.

Task lifecycle:

    pending -> in_review -> {corrected, approved, rejected}
    corrected -> approved        (a correction is auto-approved)
    any non-final -> pending     (release)
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..dataset import Manifest, SampleRecord
from ..errors import (EmptyBenchError, EmptyCorrection, IllegalTransition,
                      IncompleteProject, NotClaimedByYou, UnknownSampleId)

STATUSES = ("pending", "in_review", "corrected", "approved", "rejected")


@dataclass(frozen=True)
class AnnotationTask:
    task_id: str
    sample_id: str
    image_path: str
    pseudo_label: str
    provenance: str
    status: str = "pending"
    correction: str | None = None
    reviewer: str | None = None
    reject_reason: str | None = None
    updated_at: float = 0.0

    @property
    def final_text(self) -> str:
        return self.correction if self.correction is not None else self.pseudo_label

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "sample_id": self.sample_id,
            "image_path": self.image_path,
            "pseudo_label": self.pseudo_label,
            "provenance": self.provenance,
            "status": self.status,
            "correction": self.correction,
            "reviewer": self.reviewer,
            "reject_reason": self.reject_reason,
            "updated_at": self.updated_at,
        }


@dataclass
class ReviewStore:
    project_dir: Path
    tasks: dict[str, AnnotationTask] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)  # creation order
    seq: int = 0
    clock: callable = time.time

    # ------------------------------------------------------------- setup

    @classmethod
    def create_project(cls, project_dir: str | Path, labels,
                       manifest: Manifest) -> "ReviewStore":
        """One pending task per pseudo-label; every label must reference a
        manifest sample."""
        project_dir = Path(project_dir)
        project_dir.mkdir(parents=True, exist_ok=True)
        index = {r.sample_id: r for r in manifest.records}
        store = cls(project_dir=project_dir)
        for i, label in enumerate(labels):
            rec = index.get(label.sample_id)
            if rec is None:
                raise UnknownSampleId(label.sample_id)
            store._append({
                "transition": "create",
                "task_id": f"t{i:06d}",
                "payload": {
                    "sample_id": rec.sample_id,
                    "image_path": rec.image_path,
                    "pseudo_label": label.text,
                    "provenance": rec.provenance,
                },
            })
        return store

    @classmethod
    def load(cls, project_dir: str | Path) -> "ReviewStore":
        store = cls(project_dir=Path(project_dir))
        log = store._log_path()
        if log.exists():
            with open(log, encoding="utf-8") as f:
                for line in f:
                    try:
                        entry = json.loads(line)
                    except json.JSONDecodeError:
                        break  # torn trailing line from a crash mid-write
                    store._apply(entry)
                    store.seq = entry["seq"]
        return store

    def _log_path(self) -> Path:
        return self.project_dir / "events.jsonl"

    # ---------------------------------------------------------- log core

    def _append(self, entry: dict) -> None:
        """Persist the event, then apply it. Ack only after fsync."""
        entry = {"seq": self.seq + 1, "ts": self.clock(), **entry}
        with open(self._log_path(), "a", encoding="utf-8") as f:
            f.write(json.dumps(entry, ensure_ascii=False) + "\n")
            f.flush()
            os.fsync(f.fileno())
        self._apply(entry)
        self.seq = entry["seq"]

    def _apply(self, entry: dict) -> None:
        transition = entry["transition"]
        task_id = entry["task_id"]
        payload = entry.get("payload", {})
        ts = entry.get("ts", 0.0)
        if transition == "create":
            self.tasks[task_id] = AnnotationTask(
                task_id=task_id, updated_at=ts, **payload)
            self.order.append(task_id)
            return
        task = self.tasks[task_id]
        if transition == "claim":
            task = replace(task, status="in_review",
                           reviewer=payload["reviewer"], updated_at=ts)
        elif transition == "release":
            task = replace(task, status="pending", reviewer=None, updated_at=ts)
        elif transition == "approve":
            task = replace(task, status="approved", updated_at=ts)
        elif transition == "correct":
            task = replace(task, status="corrected",
                           correction=payload["text"], updated_at=ts)
        elif transition == "reject":
            task = replace(task, status="rejected",
                           reject_reason=payload.get("reason"), updated_at=ts)
        else:
            raise ValueError(f"unknown transition {transition!r}")
        self.tasks[task_id] = task

    # --------------------------------------------------------------- ops

    def claim_next(self, reviewer: str) -> AnnotationTask | None:
        """Oldest pending task moves to in_review for this reviewer."""
        for task_id in self.order:
            if self.tasks[task_id].status == "pending":
                self._append({"transition": "claim", "task_id": task_id,
                              "payload": {"reviewer": reviewer}})
                return self.tasks[task_id]
        return None

    def release(self, task_id: str) -> AnnotationTask:
        task = self._get(task_id)
        if task.status in ("approved", "rejected"):
            raise IllegalTransition(f"{task_id} is final ({task.status})")
        self._append({"transition": "release", "task_id": task_id})
        return self.tasks[task_id]

    def submit(self, task_id: str, action: str, reviewer: str,
               text: str | None = None, reason: str | None = None
               ) -> AnnotationTask:
        task = self._get(task_id)
        if action == "approve" and task.status == "corrected":
            # Second step of the two-step corrected -> approved path.
            self._append({"transition": "approve", "task_id": task_id})
            return self.tasks[task_id]
        if task.status != "in_review":
            raise IllegalTransition(
                f"{task_id} is {task.status}, not in_review")
        if task.reviewer != reviewer:
            raise NotClaimedByYou(
                f"{task_id} is claimed by {task.reviewer!r}")
        if action == "approve":
            self._append({"transition": "approve", "task_id": task_id})
        elif action == "correct":
            if not text:
                raise EmptyCorrection("use reject for unusable samples")
            self._append({"transition": "correct", "task_id": task_id,
                          "payload": {"text": text}})
            self._append({"transition": "approve", "task_id": task_id})
        elif action == "reject":
            self._append({"transition": "reject", "task_id": task_id,
                          "payload": {"reason": reason}})
        else:
            raise ValueError(f"unknown action {action!r}")
        return self.tasks[task_id]

    def _get(self, task_id: str) -> AnnotationTask:
        if task_id not in self.tasks:
            raise KeyError(task_id)
        return self.tasks[task_id]

    # ------------------------------------------------------------ export

    def progress(self) -> dict:
        counts = {s: 0 for s in STATUSES}
        for t in self.tasks.values():
            counts[t.status] += 1
        counts["total"] = len(self.tasks)
        return counts

    def export_benchmark(self, partial: bool = False) -> Manifest:
        """Manifest of approved tasks, final texts as ground truth."""
        open_count = sum(1 for t in self.tasks.values()
                         if t.status in ("pending", "in_review", "corrected"))
        if open_count and not partial:
            raise IncompleteProject(f"{open_count} tasks still open")
        records = []
        for task_id in self.order:
            t = self.tasks[task_id]
            if t.status != "approved":
                continue
            records.append(SampleRecord(
                sample_id=t.sample_id,
                image_path=t.image_path,
                ground_truth=t.final_text,
                provenance=t.provenance,
                render_meta={"review_task": t.task_id,
                             "corrected": t.correction is not None},
            ))
        if not records:
            raise EmptyBenchError("no approved tasks to export")
        manifest = Manifest.from_records(
            records,
            split_assignments={r.sample_id: "bench" for r in records},
        )
        return manifest
