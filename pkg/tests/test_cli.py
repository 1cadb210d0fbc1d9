# -*- coding: utf-8 -*-
import json

import pytest
import yaml
from PIL import Image

from ocrforge.cli import main
from ocrforge.dataset import Manifest

from conftest import DEJAVU


@pytest.fixture()
def forge_cfg(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("سلام عليكم ورحمة الله\nهذا نص تجريبي للتوليد\n",
                      encoding="utf-8")
    cfg = {
        "master_seed": 7,
        "corpus_path": str(corpus),
        "fonts": [{"path": DEJAVU}],
        "layout": {"width": 500, "height": 300, "max_lines": 4},
        "font_size_range": [18, 26],
        "output": {"count": 3},
    }
    path = tmp_path / "forge.yaml"
    path.write_text(yaml.safe_dump(cfg), encoding="utf-8")
    return path


def run(*argv):
    return main(list(argv))


# -------------------------------------------------------------- exit codes

def test_help_exits_zero(capsys):
    assert run("--help") == 0
    assert "forge" in capsys.readouterr().out


def test_subcommand_help(capsys):
    assert run("bench", "--help") == 0
    assert run("forge", "generate", "--help") == 0


def test_unknown_command_is_usage_error(capsys):
    assert run("teleport") == 2


def test_missing_required_option(capsys):
    assert run("dataset", "stats") == 2


def test_version(capsys):
    assert run("--version") == 0
    assert "version" in capsys.readouterr().out


# ------------------------------------------------------------------- forge

def test_forge_generate(tmp_path, forge_cfg, capsys):
    out = tmp_path / "out"
    assert run("forge", "generate", "--config", str(forge_cfg),
               "--out", str(out)) == 0
    m = Manifest.load(out)
    assert m.stats["samples"] == 3
    assert (out / "images").is_dir()


def test_forge_generate_overwrite_guard(tmp_path, forge_cfg, capsys):
    out = tmp_path / "out"
    run("forge", "generate", "--config", str(forge_cfg), "--out", str(out))
    assert run("forge", "generate", "--config", str(forge_cfg),
               "--out", str(out)) == 1
    assert run("forge", "generate", "--config", str(forge_cfg),
               "--out", str(out), "--overwrite") == 0


def test_forge_generate_bad_config(tmp_path, forge_cfg, capsys):
    cfg = yaml.safe_load(forge_cfg.read_text())
    cfg["fonts"] = []
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump(cfg), encoding="utf-8")
    assert run("forge", "generate", "--config", str(bad),
               "--out", str(tmp_path / "x")) == 2
    assert "fonts" in capsys.readouterr().err


def test_forge_generate_count_override(tmp_path, forge_cfg):
    out = tmp_path / "five"
    assert run("forge", "generate", "--config", str(forge_cfg),
               "--out", str(out), "--count", "5") == 0
    assert Manifest.load(out).stats["samples"] == 5


# ----------------------------------------------------------------- dataset

@pytest.fixture()
def generated(tmp_path, forge_cfg):
    out = tmp_path / "gen"
    assert run("forge", "generate", "--config", str(forge_cfg),
               "--out", str(out), "--count", "10") == 0
    return out


def test_dataset_split_and_stats(tmp_path, generated, capsys):
    out = tmp_path / "splitd"
    assert run("dataset", "split", "--manifest", str(generated),
               "--ratios", "train=0.8,validation=0.2", "--seed", "1",
               "--out", str(out)) == 0
    counts = json.loads(capsys.readouterr().out)
    assert counts == {"train": 8, "validation": 2}
    assert run("dataset", "stats", "--manifest", str(out)) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["samples"] == 10


def test_dataset_verify_clean_then_broken(generated, capsys):
    assert run("dataset", "verify", "--manifest", str(generated)) == 0
    assert "clean" in capsys.readouterr().out
    victim = next((generated / "images").iterdir())
    victim.write_bytes(b"garbage")
    assert run("dataset", "verify", "--manifest", str(generated)) == 1
    assert "hash mismatch" in capsys.readouterr().err


def test_dataset_ingest_and_merge(tmp_path, generated, capsys):
    real = tmp_path / "real"
    real.mkdir()
    for i in range(2):
        Image.new("RGB", (30, 30), (255, 255, 255)).save(real / f"r{i}.png")
        (real / f"r{i}.txt").write_text(f"نص {i}", encoding="utf-8")
    ing = tmp_path / "ingested"
    assert run("dataset", "ingest", "--dir", str(real),
               "--provenance", "scanned_literature", "--out", str(ing)) == 0
    capsys.readouterr()
    merged = tmp_path / "merged"
    assert run("dataset", "merge", "--a", str(generated), "--b", str(ing),
               "--out", str(merged)) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["samples"] == 12


def test_dataset_split_bad_ratios(generated, tmp_path, capsys):
    assert run("dataset", "split", "--manifest", str(generated),
               "--ratios", "train=0.5", "--out", str(tmp_path / "x")) == 2


# ------------------------------------------------------------ review/bench

def test_review_create_and_export(tmp_path, generated, capsys):
    labels_path = tmp_path / "labels.jsonl"
    m = Manifest.load(generated)
    with open(labels_path, "w", encoding="utf-8") as f:
        for r in m.records:
            f.write(json.dumps({
                "sample_id": r.sample_id, "text": r.ground_truth,
                "model_id": "mock", "latency_ms": 1.0, "attempt_count": 1,
                "raw_response_digest": "d" * 64, "failed": False,
                "failure_reason": None}, ensure_ascii=False) + "\n")
    proj = tmp_path / "proj"
    assert run("review", "create", "--labels", str(labels_path),
               "--manifest", str(generated), "--project", str(proj)) == 0
    progress = json.loads(capsys.readouterr().out)
    assert progress["pending"] == 10

    # export before any approval is an operational error
    assert run("review", "export", "--project", str(proj),
               "--out", str(tmp_path / "exp")) == 1
    capsys.readouterr()

    from ocrforge.review import ReviewStore
    store = ReviewStore.load(proj)
    while (t := store.claim_next("cli")) is not None:
        store.submit(t.task_id, "approve", "cli")
    assert run("review", "export", "--project", str(proj),
               "--out", str(tmp_path / "exp")) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["samples"] == 10


def test_bench_run_and_compare(tmp_path, generated, capsys):
    r1 = tmp_path / "echo.json"
    assert run("bench", "run", "--manifest", str(generated),
               "--adapter", "echo_oracle", "--out", str(r1)) == 0
    agg = json.loads(capsys.readouterr().out)
    assert agg["micro_cer"] == 0.0

    r2 = tmp_path / "noisy.json"
    assert run("bench", "run", "--manifest", str(generated),
               "--adapter", "noisy_oracle:p=0.2,seed=3", "--out", str(r2)) == 0
    capsys.readouterr()

    base = tmp_path / "board"
    assert run("bench", "compare", "--reports", str(tmp_path / "*.json"),
               "--out", str(base)) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("0.0000")
    assert (base.with_suffix(".csv")).exists()
    assert (base.with_suffix(".svg")).exists()
    board = json.loads(base.with_suffix(".json").read_text())
    assert board["rows"][0]["model_id"] == "echo_oracle"


def test_bench_run_bad_adapter(generated, tmp_path, capsys):
    assert run("bench", "run", "--manifest", str(generated),
               "--adapter", "quantum", "--out", str(tmp_path / "r.json")) == 2


def test_bench_compare_no_reports(tmp_path, capsys):
    assert run("bench", "compare", "--reports", str(tmp_path / "*.json"),
               "--out", str(tmp_path / "b")) == 2


def test_bench_import(tmp_path, capsys):
    d = tmp_path / "ext"
    d.mkdir()
    Image.new("RGB", (20, 20)).save(d / "a.png")
    (d / "a.txt").write_text("نص", encoding="utf-8")
    assert run("bench", "import", "--dir", str(d),
               "--out", str(tmp_path / "imported")) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["samples"] == 1
