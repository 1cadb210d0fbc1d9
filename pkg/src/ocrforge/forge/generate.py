"""Deterministic sample and dataset generation.

Every sample is a pure function of (config, index): the per-sample seed
is a hash mix of the master seed and the index, so parallel generation
at any worker count produces byte-identical output.
"""

from __future__ import annotations

import hashlib
import io
import random
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from .. import __version__
from ..dataset import Manifest, SampleRecord
from ..errors import OutputExistsError, TextTooLong
from . import geometry
from .config import ForgeConfig, validate_config
from .distort import apply_distortions, sample_distortions
from .render import render_page


def sample_seed(master_seed: int, index: int) -> int:
    """Seed mixing: blake2b over "<master>:<index>", first 8 bytes."""
    digest = hashlib.blake2b(f"{master_seed}:{index}".encode(),
                             digest_size=8).digest()
    return int.from_bytes(digest, "big")


@lru_cache(maxsize=8)
def _corpus_lines(path: str) -> tuple[str, ...]:
    lines = tuple(ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
                  if ln.strip())
    if not lines:
        raise ValueError(f"corpus is empty: {path}")
    return lines


def _weighted_choice(rng: random.Random, items, weights):
    return rng.choices(items, weights=weights, k=1)[0]


def generate_sample(cfg: ForgeConfig, index: int
                    ) -> tuple[SampleRecord, bytes]:
    """Generate one sample; returns (record, PNG bytes).

    Raises TextTooLong when the selected text cannot fit the layout at
    the minimum font size.
    """
    seed = sample_seed(cfg.master_seed, index)
    rng = random.Random(seed)

    text = rng.choice(_corpus_lines(cfg.corpus_path))
    font = _weighted_choice(rng, cfg.fonts, [f.weight for f in cfg.fonts])
    size = rng.randint(*cfg.font_size_range)
    background = _weighted_choice(rng, cfg.backgrounds,
                                  [b.weight for b in cfg.backgrounds])
    applied = sample_distortions(cfg.distortions, rng)

    page = render_page(text, font.path, size, background, cfg.layout,
                       cfg.font_size_range)
    image, forward = apply_distortions(page.image, applied, page.fill_color)
    out_w, out_h = image.size

    def carry(box):
        return geometry.round_clamp_box(
            geometry.transform_box(forward, box), out_w, out_h)

    line_boxes = tuple(carry(b) for b in page.line_boxes)
    word_boxes = tuple((carry(b), w) for b, w in page.word_boxes)

    buf = io.BytesIO()
    image.save(buf, format="PNG")
    png = buf.getvalue()

    sid = hashlib.blake2b(f"{seed}:{page.ground_truth}".encode(),
                          digest_size=8).hexdigest()
    record = SampleRecord(
        sample_id=sid,
        image_path=f"images/{sid}.png",
        ground_truth=page.ground_truth,
        line_boxes=line_boxes,
        word_boxes=word_boxes,
        provenance="synthetic",
        render_meta={
            "font": Path(page.font_path).name,
            "font_size": page.font_size,
            "background": background.kind if background.kind == "solid"
                          else background.path,
            "distortions": applied,
            "sample_seed": seed,
            "sample_index": index,
            "image_size": [out_w, out_h],
            "base_size": list(page.image.size),
            "base_line_boxes": [list(b) for b in page.line_boxes],
        },
        image_sha256=hashlib.sha256(png).hexdigest(),
    )
    return record, png


def _worker(args) -> tuple[int, SampleRecord | None, bytes | None, str | None]:
    cfg, index = args
    try:
        record, png = generate_sample(cfg, index)
        return index, record, png, None
    except TextTooLong as e:
        return index, None, None, str(e)


def generate_dataset(cfg: ForgeConfig, out_dir: str | Path,
                     jobs: int = 1, overwrite: bool = False,
                     log=None) -> Manifest:
    """Generate exactly cfg.output.count samples into out_dir.

    Indices that fail to fit are skipped (with a logged reason) and
    replaced by advancing the index, so the final count is exact and the
    surviving index set is independent of the worker count.
    """
    diags = validate_config(cfg)
    if diags:
        raise ValueError("invalid forge config: " + "; ".join(diags))

    out_dir = Path(out_dir)
    if (out_dir / "manifest.jsonl").exists() and not overwrite:
        raise OutputExistsError(f"{out_dir} already holds a dataset "
                                "(use --overwrite)")
    (out_dir / "images").mkdir(parents=True, exist_ok=True)

    target = cfg.output.count
    results: list[tuple[SampleRecord, bytes]] = []
    skipped: list[dict] = []
    next_index = 0

    def consume(batch_results):
        for index, record, png, reason in sorted(batch_results):
            if len(results) >= target:
                break
            if record is None:
                skipped.append({"index": index, "reason": reason})
                if log:
                    log(f"skipping index {index}: {reason}")
            else:
                results.append((record, png))

    while len(results) < target:
        need = target - len(results)
        batch = list(range(next_index, next_index + need))
        next_index += need
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                consume(pool.map(_worker, [(cfg, i) for i in batch]))
        else:
            consume(_worker((cfg, i)) for i in batch)

    for record, png in results:
        (out_dir / record.image_path).write_bytes(png)

    manifest = Manifest.from_records(
        [r for r, _ in results],
        meta={
            "tool_version": __version__,
            "master_seed": cfg.master_seed,
            "config": cfg.to_dict(),
            "skipped": skipped,
        },
    )
    manifest.save(out_dir)
    return manifest
