# -*- coding: utf-8 -*-
"""Generate a small synthetic dataset and inspect its manifest.

Run:  python demos/demo_forge.py [out_dir]
"""
import sys
import tempfile
from pathlib import Path

from ocrforge.dataset import Manifest, verify
from ocrforge.forge import ForgeConfig, FontSpec, generate_dataset
from ocrforge.forge.config import LayoutSpec, OutputSpec

FONT = "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf"

CORPUS = """\
سلام عليكم ورحمة الله وبركاته
كَتَبَ الولد الدرس في المدرسة
المغرب بلاد زوينة والضيافة تقليد قديم
هذا نص تجريبي للتوليد الاصطناعي
"""


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else \
        Path(tempfile.mkdtemp(prefix="ocrforge_demo_"))
    corpus = out / "corpus.txt"
    out.mkdir(parents=True, exist_ok=True)
    corpus.write_text(CORPUS, encoding="utf-8")

    cfg = ForgeConfig(
        master_seed=2024,
        corpus_path=str(corpus),
        fonts=(FontSpec(path=FONT),),
        layout=LayoutSpec(width=640, height=400, max_lines=5),
        font_size_range=(18, 28),
        distortions={
            "rotation": {"p": 0.6, "degrees": [-6, 6]},
            "gaussian_noise": {"p": 0.4, "stddev": [2, 6]},
            "jpeg_artifacts": {"p": 0.4, "quality": [50, 90]},
        },
        output=OutputSpec(count=12),
    )

    manifest = generate_dataset(cfg, out / "dataset", overwrite=True,
                                log=print)
    print(f"\nwrote {manifest.stats['samples']} samples to {out / 'dataset'}")
    print("stats:", manifest.stats)

    first = manifest.records[0]
    print(f"\nfirst sample {first.sample_id}:")
    print("  ground truth:", first.ground_truth.replace("\n", " / "))
    print("  line boxes:  ", first.line_boxes)
    print("  distortions: ",
          [d["name"] for d in first.render_meta["distortions"]])

    reloaded = Manifest.load(out / "dataset")
    print("\nintegrity check:", verify(reloaded, out / "dataset") or "clean")


if __name__ == "__main__":
    main()
