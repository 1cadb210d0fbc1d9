# -*- coding: utf-8 -*-
"""Walkthrough of text normalization and CER/WER scoring.

Run:  python demos/demo_metrics.py
"""
from ocrforge.metrics import aggregate, levenshtein, score
from ocrforge.textnorm import NormalizationConfig, normalize


def main():
    cfg = NormalizationConfig()

    print("== normalization ==")
    raw = "كَتَبَ  الولد\r\n\r\n\r\nالدرس  "
    out = normalize(raw, cfg)
    print(f"  raw:        {raw!r}")
    print(f"  normalized: {out.text!r}")
    print(f"  marks removed: {out.removed_marks}")

    print("\n== edit distance with operation counts ==")
    r = levenshtein("كتب", "كتبت")
    print(f"  كتب -> كتبت : distance={r.distance} "
          f"S={r.substitutions} I={r.insertions} D={r.deletions}")

    print("\n== scoring (space-removed CER, token WER) ==")
    cards = [
        score("spacing", "اب ج", "ابج", cfg),       # spacing never hurts CER
        score("harakat", "كَتَبَ الدرس", "كتب الدرس", cfg),
        score("one-word", "سلام عليكم", "سلام عليك", cfg),
    ]
    for c in cards:
        print(f"  {c.sample_id:10} CER={c.cer:.4f}  WER={c.wer:.4f}")

    agg = aggregate(cards)
    print(f"\n  micro CER={agg.micro_cer:.4f}  macro CER={agg.macro_cer:.4f}"
          f"  over {agg.n_samples} samples")


if __name__ == "__main__":
    main()
