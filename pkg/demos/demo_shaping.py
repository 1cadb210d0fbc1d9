# -*- coding: utf-8 -*-
"""Walkthrough of the Arabic shaper: joining classes, contextual forms,
ligatures, and the simplified bidi pass.

Run:  python demos/demo_shaping.py
"""
from ocrforge.shaping import JoiningClass, contextual_form, joining_class, shape_line


def show(text):
    line = shape_line(text)
    cps = " ".join(f"U+{g.codepoint:04X}" for g in line.glyphs)
    print(f"{text!r:30} -> [{cps}]  dir={line.direction}"
          f"  ligatures={line.ligatures_applied}")


def main():
    print("== joining classes ==")
    for name, cp in [("beh", 0x0628), ("alef", 0x0627), ("hamza", 0x0621),
                     ("tatweel", 0x0640), ("fatha", 0x064E)]:
        print(f"  {name:8} U+{cp:04X}  {joining_class(cp).name}")

    print("\n== contextual forms of beh ==")
    for prev, nxt, label in [(False, False, "isolated"), (False, True, "initial"),
                             (True, True, "medial"), (True, False, "final")]:
        print(f"  {label:8} U+{contextual_form(0x0628, prev, nxt):04X}")

    print("\n== shaping whole lines ==")
    show("بب")            # two beh: final + initial
    show("لا")            # mandatory lam-alef ligature
    show("بلا")           # ligature takes its final form after a joiner
    show("كَتَبَ")          # harakat ride along on their base glyphs
    show("اب 123 جد")     # embedded LTR digit run inside an RTL line
    show("abc")           # pure Latin passes through untouched

    print("\n== visual text, ready for a left-to-right rasterizer ==")
    line = shape_line("سلام عليكم")
    print(" ", line.visual_text())


if __name__ == "__main__":
    main()
