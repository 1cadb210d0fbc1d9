# -*- coding: utf-8 -*-
import random

import pytest

from ocrforge.errors import NoPresentationForm
from ocrforge.shaping import (JoiningClass, contextual_form, joining_class,
                              shape_line)

from oracles import reference_shape

# Letters carrying presentation forms (the classic 28 + hamza variants).
ARABIC_LETTERS = [chr(c) for c in range(0x0621, 0x063B)] + \
                 [chr(c) for c in range(0x0641, 0x064B)]
HARAKAT = [chr(c) for c in range(0x064B, 0x0653)]


# ----------------------------------------------------------- joining class

def test_joining_classes():
    assert joining_class(0x0628) is JoiningClass.DUAL          # beh
    assert joining_class(0x0627) is JoiningClass.RIGHT         # alef
    assert joining_class(0x0621) is JoiningClass.NON_JOINING   # hamza
    assert joining_class(0x0640) is JoiningClass.JOIN_CAUSING  # tatweel
    assert joining_class(0x064E) is JoiningClass.TRANSPARENT   # fatha
    assert joining_class(ord("x")) is JoiningClass.NON_JOINING


# --------------------------------------------------------- contextual form

def test_beh_forms():
    assert contextual_form(0x0628, False, True) == 0xFE91   # initial
    assert contextual_form(0x0628, True, False) == 0xFE90   # final
    assert contextual_form(0x0628, True, True) == 0xFE92    # medial
    assert contextual_form(0x0628, False, False) == 0xFE8F  # isolated


def test_alef_isolated():
    assert contextual_form(0x0627, False, False) == 0xFE8D


def test_right_joiner_fallback():
    # alef has no initial/medial forms; fall back along its class.
    assert contextual_form(0x0627, False, True) == 0xFE8D
    assert contextual_form(0x0627, True, True) == 0xFE8E


def test_no_forms_entry():
    with pytest.raises(NoPresentationForm):
        contextual_form(ord("x"), False, False)


# -------------------------------------------------------------- shape_line

def test_two_beh():
    line = shape_line("بب")
    assert [g.codepoint for g in line.glyphs] == [0xFE90, 0xFE91]
    assert line.direction == "rtl"


def test_lam_alef_ligature():
    line = shape_line("لا")
    assert [g.codepoint for g in line.glyphs] == [0xFEFB]
    assert line.ligatures_applied == 1


def test_lam_alef_final_ligature():
    # After a dual joiner, lam-alef takes the final ligature form.
    line = shape_line("بلا")
    assert line.ligatures_applied == 1
    assert 0xFEFC in [g.codepoint for g in line.glyphs]


def test_all_four_ligatures():
    for alef, iso in ((0x0622, 0xFEF5), (0x0623, 0xFEF7),
                      (0x0625, 0xFEF9), (0x0627, 0xFEFB)):
        line = shape_line("ل" + chr(alef))
        assert [g.codepoint for g in line.glyphs] == [iso]


def test_latin_passthrough():
    line = shape_line("abc")
    assert [g.char for g in line.glyphs] == ["a", "b", "c"]
    assert line.direction == "ltr"
    assert line.ligatures_applied == 0


def test_embedded_ltr_run_keeps_order():
    line = shape_line("اب 123 جد")
    visual = "".join(g.char for g in line.glyphs)
    assert "123" in visual  # digits keep internal LTR order
    assert line.direction == "rtl"


def test_marks_attach_to_base():
    line = shape_line("بَ")
    assert len(line.glyphs) == 1
    assert line.glyphs[0].marks == (0x064E,)


def test_marks_skipped_for_joining():
    # A mark between two dual joiners must not break the connection.
    with_mark = shape_line("بَب")
    without = shape_line("بب")
    assert ([g.codepoint for g in with_mark.glyphs]
            == [g.codepoint for g in without.glyphs])


def test_no_lf_allowed():
    with pytest.raises(ValueError):
        shape_line("a\nb")


# -------------------------------------------------------------- properties

def _random_arabic(rng, min_len=2, max_len=6, marks=False):
    s = "".join(rng.choice(ARABIC_LETTERS)
                for _ in range(rng.randint(min_len, max_len)))
    if marks:
        s = "".join(c + (rng.choice(HARAKAT) if rng.random() < 0.3 else "")
                    for c in s)
    return s


def test_matches_reference_implementation():
    rng = random.Random(20240901)
    for _ in range(500):
        s = _random_arabic(rng, marks=True)
        ours = [g.codepoint for g in shape_line(s).glyphs]
        assert ours == reference_shape(s), f"mismatch on {s!r}"


def test_round_trip_permutation():
    rng = random.Random(77)
    for _ in range(300):
        s = _random_arabic(rng, min_len=1, max_len=10, marks=True)
        line = shape_line(s)
        covered = [i for g in line.glyphs for i in g.source_indices]
        non_marks = [i for i, c in enumerate(s)
                     if joining_class(ord(c)) is not JoiningClass.TRANSPARENT]
        assert sorted(covered) == non_marks


def test_ligature_count_equals_adjacencies():
    rng = random.Random(13)
    for _ in range(300):
        s = _random_arabic(rng, min_len=2, max_len=12, marks=True)
        bases = [c for c in s
                 if joining_class(ord(c)) is not JoiningClass.TRANSPARENT]
        expected = 0
        i = 0
        while i < len(bases) - 1:
            if bases[i] == "ل" and ord(bases[i + 1]) in (0x622, 0x623, 0x625, 0x627):
                expected += 1
                i += 2
            else:
                i += 1
        assert shape_line(s).ligatures_applied == expected


def test_deterministic():
    s = "لا بأس عليك"
    assert shape_line(s) == shape_line(s)


def test_presentation_range():
    rng = random.Random(5)
    for _ in range(200):
        s = _random_arabic(rng, marks=True)
        for g in shape_line(s).glyphs:
            assert (0xFB50 <= g.codepoint <= 0xFDFF
                    or 0xFE70 <= g.codepoint <= 0xFEFF)
