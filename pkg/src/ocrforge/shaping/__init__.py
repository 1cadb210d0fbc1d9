"""Table-driven Arabic shaper: cursive joining, lam-alef ligatures, and a
simplified bidirectional pass.

Logical-order text goes in; visually ordered presentation-form glyphs come
out, ready to hand to a rasterizer left to right. Joining and form data
live in plain-text tables under ``data/`` (vendored from the published
Unicode data; format documented in the files).

Only the four mandatory lam-alef ligatures are substituted. The bidi pass
is deliberately simple: a line is RTL when it contains any Arabic letter,
and contiguous Latin/digit runs keep their internal left-to-right order
while the run sequence is reversed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from importlib import resources
from functools import lru_cache

from ..errors import NoPresentationForm

__all__ = [
    "JoiningClass",
    "Glyph",
    "ShapedLine",
    "joining_class",
    "contextual_form",
    "shape_line",
]


class JoiningClass(Enum):
    DUAL = "D"
    RIGHT = "R"
    LEFT = "L"
    NON_JOINING = "U"
    TRANSPARENT = "T"
    JOIN_CAUSING = "C"


@dataclass(frozen=True)
class Glyph:
    """One visual glyph: a presentation-form (or pass-through) codepoint,
    the logical indices of the base letters it consumes (two for a
    ligature, none for an orphan mark), and any combining marks attached
    to it."""
    codepoint: int
    source_indices: tuple[int, ...]
    marks: tuple[int, ...] = ()

    @property
    def char(self) -> str:
        return chr(self.codepoint)


@dataclass(frozen=True)
class ShapedLine:
    glyphs: tuple[Glyph, ...]
    direction: str  # "rtl" | "ltr"
    ligatures_applied: int

    def visual_text(self, include_marks: bool = True) -> str:
        """Concatenated visual-order string, marks trailing their base."""
        parts = []
        for g in self.glyphs:
            parts.append(chr(g.codepoint))
            if include_marks:
                parts.extend(chr(m) for m in g.marks)
        return "".join(parts)


def _parse_cp_field(s: str) -> int | None:
    s = s.strip()
    return int(s, 16) if s else None


@lru_cache(maxsize=1)
def _joining_table() -> dict[int, JoiningClass]:
    table: dict[int, JoiningClass] = {}
    text = resources.files(__package__).joinpath("data/arabic_joining.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cps, _name, cls = line.split(";")
        jc = JoiningClass(cls.strip())
        if ".." in cps:
            lo, hi = cps.split("..")
            for cp in range(int(lo, 16), int(hi, 16) + 1):
                table[cp] = jc
        else:
            table[int(cps, 16)] = jc
    return table


@lru_cache(maxsize=1)
def _forms_table() -> tuple[dict[int, tuple], dict[tuple[int, int], tuple[int, int]]]:
    """Returns (letter forms, ligature forms).

    Letter forms: base cp -> (isolated, final, initial, medial), entries
    None where the letter lacks that form. Ligature forms:
    (lam, alef) -> (isolated, final).
    """
    forms: dict[int, tuple] = {}
    ligs: dict[tuple[int, int], tuple[int, int]] = {}
    text = resources.files(__package__).joinpath("data/presentation_forms.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(";")
        if fields[0] == "LIG":
            lam, alef = (int(x, 16) for x in fields[1].split())
            ligs[(lam, alef)] = (int(fields[2], 16), int(fields[3], 16))
        else:
            base = int(fields[0], 16)
            forms[base] = tuple(_parse_cp_field(f) for f in fields[1:5])
    return forms, ligs


def joining_class(cp: int) -> JoiningClass:
    """Joining class per the vendored table; unknown codepoints are
    non-joining."""
    return _joining_table().get(cp, JoiningClass.NON_JOINING)


def contextual_form(cp: int, joins_prev: bool, joins_next: bool) -> int:
    """Presentation form of one letter given its resolved context.

    Letters lacking the requested form fall back along their joining
    class: right-joining letters map initial->isolated and medial->final.
    """
    forms = _forms_table()[0].get(cp)
    if forms is None:
        raise NoPresentationForm("U+%04X has no presentation forms" % cp)
    isolated, final, initial, medial = forms
    if joins_prev and joins_next:
        return medial or final or isolated
    if joins_prev:
        return final or isolated
    if joins_next:
        return initial or isolated
    return isolated


_ALEF_LIGATING = frozenset((0x0622, 0x0623, 0x0625, 0x0627))
_LAM = 0x0644


_ARABIC_BLOCKS = ((0x0600, 0x06FF), (0x0750, 0x077F), (0x08A0, 0x08FF),
                  (0xFB50, 0xFDFF), (0xFE70, 0xFEFF))
_ARABIC_DIGITS = ((0x0660, 0x0669), (0x06F0, 0x06F9))


def _is_arabic_letter(cp: int) -> bool:
    if _joining_table().get(cp) is JoiningClass.TRANSPARENT:
        return False
    if any(lo <= cp <= hi for lo, hi in _ARABIC_DIGITS):
        return False
    return any(lo <= cp <= hi for lo, hi in _ARABIC_BLOCKS)


def _is_ltr_char(ch: str) -> bool:
    # Digits and Latin letters form embedded LTR runs inside RTL lines.
    return ch.isascii() and (ch.isalnum() or ch in ".,:%+-")


def shape_line(logical: str) -> ShapedLine:
    """Shape one line of logical-order text into visual-order glyphs."""
    if "\n" in logical:
        raise ValueError("shape_line takes a single line (no LF)")

    jt = _joining_table()
    chars = [(i, ch) for i, ch in enumerate(logical)]

    # Partition into base positions and the marks trailing each base.
    # A mark before any base becomes an orphan glyph of its own.
    bases: list[tuple[int, str, list[int]]] = []  # (index, char, mark cps)
    orphan_marks: list[int] = []
    for i, ch in chars:
        if jt.get(ord(ch)) is JoiningClass.TRANSPARENT:
            if bases:
                bases[-1][2].append(ord(ch))
            else:
                orphan_marks.append(ord(ch))
        else:
            bases.append((i, ch, []))

    # Resolve joining context over base letters only (marks are skipped
    # by construction above).
    def jclass(pos: int) -> JoiningClass:
        return jt.get(ord(bases[pos][1]), JoiningClass.NON_JOINING)

    n = len(bases)
    logical_glyphs: list[Glyph] = [Glyph(m, ()) for m in orphan_marks]
    ligatures = 0
    pos = 0
    while pos < n:
        idx, ch, marks = bases[pos]
        cp = ord(ch)
        cls = jclass(pos)

        prev_joins = (pos > 0 and jclass(pos - 1) in
                      (JoiningClass.DUAL, JoiningClass.JOIN_CAUSING))
        joins_prev = prev_joins and cls in (JoiningClass.DUAL, JoiningClass.RIGHT,
                                            JoiningClass.JOIN_CAUSING)

        # Mandatory lam-alef ligature.
        if (cp == _LAM and pos + 1 < n and ord(bases[pos + 1][1]) in _ALEF_LIGATING):
            a_idx, a_ch, a_marks = bases[pos + 1]
            iso, fin = _forms_table()[1][(cp, ord(a_ch))]
            logical_glyphs.append(Glyph(fin if joins_prev else iso,
                                        (idx, a_idx),
                                        tuple(marks) + tuple(a_marks)))
            ligatures += 1
            pos += 2
            continue

        next_joins = (pos + 1 < n and jclass(pos + 1) in
                      (JoiningClass.DUAL, JoiningClass.RIGHT,
                       JoiningClass.JOIN_CAUSING))
        joins_next = next_joins and cls in (JoiningClass.DUAL,
                                            JoiningClass.JOIN_CAUSING)

        if ord(ch) in _forms_table()[0]:
            out_cp = contextual_form(cp, joins_prev, joins_next)
        else:
            out_cp = cp  # pass-through: Latin, digits, punctuation, tatweel
        logical_glyphs.append(Glyph(out_cp, (idx,), tuple(marks)))
        pos += 1

    rtl = any(_is_arabic_letter(ord(ch)) for ch in logical)
    if not rtl:
        return ShapedLine(tuple(logical_glyphs), "ltr", ligatures)

    # Simplified bidi: reverse everything, then restore internal LTR
    # order inside contiguous Latin/digit runs.
    visual = list(reversed(logical_glyphs))
    i = 0
    while i < len(visual):
        if len(visual[i].source_indices) == 1 and _is_ltr_char(
                logical[visual[i].source_indices[0]]):
            j = i
            while (j + 1 < len(visual)
                   and len(visual[j + 1].source_indices) == 1
                   and _is_ltr_char(logical[visual[j + 1].source_indices[0]])):
                j += 1
            visual[i:j + 1] = reversed(visual[i:j + 1])
            i = j + 1
        else:
            i += 1
    return ShapedLine(tuple(visual), "rtl", ligatures)
