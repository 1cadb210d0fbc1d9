"""Text normalization applied to ground truth and model output before scoring.

The same pipeline runs on both sides of every comparison:

1. strip harakat (Arabic combining marks, configurable set)
2. CR / CRLF -> LF
3. horizontal whitespace runs -> one space
4. trim leading/trailing whitespace per line
5. collapse runs of 2+ blank lines to a single LF

Normalization is idempotent and never touches non-mark, non-whitespace
codepoints.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

# Candidate harakat ranges: Arabic tanwin/short vowels/shadda/sukun and
# friends, superscript alef, Quranic annotation marks, and the extended
# Arabic mark block. Only codepoints whose general category is Mn survive
# into the default set (e.g. U+06DD END OF AYAH is Cf and stays out).
_DEFAULT_MARK_RANGES = (
    (0x064B, 0x065F),
    (0x0670, 0x0670),
    (0x06D6, 0x06ED),
    (0x08D3, 0x08FF),
)


def default_diacritic_set() -> frozenset[int]:
    """Arabic combining marks removed by default normalization."""
    cps = set()
    for lo, hi in _DEFAULT_MARK_RANGES:
        for cp in range(lo, hi + 1):
            if unicodedata.category(chr(cp)) == "Mn":
                cps.add(cp)
    return frozenset(cps)


@dataclass(frozen=True)
class NormalizationConfig:
    strip_diacritics: bool = True
    diacritic_set: frozenset[int] = field(default_factory=default_diacritic_set)
    collapse_whitespace: bool = True
    preserve_line_breaks: bool = True
    # Opt-in extras, both off by default: the scoring protocol compares
    # text as given after mark removal.
    strip_tatweel: bool = False
    apply_nfc: bool = False

    def __post_init__(self):
        bad = [cp for cp in self.diacritic_set
               if unicodedata.category(chr(cp)) != "Mn"]
        if bad:
            raise ValueError(
                "diacritic_set must contain only combining marks (Mn); "
                "offending codepoints: %s" % ", ".join("U+%04X" % c for c in bad))
        object.__setattr__(self, "diacritic_set", frozenset(self.diacritic_set))

    def to_dict(self) -> dict:
        return {
            "strip_diacritics": self.strip_diacritics,
            "diacritic_set": ["U+%04X" % cp for cp in sorted(self.diacritic_set)],
            "collapse_whitespace": self.collapse_whitespace,
            "preserve_line_breaks": self.preserve_line_breaks,
            "strip_tatweel": self.strip_tatweel,
            "apply_nfc": self.apply_nfc,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationConfig":
        kwargs = dict(d)
        if "diacritic_set" in kwargs:
            kwargs["diacritic_set"] = frozenset(
                int(s.removeprefix("U+"), 16) if isinstance(s, str) else int(s)
                for s in kwargs["diacritic_set"])
        return cls(**kwargs)


@dataclass(frozen=True)
class NormalizedText:
    text: str
    source_length_chars: int
    removed_marks: int


_TATWEEL = "ـ"
# Horizontal whitespace: every str.split() separator except LF.
_HSPACE = re.compile(r"[^\S\n]+")


def is_diacritic(cp: int, cfg: NormalizationConfig) -> bool:
    return cp in cfg.diacritic_set


def normalize(raw: str, cfg: NormalizationConfig | None = None) -> NormalizedText:
    """Run the full normalization pipeline on one string."""
    if cfg is None:
        cfg = NormalizationConfig()
    source_len = len(raw)
    text = raw

    if cfg.apply_nfc:
        text = unicodedata.normalize("NFC", text)

    removed = 0
    if cfg.strip_diacritics:
        kept = [ch for ch in text if ord(ch) not in cfg.diacritic_set]
        removed = len(text) - len(kept)
        text = "".join(kept)
    if cfg.strip_tatweel:
        text = text.replace(_TATWEEL, "")

    text = text.replace("\r\n", "\n").replace("\r", "\n")
    if not cfg.preserve_line_breaks:
        text = text.replace("\n", " ")

    if cfg.collapse_whitespace:
        text = _HSPACE.sub(" ", text)
        lines = [ln.strip(" ") for ln in text.split("\n")]
        text = "\n".join(lines)
        # 3+ consecutive LFs delimit 2+ blank lines; collapse to one LF.
        text = re.sub(r"\n{3,}", "\n", text)
        text = text.strip()

    return NormalizedText(text=text, source_length_chars=source_len,
                          removed_marks=removed)
