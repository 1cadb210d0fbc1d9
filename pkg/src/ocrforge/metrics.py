"""Character and Word Error Rate under the shared normalization protocol.

CER: both strings are normalized, ALL whitespace is removed, and unit-cost
Levenshtein runs over codepoints; the rate is distance / reference length.
WER: both strings are normalized, tokenized on whitespace, and Levenshtein
runs over tokens; rate is distance / reference token count.

Rates may exceed 1.0 when the hypothesis is much longer than the
reference; values are never clamped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyReference, EmptyRunError
from .textnorm import NormalizationConfig, normalize


@dataclass(frozen=True)
class EditDistanceResult:
    distance: int
    reference_length: int
    hypothesis_length: int
    substitutions: int
    insertions: int
    deletions: int


@dataclass(frozen=True)
class ScoreCard:
    sample_id: str
    cer: float
    wer: float
    char_edit: EditDistanceResult
    word_edit: EditDistanceResult

    def to_dict(self) -> dict:
        def ed(e: EditDistanceResult) -> dict:
            return {
                "distance": e.distance,
                "reference_length": e.reference_length,
                "hypothesis_length": e.hypothesis_length,
                "substitutions": e.substitutions,
                "insertions": e.insertions,
                "deletions": e.deletions,
            }
        return {
            "sample_id": self.sample_id,
            "cer": self.cer,
            "wer": self.wer,
            "char_edit": ed(self.char_edit),
            "word_edit": ed(self.word_edit),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreCard":
        def ed(e: dict) -> EditDistanceResult:
            return EditDistanceResult(**e)
        return cls(sample_id=d["sample_id"], cer=d["cer"], wer=d["wer"],
                   char_edit=ed(d["char_edit"]), word_edit=ed(d["word_edit"]))


@dataclass(frozen=True)
class AggregateScore:
    micro_cer: float
    micro_wer: float
    macro_cer: float
    macro_wer: float
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "micro_cer": self.micro_cer,
            "micro_wer": self.micro_wer,
            "macro_cer": self.macro_cer,
            "macro_wer": self.macro_wer,
            "n_samples": self.n_samples,
        }


def levenshtein(ref: Sequence, hyp: Sequence) -> EditDistanceResult:
    """Unit-cost edit distance with a canonical optimal alignment.

    Op counts come from one backtrace with fixed tie-breaking
    (substitution > deletion > insertion) so reported S/I/D are
    deterministic; the distance itself is tie-independent.
    """
    n, m = len(ref), len(hyp)
    if n == 0:
        return EditDistanceResult(m, 0, m, 0, m, 0)
    if m == 0:
        return EditDistanceResult(n, n, 0, 0, 0, n)

    # Full matrix kept for the backtrace; rows are built with a tight
    # local-variable loop since this dominates benchmark scoring time.
    rows = [list(range(m + 1))]
    for i in range(1, n + 1):
        prev = rows[i - 1]
        cur = [i] + [0] * m
        rc = ref[i - 1]
        left = i
        for j in range(1, m + 1):
            cost = prev[j - 1] + (rc != hyp[j - 1])
            up = prev[j] + 1
            if up < cost:
                cost = up
            left += 1
            if left < cost:
                cost = left
            cur[j] = cost
            left = cost
        rows.append(cur)

    subs = ins = dels = 0
    i, j = n, m
    while i > 0 or j > 0:
        here = rows[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and rows[i - 1][j - 1] == here:
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and rows[i - 1][j - 1] + 1 == here:
            subs += 1
            i -= 1
            j -= 1
        elif i > 0 and rows[i - 1][j] + 1 == here:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1

    return EditDistanceResult(rows[n][m], n, m, subs, ins, dels)


def _strip_all_whitespace(s: str) -> str:
    return "".join(s.split())


def cer(ground_truth: str, hypothesis: str,
        cfg: NormalizationConfig | None = None) -> tuple[float, EditDistanceResult]:
    """Space-removed character-level comparison."""
    if cfg is None:
        cfg = NormalizationConfig()
    ref = _strip_all_whitespace(normalize(ground_truth, cfg).text)
    hyp = _strip_all_whitespace(normalize(hypothesis, cfg).text)
    if not ref:
        raise EmptyReference(
            "normalized ground truth has no non-whitespace characters")
    edit = levenshtein(ref, hyp)
    return edit.distance / edit.reference_length, edit


def wer(ground_truth: str, hypothesis: str,
        cfg: NormalizationConfig | None = None) -> tuple[float, EditDistanceResult]:
    """Space-tokenized word-level comparison."""
    if cfg is None:
        cfg = NormalizationConfig()
    ref = normalize(ground_truth, cfg).text.split()
    hyp = normalize(hypothesis, cfg).text.split()
    if not ref:
        raise EmptyReference("normalized ground truth has no tokens")
    edit = levenshtein(ref, hyp)
    return edit.distance / edit.reference_length, edit


def score(sample_id: str, ground_truth: str, hypothesis: str,
          cfg: NormalizationConfig | None = None) -> ScoreCard:
    """CER + WER for one sample; raises EmptyReference for unscorable refs."""
    if cfg is None:
        cfg = NormalizationConfig()
    c, char_edit = cer(ground_truth, hypothesis, cfg)
    w, word_edit = wer(ground_truth, hypothesis, cfg)
    return ScoreCard(sample_id=sample_id, cer=c, wer=w,
                     char_edit=char_edit, word_edit=word_edit)


def aggregate(cards: Sequence[ScoreCard]) -> AggregateScore:
    """Micro (pooled) and macro (mean of rates) aggregates.

    Deterministic regardless of card order.
    """
    if not cards:
        raise EmptyRunError("no scorable samples")
    cards = sorted(cards, key=lambda c: c.sample_id)
    char_dist = sum(c.char_edit.distance for c in cards)
    char_ref = sum(c.char_edit.reference_length for c in cards)
    word_dist = sum(c.word_edit.distance for c in cards)
    word_ref = sum(c.word_edit.reference_length for c in cards)
    n = len(cards)
    return AggregateScore(
        micro_cer=char_dist / char_ref,
        micro_wer=word_dist / word_ref,
        macro_cer=sum(c.cer for c in cards) / n,
        macro_wer=sum(c.wer for c in cards) / n,
        n_samples=n,
    )
