"""Marker-word language profiling.

Classifies paragraphs by matching their tokens against small per-language
lexicons of high-frequency closed-class words, then aggregates a
word-weighted composition report for the corpus. Deliberately simple and
auditable; not a general-purpose language identifier.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from ocrcorpus.cleaning import CleanParagraph

LEXICONS_VERSION = "1"

# Fixed tie-break and reporting order for language codes.
LANGUAGE_ORDER = ("nb", "nn", "en", "da", "sv", "se", "other")

UNKNOWN = "unknown"

DEFAULT_SCORE_FLOOR = 0.05

_EDGE_CHARS = string.punctuation


@dataclass(frozen=True, slots=True)
class LanguageLexicon:
    language: str
    markers: dict[str, float]

    def __post_init__(self) -> None:
        for word, weight in self.markers.items():
            if not word or word != word.lower():
                raise ValueError(f"marker {word!r} must be non-empty lowercase")
            if weight <= 0:
                raise ValueError(f"marker {word!r} has non-positive weight")


@dataclass(frozen=True, slots=True)
class CompositionReport:
    """Word-weighted language composition; fractions sum to 1 when non-empty."""

    fractions: dict[str, float]
    word_counts: dict[str, int]
    total_words: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "fractions": self.fractions,
                "word_counts": self.word_counts,
                "total_words": self.total_words,
            },
            sort_keys=True,
        )


def parse_lexicons(lines) -> list[LanguageLexicon]:
    by_lang: dict[str, dict[str, float]] = {}
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(f"lexicon line {lineno}: expected language<TAB>word<TAB>weight")
        lang, word, weight = fields
        by_lang.setdefault(lang, {})[word] = float(weight)

    def order(lang: str) -> tuple[int, str]:
        try:
            return (LANGUAGE_ORDER.index(lang), lang)
        except ValueError:
            return (len(LANGUAGE_ORDER), lang)

    return [LanguageLexicon(lang, markers) for lang, markers in
            sorted(by_lang.items(), key=lambda kv: order(kv[0]))]


def load_lexicons(path: str | Path | None = None) -> list[LanguageLexicon]:
    """Load lexicons from a (language, word, weight) TSV; ``None`` = shipped set."""
    if path is None:
        text = resources.files("ocrcorpus.data").joinpath("lexicons.tsv").read_text("utf-8")
        return parse_lexicons(text.splitlines())
    with open(path, encoding="utf-8") as fh:
        return parse_lexicons(fh)


def _tie_rank(lang: str) -> tuple[int, str]:
    try:
        return (LANGUAGE_ORDER.index(lang), lang)
    except ValueError:
        return (len(LANGUAGE_ORDER), lang)


def classify_paragraph(
    p: CleanParagraph,
    lexicons: list[LanguageLexicon],
    *,
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> tuple[str, float]:
    """Classify one paragraph.

    Each language scores the sum of marker weights matched by the paragraph's
    lowercased tokens (edge punctuation stripped), divided by word count. The
    best language wins if its score exceeds ``score_floor``; otherwise the
    paragraph's metadata language hint is used when present, else ``unknown``.
    Ties go to the earliest language in LANGUAGE_ORDER.
    """
    if not lexicons:
        raise ValueError("lexicons must be non-empty")
    if p.word_count == 0:
        return (p.language, 0.0) if p.language else (UNKNOWN, 0.0)

    tokens = [t.strip(_EDGE_CHARS) for t in p.text.lower().split()]
    scores: list[tuple[str, float]] = []
    for lex in lexicons:
        total = 0.0
        for t in tokens:
            if t:
                total += lex.markers.get(t, 0.0)
        scores.append((lex.language, total / p.word_count))

    best_lang, best_score = min(scores, key=lambda kv: (-kv[1], _tie_rank(kv[0])))
    if best_score > score_floor:
        return best_lang, best_score
    if p.language:
        return p.language, best_score
    return UNKNOWN, best_score


def classify_stream(
    paragraphs: Iterable[CleanParagraph],
    lexicons: list[LanguageLexicon],
    *,
    score_floor: float = DEFAULT_SCORE_FLOOR,
) -> Iterable[CleanParagraph]:
    """Yield paragraphs with their ``language`` field set to the classification."""
    from dataclasses import replace

    for p in paragraphs:
        lang, _ = classify_paragraph(p, lexicons, score_floor=score_floor)
        yield replace(p, language=lang)


def composition_report(paragraphs: Iterable[CleanParagraph]) -> CompositionReport:
    """Aggregate classified paragraphs into word-weighted language fractions.

    A 100-word paragraph counts 100 toward its language. Paragraphs without a
    language land in the ``unknown`` bucket. Permutation-invariant.
    """
    counts: dict[str, int] = {}
    total = 0
    for p in paragraphs:
        lang = p.language or UNKNOWN
        counts[lang] = counts.get(lang, 0) + p.word_count
        total += p.word_count

    ordered = dict(sorted(counts.items(), key=lambda kv: _tie_rank(kv[0])))
    fractions = {lang: (n / total if total else 0.0) for lang, n in ordered.items()}
    return CompositionReport(fractions=fractions, word_counts=ordered, total_words=total)
