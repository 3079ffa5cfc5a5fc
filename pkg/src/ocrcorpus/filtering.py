"""Quality filtering: confidence thresholds, word-count floors, period exclusion.

Decides which paragraphs of a parsed document enter the corpus. All
thresholds are inclusive (a value equal to the threshold passes) and every
outcome is recorded in a :class:`FilterVerdict` so filtering is auditable.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from ocrcorpus.ingest import OcrDocument, OcrPage, OcrParagraph


class RejectionReason(str, enum.Enum):
    PERIOD_EXCLUDED = "period-excluded"
    LOW_PAGE_CONFIDENCE = "low-page-confidence"
    LOW_PARAGRAPH_CONFIDENCE = "low-paragraph-confidence"
    TOO_FEW_WORDS = "too-few-words"
    LOW_AVG_PARAGRAPH_LENGTH = "low-avg-paragraph-length"


@dataclass(frozen=True, slots=True)
class FilterConfig:
    """Thresholds for corpus admission; defaults are the production values."""

    min_paragraph_confidence: float = 0.8
    min_page_confidence: float = 0.9
    min_doc_words: int = 20
    min_avg_words_per_paragraph: float = 6.0
    excluded_period_start: date = date(2006, 1, 1)
    excluded_period_end: date = date(2008, 12, 31)

    def __post_init__(self) -> None:
        if not 0.0 <= self.min_paragraph_confidence <= 1.0:
            raise ValueError("min_paragraph_confidence outside [0, 1]")
        if not 0.0 <= self.min_page_confidence <= 1.0:
            raise ValueError("min_page_confidence outside [0, 1]")
        if self.min_doc_words < 0 or self.min_avg_words_per_paragraph < 0:
            raise ValueError("word-count thresholds must be >= 0")
        if self.excluded_period_end < self.excluded_period_start:
            raise ValueError("excluded period ends before it starts")

    @classmethod
    def from_dict(cls, d: dict) -> "FilterConfig":
        kwargs = {}
        for key in ("min_paragraph_confidence", "min_page_confidence", "min_avg_words_per_paragraph"):
            if key in d:
                kwargs[key] = float(d[key])
        if "min_doc_words" in d:
            kwargs["min_doc_words"] = int(d["min_doc_words"])
        for key in ("excluded_period_start", "excluded_period_end"):
            if key in d:
                v = d[key]
                kwargs[key] = v if isinstance(v, date) else date.fromisoformat(str(v))
        return cls(**kwargs)


@dataclass(slots=True)
class FilterVerdict:
    """Audit record for one document's pass through the filter."""

    doc_id: str
    accepted: bool
    rejection_reasons: list[RejectionReason] = field(default_factory=list)
    retained_paragraph_count: int = 0
    dropped_paragraph_count: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "doc_id": self.doc_id,
                "accepted": self.accepted,
                "rejection_reasons": [r.value for r in self.rejection_reasons],
                "retained_paragraph_count": self.retained_paragraph_count,
                "dropped_paragraph_count": self.dropped_paragraph_count,
            },
            ensure_ascii=False,
            sort_keys=True,
        )


def paragraph_confidence(p: OcrParagraph) -> float:
    """Mean word confidence; 0.0 for an empty paragraph.

    Uses correctly-rounded summation so a paragraph sitting exactly on a
    decimal threshold (e.g. all words at 0.8) compares as equal to it.
    """
    if not p.words:
        return 0.0
    return math.fsum(w.confidence for w in p.words) / len(p.words)


def page_confidence(pg: OcrPage) -> float:
    """Word-weighted mean confidence over a page; 0.0 for a page with no words."""
    confs = [w.confidence for p in pg.paragraphs for w in p.words]
    if not confs:
        return 0.0
    return math.fsum(confs) / len(confs)


def filter_document(
    doc: OcrDocument, cfg: FilterConfig
) -> tuple[list[tuple[int, OcrParagraph]], FilterVerdict]:
    """Apply the admission rules to one document.

    Returns the retained paragraphs as (paragraph_index, paragraph) pairs,
    where the index counts all of the document's paragraphs in reading order,
    plus the verdict. Order of checks: period exclusion on the whole document;
    page-confidence drops; paragraph-confidence drops within retained pages;
    then the word-count floors over what survived. Born-digital documents skip
    the confidence checks but not the word-count checks. A rejected document
    retains nothing.
    """
    total_paragraphs = sum(len(page.paragraphs) for page in doc.pages)
    meta = doc.metadata

    if (
        not doc.is_born_digital
        and meta.digitization_date is not None
        and cfg.excluded_period_start <= meta.digitization_date <= cfg.excluded_period_end
    ):
        return [], FilterVerdict(
            doc_id=meta.doc_id,
            accepted=False,
            rejection_reasons=[RejectionReason.PERIOD_EXCLUDED],
            retained_paragraph_count=0,
            dropped_paragraph_count=total_paragraphs,
        )

    retained: list[tuple[int, OcrParagraph]] = []
    pages_dropped = False
    paragraphs_dropped = False
    index = 0
    for page in doc.pages:
        if not doc.is_born_digital and page_confidence(page) < cfg.min_page_confidence:
            pages_dropped = True
            index += len(page.paragraphs)
            continue
        for p in page.paragraphs:
            if doc.is_born_digital or paragraph_confidence(p) >= cfg.min_paragraph_confidence:
                retained.append((index, p))
            else:
                paragraphs_dropped = True
            index += 1

    words = sum(len(p.words) for _, p in retained)
    n_retained = len(retained)
    reasons: list[RejectionReason] = []
    if words < cfg.min_doc_words:
        reasons.append(RejectionReason.TOO_FEW_WORDS)
    if n_retained > 0 and words / n_retained < cfg.min_avg_words_per_paragraph:
        reasons.append(RejectionReason.LOW_AVG_PARAGRAPH_LENGTH)

    if reasons:
        if pages_dropped:
            reasons.append(RejectionReason.LOW_PAGE_CONFIDENCE)
        if paragraphs_dropped:
            reasons.append(RejectionReason.LOW_PARAGRAPH_CONFIDENCE)
        return [], FilterVerdict(
            doc_id=meta.doc_id,
            accepted=False,
            rejection_reasons=reasons,
            retained_paragraph_count=0,
            dropped_paragraph_count=total_paragraphs,
        )

    return retained, FilterVerdict(
        doc_id=meta.doc_id,
        accepted=True,
        rejection_reasons=[],
        retained_paragraph_count=n_retained,
        dropped_paragraph_count=total_paragraphs - n_retained,
    )


def load_filter_config(path: str | Path) -> FilterConfig:
    """Load thresholds from a ``key = value`` config file (# for comments)."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return FilterConfig.from_dict(values)
