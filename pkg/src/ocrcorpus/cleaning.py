"""Character-level text normalization.

Makes encoding and special-character use consistent before deduplication
and tokenization: Unicode NFC, control/zero-width removal, canonical
quote/dash mapping, whitespace collapse. Cleaning is total (never fails)
and idempotent. The quote/dash mapping ships as a versioned data file
(``data/charmap.tsv``) so results are bit-reproducible.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ocrcorpus.ingest import OcrParagraph, SourceKind

CHARMAP_VERSION = "1"


@dataclass(frozen=True, slots=True)
class CleanParagraph:
    """Normalized text unit; the atom of deduplication and corpus statistics."""

    doc_id: str
    paragraph_index: int
    text: str
    word_count: int
    source_kind: SourceKind
    language: str | None = None

    def utf8_size(self) -> int:
        return len(self.text.encode("utf-8"))


def parse_charmap(lines) -> dict[int, str]:
    table: dict[int, str] = {}
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        cp_s, _, replacement = line.partition("\t")
        if not cp_s.startswith("U+"):
            raise ValueError(f"charmap line {lineno}: bad codepoint {cp_s!r}")
        table[int(cp_s[2:], 16)] = replacement
    return table


def load_charmap(path: str | Path | None = None) -> dict[int, str]:
    """Load a codepoint -> replacement table; ``None`` loads the shipped one."""
    if path is None:
        text = resources.files("ocrcorpus.data").joinpath("charmap.tsv").read_text("utf-8")
        return parse_charmap(text.splitlines())
    with open(path, encoding="utf-8") as fh:
        return parse_charmap(fh)


@lru_cache(maxsize=1)
def _default_charmap() -> dict[int, str]:
    return load_charmap(None)


def _strip_format_chars(s: str) -> str:
    # Drop control (Cc) and format (Cf) characters: zero-width spaces/joiners,
    # BOM, soft hyphens, directional marks. Whitespace-class characters are
    # kept here and handled by the collapse step.
    return "".join(
        c for c in s if c.isspace() or unicodedata.category(c) not in ("Cc", "Cf")
    )


def clean_text(raw: str, charmap: dict[int, str] | None = None) -> str:
    """Normalize one paragraph of text.

    In order: NFC normalization; control/zero-width removal; canonical
    quote/dash mapping; whitespace collapse to single spaces; trim. The
    removal and mapping steps can re-expose composable sequences, so NFC is
    re-applied before the collapse to keep the output in normal form.
    """
    if charmap is None:
        charmap = _default_charmap()
    s = unicodedata.normalize("NFC", raw)
    s = _strip_format_chars(s)
    s = s.translate(charmap)
    s = unicodedata.normalize("NFC", s)
    return " ".join(s.split())


def clean_paragraph(
    raw: OcrParagraph | str,
    *,
    doc_id: str,
    paragraph_index: int,
    source_kind: SourceKind = SourceKind.OTHER,
    language: str | None = None,
    charmap: dict[int, str] | None = None,
) -> CleanParagraph:
    """Clean an OCR paragraph (words joined by single spaces) or a raw string."""
    if isinstance(raw, OcrParagraph):
        raw = " ".join(w.text for w in raw.words)
    text = clean_text(raw, charmap)
    return CleanParagraph(
        doc_id=doc_id,
        paragraph_index=paragraph_index,
        text=text,
        word_count=len(text.split()),
        source_kind=source_kind,
        language=language,
    )


def paragraph_to_obj(p: CleanParagraph, seq: int | None = None) -> dict:
    obj = {
        "doc_id": p.doc_id,
        "paragraph_index": p.paragraph_index,
        "text": p.text,
        "word_count": p.word_count,
        "source_kind": p.source_kind.value,
        "language": p.language,
    }
    if seq is not None:
        obj["seq"] = seq
    return obj


def paragraph_from_obj(obj: dict) -> CleanParagraph:
    return CleanParagraph(
        doc_id=obj["doc_id"],
        paragraph_index=obj["paragraph_index"],
        text=obj["text"],
        word_count=obj["word_count"],
        source_kind=SourceKind(obj["source_kind"]),
        language=obj.get("language"),
    )
