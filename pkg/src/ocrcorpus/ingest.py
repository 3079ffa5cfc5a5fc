"""Parse METS/ALTO OCR documents and plain-text sources into one document model.

Every document becomes an :class:`OcrDocument`: pages of paragraphs of words,
each word carrying an OCR confidence in [0, 1]. Born-digital sources get
confidence 1.0 on every word. Layout geometry (coordinates, fonts) is ignored;
only text and confidence matter downstream.
"""

from __future__ import annotations

import enum
import xml.etree.ElementTree as ET
import xml.parsers.expat
from dataclasses import dataclass
from datetime import date
from pathlib import Path


class IngestError(Exception):
    """Base class for ingest failures."""


class AltoParseError(IngestError):
    """Malformed ALTO XML."""


class UnsupportedAltoVersionError(IngestError):
    """ALTO namespace outside the supported schema versions."""


class AltoValidationError(IngestError):
    """Well-formed ALTO with invalid content (e.g. confidence out of range)."""


class EncodingError(IngestError):
    """Plain-text input not decodable in the declared encoding."""


class ManifestError(IngestError):
    """Bad collection manifest."""


class SourceKind(str, enum.Enum):
    BOOK = "book"
    NEWSPAPER_SCAN = "newspaper-scan"
    PARLIAMENT_DOC = "parliament-doc"
    WEB_CRAWL = "web-crawl"
    ONLINE_NEWSPAPER = "online-newspaper"
    PERIODICAL = "periodical"
    MICROFILM = "microfilm"
    WIKIPEDIA = "wikipedia"
    PUBLIC_REPORT = "public-report"
    LEGAL = "legal"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class OcrWord:
    """One recognized word with its OCR confidence (0 = none, 1 = certain)."""

    text: str
    confidence: float

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("word text must be non-empty")
        if any(c.isspace() for c in self.text):
            raise ValueError(f"word text contains whitespace: {self.text!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True, slots=True)
class OcrParagraph:
    words: tuple[OcrWord, ...] = ()


@dataclass(frozen=True, slots=True)
class OcrPage:
    paragraphs: tuple[OcrParagraph, ...] = ()


@dataclass(frozen=True, slots=True)
class DocumentMetadata:
    doc_id: str
    source_kind: SourceKind = SourceKind.OTHER
    digitization_date: date | None = None
    language_hint: str | None = None


@dataclass(frozen=True, slots=True)
class OcrDocument:
    metadata: DocumentMetadata
    pages: tuple[OcrPage, ...] = ()
    is_born_digital: bool = False

    def paragraphs(self) -> list[OcrParagraph]:
        """All paragraphs in reading order across pages."""
        return [p for page in self.pages for p in page.paragraphs]

    def word_count(self) -> int:
        return sum(len(p.words) for page in self.pages for p in page.paragraphs)


# Accepted ALTO namespaces (schema versions 2 and 3, plus namespace-less files).
_ALTO_V2_V3 = (
    "http://www.loc.gov/standards/alto/ns-v2#",
    "http://www.loc.gov/standards/alto/ns-v3#",
)


def _expat_error_offset(xml_bytes: bytes) -> tuple[int, int, int]:
    """Byte offset and (line, column) of the first XML error."""
    parser = xml.parsers.expat.ParserCreate()
    try:
        parser.Parse(xml_bytes, True)
    except xml.parsers.expat.ExpatError:
        return parser.ErrorByteIndex, parser.ErrorLineNumber, parser.ErrorColumnNumber
    return -1, -1, -1


def _split_tag(tag: str) -> tuple[str, str]:
    if tag.startswith("{"):
        ns, _, local = tag[1:].partition("}")
        return ns, local
    return "", tag


def _word_confidence(elem: ET.Element, strict: bool) -> float:
    wc = elem.get("WC")
    if wc is None:
        if strict:
            raise AltoValidationError(
                f"String element {elem.get('ID') or elem.get('CONTENT')!r} has no WC attribute"
            )
        return 1.0
    try:
        value = float(wc)
    except ValueError:
        raise AltoValidationError(
            f"String element {elem.get('ID') or elem.get('CONTENT')!r} has non-numeric WC={wc!r}"
        ) from None
    if not 0.0 <= value <= 1.0:
        raise AltoValidationError(
            f"String element {elem.get('ID') or elem.get('CONTENT')!r} has WC={wc} outside [0, 1]"
        )
    return value


def _emit_word(words: list[OcrWord], text: str, confidence: float) -> None:
    # CONTENT may occasionally carry embedded whitespace; split it.
    for piece in text.split():
        words.append(OcrWord(piece, confidence))


def _block_words(block: ET.Element, ns: str, strict: bool) -> list[OcrWord]:
    words: list[OcrWord] = []
    pending: tuple[str, float] | None = None  # (full word, part-1 confidence)
    for string in block.iter(f"{{{ns}}}String" if ns else "String"):
        content = string.get("CONTENT", "")
        conf = _word_confidence(string, strict)
        subs_type = string.get("SUBS_TYPE")
        if subs_type == "HypPart1":
            full = string.get("SUBS_CONTENT") or content
            pending = (full, conf)
            continue
        if subs_type == "HypPart2":
            if pending is not None:
                full, conf1 = pending
                _emit_word(words, full, (conf1 + conf) / 2.0)
                pending = None
            # No pending part: the full word was already emitted with part 1
            # (possibly in a previous block); nothing to add.
            continue
        if pending is not None:
            # Part 1 without a following part 2 in this block; flush as-is.
            _emit_word(words, pending[0], pending[1])
            pending = None
        if content:
            _emit_word(words, content, conf)
    if pending is not None:
        _emit_word(words, pending[0], pending[1])
    return words


def parse_alto(xml_bytes: bytes, metadata: DocumentMetadata, *, strict: bool = False) -> OcrDocument:
    """Parse one ALTO file (schema v2/v3) into an :class:`OcrDocument`.

    Each TextBlock becomes a paragraph, each Page element a page. Word
    confidence is read from the WC attribute; a missing WC defaults to 1.0
    unless ``strict`` is set. Hyphenated line-break pairs (SUBS_TYPE
    HypPart1/HypPart2) are joined into one word.
    """
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        offset, line, col = _expat_error_offset(xml_bytes)
        raise AltoParseError(
            f"malformed ALTO XML at byte offset {offset} (line {line}, column {col}): {exc.msg}"
        ) from exc

    ns, local = _split_tag(root.tag)
    if local != "alto":
        raise AltoParseError(f"root element is <{local}>, expected <alto>")
    if ns and ns not in _ALTO_V2_V3:
        raise UnsupportedAltoVersionError(
            f"unsupported ALTO namespace {ns!r}; supported: {', '.join(_ALTO_V2_V3)}"
        )

    def tag(name: str) -> str:
        return f"{{{ns}}}{name}" if ns else name

    pages = []
    for page_elem in root.iter(tag("Page")):
        paragraphs = []
        for block in page_elem.iter(tag("TextBlock")):
            paragraphs.append(OcrParagraph(tuple(_block_words(block, ns, strict))))
        pages.append(OcrPage(tuple(paragraphs)))
    return OcrDocument(metadata=metadata, pages=tuple(pages), is_born_digital=False)


def parse_plaintext(
    text: str | bytes, metadata: DocumentMetadata, *, encoding: str = "utf-8"
) -> OcrDocument:
    """Parse born-digital plain text: blank lines split paragraphs, whitespace
    splits words, every word gets confidence 1.0.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode(encoding)
        except UnicodeDecodeError as exc:
            raise EncodingError(
                f"undecodable {encoding} byte sequence at offset {exc.start}"
            ) from exc

    paragraphs: list[OcrParagraph] = []
    current: list[OcrWord] = []
    for line in text.splitlines():
        if line.strip():
            current.extend(OcrWord(w, 1.0) for w in line.split())
        elif current:
            paragraphs.append(OcrParagraph(tuple(current)))
            current = []
    if current:
        paragraphs.append(OcrParagraph(tuple(current)))

    pages = (OcrPage(tuple(paragraphs)),) if paragraphs else ()
    return OcrDocument(metadata=metadata, pages=pages, is_born_digital=True)


@dataclass(frozen=True, slots=True)
class ManifestEntry:
    doc_id: str
    source_kind: SourceKind
    digitization_date: date | None
    path: Path


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a collection manifest: one tab-separated line per document with
    fields doc_id, source_kind, digitization_date (empty for none), path.
    Lines starting with '#' are comments. Relative paths resolve against the
    manifest's directory.
    """
    path = Path(path)
    base = path.parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ManifestError(f"{path}:{lineno}: expected 4 tab-separated fields, got {len(fields)}")
            doc_id, kind_s, date_s, doc_path = (f.strip() for f in fields)
            if doc_id in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate doc_id {doc_id!r}")
            seen.add(doc_id)
            try:
                kind = SourceKind(kind_s)
            except ValueError:
                raise ManifestError(f"{path}:{lineno}: unknown source_kind {kind_s!r}") from None
            dig_date = None
            if date_s and date_s != "-":
                try:
                    dig_date = date.fromisoformat(date_s)
                except ValueError:
                    raise ManifestError(f"{path}:{lineno}: bad date {date_s!r}") from None
            entries.append(ManifestEntry(doc_id, kind, dig_date, base / doc_path))
    return entries


def ingest_entry(entry: ManifestEntry, *, strict: bool = False) -> OcrDocument:
    """Parse one manifest entry; .xml files are ALTO, everything else plain text."""
    metadata = DocumentMetadata(
        doc_id=entry.doc_id,
        source_kind=entry.source_kind,
        digitization_date=entry.digitization_date,
    )
    data = entry.path.read_bytes()
    if entry.path.suffix.lower() == ".xml":
        return parse_alto(data, metadata, strict=strict)
    return parse_plaintext(data, metadata)
