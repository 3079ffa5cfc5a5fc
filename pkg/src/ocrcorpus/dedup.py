"""Exact paragraph deduplication across the whole collection.

A paragraph survives iff its cleaned text has not appeared earlier, in
global manifest order (first occurrence wins). Two entry points:

* :func:`dedup_stream` — sequential, in-memory fingerprint store.
* :func:`dedup_sharded` — file-based: paragraphs are routed to shards by
  fingerprint, shards are resolved independently (optionally in parallel),
  and survivors are merged back into global order. The survivor set is
  identical to :func:`dedup_stream` for any shard count.

Keys are 128-bit fingerprints of the exact cleaned text (case-sensitive).
An optional verification mode re-compares full text on every fingerprint
match to prove the digest width is doing its job.
"""

from __future__ import annotations

import heapq
import json
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from ocrcorpus.cleaning import CleanParagraph
from ocrcorpus.fingerprint import FINGERPRINT_VERSION, fingerprint, shard_of

_MAX_SEQ = 2**63 - 1

# Default in-memory store bound; ~16 bytes per key plus set overhead. Beyond
# this, callers are told to switch to the sharded path.
DEFAULT_STORE_CAPACITY = 50_000_000


class DedupCapacityError(RuntimeError):
    """In-memory fingerprint store is full; rerun with dedup_sharded."""


class FingerprintCollisionError(RuntimeError):
    """Two distinct texts produced the same fingerprint (verification mode)."""


class SequenceOverflowError(RuntimeError):
    """Global sequence number exceeds the 63-bit budget."""


class ShardIOError(RuntimeError):
    """I/O failure while reading or writing a named shard."""


@dataclass(slots=True)
class DedupStats:
    input_paragraphs: int = 0
    unique_paragraphs: int = 0
    removed_paragraphs: int = 0
    fingerprint_version: str = FINGERPRINT_VERSION

    def check(self) -> None:
        assert self.input_paragraphs == self.unique_paragraphs + self.removed_paragraphs

    def to_json(self) -> str:
        return json.dumps(
            {
                "input_paragraphs": self.input_paragraphs,
                "unique_paragraphs": self.unique_paragraphs,
                "removed_paragraphs": self.removed_paragraphs,
                "fingerprint_version": self.fingerprint_version,
            },
            sort_keys=True,
        )


class FingerprintStore:
    """Bounded insert-if-absent set of fingerprints.

    Thread-safe; in verification mode it also keeps the first text per
    fingerprint and raises on any digest collision.
    """

    def __init__(self, capacity: int = DEFAULT_STORE_CAPACITY, verify: bool = False):
        self.capacity = capacity
        self.verify = verify
        self._lock = threading.Lock()
        self._seen: set[bytes] = set()
        self._texts: dict[bytes, str] = {}

    def __len__(self) -> int:
        return len(self._seen)

    def add_if_absent(self, fp: bytes, text: str | None = None) -> bool:
        """True if ``fp`` was new. ``text`` is required in verification mode."""
        with self._lock:
            if fp in self._seen:
                if self.verify:
                    if text is None:
                        raise ValueError("verification mode needs the paragraph text")
                    if self._texts[fp] != text:
                        raise FingerprintCollisionError(
                            f"fingerprint {fp.hex()} maps to two distinct texts"
                        )
                return False
            if len(self._seen) >= self.capacity:
                raise DedupCapacityError(
                    f"fingerprint store reached its capacity of {self.capacity} entries; "
                    "rerun deduplication with dedup_sharded and a shard_count sized to "
                    "the collection"
                )
            self._seen.add(fp)
            if self.verify:
                if text is None:
                    raise ValueError("verification mode needs the paragraph text")
                self._texts[fp] = text
            return True


def dedup_stream(
    paragraphs: Iterable[CleanParagraph],
    *,
    store: FingerprintStore | None = None,
    verify: bool = False,
) -> tuple[Iterator[CleanParagraph], DedupStats]:
    """First-occurrence-wins dedup over an ordered paragraph stream.

    Returns a lazy survivor iterator plus a stats object that is filled in
    as the iterator is consumed (final once it is exhausted).
    """
    if store is None:
        store = FingerprintStore(verify=verify)
    stats = DedupStats()

    def generate() -> Iterator[CleanParagraph]:
        for p in paragraphs:
            stats.input_paragraphs += 1
            if store.add_if_absent(fingerprint(p.text), p.text):
                stats.unique_paragraphs += 1
                yield p
            else:
                stats.removed_paragraphs += 1

    return generate(), stats


def _route_to_shards(
    paragraph_files: list[Path], shard_count: int, scratch: Path
) -> tuple[list[Path], int]:
    """Pass 1: append each input line to its fingerprint-routed shard file."""
    shard_paths = [scratch / f"shard_{k:05d}.jsonl" for k in range(shard_count)]
    handles = []
    try:
        for sp in shard_paths:
            try:
                handles.append(open(sp, "w", encoding="utf-8"))
            except OSError as exc:
                raise ShardIOError(f"cannot open shard file {sp}: {exc}") from exc
        total = 0
        fallback_seq = 0
        for path in paragraph_files:
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.rstrip("\n")
                    if not line:
                        continue
                    obj = json.loads(line)
                    seq = obj.get("seq", fallback_seq)
                    if seq > _MAX_SEQ:
                        raise SequenceOverflowError(f"sequence number {seq} exceeds 2**63-1")
                    fp = fingerprint(obj["text"])
                    k = shard_of(fp, shard_count)
                    record = json.dumps({"f": fp.hex(), "q": seq, "r": line}, ensure_ascii=False)
                    try:
                        handles[k].write(record + "\n")
                    except OSError as exc:
                        raise ShardIOError(f"cannot write shard file {shard_paths[k]}: {exc}") from exc
                    fallback_seq = seq + 1
                    total += 1
    finally:
        for h in handles:
            h.close()
    return shard_paths, total


def _resolve_shard(args: tuple[str, str, bool]) -> tuple[str, int, int]:
    """Pass 2: keep the lowest-sequence record per fingerprint in one shard."""
    shard_path, out_path, verify = args
    first: dict[str, tuple[int, str]] = {}
    texts: dict[str, str] = {}
    count = 0
    try:
        with open(shard_path, encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                fp, seq = rec["f"], rec["q"]
                count += 1
                if verify:
                    text = json.loads(rec["r"])["text"]
                    if fp in texts and texts[fp] != text:
                        raise FingerprintCollisionError(
                            f"fingerprint {fp} maps to two distinct texts"
                        )
                    texts[fp] = text
                if fp not in first or seq < first[fp][0]:
                    first[fp] = (seq, rec["r"])
        survivors = sorted(first.values())
        with open(out_path, "w", encoding="utf-8") as out:
            for seq, raw in survivors:
                out.write(json.dumps({"q": seq, "r": raw}, ensure_ascii=False) + "\n")
    except OSError as exc:
        raise ShardIOError(f"shard {shard_path}: {exc}") from exc
    return out_path, count, len(survivors)


def _iter_shard_survivors(path: Path) -> Iterator[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            yield rec["q"], rec["r"]


def dedup_sharded(
    paragraph_files: list[Path | str],
    shard_count: int,
    output_path: Path | str,
    *,
    scratch_dir: Path | str | None = None,
    workers: int = 1,
    verify: bool = False,
    keep_scratch: bool = False,
) -> tuple[Path, DedupStats]:
    """File-based dedup equivalent to :func:`dedup_stream` over the
    concatenated inputs, for any ``shard_count >= 1``.

    Input files are JSON-lines of cleaned paragraphs carrying a global ``seq``
    field (assigned from position when missing). Survivors are written to
    ``output_path`` in global sequence order, one original line each.
    """
    if shard_count < 1:
        raise ValueError("shard_count must be >= 1")
    paragraph_files = [Path(p) for p in paragraph_files]
    output_path = Path(output_path)
    scratch = Path(scratch_dir) if scratch_dir else output_path.parent / "dedup_scratch"
    scratch.mkdir(parents=True, exist_ok=True)

    shard_paths, total = _route_to_shards(paragraph_files, shard_count, scratch)

    jobs = [
        (str(sp), str(scratch / f"survivors_{k:05d}.jsonl"), verify)
        for k, sp in enumerate(shard_paths)
    ]
    if workers > 1 and shard_count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_resolve_shard, jobs))
    else:
        results = [_resolve_shard(j) for j in jobs]

    stats = DedupStats(
        input_paragraphs=total,
        unique_paragraphs=sum(r[2] for r in results),
        removed_paragraphs=total - sum(r[2] for r in results),
    )
    stats.check()

    streams = [_iter_shard_survivors(Path(r[0])) for r in results]
    with open(output_path, "w", encoding="utf-8") as out:
        for _seq, raw in heapq.merge(*streams):
            out.write(raw + "\n")

    if not keep_scratch:
        for k, sp in enumerate(shard_paths):
            sp.unlink(missing_ok=True)
            (scratch / f"survivors_{k:05d}.jsonl").unlink(missing_ok=True)
        try:
            scratch.rmdir()
        except OSError:
            pass
    return output_path, stats
