"""Fingerprinting for exact paragraph deduplication.

A fingerprint is a fixed, versioned 128-bit digest of a cleaned paragraph's
text. Two kernel implementations exist: a compiled extension
(``ocrcorpus._fpcore``) and a pure-Python fallback (``ocrcorpus._fp_py``)
that produce identical digests. The compiled one is preferred at import
time; set ``OCRCORPUS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

FINGERPRINT_VERSION = "mm3-x64-128/1"
FINGERPRINT_BYTES = 16

if os.environ.get("OCRCORPUS_PURE_PYTHON") == "1":
    from ocrcorpus import _fp_py as _impl

    KERNEL = "pure-python"
else:
    try:
        from ocrcorpus import _fpcore as _impl  # type: ignore[no-redef]

        KERNEL = "compiled"
    except ImportError:
        from ocrcorpus import _fp_py as _impl  # type: ignore[no-redef]

        KERNEL = "pure-python"


def fingerprint(text: str) -> bytes:
    """128-bit digest of a paragraph text (UTF-8 encoded)."""
    return _impl.digest128(text.encode("utf-8"))


def fingerprint_bytes(data: bytes) -> bytes:
    """128-bit digest of raw bytes."""
    return _impl.digest128(data)


def fingerprint_many(texts: list[str]) -> list[bytes]:
    """Batched :func:`fingerprint`; one digest per input string."""
    return _impl.digest128_many(texts)


def shard_of(fp: bytes, shard_count: int) -> int:
    """Route a fingerprint to one of ``shard_count`` shards."""
    return int.from_bytes(fp[:8], "little") % shard_count
