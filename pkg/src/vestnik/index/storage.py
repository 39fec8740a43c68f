"""On-disk segment format.

An index directory holds a JSON manifest plus three binary files per
segment: document store, term dictionary and postings. Binary files start
with a 4-byte magic and one format version byte; all integers are
little-endian and all strings length-prefixed UTF-8. Writing is canonical
(terms sorted, no timestamps), so identical segments serialize to identical
bytes.
"""

from __future__ import annotations

import datetime
import json
import struct
from pathlib import Path

from ..correction.corrector import Correction
from ..orthography import OrthographyVersion
from .segment import DocumentRecord, IndexSegment, Posting, PostingList

MAGIC = b"VSTK"
FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"

_ORTHO_CODE = {OrthographyVersion.MODERN: 0, OrthographyVersion.HISTORICAL: 1}
_ORTHO_FROM_CODE = {v: k for k, v in _ORTHO_CODE.items()}


class _Writer:
    def __init__(self) -> None:
        self.parts: list[bytes] = [MAGIC, bytes([FORMAT_VERSION])]

    def u8(self, value: int) -> None:
        self.parts.append(struct.pack("<B", value))

    def u32(self, value: int) -> None:
        self.parts.append(struct.pack("<I", value))

    def u64(self, value: int) -> None:
        self.parts.append(struct.pack("<Q", value))

    def string(self, value: str) -> None:
        raw = value.encode("utf-8")
        self.u32(len(raw))
        self.parts.append(raw)

    def blob(self) -> bytes:
        return b"".join(self.parts)


class _Reader:
    def __init__(self, blob: bytes, path: Path) -> None:
        self.blob = blob
        self.pos = 0
        self.path = path
        magic = self.take(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        version = self.u8()
        if version != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported format version {version}")

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.blob):
            raise ValueError(f"{self.path}: truncated file")
        out = self.blob[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return struct.unpack("<B", self.take(1))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def string(self) -> str:
        return self.take(self.u32()).decode("utf-8")


def _doc_blob(segment: IndexSegment) -> bytes:
    w = _Writer()
    w.u32(segment.doc_count)
    for record, length in zip(segment.documents, segment.doc_lengths):
        w.u32(record.doc_id)
        w.string(record.newspaper_id)
        w.string(record.issue_date.isoformat())
        w.u32(record.page_number)
        w.u8(_ORTHO_CODE[record.orthography])
        w.u32(length)
        w.string(record.raw_text)
        w.string(record.corrected_text)
        if record.correction_log:
            w.string(
                json.dumps(
                    [c.to_json() for c in record.correction_log],
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
        else:
            w.string("")
    return w.blob()


def _postings_blobs(segment: IndexSegment) -> tuple[bytes, bytes]:
    """(term dictionary blob, postings blob), terms in sorted order."""
    post = _Writer()
    terms = _Writer()
    terms.u32(len(segment.postings))
    header_len = len(MAGIC) + 1  # offsets are relative to the payload start
    for term in sorted(segment.postings):
        pl = segment.postings[term]
        offset = sum(len(p) for p in post.parts) - header_len
        post.u32(len(pl.postings))
        for posting in pl.postings:
            post.u32(posting.doc_id)
            post.u32(posting.term_frequency)
            for position in posting.positions:
                post.u32(position)
        length = sum(len(p) for p in post.parts) - header_len - offset
        terms.string(term)
        terms.u32(pl.doc_frequency)
        terms.u64(offset)
        terms.u32(length)
    return terms.blob(), post.blob()


def save_index(segment: IndexSegment, index_dir: str | Path) -> None:
    """Write the segment files and the manifest into ``index_dir``."""
    directory = Path(index_dir)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        base = segment.segment_id
        (directory / f"{base}.docs").write_bytes(_doc_blob(segment))
        terms_blob, post_blob = _postings_blobs(segment)
        (directory / f"{base}.terms").write_bytes(terms_blob)
        (directory / f"{base}.post").write_bytes(post_blob)
        manifest = {
            "format_version": FORMAT_VERSION,
            "segments": [{"segment_id": base, "doc_count": segment.doc_count}],
            "doc_count": segment.doc_count,
        }
        (directory / MANIFEST_NAME).write_text(
            json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
    except OSError as exc:
        raise OSError(f"cannot write index to {directory}: {exc}") from exc


def load_index(index_dir: str | Path) -> IndexSegment:
    """Load the (single) segment listed in the manifest."""
    directory = Path(index_dir)
    manifest_path = directory / MANIFEST_NAME
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read index manifest {manifest_path}: {exc}") from exc
    if manifest.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"{manifest_path}: unsupported manifest version")
    segments = manifest.get("segments", [])
    if len(segments) != 1:
        raise ValueError(
            f"{manifest_path}: expected exactly one segment, found {len(segments)}"
        )
    base = segments[0]["segment_id"]

    docs_reader = _Reader((directory / f"{base}.docs").read_bytes(), directory / f"{base}.docs")
    doc_count = docs_reader.u32()
    documents = []
    doc_lengths = []
    for _ in range(doc_count):
        doc_id = docs_reader.u32()
        newspaper = docs_reader.string()
        issue_date = datetime.date.fromisoformat(docs_reader.string())
        page_number = docs_reader.u32()
        orthography = _ORTHO_FROM_CODE[docs_reader.u8()]
        doc_lengths.append(docs_reader.u32())
        raw_text = docs_reader.string()
        corrected_text = docs_reader.string()
        log_json = docs_reader.string()
        log = (
            tuple(Correction.from_json(item) for item in json.loads(log_json))
            if log_json
            else ()
        )
        documents.append(
            DocumentRecord(
                doc_id=doc_id,
                newspaper_id=newspaper,
                issue_date=issue_date,
                page_number=page_number,
                orthography=orthography,
                raw_text=raw_text,
                corrected_text=corrected_text,
                correction_log=log,
            )
        )

    terms_reader = _Reader(
        (directory / f"{base}.terms").read_bytes(), directory / f"{base}.terms"
    )
    post_blob = (directory / f"{base}.post").read_bytes()
    post_reader = _Reader(post_blob, directory / f"{base}.post")
    header = post_reader.pos  # magic + version prefix
    term_count = terms_reader.u32()
    postings: dict[str, PostingList] = {}
    for _ in range(term_count):
        term = terms_reader.string()
        doc_freq = terms_reader.u32()
        offset = terms_reader.u64()
        terms_reader.u32()  # byte length, kept for sequential readers
        post_reader.pos = header + offset
        count = post_reader.u32()
        entries = []
        for _ in range(count):
            doc_id = post_reader.u32()
            tf = post_reader.u32()
            positions = tuple(post_reader.u32() for _ in range(tf))
            entries.append(Posting(doc_id, tf, positions))
        pl = PostingList(term, tuple(entries))
        if pl.doc_frequency != doc_freq:
            raise ValueError(f"{directory}: doc_freq mismatch for term {term!r}")
        postings[term] = pl

    return IndexSegment(
        segment_id=base,
        documents=tuple(documents),
        doc_lengths=tuple(doc_lengths),
        postings=postings,
    )
