"""Index segment types and the single-writer builder.

A committed segment is immutable: the builder tokenizes each document's
corrected text, records ordinal positions for word and number tokens
(punctuation is not indexed) and freezes the statistics the ranking
formula needs.
"""

from __future__ import annotations

import dataclasses
import datetime
from dataclasses import dataclass

from ..analyzer import TokenKind, tokenize
from ..correction.corrector import Correction
from ..orthography import OrthographyVersion


class BuilderSealed(RuntimeError):
    """add_document was called after commit."""


@dataclass(frozen=True)
class DocumentRecord:
    doc_id: int
    newspaper_id: str
    issue_date: datetime.date
    page_number: int
    orthography: OrthographyVersion
    raw_text: str
    corrected_text: str
    correction_log: tuple[Correction, ...] = ()


@dataclass(frozen=True)
class Posting:
    doc_id: int
    term_frequency: int
    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.term_frequency != len(self.positions) or not self.positions:
            raise ValueError("term_frequency must equal the position count (> 0)")
        if list(self.positions) != sorted(self.positions):
            raise ValueError("positions must be sorted")


@dataclass(frozen=True)
class PostingList:
    term: str
    postings: tuple[Posting, ...]

    def __post_init__(self) -> None:
        ids = [p.doc_id for p in self.postings]
        if ids != sorted(ids) or len(set(ids)) != len(ids):
            raise ValueError("postings must be sorted by unique doc_id")

    @property
    def doc_frequency(self) -> int:
        return len(self.postings)


@dataclass(frozen=True)
class SearchHit:
    doc_id: int
    score: float
    highlights: tuple[tuple[int, int], ...] = ()


def index_terms(text: str) -> list[str]:
    """Lowercased word and number tokens in document order."""
    return [
        t.surface.lower()
        for t in tokenize(text)
        if t.kind in (TokenKind.WORD, TokenKind.NUMBER)
    ]


@dataclass(frozen=True)
class IndexSegment:
    """Immutable committed segment."""

    segment_id: str
    documents: tuple[DocumentRecord, ...]
    doc_lengths: tuple[int, ...]
    postings: dict  # term -> PostingList

    @property
    def doc_count(self) -> int:
        return len(self.documents)

    @property
    def avg_doc_length(self) -> float:
        if not self.doc_lengths:
            return 0.0
        return sum(self.doc_lengths) / len(self.doc_lengths)

    def doc_frequency(self, term: str) -> int:
        pl = self.postings.get(term)
        return pl.doc_frequency if pl else 0

    def posting_list(self, term: str) -> PostingList | None:
        return self.postings.get(term)

    def document(self, doc_id: int) -> DocumentRecord | None:
        if 0 <= doc_id < len(self.documents):
            return self.documents[doc_id]
        return None

    def all_doc_ids(self) -> set[int]:
        return set(range(len(self.documents)))

    def verify_statistics(self) -> None:
        """Recompute everything from the document store and compare."""
        rebuilt = IndexBuilder(self.segment_id)
        for record in self.documents:
            rebuilt.add_document(record)
        other = rebuilt.commit()
        if other.doc_lengths != self.doc_lengths:
            raise AssertionError("doc_lengths inconsistent with documents")
        if set(other.postings) != set(self.postings):
            raise AssertionError("term dictionary inconsistent with documents")
        for term, pl in other.postings.items():
            if pl != self.postings[term]:
                raise AssertionError(f"postings for {term!r} inconsistent")


class IndexBuilder:
    """Single-writer builder; commit seals it and yields the segment."""

    def __init__(self, segment_id: str = "seg0") -> None:
        self.segment_id = segment_id
        self._documents: list[DocumentRecord] = []
        self._doc_lengths: list[int] = []
        self._postings: dict[str, list[tuple[int, list[int]]]] = {}
        self._sealed = False

    def add_document(self, record: DocumentRecord) -> int:
        """Index one document; the record's doc_id is replaced sequentially."""
        if self._sealed:
            raise BuilderSealed("cannot add documents after commit")
        doc_id = len(self._documents)
        record = dataclasses.replace(record, doc_id=doc_id)
        terms = index_terms(record.corrected_text)
        self._documents.append(record)
        self._doc_lengths.append(len(terms))
        for position, term in enumerate(terms):
            entry = self._postings.setdefault(term, [])
            if entry and entry[-1][0] == doc_id:
                entry[-1][1].append(position)
            else:
                entry.append((doc_id, [position]))
        return doc_id

    def commit(self) -> IndexSegment:
        if self._sealed:
            raise BuilderSealed("builder already committed")
        self._sealed = True
        postings = {
            term: PostingList(
                term,
                tuple(
                    Posting(doc_id, len(positions), tuple(positions))
                    for doc_id, positions in entries
                ),
            )
            for term, entries in sorted(self._postings.items())
        }
        return IndexSegment(
            segment_id=self.segment_id,
            documents=tuple(self._documents),
            doc_lengths=tuple(self._doc_lengths),
            postings=postings,
        )
