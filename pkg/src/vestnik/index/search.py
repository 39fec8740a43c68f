"""Query evaluation over a committed segment.

Match queries rank with BM25 (k1 = 1.2, b = 0.75, the usual match-query
defaults). Phrase matching requires consecutive positions, proximity is
unordered distance between distinct positions, and boolean trees evaluate
set-wise with ranking supplied by the tree's positive terms.
"""

from __future__ import annotations

import datetime
import math
from typing import Iterable, Sequence

from ..analyzer import TokenKind, tokenize
from .segment import DocumentRecord, IndexSegment, SearchHit

K1 = 1.2
B = 0.75


class EmptyQuery(ValueError):
    """A search operation received no usable terms."""


def bm25_idf(doc_count: int, doc_frequency: int) -> float:
    return math.log(1.0 + (doc_count - doc_frequency + 0.5) / (doc_frequency + 0.5))


def match_search(
    segment: IndexSegment, terms: Sequence[str], top_k: int | None = None
) -> list[SearchHit]:
    """BM25-ranked documents containing at least one query term.

    Duplicated query terms contribute once per occurrence. Ties rank by
    ascending doc_id. ``top_k=None`` returns every matching document.
    """
    if not terms:
        raise EmptyQuery("match query needs at least one term")
    if top_k is not None and top_k < 1:
        raise ValueError("top_k must be >= 1")
    scores: dict[int, float] = {}
    n = segment.doc_count
    avg = segment.avg_doc_length
    for term in terms:
        pl = segment.posting_list(term)
        if pl is None:
            continue
        idf = bm25_idf(n, pl.doc_frequency)
        for posting in pl.postings:
            tf = posting.term_frequency
            length_norm = 1.0 - B + B * (segment.doc_lengths[posting.doc_id] / avg)
            part = idf * tf * (K1 + 1.0) / (tf + K1 * length_norm)
            scores[posting.doc_id] = scores.get(posting.doc_id, 0.0) + part
    hits = [SearchHit(doc_id, score) for doc_id, score in scores.items()]
    hits.sort(key=lambda h: (-h.score, h.doc_id))
    return hits[:top_k] if top_k is not None else hits


def phrase_search(
    segment: IndexSegment, terms: Sequence[str]
) -> dict[int, list[int]]:
    """Documents containing the terms at consecutive positions.

    Returns doc_id -> sorted start ordinals of each phrase occurrence.
    """
    if len(terms) < 2:
        raise EmptyQuery("phrase query needs at least two terms")
    lists = []
    for term in terms:
        pl = segment.posting_list(term)
        if pl is None:
            return {}
        lists.append({p.doc_id: set(p.positions) for p in pl.postings})
    common = set(lists[0])
    for positions in lists[1:]:
        common &= set(positions)
    out: dict[int, list[int]] = {}
    for doc_id in sorted(common):
        starts = [
            p
            for p in lists[0][doc_id]
            if all(p + offset in lists[offset][doc_id] for offset in range(1, len(terms)))
        ]
        if starts:
            out[doc_id] = sorted(starts)
    return out


def proximity_search(
    segment: IndexSegment, term_a: str, term_b: str, max_distance: int
) -> set[int]:
    """Documents where the two terms occur within ``max_distance`` ordinals.

    Positions must be distinct, so a single occurrence never matches itself
    when ``term_a == term_b``.
    """
    if max_distance < 1:
        raise ValueError("max_distance must be >= 1")
    pa = segment.posting_list(term_a)
    pb = segment.posting_list(term_b)
    if pa is None or pb is None:
        return set()
    positions_b = {p.doc_id: p.positions for p in pb.postings}
    matched: set[int] = set()
    for posting in pa.postings:
        other = positions_b.get(posting.doc_id)
        if other is None:
            continue
        for x in posting.positions:
            if any(x != y and abs(x - y) <= max_distance for y in other):
                matched.add(posting.doc_id)
                break
    return matched


def _filter_docs(segment: IndexSegment, field: str, value: str) -> set[int]:
    out: set[int] = set()
    for record in segment.documents:
        if field == "newspaper":
            if record.newspaper_id == value:
                out.add(record.doc_id)
        elif field == "date_from":
            if record.issue_date >= datetime.date.fromisoformat(value):
                out.add(record.doc_id)
        elif field == "date_to":
            if record.issue_date <= datetime.date.fromisoformat(value):
                out.add(record.doc_id)
        else:
            raise ValueError(f"unknown filter field {field!r}")
    return out


def boolean_eval(segment: IndexSegment, ast) -> set[int]:
    """Set evaluation of a query tree over the segment's documents."""
    from ..query import And, FieldFilter, Not, Or, Phrase, Proximity, Term

    if isinstance(ast, Term):
        pl = segment.posting_list(ast.word)
        return {p.doc_id for p in pl.postings} if pl else set()
    if isinstance(ast, Phrase):
        return set(phrase_search(segment, ast.words))
    if isinstance(ast, Proximity):
        return proximity_search(segment, ast.first, ast.second, ast.distance)
    if isinstance(ast, FieldFilter):
        return _filter_docs(segment, ast.field, ast.value)
    if isinstance(ast, Not):
        return segment.all_doc_ids() - boolean_eval(segment, ast.child)
    if isinstance(ast, And):
        result = boolean_eval(segment, ast.children[0])
        for child in ast.children[1:]:
            result &= boolean_eval(segment, child)
        return result
    if isinstance(ast, Or):
        result = boolean_eval(segment, ast.children[0])
        for child in ast.children[1:]:
            result |= boolean_eval(segment, child)
        return result
    raise TypeError(f"not a query node: {ast!r}")


def positive_terms(ast) -> list[str]:
    """Words usable for ranking: every term not under an odd number of NOTs."""
    from ..query import And, FieldFilter, Not, Or, Phrase, Proximity, Term

    out: list[str] = []

    def walk(node, negated: bool) -> None:
        if isinstance(node, Term):
            if not negated:
                out.append(node.word)
        elif isinstance(node, Phrase):
            if not negated:
                out.extend(node.words)
        elif isinstance(node, Proximity):
            if not negated:
                out.extend((node.first, node.second))
        elif isinstance(node, FieldFilter):
            return
        elif isinstance(node, Not):
            walk(node.child, not negated)
        elif isinstance(node, (And, Or)):
            for child in node.children:
                walk(child, negated)
        else:
            raise TypeError(f"not a query node: {node!r}")

    walk(ast, False)
    return out


def _positive_phrases(ast) -> list[tuple[str, ...]]:
    from ..query import And, Not, Or, Phrase

    out: list[tuple[str, ...]] = []

    def walk(node, negated: bool) -> None:
        if isinstance(node, Phrase):
            if not negated:
                out.append(node.words)
        elif isinstance(node, Not):
            walk(node.child, not negated)
        elif isinstance(node, (And, Or)):
            for child in node.children:
                walk(child, negated)

    walk(ast, False)
    return out


def highlight(
    record: DocumentRecord,
    terms: Iterable[str] = (),
    phrase_spans: Iterable[tuple[int, int]] = (),
) -> tuple[tuple[int, int], ...]:
    """Character ranges to mark in the corrected text.

    ``terms`` highlights every token whose lowercase surface matches;
    ``phrase_spans`` are (start ordinal, end ordinal) pairs over indexed
    tokens, highlighted as whole spans. Overlapping or touching ranges are
    merged.
    """
    wanted = {t.lower() for t in terms}
    indexed = [
        t
        for t in tokenize(record.corrected_text)
        if t.kind in (TokenKind.WORD, TokenKind.NUMBER)
    ]
    ranges: list[tuple[int, int]] = []
    for token in indexed:
        if token.surface.lower() in wanted:
            ranges.append((token.start, token.end))
    for start_ord, end_ord in phrase_spans:
        if 0 <= start_ord < end_ord <= len(indexed):
            ranges.append((indexed[start_ord].start, indexed[end_ord - 1].end))
    merged: list[list[int]] = []
    for start, end in sorted(ranges):
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return tuple((s, e) for s, e in merged)


def execute(segment: IndexSegment, ast, top_k: int | None = None) -> list[SearchHit]:
    """Evaluate any query tree and rank the result.

    The document set comes from boolean evaluation; scores come from BM25
    over the tree's positive terms (documents matching only via negations
    or filters score 0). Highlights cover positive terms and phrase spans.
    """
    docs = boolean_eval(segment, ast)
    if not docs:
        return []
    terms = positive_terms(ast)
    scores: dict[int, float] = {doc_id: 0.0 for doc_id in docs}
    if terms:
        for hit in match_search(segment, terms):
            if hit.doc_id in scores:
                scores[hit.doc_id] = hit.score
    phrase_positions: dict[int, list[tuple[int, int]]] = {}
    for words in _positive_phrases(ast):
        for doc_id, starts in phrase_search(segment, words).items():
            if doc_id in scores:
                spans = phrase_positions.setdefault(doc_id, [])
                spans.extend((s, s + len(words)) for s in starts)
    hits = []
    for doc_id in sorted(docs):
        record = segment.documents[doc_id]
        ranges = highlight(record, terms, phrase_positions.get(doc_id, ()))
        hits.append(SearchHit(doc_id, scores[doc_id], ranges))
    hits.sort(key=lambda h: (-h.score, h.doc_id))
    return hits[:top_k] if top_k is not None else hits
