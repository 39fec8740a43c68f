"""HTTP search API: the middle tier between the UI and the index.

Endpoints: GET /search, GET /documents/{id}, GET /export, GET /health.
Responses are JSON (UTF-8); errors use {"error", "message", "position"?}
with the position present for parse errors. Handlers are stateless over an
immutable segment, so requests may run concurrently.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import time
from typing import Iterator, Sequence

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse, StreamingResponse

from .index.search import execute
from .index.segment import IndexSegment, SearchHit
from .orthography import SpellingConverter
from .query import BlankQuery, DualQuery, ParseError, expand_dual, map_words, merge_hits, parse, pretty

SNIPPET_RADIUS = 80

MODES = ("regular", "extended")
ORTHOGRAPHIES = ("dual", "modern", "historical")
EXPORT_FORMATS = ("csv", "json")
MAX_PAGE_SIZE = 100


class InvalidParameter(ValueError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


def _error(status: int, code: str, message: str, position: int | None = None):
    payload: dict = {"error": code, "message": message}
    if position is not None:
        payload["position"] = position
    return JSONResponse(payload, status_code=status)


def _snippet(
    text: str, highlights: Sequence[tuple[int, int]]
) -> tuple[str, list[tuple[int, int]], int]:
    """Window of the corrected text around the first highlight.

    Returns (snippet, highlight ranges relative to it, window start).
    """
    if highlights:
        h_start, h_end = highlights[0]
        start = max(0, h_start - SNIPPET_RADIUS)
        end = min(len(text), max(h_end + SNIPPET_RADIUS, start + 2 * SNIPPET_RADIUS))
    else:
        start, end = 0, min(len(text), 2 * SNIPPET_RADIUS)
    relative = [
        (max(s, start) - start, min(e, end) - start)
        for s, e in highlights
        if s < end and e > start
    ]
    return text[start:end], relative, start


class SearchEngine:
    """Query execution over one index snapshot."""

    def __init__(
        self, segment: IndexSegment, converter: SpellingConverter | None = None
    ) -> None:
        self.segment = segment
        self.converter = converter or SpellingConverter()

    def run_query(
        self, q: str, mode: str, orthography: str
    ) -> tuple[list[SearchHit], dict]:
        ast = parse(q, mode)
        if orthography == "dual":
            dual: DualQuery = expand_dual(ast, self.converter)
            hits = merge_hits(
                execute(self.segment, dual.modern),
                execute(self.segment, dual.historical),
            )
            echo = {"modern": pretty(dual.modern), "historical": pretty(dual.historical)}
        elif orthography == "modern":
            node = map_words(ast, self.converter.modern)
            hits = execute(self.segment, node)
            echo = {"modern": pretty(node), "historical": None}
        else:
            node = map_words(ast, self.converter.historical_preferred)
            hits = execute(self.segment, node)
            echo = {"modern": None, "historical": pretty(node)}
        return hits, echo

    def filter_hits(
        self,
        hits: Sequence[SearchHit],
        newspaper: str | None,
        date_from: datetime.date | None,
        date_to: datetime.date | None,
    ) -> list[SearchHit]:
        out = []
        for hit in hits:
            record = self.segment.documents[hit.doc_id]
            if newspaper is not None and record.newspaper_id != newspaper:
                continue
            if date_from is not None and record.issue_date < date_from:
                continue
            if date_to is not None and record.issue_date > date_to:
                continue
            out.append(hit)
        return out

    def hit_payload(self, hit: SearchHit) -> dict:
        record = self.segment.documents[hit.doc_id]
        snippet, relative, _ = _snippet(record.corrected_text, hit.highlights)
        return {
            "doc_id": hit.doc_id,
            "score": hit.score,
            "newspaper": record.newspaper_id,
            "issue_date": record.issue_date.isoformat(),
            "page_number": record.page_number,
            "snippet": snippet,
            "highlights": [[s, e] for s, e in relative],
        }

    def document_payload(self, doc_id: int) -> dict | None:
        record = self.segment.document(doc_id)
        if record is None:
            return None
        return {
            "doc_id": record.doc_id,
            "newspaper": record.newspaper_id,
            "issue_date": record.issue_date.isoformat(),
            "page_number": record.page_number,
            "orthography": record.orthography.value,
            "raw_text": record.raw_text,
            "corrected_text": record.corrected_text,
            "correction_log": [c.to_json() for c in record.correction_log],
        }


def _parse_common(
    q: str,
    mode: str,
    orthography: str,
    newspaper: str | None,
    date_from: str | None,
    date_to: str | None,
) -> tuple[str, str, datetime.date | None, datetime.date | None]:
    if mode not in MODES:
        raise InvalidParameter(f"mode must be one of {MODES}")
    if orthography not in ORTHOGRAPHIES:
        raise InvalidParameter(f"orthography must be one of {ORTHOGRAPHIES}")
    parsed_from = parsed_to = None
    try:
        if date_from:
            parsed_from = datetime.date.fromisoformat(date_from)
        if date_to:
            parsed_to = datetime.date.fromisoformat(date_to)
    except ValueError as exc:
        raise InvalidParameter(f"bad date: {exc}") from exc
    if parsed_from and parsed_to and parsed_from > parsed_to:
        raise InvalidParameter("'from' date is after 'to' date")
    return mode, orthography, parsed_from, parsed_to


def _parse_int(value: str, name: str, minimum: int, maximum: int | None = None) -> int:
    try:
        number = int(value)
    except ValueError as exc:
        raise InvalidParameter(f"{name} must be an integer") from exc
    if number < minimum or (maximum is not None and number > maximum):
        bound = f">= {minimum}" if maximum is None else f"in [{minimum}, {maximum}]"
        raise InvalidParameter(f"{name} must be {bound}")
    return number


def create_app(engine: SearchEngine) -> FastAPI:
    app = FastAPI(title="vestnik search api")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "docs": engine.segment.doc_count}

    @app.get("/search")
    def search(
        q: str = "",
        mode: str = "regular",
        orthography: str = "dual",
        page: str = "0",
        size: str = "10",
        newspaper: str | None = None,
        date_from: str | None = Query(default=None, alias="from"),
        date_to: str | None = Query(default=None, alias="to"),
    ):
        started = time.perf_counter()
        try:
            mode, orthography, parsed_from, parsed_to = _parse_common(
                q, mode, orthography, newspaper, date_from, date_to
            )
            page_number = _parse_int(page, "page", 0)
            page_size = _parse_int(size, "size", 1, MAX_PAGE_SIZE)
        except InvalidParameter as exc:
            return _error(422, "invalid_parameter", str(exc))
        try:
            hits, echo = engine.run_query(q, mode, orthography)
        except BlankQuery as exc:
            return _error(400, "blank_query", str(exc))
        except ParseError as exc:
            return _error(400, "parse_error", str(exc), position=exc.position)
        hits = engine.filter_hits(hits, newspaper, parsed_from, parsed_to)
        total = len(hits)
        window = hits[page_number * page_size : (page_number + 1) * page_size]
        return {
            "total": total,
            "hits": [engine.hit_payload(h) for h in window],
            "query_echo": echo,
            "took_ms": round((time.perf_counter() - started) * 1000.0, 3),
        }

    @app.get("/documents/{doc_id}")
    def document(doc_id: str):
        try:
            number = int(doc_id)
        except ValueError:
            return _error(404, "not_found", f"no document {doc_id!r}")
        payload = engine.document_payload(number)
        if payload is None:
            return _error(404, "not_found", f"no document {number}")
        return payload

    @app.get("/export")
    def export(
        q: str = "",
        mode: str = "regular",
        orthography: str = "dual",
        newspaper: str | None = None,
        date_from: str | None = Query(default=None, alias="from"),
        date_to: str | None = Query(default=None, alias="to"),
        format: str = "csv",
    ):
        if format not in EXPORT_FORMATS:
            return _error(415, "unsupported_format", f"format must be one of {EXPORT_FORMATS}")
        try:
            mode, orthography, parsed_from, parsed_to = _parse_common(
                q, mode, orthography, newspaper, date_from, date_to
            )
        except InvalidParameter as exc:
            return _error(422, "invalid_parameter", str(exc))
        try:
            hits, _echo = engine.run_query(q, mode, orthography)
        except BlankQuery as exc:
            return _error(400, "blank_query", str(exc))
        except ParseError as exc:
            return _error(400, "parse_error", str(exc), position=exc.position)
        hits = engine.filter_hits(hits, newspaper, parsed_from, parsed_to)

        if format == "csv":
            def csv_rows() -> Iterator[str]:
                buffer = io.StringIO()
                writer = csv.writer(buffer)
                writer.writerow(
                    ["doc_id", "score", "newspaper", "issue_date", "page_number", "snippet"]
                )
                yield buffer.getvalue()
                for hit in hits:
                    buffer.seek(0)
                    buffer.truncate()
                    payload = engine.hit_payload(hit)
                    writer.writerow(
                        [
                            payload["doc_id"],
                            payload["score"],
                            payload["newspaper"],
                            payload["issue_date"],
                            payload["page_number"],
                            payload["snippet"],
                        ]
                    )
                    yield buffer.getvalue()

            return StreamingResponse(csv_rows(), media_type="text/csv")

        def json_chunks() -> Iterator[str]:
            yield "["
            for i, hit in enumerate(hits):
                prefix = "," if i else ""
                yield prefix + json.dumps(engine.hit_payload(hit), ensure_ascii=False)
            yield "]"

        return StreamingResponse(json_chunks(), media_type="application/json")

    return app


def load_app(index_dir: str, yat_lexicon: str | None = None) -> FastAPI:
    """Convenience factory used by the CLI and demo scripts."""
    from .index.storage import load_index
    from .orthography import YatLexicon

    segment = load_index(index_dir)
    converter = SpellingConverter(
        yat_lexicon=YatLexicon.load(yat_lexicon) if yat_lexicon else None
    )
    return create_app(SearchEngine(segment, converter))
