"""HTTP API: search, documents, export, error payloads."""

import csv
import datetime
import io
import json

import pytest
from fastapi.testclient import TestClient

from vestnik.index.segment import DocumentRecord, IndexBuilder
from vestnik.orthography import OrthographyVersion, SpellingConverter
from vestnik.service import SearchEngine, create_app


def record(doc_id, text, newspaper="в1", date="1900-01-01", page=1):
    return DocumentRecord(
        doc_id=doc_id,
        newspaper_id=newspaper,
        issue_date=datetime.date.fromisoformat(date),
        page_number=page,
        orthography=OrthographyVersion.MODERN,
        raw_text=text,
        corrected_text=text,
    )


@pytest.fixture
def client():
    builder = IndexBuilder()
    texts = [
        ("миръ и народъ", "Марица", "1888-05-02"),
        ("мир на земята", "Марица", "1950-01-15"),
        ("вода и хлябъ", "Зора", "1895-09-09"),
        ("народно събрание днесъ", "Зора", "1899-12-31"),
    ]
    for i, (text, newspaper, date) in enumerate(texts):
        builder.add_document(record(i, text, newspaper, date, page=i + 1))
    engine = SearchEngine(builder.commit(), SpellingConverter())
    return TestClient(create_app(engine))


class TestHealth:
    def test_ok(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok", "docs": 4}


class TestSearch:
    def test_blank_query(self, client):
        response = client.get("/search", params={"q": ""})
        assert response.status_code == 400
        assert response.json()["error"] == "blank_query"

    def test_dual_reaches_historical_spelling(self, client):
        response = client.get("/search", params={"q": "мир", "orthography": "dual"})
        assert response.status_code == 200
        body = response.json()
        ids = [h["doc_id"] for h in body["hits"]]
        assert 0 in ids and 1 in ids  # "миръ" and "мир" documents

    def test_modern_only_misses_historical(self, client):
        response = client.get("/search", params={"q": "мир", "orthography": "modern"})
        ids = [h["doc_id"] for h in response.json()["hits"]]
        assert ids == [1]

    def test_size_bound(self, client):
        response = client.get("/search", params={"q": "мир", "size": "101"})
        assert response.status_code == 422
        assert response.json()["error"] == "invalid_parameter"

    def test_bad_page(self, client):
        assert client.get("/search", params={"q": "а", "page": "-1"}).status_code == 422
        assert client.get("/search", params={"q": "а", "page": "x"}).status_code == 422

    def test_bad_mode_and_orthography(self, client):
        assert client.get("/search", params={"q": "а", "mode": "fuzzy"}).status_code == 422
        assert (
            client.get("/search", params={"q": "а", "orthography": "old"}).status_code
            == 422
        )

    def test_bad_dates(self, client):
        assert (
            client.get("/search", params={"q": "а", "from": "189"}).status_code == 422
        )
        assert (
            client.get(
                "/search", params={"q": "а", "from": "1900-01-01", "to": "1890-01-01"}
            ).status_code
            == 422
        )

    def test_parse_error_payload(self, client):
        response = client.get(
            "/search", params={"q": "мир AND", "mode": "extended"}
        )
        assert response.status_code == 400
        body = response.json()
        assert body["error"] == "parse_error"
        assert body["position"] == 7

    def test_newspaper_filter(self, client):
        response = client.get(
            "/search",
            params={"q": "мир народ вода събрание", "newspaper": "Зора"},
        )
        ids = [h["doc_id"] for h in response.json()["hits"]]
        assert set(ids) == {2, 3}

    def test_date_filters(self, client):
        response = client.get(
            "/search",
            params={
                "q": "мир народ вода събрание",
                "from": "1890-01-01",
                "to": "1900-01-01",
            },
        )
        ids = {h["doc_id"] for h in response.json()["hits"]}
        assert ids == {2, 3}

    def test_snippet_contains_highlighted_term(self, client):
        response = client.get("/search", params={"q": "мир"})
        hit = next(h for h in response.json()["hits"] if h["doc_id"] == 0)
        start, end = hit["highlights"][0]
        assert hit["snippet"][start:end].lower() == "миръ"

    def test_pagination_slices(self, client):
        full = client.get("/search", params={"q": "мир народ вода събрание"}).json()
        page0 = client.get(
            "/search", params={"q": "мир народ вода събрание", "size": "2", "page": "0"}
        ).json()
        page1 = client.get(
            "/search", params={"q": "мир народ вода събрание", "size": "2", "page": "1"}
        ).json()
        assert page0["total"] == page1["total"] == full["total"]
        combined = [h["doc_id"] for h in page0["hits"] + page1["hits"]]
        assert combined == [h["doc_id"] for h in full["hits"]]

    def test_extended_query(self, client):
        response = client.get(
            "/search",
            params={"q": "народно AND NOT вода", "mode": "extended"},
        )
        ids = [h["doc_id"] for h in response.json()["hits"]]
        assert ids == [3]

    def test_query_echo(self, client):
        body = client.get(
            "/search", params={"q": "мир", "orthography": "dual"}
        ).json()
        assert body["query_echo"]["modern"] == "мир"
        assert body["query_echo"]["historical"] == "миръ"


class TestDocuments:
    def test_existing(self, client):
        response = client.get("/documents/0")
        assert response.status_code == 200
        body = response.json()
        assert body["raw_text"] == body["corrected_text"] == "миръ и народъ"
        assert body["newspaper"] == "Марица"

    def test_unknown(self, client):
        assert client.get("/documents/99").status_code == 404
        assert client.get("/documents/abc").status_code == 404


class TestExport:
    def test_csv_rows_match_search_order(self, client):
        search = client.get("/search", params={"q": "мир народ"}).json()
        response = client.get("/export", params={"q": "мир народ", "format": "csv"})
        assert response.status_code == 200
        rows = list(csv.reader(io.StringIO(response.text)))
        assert rows[0] == [
            "doc_id",
            "score",
            "newspaper",
            "issue_date",
            "page_number",
            "snippet",
        ]
        assert [int(r[0]) for r in rows[1:]] == [h["doc_id"] for h in search["hits"]]

    def test_csv_header_only_when_empty(self, client):
        response = client.get("/export", params={"q": "липсва", "format": "csv"})
        rows = list(csv.reader(io.StringIO(response.text)))
        assert len(rows) == 1

    def test_json_array(self, client):
        response = client.get("/export", params={"q": "мир народ", "format": "json"})
        assert response.status_code == 200
        hits = json.loads(response.text)
        assert isinstance(hits, list)
        assert {"doc_id", "score", "snippet"} <= set(hits[0])

    def test_unknown_format(self, client):
        response = client.get("/export", params={"q": "мир", "format": "xml"})
        assert response.status_code == 415

    def test_export_ignores_pagination(self, client):
        search = client.get(
            "/search", params={"q": "мир народ вода събрание", "size": "1"}
        ).json()
        response = client.get(
            "/export", params={"q": "мир народ вода събрание", "format": "json"}
        )
        assert len(json.loads(response.text)) == search["total"]
