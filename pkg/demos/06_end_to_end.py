"""The whole pipeline: corpus on disk -> index -> dual-orthography API.

Writes a three-page corpus (one page in pre-1945 spelling, one with OCR
damage), ingests it with correction on, then queries the HTTP API in-process
with modern spellings.
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient
from vestnik.index.storage import load_index
from vestnik.ingestion import IngestOptions, ingest_corpus
from vestnik.orthography import SpellingConverter
from vestnik.service import SearchEngine, create_app

PAGES = {
    "p001": ("Миръ и народъ въ страната.", "1888-02-01"),
    "p002": ("кннга за водата и хляба", "1925-06-15"),
    "p003": ("мир и нови книги", "1950-09-30"),
}
LEXICON = ["мир", "народ", "книга", "книги", "вода", "водата", "хляба", "нови", "за", "и", "в", "страната"]

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp)
    corpus = root / "corpus"
    corpus.mkdir()
    for name, (body, date) in PAGES.items():
        (corpus / f"{name}.txt").write_text(body, encoding="utf-8")
        (corpus / f"{name}.json").write_text(
            json.dumps({"newspaper_id": "марица", "issue_date": date, "page_number": 1})
        )
    (root / "lexicon.txt").write_text("\n".join(LEXICON), encoding="utf-8")

    report = ingest_corpus(
        IngestOptions(
            corpus_dir=corpus,
            index_dir=root / "index",
            correct=True,
            lexicon_modern=root / "lexicon.txt",
        )
    )
    print("ingest report:", json.dumps(report.to_json(), ensure_ascii=False))

    engine = SearchEngine(load_index(root / "index"), SpellingConverter())
    client = TestClient(create_app(engine))

    print()
    print("GET /search?q=мир&orthography=dual  (finds 'Миръ' of 1888 too):")
    body = client.get("/search", params={"q": "мир", "orthography": "dual"}).json()
    for hit in body["hits"]:
        print(f"  doc {hit['doc_id']} {hit['issue_date']} score {hit['score']:.3f}: {hit['snippet']!r}")

    print()
    print("GET /documents/1  (raw vs corrected):")
    doc = client.get("/documents/1").json()
    print(f"  raw:       {doc['raw_text']!r}")
    print(f"  corrected: {doc['corrected_text']!r}")

    print()
    print("GET /export?format=csv:")
    csv_text = client.get(
        "/export", params={"q": "мир книга", "format": "csv"}
    ).text
    for line in csv_text.splitlines():
        print("  " + line)
