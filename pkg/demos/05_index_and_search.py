"""Building an index and running every query type against it."""

import datetime

from vestnik.index.search import (
    execute,
    highlight,
    match_search,
    phrase_search,
    proximity_search,
)
from vestnik.index.segment import DocumentRecord, IndexBuilder
from vestnik.orthography import OrthographyVersion
from vestnik.query import parse, pretty

TEXTS = [
    "народно събрание гласува днес",
    "мир на земята и мир на хората",
    "водата на града и събрание на жителите",
    "народно недоволство от войната",
]

builder = IndexBuilder()
for i, text in enumerate(TEXTS):
    builder.add_document(
        DocumentRecord(
            doc_id=i,
            newspaper_id="марица",
            issue_date=datetime.date(1890 + i, 1, 1),
            page_number=1,
            orthography=OrthographyVersion.MODERN,
            raw_text=text,
            corrected_text=text,
        )
    )
segment = builder.commit()

print("BM25 match for ['мир', 'събрание']:")
for hit in match_search(segment, ["мир", "събрание"]):
    print(f"  doc {hit.doc_id}: score {hit.score:.4f}")

print()
print("phrase 'народно събрание':", phrase_search(segment, ["народно", "събрание"]))
print("proximity мир~земята within 2:", proximity_search(segment, "мир", "земята", 2))

print()
query = '(народно OR мир) AND NOT война "народно събрание"~2'
ast = parse(query, mode="extended")
print(f"extended query: {query}")
print(f"parsed back:    {pretty(ast)}")
for hit in execute(segment, ast):
    text = segment.documents[hit.doc_id].corrected_text
    marked = text
    for start, end in reversed(hit.highlights):
        marked = marked[:start] + "[" + marked[start:end] + "]" + marked[end:]
    print(f"  doc {hit.doc_id} score {hit.score:.4f}: {marked}")

print()
print("standalone highlighting:", highlight(segment.documents[1], ["мир"]))
