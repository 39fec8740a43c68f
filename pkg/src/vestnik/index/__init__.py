"""Positional inverted index with BM25 ranking and persistence."""

from .segment import (
    BuilderSealed,
    DocumentRecord,
    IndexBuilder,
    IndexSegment,
    Posting,
    PostingList,
    SearchHit,
)
from .search import (
    EmptyQuery,
    boolean_eval,
    bm25_idf,
    execute,
    highlight,
    match_search,
    phrase_search,
    positive_terms,
    proximity_search,
)
from .storage import load_index, save_index

__all__ = [
    "BuilderSealed",
    "DocumentRecord",
    "EmptyQuery",
    "IndexBuilder",
    "IndexSegment",
    "Posting",
    "PostingList",
    "SearchHit",
    "bm25_idf",
    "boolean_eval",
    "execute",
    "highlight",
    "load_index",
    "match_search",
    "phrase_search",
    "positive_terms",
    "proximity_search",
    "save_index",
]
