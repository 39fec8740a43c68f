"""Batch corpus ingestion: clean, detect orthography, correct, index.

A corpus directory holds one ``.txt`` file per page plus a JSON sidecar of
the same stem carrying ``newspaper_id``, ``issue_date`` (ISO-8601) and
``page_number``. Pages are processed in lexicographic order of their
relative paths, which fixes doc_id assignment independently of the worker
count, so the written index is bit-for-bit reproducible.
"""

from __future__ import annotations

import datetime
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .analyzer import CleanPage, RawPage
from .correction.channel import ConfusionModel
from .correction.corrector import Correction, correct_page
from .correction.detector import DetectorModel
from .index.segment import DocumentRecord, IndexBuilder
from .index.storage import save_index
from .lexicon import Lexicon
from .orthography import (
    EmptyText,
    OrthographyVersion,
    convert_lexicon,
    detect_version,
)


class FatalIngestError(RuntimeError):
    """The whole batch cannot proceed (unreadable corpus, unwritable index)."""


@dataclass
class IngestOptions:
    corpus_dir: Path
    index_dir: Path
    correct: bool = True
    detector: str = "baseline"  # "baseline" or "neural:PATH"
    lexicon_modern: Path | None = None
    lexicon_historical: Path | None = None
    confusion: Path | None = None
    parallelism: int = 1

    def __post_init__(self) -> None:
        self.corpus_dir = Path(self.corpus_dir)
        self.index_dir = Path(self.index_dir)
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


@dataclass
class IngestReport:
    pages_read: int = 0
    pages_indexed: int = 0
    tokens_corrected: int = 0
    errors: list[tuple[str, str]] = field(default_factory=list)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {
            "pages_read": self.pages_read,
            "pages_indexed": self.pages_indexed,
            "tokens_corrected": self.tokens_corrected,
            "errors": [{"path": p, "message": m} for p, m in self.errors],
            "wall_time": self.wall_time,
        }


@dataclass
class _PageOutcome:
    path: str
    record: DocumentRecord | None = None
    error: str | None = None
    corrected_tokens: int = 0


def _load_detector(spec: str) -> DetectorModel | None:
    if spec == "baseline":
        return None
    if spec.startswith("neural:"):
        return DetectorModel.load(spec.split(":", 1)[1])
    raise FatalIngestError(f"unknown detector spec {spec!r}")


def _process_page(
    path: Path,
    rel: str,
    correct: bool,
    detector: DetectorModel | None,
    lexicons: dict[OrthographyVersion, Lexicon] | None,
    confusion: ConfusionModel,
) -> _PageOutcome:
    try:
        body = path.read_text(encoding="utf-8")
        sidecar_path = path.with_suffix(".json")
        sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
        raw = RawPage(
            newspaper_id=str(sidecar["newspaper_id"]),
            issue_date=datetime.date.fromisoformat(sidecar["issue_date"]),
            page_number=int(sidecar["page_number"]),
            body=body,
            source_path=rel,
        )
        page = CleanPage.from_raw(raw)
        try:
            version, _confidence = detect_version(page.text)
        except EmptyText:
            version = OrthographyVersion.MODERN
        corrected = page.text
        log: list[Correction] = []
        if correct and page.text.strip():
            corrected, log = correct_page(
                page, detector, lexicons[version], confusion
            )
        record = DocumentRecord(
            doc_id=-1,
            newspaper_id=raw.newspaper_id,
            issue_date=raw.issue_date,
            page_number=raw.page_number,
            orthography=version,
            raw_text=page.text,
            corrected_text=corrected,
            correction_log=tuple(log),
        )
        replaced = sum(1 for c in log if c.replacement is not None)
        return _PageOutcome(rel, record=record, corrected_tokens=replaced)
    except Exception as exc:  # per-page fault isolation
        return _PageOutcome(rel, error=f"{type(exc).__name__}: {exc}")


def ingest_corpus(options: IngestOptions) -> IngestReport:
    """Run the full pipeline and write the index.

    Page failures are recorded in the report and never abort the batch;
    only an unreadable corpus directory or an unwritable index directory is
    fatal.
    """
    started = time.perf_counter()
    if not options.corpus_dir.is_dir():
        raise FatalIngestError(f"corpus directory not found: {options.corpus_dir}")

    pages = sorted(
        options.corpus_dir.rglob("*.txt"),
        key=lambda p: p.relative_to(options.corpus_dir).as_posix(),
    )

    detector = _load_detector(options.detector) if options.correct else None
    lexicons: dict[OrthographyVersion, Lexicon] | None = None
    confusion = ConfusionModel.uniform()
    if options.correct:
        if options.lexicon_modern is None:
            raise FatalIngestError("correction enabled but no modern lexicon given")
        modern = Lexicon.load(options.lexicon_modern, OrthographyVersion.MODERN)
        if options.lexicon_historical is not None:
            historical = Lexicon.load(
                options.lexicon_historical, OrthographyVersion.HISTORICAL
            )
        else:
            historical = convert_lexicon(modern)
        lexicons = {
            OrthographyVersion.MODERN: modern,
            OrthographyVersion.HISTORICAL: historical,
        }
        if options.confusion is not None:
            confusion = ConfusionModel.load(options.confusion)

    report = IngestReport(pages_read=len(pages))
    outcomes: list[_PageOutcome]
    rels = [p.relative_to(options.corpus_dir).as_posix() for p in pages]
    if options.parallelism == 1 or len(pages) <= 1:
        outcomes = [
            _process_page(p, rel, options.correct, detector, lexicons, confusion)
            for p, rel in zip(pages, rels)
        ]
    else:
        with ThreadPoolExecutor(max_workers=options.parallelism) as pool:
            outcomes = list(
                pool.map(
                    lambda pr: _process_page(
                        pr[0], pr[1], options.correct, detector, lexicons, confusion
                    ),
                    zip(pages, rels),
                )
            )

    builder = IndexBuilder()
    for outcome in outcomes:  # sorted-path order regardless of scheduling
        if outcome.record is not None:
            builder.add_document(outcome.record)
            report.pages_indexed += 1
            report.tokens_corrected += outcome.corrected_tokens
        else:
            report.errors.append((outcome.path, outcome.error or "unknown error"))
    segment = builder.commit()
    try:
        save_index(segment, options.index_dir)
    except OSError as exc:
        raise FatalIngestError(str(exc)) from exc
    report.wall_time = time.perf_counter() - started
    return report
