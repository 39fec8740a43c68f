"""Command-line entry points: ingest, evaluate, serve.

``ingest`` exits 0 on success, 1 on a fatal error and 2 when some pages
failed; its report is printed as JSON on stdout. ``evaluate`` prints an
evaluation report as JSON or text. ``serve`` runs the HTTP API.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .aligned import load_aligned_file
from .correction.channel import ConfusionModel, learn_confusion
from .correction.detector import DetectorModel
from .evaluation import evaluate_run
from .ingestion import FatalIngestError, IngestOptions, ingest_corpus
from .lexicon import Lexicon
from .orthography import OrthographyVersion


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vestnik")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="index a corpus directory")
    ingest.add_argument("--corpus", required=True, type=Path)
    ingest.add_argument("--index", required=True, type=Path)
    ingest.add_argument("--no-correct", action="store_true")
    ingest.add_argument("--detector", default="baseline", metavar="baseline|neural:PATH")
    ingest.add_argument("--lexicon-modern", type=Path)
    ingest.add_argument("--lexicon-historical", type=Path)
    ingest.add_argument("--confusion", type=Path)
    ingest.add_argument("--jobs", type=int, default=1)

    evaluate = sub.add_parser("evaluate", help="score detection and correction")
    evaluate.add_argument("--aligned", required=True, type=Path)
    evaluate.add_argument("--detector", default="baseline", metavar="baseline|neural:PATH")
    evaluate.add_argument(
        "--corrector",
        required=True,
        metavar="noisy:LEXICON[,CONFUSION]",
        help="noisy-channel corrector over a lexicon, optional confusion model; "
        "'learn' as the confusion path estimates it from the aligned file",
    )
    evaluate.add_argument("--report", choices=("json", "text"), default="json")

    serve = sub.add_parser("serve", help="run the HTTP search API")
    serve.add_argument("--index", required=True, type=Path)
    serve.add_argument("--yat-lexicon", type=Path)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8080)
    return parser


def _cmd_ingest(args: argparse.Namespace) -> int:
    options = IngestOptions(
        corpus_dir=args.corpus,
        index_dir=args.index,
        correct=not args.no_correct,
        detector=args.detector,
        lexicon_modern=args.lexicon_modern,
        lexicon_historical=args.lexicon_historical,
        confusion=args.confusion,
        parallelism=args.jobs,
    )
    try:
        report = ingest_corpus(options)
    except FatalIngestError as exc:
        print(json.dumps({"fatal": str(exc)}), file=sys.stderr)
        return 1
    print(json.dumps(report.to_json(), ensure_ascii=False))
    return 2 if report.errors else 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    samples = load_aligned_file(args.aligned)
    if not args.corrector.startswith("noisy:"):
        print(f"unknown corrector {args.corrector!r}", file=sys.stderr)
        return 1
    paths = args.corrector.split(":", 1)[1].split(",")
    lexicon = Lexicon.load(paths[0], OrthographyVersion.MODERN)
    confusion = None
    if len(paths) > 1:
        confusion = (
            learn_confusion(samples)
            if paths[1] == "learn"
            else ConfusionModel.load(paths[1])
        )
    detector = None
    if args.detector != "baseline":
        if not args.detector.startswith("neural:"):
            print(f"unknown detector {args.detector!r}", file=sys.stderr)
            return 1
        detector = DetectorModel.load(args.detector.split(":", 1)[1])
    report = evaluate_run(samples, lexicon, confusion=confusion, detector=detector)
    if args.report == "json":
        print(json.dumps(report.to_json(), ensure_ascii=False))
    else:
        print(
            f"precision={report.precision:.4f} recall={report.recall:.4f} "
            f"f_score={report.f_score:.4f}\n"
            f"improvement={report.improvement_pct:.2f}% over {report.token_count} tokens "
            f"(distance {report.distance_raw} -> {report.distance_corrected})"
        )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import load_app

    app = load_app(str(args.index), str(args.yat_lexicon) if args.yat_lexicon else None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "ingest":
        return _cmd_ingest(args)
    if args.command == "evaluate":
        return _cmd_evaluate(args)
    return _cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
