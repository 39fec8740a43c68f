"""Shared fixtures: corpus directories, lexicon files."""

import json
import sys
from pathlib import Path

import pytest


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    status = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::")[-1]
    sys.stderr.write(f"[ACCEPTANCE] {status} {name}\n")


def write_page(
    corpus_dir: Path,
    name: str,
    body: str,
    newspaper_id: str = "в1",
    issue_date: str = "1900-06-15",
    page_number: int = 1,
) -> None:
    corpus_dir.mkdir(parents=True, exist_ok=True)
    (corpus_dir / f"{name}.txt").write_text(body, encoding="utf-8")
    (corpus_dir / f"{name}.json").write_text(
        json.dumps(
            {
                "newspaper_id": newspaper_id,
                "issue_date": issue_date,
                "page_number": page_number,
            },
            ensure_ascii=False,
        ),
        encoding="utf-8",
    )


def write_lexicon(path: Path, words) -> Path:
    path.write_text("\n".join(words) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def modern_words():
    return ["книга", "нога", "вода", "мир", "нова", "народ", "събрание", "хляб"]


@pytest.fixture
def modern_lexicon_file(tmp_path, modern_words):
    return write_lexicon(tmp_path / "modern.txt", modern_words)
