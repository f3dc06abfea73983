"""Language detection and corpus scanning."""

from pathlib import Path

import pytest

from codeforge.ingest import ScanCounters, scan_corpus
from codeforge.languages import LanguageId, detect_language

FIXTURE_CORPUS = Path(__file__).parent / "fixtures" / "corpus"


@pytest.mark.parametrize(
    "path,expected",
    [
        ("src/main.rs", LanguageId.RUST),
        ("README.md", None),
        ("lib/util.cc", LanguageId.CPP),
        ("a.py", LanguageId.PYTHON),
        ("x/y/z.go", LanguageId.GO),
        ("inc/defs.h", LanguageId.C),
        ("app.php", LanguageId.PHP),
        ("Makefile", None),
    ],
)
def test_detect_language(path, expected):
    assert detect_language(path) == expected


def test_scan_empty_dir(tmp_path):
    assert list(scan_corpus([tmp_path])) == []


def test_scan_extension_filter(tmp_path):
    repo = tmp_path / "r1"
    repo.mkdir()
    (repo / "a.py").write_text("x = 1\n")
    (repo / "b.txt").write_text("notes\n")
    files = list(scan_corpus([tmp_path], include_langs={LanguageId.PYTHON}))
    assert len(files) == 1
    assert files[0].rel_path == "a.py"
    assert files[0].repo_id == "r1"


def test_scan_three_repos_two_files(tmp_path):
    for r in ("ra", "rb", "rc"):
        d = tmp_path / r
        d.mkdir()
        (d / "one.py").write_text("a = 1\n")
        (d / "two.py").write_text("b = 2\n")
    files = list(scan_corpus([tmp_path]))
    assert len(files) == 6
    assert sorted({f.repo_id for f in files}) == ["ra", "rb", "rc"]


def test_scan_deterministic():
    first = [(f.repo_id, f.rel_path, f.content_hash) for f in scan_corpus([FIXTURE_CORPUS])]
    second = [(f.repo_id, f.rel_path, f.content_hash) for f in scan_corpus([FIXTURE_CORPUS])]
    assert first == second
    assert first == sorted(first)


def test_scan_skips_oversized(tmp_path):
    repo = tmp_path / "r"
    repo.mkdir()
    (repo / "big.py").write_text("x = 1\n" * 500)
    counters = ScanCounters()
    files = list(scan_corpus([tmp_path], max_file_bytes=100, counters=counters))
    assert files == []
    assert counters.skipped_too_large == 1


def test_scan_missing_root():
    with pytest.raises(FileNotFoundError):
        list(scan_corpus([Path("/nonexistent-root-xyz")]))
