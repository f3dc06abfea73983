"""Extraction over the 10-language fixture corpus matches frozen goldens."""

import json
from pathlib import Path

from codeforge.extract import extract_inline_blocks, extract_units
from codeforge.ingest import scan_corpus
from codeforge.syntax import parse_file

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
GOLDENS = FIXTURES / "goldens"


def _extract_all():
    units, blocks = [], []
    for src in scan_corpus([CORPUS]):
        tree = parse_file(src)
        for u in extract_units(tree, src):
            units.append(
                {
                    "repo": u.repo_id,
                    "path": u.rel_path,
                    "lang": u.language.value,
                    "kind": u.kind,
                    "identifier": u.identifier,
                    "span": list(u.code_span),
                    "code": u.code,
                    "code_tokens": u.code_tokens,
                    "docstring_raw": u.docstring_raw,
                    "tokenizer_fallback": u.tokenizer_fallback,
                }
            )
        for b in extract_inline_blocks(tree, src):
            blocks.append(
                {
                    "repo": b.repo_id,
                    "path": b.rel_path,
                    "lang": b.language.value,
                    "comment": b.comment,
                    "comment_tokens": b.comment_tokens,
                    "prev_context": b.prev_context,
                    "next_context": b.next_context,
                    "enclosing": b.enclosing_identifier,
                }
            )
    return units, blocks


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def test_units_match_goldens():
    units, _ = _extract_all()
    assert units == _load(GOLDENS / "units.jsonl")


def test_blocks_match_goldens():
    _, blocks = _extract_all()
    assert blocks == _load(GOLDENS / "blocks.jsonl")


def test_every_language_has_three_units():
    units, _ = _extract_all()
    per_lang = {}
    for u in units:
        per_lang[u["lang"]] = per_lang.get(u["lang"], 0) + 1
    assert len(per_lang) == 10
    assert all(n >= 3 for n in per_lang.values()), per_lang


def test_span_fidelity_on_fixture():
    units, _ = _extract_all()
    for rec in units:
        src = (CORPUS / rec["repo"] / rec["path"]).read_text(encoding="utf-8")
        assert src[rec["span"][0] : rec["span"][1]] == rec["code"]


def test_nested_definition_present():
    units, _ = _extract_all()
    names = [(u["lang"], u["identifier"]) for u in units]
    assert ("python", "one") in names  # function defined inside another


def test_documented_class_with_documented_method_per_oo_language():
    units, _ = _extract_all()
    for lang in ("python", "java", "javascript", "php", "cpp", "csharp", "ruby", "rust"):
        classes = [u for u in units if u["lang"] == lang and u["kind"] == "class"]
        assert any(u["docstring_raw"] for u in classes), lang
        funcs = [u for u in units if u["lang"] == lang and u["kind"] == "function"]
        assert any(u["docstring_raw"] for u in funcs), lang
