"""Rule-based docstring cleaning: update filters, remove filters, report."""

import pytest

from codeforge.extract import ExtractedUnit, tokenize_text
from codeforge.filters import (
    FilterConfig,
    FilterId,
    REMOVE_FILTERS,
    UPDATE_FILTERS,
    apply_remove_filters,
    apply_update_filters,
    clean_pair,
    filter_report,
)
from codeforge.languages import LanguageId

CFG = FilterConfig()

UPDATE_GOLDENS = [
    (
        "/**\n* Lexical essentially tokenizer.\n*\n*/",
        "Lexical essentially tokenizer.",
        FilterId.STRIP_DELIMITERS,
    ),
    (
        "Deletes a Mux asset\n@see https://docs.mux.com/v1/reference#deletean-asset",
        "Deletes a Mux asset",
        FilterId.STRIP_HYPERLINK,
    ),
    (
        "Set the trust level for a key in GPG keychain.\ncode-block:: bash\n"
        " salt '*' gpg.trust-key key-id='3FAD9F1E'\ntrust-level='marginally'",
        "Set the trust level for a key in GPG keychain.\ncode-block:: bash",
        FilterId.STRIP_EMBEDDED_CODE,
    ),
    (
        "isup <url> - Is it down for everyone, or just you?",
        "isup <url>",
        FilterId.HANDLE_QUESTIONS,
    ),
    (
        "Recursive filter design using a least-squares method.\n"
        "[B,A] = YULEWALK(N,F,M) finds the N-th order\n"
        "recursive filter coefficients B and A.",
        "Recursive filter design using a least-squares method.",
        FilterId.STRIP_MATH_FORMULAS,
    ),
    (
        "Creates a slice of `array' with `n' elements dropped\nfrom the end.\n"
        "@static\n@memberOf_\n@since 3.0.0",
        "Creates a slice of `array' with `n' elements dropped\nfrom the end.",
        FilterId.STRIP_METADATA_TAGS,
    ),
    (
        "Constructs a <code>GeneralStoresProductModel</code> from a plain JavaScript object.",
        "Constructs a GeneralStoresProductModel from a plain JavaScript object.",
        FilterId.STRIP_HTML_TAGS,
    ),
    (
        "Pull packages data dir.\nnote: Uses su to access package's data dir.",
        "Pull packages data dir.",
        FilterId.HANDLE_EXAMPLES_NOTES,
    ),
]

REMOVE_GOLDENS = [
    ("Write objects", FilterId.REMOVE_BAD_LENGTH),
    (
        "Retorna uma estrutura com os argumentos\npassados para o programa.",
        FilterId.REMOVE_NON_ENGLISH,
    ),
    ("*<!-begin-user-doc->\n<!-end-user-doc->\n@generated", FilterId.REMOVE_AUTO_GEN),
    (
        "Deprecate this build, so that it will be rebuilt if\n"
        "any other test run wants to use it.",
        FilterId.REMOVE_WIP,
    ),
    ("", FilterId.REMOVE_EMPTY),
]


@pytest.mark.parametrize("raw,want,rule", UPDATE_GOLDENS, ids=[c[2].value for c in UPDATE_GOLDENS])
def test_update_goldens(raw, want, rule):
    got, applied = apply_update_filters(raw, CFG)
    assert got == want
    assert applied == [rule]


@pytest.mark.parametrize("raw,rule", REMOVE_GOLDENS, ids=[c[1].value for c in REMOVE_GOLDENS])
def test_remove_goldens(raw, rule):
    got = apply_remove_filters(tokenize_text(raw), raw, CFG)
    assert got == rule


def test_remove_first_match_wins_order():
    assert [f.value for f in REMOVE_FILTERS] == [
        "RemoveEmpty",
        "RemoveBadLength",
        "RemoveNonEnglish",
        "RemoveAutoGen",
        "RemoveWip",
    ]
    assert len(UPDATE_FILTERS) == 8


def test_clean_english_passthrough():
    text = "Compute the running total of the ledger entries."
    got, applied = apply_update_filters(text, CFG)
    assert got == text
    assert applied == []
    assert apply_remove_filters(tokenize_text(text), text, CFG) is None


def test_length_boundaries():
    words = ["the", "quick", "value", "from", "given", "input"]
    def doc_of(n):
        return " ".join(words[i % len(words)] for i in range(n))
    assert apply_remove_filters(tokenize_text(doc_of(4)), doc_of(4), CFG) == FilterId.REMOVE_BAD_LENGTH
    assert apply_remove_filters(tokenize_text(doc_of(5)), doc_of(5), CFG) is None
    assert apply_remove_filters(tokenize_text(doc_of(500)), doc_of(500), CFG) is None
    assert apply_remove_filters(tokenize_text(doc_of(501)), doc_of(501), CFG) == FilterId.REMOVE_BAD_LENGTH


def _unit(doc: str) -> ExtractedUnit:
    return ExtractedUnit(
        repo_id="r",
        rel_path="p.py",
        language=LanguageId.PYTHON,
        kind="function",
        identifier="f",
        code="def f():\n    pass",
        code_span=(0, 17),
        code_tokens=["def", "f", "(", ")", ":", "pass"],
        docstring_raw=doc,
    )


def test_clean_pair_delimiters_then_empty():
    cleaned, trace = clean_pair(_unit("/** */"), CFG)
    assert cleaned is None
    assert trace.removed_by == FilterId.REMOVE_EMPTY


def test_clean_pair_keeps_clean_docstring():
    cleaned, trace = clean_pair(_unit("Collect all ledger entries for the day."), CFG)
    assert cleaned is not None
    assert trace.applied == []
    assert cleaned.docstring == "Collect all ledger entries for the day."


def test_clean_pair_examples_note():
    cleaned, trace = clean_pair(
        _unit("Pull packages data dir.\nnote: Uses su to access package's data dir."), CFG
    )
    assert cleaned is not None
    assert cleaned.docstring == "Pull packages data dir."
    assert FilterId.HANDLE_EXAMPLES_NOTES in trace.applied


def test_filter_report_percentages():
    traces = []
    for i in range(10):
        doc = "" if i < 7 else "Collect all ledger entries for the day."
        _, trace = clean_pair(_unit(doc), CFG)
        traces.append(trace)
    report = filter_report(traces, {"python": 10})
    assert report["python"]["RemoveEmpty"]["count"] == 7
    assert report["python"]["RemoveEmpty"]["percent"] == 70.0


def test_filter_report_no_traces():
    report = filter_report([], {"python": 100})
    for row in report.get("python", {}).values():
        assert row["percent"] == 0.0
