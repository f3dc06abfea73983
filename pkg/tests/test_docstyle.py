"""Docstring style detection and metadata parsing."""

import pytest

from codeforge.docstyle import (
    StyleId,
    analyze_docstring,
    detect_style,
    parse_metadata,
    short_docstring,
)
from codeforge.languages import LanguageId


# ---------------------------------------------------------------------------
# short_docstring


@pytest.mark.parametrize(
    "text,want",
    [
        ("Adds two ints. Handles overflow.", "Adds two ints."),
        ("No terminator here", "No terminator here"),
        ("See e.g. the docs. More.", "See e.g. the docs."),
        ("One sentence only.", "One sentence only."),
        ("First line.\nSecond line.", "First line."),
        ("Really? Yes.", "Really?"),
    ],
)
def test_short_docstring(text, want):
    assert short_docstring(text) == want


# ---------------------------------------------------------------------------
# style detection


def test_detect_google():
    assert detect_style("Sum.\n\nArgs:\n    x (int): left\n", LanguageId.PYTHON) == StyleId.GOOGLE


def test_detect_rest():
    assert (
        detect_style("Sum.\n\n:param x: left\n:returns: total\n", LanguageId.PYTHON)
        == StyleId.REST
    )


def test_detect_unstyled():
    assert detect_style("just a sentence.", LanguageId.PYTHON) == StyleId.UNSTYLED


def test_detect_numpy():
    doc = "Sum.\n\nParameters\n----------\nx : int\n    left operand\n"
    assert detect_style(doc, LanguageId.PYTHON) == StyleId.NUMPY


def test_go_always_unstyled():
    assert detect_style("Sum.\n\n@param x left\n", LanguageId.GO) == StyleId.UNSTYLED


def test_detect_javadoc():
    doc = "Sum.\n\n@param x the left value\n@return the total\n"
    assert detect_style(doc, LanguageId.JAVA) == StyleId.JAVADOC


def test_detect_jsdoc():
    doc = "Sum.\n\n@param {number} x the left value\n@returns {number} total\n"
    assert detect_style(doc, LanguageId.JAVASCRIPT) == StyleId.JSDOC


def test_detect_xmldoc():
    doc = "<summary>Sum.</summary>\n<param name=\"x\">left</param>\n"
    assert detect_style(doc, LanguageId.CSHARP) == StyleId.XMLDOC


# ---------------------------------------------------------------------------
# metadata parsing


def test_parse_google_full():
    doc = (
        "Adds.\n\nArgs:\n    a (int): first\n    b (int): second\n\n"
        "Returns:\n    int: sum\n"
    )
    meta = parse_metadata(doc, StyleId.GOOGLE)
    assert [(p.name, p.type_hint, p.description) for p in meta.params] == [
        ("a", "int", "first"),
        ("b", "int", "second"),
    ]
    assert meta.returns is not None
    assert meta.returns.type_hint == "int"
    assert meta.returns.description == "sum"
    assert meta.short_docstring == "Adds."


def test_parse_empty():
    meta = analyze_docstring("", LanguageId.PYTHON)
    assert meta.style == StyleId.UNSTYLED
    assert meta.params == [] and meta.returns is None and meta.raises == []


def test_parse_javadoc():
    meta = parse_metadata("@param x the value\n@return doubled", StyleId.JAVADOC)
    assert len(meta.params) == 1
    assert meta.params[0].name == "x"
    assert meta.params[0].description == "the value"
    assert meta.returns is not None
    assert meta.returns.description == "doubled"


def test_parse_rest_with_types():
    doc = (
        "Divide.\n\n:param x: numerator\n:type x: float\n"
        ":returns: quotient\n:rtype: float\n:raises ZeroDivisionError: on zero\n"
    )
    meta = parse_metadata(doc, StyleId.REST)
    assert meta.params[0].name == "x"
    assert meta.params[0].type_hint == "float"
    assert meta.returns.type_hint == "float"
    assert meta.raises[0].exception == "ZeroDivisionError"


def test_parse_jsdoc_types():
    doc = "@param {string} label visible text\n@throws {Error} when empty"
    meta = parse_metadata(doc, StyleId.JSDOC)
    assert meta.params[0].name == "label"
    assert meta.params[0].type_hint == "string"
    assert meta.raises[0].exception == "Error"


def test_parse_phpdoc_dollar_names():
    doc = "@param string $name field name\n@return bool whether valid"
    meta = parse_metadata(doc, StyleId.PHPDOC)
    assert meta.params[0].name == "name"
    assert meta.params[0].type_hint == "string"
    assert meta.returns.type_hint == "bool"


def test_no_fabricated_param_names():
    doc = "Does things.\n\nArgs:\n    alpha (int): first\n"
    meta = parse_metadata(doc, StyleId.GOOGLE)
    for p in meta.params:
        assert p.name in doc


def test_analyze_uses_language_priority():
    doc = "Sum.\n\nArgs:\n    x (int): left\n"
    meta = analyze_docstring(doc, LanguageId.PYTHON)
    assert meta.style == StyleId.GOOGLE
    assert meta.params[0].name == "x"
