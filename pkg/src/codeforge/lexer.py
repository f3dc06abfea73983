"""Language-aware lexical scanner.

Produces a flat token stream (identifiers, keywords, numbers, strings,
operators, comments) with byte spans.  The structural pass in syntax.py
builds definition trees on top of this stream; comment and whitespace
handling here is what makes code tokenization and docstring association
work uniformly across the 10 languages.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List

from .languages import LanguageId

# Token kinds
IDENT = "ident"
NUMBER = "number"
STRING = "string"
OP = "op"
COMMENT_LINE = "comment_line"
COMMENT_BLOCK = "comment_block"
ERROR = "error"


@dataclass(frozen=True)
class Token:
    kind: str
    start: int
    end: int
    text: str
    line: int  # 0-based line of token start


# Longest-match operator table shared across languages; per-language extras
# are harmless for the others because they simply never occur.
_OPERATORS = [
    "<<<=", ">>>=", "...", "<=>", "===", "!==", "**=", "//=", ">>=", "<<=",
    "->*", "..=", "&&=", "||=", "??=", "?.", "::", "->", "=>", "==", "!=",
    ">=", "<=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=",
    "|=", "^=", "<<", ">>", "**", "//", "..", "<-", ":=", "@", "$", "#",
    "(", ")", "[", "]", "{", "}", ",", ";", ":", ".", "+", "-", "*", "/",
    "%", "=", "<", ">", "!", "&", "|", "^", "~", "?", "\\", "`",
]

_LINE_COMMENT = {
    LanguageId.PYTHON: ["#"],
    LanguageId.RUBY: ["#"],
    LanguageId.PHP: ["//", "#"],
    LanguageId.C: ["//"],
    LanguageId.CPP: ["//"],
    LanguageId.CSHARP: ["//"],
    LanguageId.JAVA: ["//"],
    LanguageId.JAVASCRIPT: ["//"],
    LanguageId.GO: ["//"],
    LanguageId.RUST: ["//"],
}

_HAS_SLASH_STAR = {
    LanguageId.PHP,
    LanguageId.C,
    LanguageId.CPP,
    LanguageId.CSHARP,
    LanguageId.JAVA,
    LanguageId.JAVASCRIPT,
    LanguageId.GO,
    LanguageId.RUST,
}

_IDENT_RE = re.compile(r"[A-Za-z_ -￿][A-Za-z_0-9 -￿]*")
_NUMBER_RE = re.compile(
    r"(?:0[xXbBoO][0-9a-fA-F_]+|(?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?)"
    r"[a-zA-Z]*"
)


def _scan_string(text: str, i: int, quote: str) -> int:
    """Return end index (past closing quote) of a quoted literal, tolerating EOF."""
    n = len(text)
    qlen = len(quote)
    j = i + qlen
    while j < n:
        c = text[j]
        if c == "\\" and qlen == 1:
            j += 2
            continue
        if text.startswith(quote, j):
            return j + qlen
        if qlen == 1 and c == "\n" and quote not in ("`",):
            # unterminated single-line string: stop at newline
            return j
        j += 1
    return n


def tokenize(text: str, language: LanguageId) -> List[Token]:
    """Lex source text into tokens.  Never raises; unknown bytes become ERROR tokens."""
    tokens: List[Token] = []
    line_comments = _LINE_COMMENT[language]
    slash_star = language in _HAS_SLASH_STAR
    n = len(text)
    i = 0
    line = 0

    def emit(kind: str, start: int, end: int) -> None:
        tokens.append(Token(kind, start, end, text[start:end], line))

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c in " \t\r\f\v":
            i += 1
            continue

        # Line comments
        matched_lc = None
        for prefix in line_comments:
            if text.startswith(prefix, i):
                matched_lc = prefix
                break
        if matched_lc:
            end = text.find("\n", i)
            end = n if end == -1 else end
            emit(COMMENT_LINE, i, end)
            i = end
            continue

        # Block comments
        if slash_star and text.startswith("/*", i):
            end = text.find("*/", i + 2)
            end = n if end == -1 else end + 2
            emit(COMMENT_BLOCK, i, end)
            line += text.count("\n", i, end)
            i = end
            continue
        if language == LanguageId.RUBY and text.startswith("=begin", i) and (i == 0 or text[i - 1] == "\n"):
            m = re.search(r"^=end.*$", text[i:], re.MULTILINE)
            end = n if m is None else i + m.end()
            emit(COMMENT_BLOCK, i, end)
            line += text.count("\n", i, end)
            i = end
            continue

        # Strings
        if language == LanguageId.PYTHON and text.startswith(('"""', "'''"), i):
            quote = text[i : i + 3]
            end = _scan_string(text, i, quote)
            emit(STRING, i, end)
            line += text.count("\n", i, end)
            i = end
            continue
        if language == LanguageId.RUST and re.match(r'r#*"', text[i:]):
            m = re.match(r'r(#*)"', text[i:])
            closer = '"' + m.group(1)
            end = text.find(closer, i + m.end())
            end = n if end == -1 else end + len(closer)
            emit(STRING, i, end)
            line += text.count("\n", i, end)
            i = end
            continue
        if c in "\"'" or (c == "`" and language in (LanguageId.JAVASCRIPT, LanguageId.GO)):
            # Rust/C/C++/Java char literals and lifetimes both lex fine here.
            if language == LanguageId.RUST and c == "'" and re.match(r"'[A-Za-z_]\w*(?!')", text[i:]):
                # lifetime, not a char literal
                m = re.match(r"'[A-Za-z_]\w*", text[i:])
                emit(OP, i, i + m.end())
                i += m.end()
                continue
            end = _scan_string(text, i, c)
            if c == "`":
                line += text.count("\n", i, end)
            emit(STRING, i, end)
            i = end
            continue

        # Identifiers / keywords
        m = _IDENT_RE.match(text, i)
        if m:
            emit(IDENT, i, m.end())
            i = m.end()
            continue

        # Numbers
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER_RE.match(text, i)
            if m:
                emit(NUMBER, i, m.end())
                i = m.end()
                continue

        # Operators / punctuation
        matched_op = None
        for op in _OPERATORS:
            if text.startswith(op, i):
                matched_op = op
                break
        if matched_op:
            emit(OP, i, i + len(matched_op))
            i += len(matched_op)
            continue

        emit(ERROR, i, i + 1)
        i += 1

    return tokens


def error_ratio(tokens: List[Token]) -> float:
    if not tokens:
        return 0.0
    bad = sum(1 for t in tokens if t.kind == ERROR)
    return bad / len(tokens)
