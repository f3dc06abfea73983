"""Structural parsing: per-language definition discovery over the lexer stream.

Builds a lightweight concrete-syntax tree good enough for unit extraction:
a module root whose descendants are function/class definition nodes with
byte spans, names, body spans, and associated doc comments.  Three scanner
families cover the 10 languages: indentation (Python), keyword..end (Ruby),
and brace matching with enclosure tags (everything else).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import lexer
from .ingest import RawSourceFile
from .languages import LanguageId
from .lexer import COMMENT_BLOCK, COMMENT_LINE, ERROR, IDENT, OP, STRING, Token

# Error-token ratio above which a file is considered unparseable.
PARSE_ERROR_RATIO = 0.20

FUNCTION = "function"
CLASS = "class"


class ParseFailure(Exception):
    """File could not be lexed into a usable token stream."""


@dataclass
class Node:
    kind: str  # "module" | "function" | "class"
    start_byte: int
    end_byte: int
    name: Optional[str] = None
    body_start: Optional[int] = None  # byte offset just after ':' / '{' / def line
    body_end: Optional[int] = None  # byte offset of '}' / 'end' / block end
    docstring: Optional[str] = None  # raw associated comment / literal text
    line: int = 0  # 0-based line of definition start
    is_error: bool = False
    children: List["Node"] = field(default_factory=list)

    @property
    def span(self) -> Tuple[int, int]:
        return (self.start_byte, self.end_byte)


@dataclass
class SyntaxTree:
    text: str
    language: LanguageId
    tokens: List[Token]
    root: Node

    def code_tokens(self, start: int = 0, end: Optional[int] = None) -> List[Token]:
        """Non-comment tokens within [start, end)."""
        end = len(self.text) if end is None else end
        return [
            t
            for t in self.tokens
            if t.kind not in (COMMENT_LINE, COMMENT_BLOCK)
            and t.start >= start
            and t.end <= end
        ]

    def comment_tokens(self, start: int = 0, end: Optional[int] = None) -> List[Token]:
        end = len(self.text) if end is None else end
        return [
            t
            for t in self.tokens
            if t.kind in (COMMENT_LINE, COMMENT_BLOCK)
            and t.start >= start
            and t.end <= end
        ]


# ---------------------------------------------------------------------------
# helpers

_CONTROL_KEYWORDS = {
    "if", "else", "for", "while", "switch", "do", "try", "catch", "finally",
    "return", "throw", "case", "default", "match", "loop", "unsafe", "select",
    "defer", "synchronized", "foreach", "using", "lock", "fixed", "checked",
    "unchecked", "elif", "goto", "yield", "await", "when", "unless",
}

_CLASS_KEYWORDS = {
    LanguageId.JAVA: {"class", "interface", "enum", "record"},
    LanguageId.CSHARP: {"class", "interface", "struct", "record"},
    LanguageId.CPP: {"class", "struct"},
    LanguageId.JAVASCRIPT: {"class"},
    LanguageId.PHP: {"class", "interface", "trait"},
    LanguageId.RUST: {"struct", "trait", "enum", "union"},
}

_NAMESPACE_KEYWORDS = {"namespace", "extern", "mod"}


def _line_starts(text: str) -> List[int]:
    starts = [0]
    for i, c in enumerate(text):
        if c == "\n":
            starts.append(i + 1)
    return starts


def _indent_of_line(text: str, line_start: int) -> int:
    i = line_start
    n = 0
    while i < len(text) and text[i] in " \t":
        n += 1 if text[i] == " " else 8  # tabs count as 8 columns
        i += 1
    return n


def _merge_comment_run(
    comments: List[Token], idx: int
) -> Tuple[int, int, int, int]:
    """Expand a line-comment at comments[idx] to its maximal run of
    consecutive-line comments.  Returns (first_idx, last_idx, start, end)."""
    first = idx
    while (
        first > 0
        and comments[first - 1].kind == COMMENT_LINE
        and comments[first].kind == COMMENT_LINE
        and comments[first].line - comments[first - 1].line == 1
    ):
        first -= 1
    last = idx
    while (
        last + 1 < len(comments)
        and comments[last].kind == COMMENT_LINE
        and comments[last + 1].kind == COMMENT_LINE
        and comments[last + 1].line - comments[last].line == 1
    ):
        last += 1
    return first, last, comments[first].start, comments[last].end


def _comment_end_line(tree_text: str, token_end: int, token: Token) -> int:
    return token.line + tree_text.count("\n", token.start, token.end)


# ---------------------------------------------------------------------------
# Python scanner


def _scan_python(text: str, tokens: List[Token]) -> List[Node]:
    line_starts = _line_starts(text)
    code = [t for t in tokens if t.kind not in (COMMENT_LINE, COMMENT_BLOCK)]
    first_on_line = {}
    for i, t in enumerate(code):
        if t.line not in first_on_line:
            first_on_line[t.line] = i

    defs: List[Node] = []
    for i, t in enumerate(code):
        if t.kind != IDENT or t.text not in ("def", "class"):
            continue
        fi = first_on_line.get(t.line)
        is_start = fi == i or (
            fi is not None and fi == i - 1 and code[i - 1].text == "async"
        )
        if not is_start:
            continue
        kind = FUNCTION if t.text == "def" else CLASS
        name = None
        if i + 1 < len(code) and code[i + 1].kind == IDENT:
            name = code[i + 1].text
        start = code[fi].start  # include 'async'
        def_indent = _indent_of_line(text, line_starts[t.line])

        # find the header-terminating ':' at bracket depth 0
        depth = 0
        colon_idx = None
        for j in range(i + 1, len(code)):
            tj = code[j]
            if tj.kind == OP:
                if tj.text in "([{":
                    depth += 1
                elif tj.text in ")]}":
                    depth -= 1
                elif tj.text == ":" and depth == 0:
                    colon_idx = j
                    break
        if colon_idx is None:
            continue
        body_start = code[colon_idx].end

        # body ends before the first depth-0 code token that starts a line
        # with indent <= def_indent
        end_byte = code[colon_idx].end
        depth = 0
        last = colon_idx
        for j in range(colon_idx + 1, len(code)):
            tj = code[j]
            if depth == 0 and first_on_line.get(tj.line) == j:
                if _indent_of_line(text, line_starts[tj.line]) <= def_indent:
                    break
            if tj.kind == OP:
                if tj.text in "([{":
                    depth += 1
                elif tj.text in ")]}":
                    depth = max(0, depth - 1)
            last = j
        end_byte = code[last].end

        node = Node(
            kind=kind,
            start_byte=start,
            end_byte=end_byte,
            name=name,
            body_start=body_start,
            body_end=end_byte,
            line=t.line,
        )
        # docstring: leading string literal of the body
        if last > colon_idx:
            first_body = code[colon_idx + 1]
            if first_body.kind == STRING:
                node.docstring = first_body.text
        defs.append(node)
    return defs


# ---------------------------------------------------------------------------
# Ruby scanner

_RUBY_OPENERS = {"if", "unless", "while", "until", "case", "begin", "for"}


def _scan_ruby(text: str, tokens: List[Token]) -> List[Node]:
    code = [t for t in tokens if t.kind not in (COMMENT_LINE, COMMENT_BLOCK)]
    comments = [t for t in tokens if t.kind in (COMMENT_LINE, COMMENT_BLOCK)]
    first_on_line = {}
    for i, t in enumerate(code):
        if t.line not in first_on_line:
            first_on_line[t.line] = i

    # stack entries: (node or None,)
    stack: List[Optional[Node]] = []
    defs: List[Node] = []
    for i, t in enumerate(code):
        if t.kind != IDENT:
            continue
        at_line_start = first_on_line.get(t.line) == i
        if t.text in ("def", "class", "module") and at_line_start:
            kind = FUNCTION if t.text == "def" else CLASS
            name = None
            j = i + 1
            # def self.name / Foo.bar: take the last ident of the dotted chain
            parts = []
            while j < len(code) and code[j].line == t.line:
                if code[j].kind == IDENT:
                    parts.append(code[j].text)
                    if j + 1 < len(code) and code[j + 1].text == ".":
                        j += 2
                        continue
                break
            if parts:
                name = parts[-1]
            # body starts on the next line (or after ';' on the same line)
            nl = text.find("\n", t.end)
            body_start = (nl + 1) if nl != -1 else len(text)
            node = Node(
                kind=kind,
                start_byte=t.start,
                end_byte=t.end,
                name=name,
                body_start=body_start,
                line=t.line,
            )
            stack.append(node)
            defs.append(node)
        elif (t.text in _RUBY_OPENERS and at_line_start) or t.text == "do":
            stack.append(None)
        elif t.text == "end":
            if stack:
                node = stack.pop()
                if node is not None:
                    node.end_byte = t.end
                    node.body_end = t.start
    # unterminated defs extend to EOF
    for node in stack:
        if node is not None and node.end_byte <= node.start_byte + 3:
            node.end_byte = len(text)
            node.body_end = len(text)

    # docstring: leading comment run of the body
    for node in defs:
        if node.kind is None:
            continue
        body_comments = [
            c for c in comments if node.body_start <= c.start < (node.body_end or node.end_byte)
        ]
        body_code = [
            c for c in code if node.body_start <= c.start < (node.body_end or node.end_byte)
        ]
        if body_comments:
            first_c = body_comments[0]
            if not body_code or first_c.start < body_code[0].start:
                idx = comments.index(first_c)
                _, last, cs, ce = _merge_comment_run(comments, idx)
                node.docstring = text[cs:ce]
    return defs


# ---------------------------------------------------------------------------
# Brace-language scanner

def _match_paren_name(header: List[Token], language: LanguageId) -> Optional[str]:
    """Find `name (` in a definition header; None if no plausible callable name."""
    for i, t in enumerate(header):
        if t.kind == OP and t.text == "(" and i > 0:
            prev = header[i - 1]
            if prev.kind != IDENT:
                continue
            if prev.text in _CONTROL_KEYWORDS:
                return None
            if i >= 2 and header[i - 2].kind == OP and header[i - 2].text == "@":
                continue  # annotation argument list
            name = prev.text
            if i >= 2 and header[i - 2].kind == OP and header[i - 2].text == "~":
                name = "~" + name
            return name
    return None


def _header_has_top_level(header: List[Token], texts: set) -> bool:
    depth = 0
    for t in header:
        if t.kind == OP:
            if t.text in "([":
                depth += 1
            elif t.text in ")]":
                depth -= 1
            elif depth == 0 and t.text in texts:
                return True
        elif depth == 0 and t.kind == IDENT and t.text in texts:
            return True
    return False


def _ident_after(header: List[Token], keyword: str) -> Optional[str]:
    for i, t in enumerate(header):
        if t.kind == IDENT and t.text == keyword:
            for t2 in header[i + 1 :]:
                if t2.kind == IDENT:
                    return t2.text
                if t2.kind == OP and t2.text in ("(", "{", "<"):
                    break
            return None
    return None


def _classify_brace(
    header: List[Token], language: LanguageId, enclosure: str
) -> Tuple[str, Optional[str], Optional[str]]:
    """Classify the '{' that follows `header`.

    Returns (tag, unit_kind, name); tag is the enclosure tag pushed on the
    brace stack, unit_kind is FUNCTION/CLASS/None (None = not a unit).
    """
    if not header:
        return ("block", None, None)
    texts = [t.text for t in header if t.kind == IDENT]
    class_kw = _CLASS_KEYWORDS.get(language, set())

    # control flow never opens a definition
    first = header[0]
    if first.kind == IDENT and first.text in _CONTROL_KEYWORDS:
        return ("block", None, None)

    if language == LanguageId.GO:
        if "func" in texts:
            name = None
            for i, t in enumerate(header):
                if t.kind == IDENT and t.text == "func":
                    j = i + 1
                    if j < len(header) and header[j].kind == IDENT:
                        name = header[j].text
                    elif j < len(header) and header[j].text == "(":
                        # method receiver: name follows the matching ')'
                        depth = 0
                        for k in range(j, len(header)):
                            if header[k].text == "(":
                                depth += 1
                            elif header[k].text == ")":
                                depth -= 1
                                if depth == 0:
                                    if k + 1 < len(header) and header[k + 1].kind == IDENT:
                                        name = header[k + 1].text
                                    break
                    break
            return ("function", FUNCTION, name)
        if _header_has_top_level(header, _CONTROL_KEYWORDS):
            return ("block", None, None)
        return ("other", None, None)

    if language == LanguageId.RUST:
        if "fn" in texts:
            return ("function", FUNCTION, _ident_after(header, "fn"))
        for kw in ("struct", "trait", "enum", "union"):
            if kw in texts:
                return ("class", CLASS, _ident_after(header, kw))
        if "impl" in texts or "mod" in texts:
            return ("namespace", None, None)
        if header[-1].kind == OP and header[-1].text == "=>":
            return ("block", None, None)
        return ("other", None, None)

    if language == LanguageId.JAVASCRIPT:
        if header[-1].kind == OP and header[-1].text == "=>":
            name = None
            depth = 0
            for t in reversed(header):
                if t.kind == OP:
                    if t.text in ")]":
                        depth += 1
                    elif t.text in "([":
                        depth -= 1
                    elif t.text == "=" and depth == 0:
                        # name precedes the '='
                        idx = header.index(t)
                        for t2 in reversed(header[:idx]):
                            if t2.kind == IDENT and t2.text not in ("const", "let", "var"):
                                name = t2.text
                                break
                        break
            return ("function", FUNCTION, name)
        if "function" in texts:
            return ("function", FUNCTION, _ident_after(header, "function"))
        if "class" in texts:
            return ("class", CLASS, _ident_after(header, "class"))
        if "new" in texts:
            return ("class", None, None)
        if _header_has_top_level(header, {"="}):
            return ("other", None, None)
        if enclosure == "class":
            name = _match_paren_name(header, language)
            if name is not None and header[-1].kind == OP and header[-1].text == ")":
                return ("function", FUNCTION, name)
        return ("block", None, None)

    if language == LanguageId.PHP:
        if "function" in texts:
            return ("function", FUNCTION, _ident_after(header, "function"))
        for kw in class_kw:
            if kw in texts:
                return ("class", CLASS, _ident_after(header, kw))
        if _header_has_top_level(header, _NAMESPACE_KEYWORDS):
            return ("namespace", None, None)
        return ("block", None, None)

    # C, C++, Java, C#
    if _header_has_top_level(header, _NAMESPACE_KEYWORDS):
        return ("namespace", None, None)
    if "new" in texts:
        return ("class", None, None)  # anonymous class body (Java/C#)
    if "enum" in texts:
        if language == LanguageId.JAVA:
            return ("class", CLASS, _ident_after(header, "enum"))
        return ("other", None, None)
    for kw in class_kw:
        if kw in texts:
            name = _ident_after(header, kw)
            if language == LanguageId.C:
                return ("other", None, None)  # no classes in C
            return ("class", CLASS, name)
    if language == LanguageId.C and "struct" in texts:
        return ("other", None, None)
    if _header_has_top_level(header, {"="}):
        return ("other", None, None)

    # method / free function: header ends with ')' or trailing qualifiers
    # allow `throws A, B` and C++ trailing qualifiers: skip idents and commas
    tail = len(header) - 1
    while tail >= 0 and (
        (header[tail].kind == IDENT and header[tail].text not in _CONTROL_KEYWORDS)
        or (header[tail].kind == OP and header[tail].text == ",")
    ):
        tail -= 1
    if tail >= 0 and header[tail].kind == OP and header[tail].text == ")":
        allowed = {
            LanguageId.JAVA: {"class"},
            LanguageId.CSHARP: {"class"},
            LanguageId.C: {"module", "namespace"},
            LanguageId.CPP: {"module", "namespace", "class"},
        }[language]
        if enclosure in allowed:
            name = _match_paren_name(header, language)
            if name is not None:
                return ("function", FUNCTION, name)
    return ("block", None, None)


# keywords that anchor a definition header in languages without reliable
# statement terminators before the definition (plus PHP's open tag)
_ANCHOR_KEYWORDS = {
    LanguageId.GO: {"func"},
    LanguageId.RUST: {"fn", "struct", "trait", "enum", "union"},
    LanguageId.JAVASCRIPT: {"function", "class"},
    LanguageId.PHP: {"function", "class", "interface", "trait"},
}
_MODIFIER_KEYWORDS = {
    "pub", "async", "unsafe", "const", "extern", "export", "default",
    "static", "public", "private", "protected", "final", "abstract", "crate",
}


def _trim_to_anchor(header: List[Token], language: LanguageId) -> List[Token]:
    anchors = _ANCHOR_KEYWORDS.get(language)
    if not anchors:
        return header
    idx = None
    for i, t in enumerate(header):
        if t.kind == IDENT and t.text in anchors:
            idx = i
            break
    if idx is None:
        return header
    # keep modifiers and attribute groups immediately before the anchor
    j = idx
    while j > 0:
        prev = header[j - 1]
        if prev.kind == IDENT and prev.text in _MODIFIER_KEYWORDS:
            j -= 1
        elif prev.kind == STRING or (prev.kind == OP and prev.text in ("#", "[", "]", "(", ")")):
            j -= 1
        else:
            break
    return header[j:]


def _scan_braces(text: str, tokens: List[Token], language: LanguageId) -> List[Node]:
    code = [t for t in tokens if t.kind not in (COMMENT_LINE, COMMENT_BLOCK)]
    # preprocessor lines act as header boundaries in the C family
    preproc_lines = set()
    if language in (LanguageId.C, LanguageId.CPP, LanguageId.CSHARP):
        seen_lines = set()
        for t in code:
            if t.line not in seen_lines:
                seen_lines.add(t.line)
                if t.kind == OP and t.text == "#":
                    preproc_lines.add(t.line)
    defs: List[Node] = []
    # stack of (tag, node_or_None)
    stack: List[Tuple[str, Optional[Node]]] = []

    def enclosure() -> str:
        for tag, _ in reversed(stack):
            if tag in ("class", "function", "namespace", "other"):
                return tag
        return "module"

    for k, t in enumerate(code):
        if t.kind != OP or t.text not in ("{", "}"):
            continue
        if t.text == "}":
            if stack:
                tag, node = stack.pop()
                if node is not None:
                    node.end_byte = t.end
                    node.body_end = t.start
            continue

        # back-scan the header: code tokens since the previous top-level
        # ';' / '{' / '}' boundary, skipping balanced paren groups
        header_rev: List[Token] = []
        depth = 0
        j = k - 1
        while j >= 0 and len(header_rev) < 200:
            tj = code[j]
            if tj.line in preproc_lines:
                break
            if tj.kind == OP:
                if tj.text in ")]":
                    depth += 1
                elif tj.text in "([":
                    depth -= 1
                elif depth == 0 and tj.text in (";", "{", "}"):
                    break
            header_rev.append(tj)
            j -= 1
        header = _trim_to_anchor(list(reversed(header_rev)), language)
        tag, unit_kind, name = _classify_brace(header, language, enclosure())
        node = None
        if unit_kind is not None:
            start = header[0].start if header else t.start
            line = header[0].line if header else t.line
            node = Node(
                kind=unit_kind,
                start_byte=start,
                end_byte=t.end,
                name=name,
                body_start=t.end,
                line=line,
            )
            defs.append(node)
        stack.append((tag, node))

    # unterminated definitions extend to EOF
    for tag, node in stack:
        if node is not None:
            node.end_byte = len(text)
            node.body_end = len(text)

    # docstrings: comment block/run ending within 1 line of the header start
    comments = [t for t in tokens if t.kind in (COMMENT_LINE, COMMENT_BLOCK)]
    for node in defs:
        best = None
        for idx, c in enumerate(comments):
            if c.end <= node.start_byte:
                best = idx
            else:
                break
        if best is None:
            continue
        c = comments[best]
        first, last, cs, ce = _merge_comment_run(comments, best)
        end_line = _comment_end_line(text, comments[last].end, comments[last])
        if node.line - end_line <= 1 and ce <= node.start_byte:
            # the run must not belong to a sibling that sits between it and us
            between = text[ce : node.start_byte]
            if between.strip() == "":
                node.docstring = text[cs:ce]
    return defs


# ---------------------------------------------------------------------------
# public API


def _nest(defs: List[Node], text_len: int) -> Node:
    root = Node(kind="module", start_byte=0, end_byte=text_len)
    ordered = sorted(defs, key=lambda d: (d.start_byte, -d.end_byte))
    stack = [root]
    for node in ordered:
        while len(stack) > 1 and not (
            stack[-1].start_byte <= node.start_byte and node.end_byte <= stack[-1].end_byte
        ):
            stack.pop()
        stack[-1].children.append(node)
        stack.append(node)
    return root


def parse_file(file: RawSourceFile) -> SyntaxTree:
    """Parse a source file into a definition tree.

    Raises ParseFailure when the token stream is dominated by
    unrecognizable input.
    """
    tokens = lexer.tokenize(file.content, file.language)
    if tokens and lexer.error_ratio(tokens) > PARSE_ERROR_RATIO:
        raise ParseFailure(
            f"{file.repo_id}/{file.rel_path}: "
            f"{lexer.error_ratio(tokens):.0%} unrecognizable tokens"
        )
    if file.language == LanguageId.PYTHON:
        defs = _scan_python(file.content, tokens)
    elif file.language == LanguageId.RUBY:
        defs = _scan_ruby(file.content, tokens)
    else:
        defs = _scan_braces(file.content, tokens, file.language)
    root = _nest(defs, len(file.content))
    return SyntaxTree(text=file.content, language=file.language, tokens=tokens, root=root)
