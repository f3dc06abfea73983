"""Unit and inline-comment extraction from parsed files, plus the two
tokenizers (syntax-leaf code tokens, word+punctuation text tokens)."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from . import lexer
from .ingest import RawSourceFile
from .languages import LanguageId
from .lexer import COMMENT_BLOCK, COMMENT_LINE
from .syntax import CLASS, FUNCTION, Node, SyntaxTree

CLASS_TOKEN_LIMIT = 5000  # class units above this many code tokens are dropped


@dataclass
class ExtractedUnit:
    repo_id: str
    rel_path: str
    language: LanguageId
    kind: str  # "function" | "class"
    identifier: str
    code: str
    code_span: Tuple[int, int]
    code_tokens: List[str]
    docstring_raw: Optional[str] = None
    docstring: Optional[str] = None  # filled after cleaning
    docstring_tokens: Optional[List[str]] = None
    tokenizer_fallback: bool = False


@dataclass
class InlineSample:
    repo_id: str
    rel_path: str
    language: LanguageId
    comment: str
    comment_tokens: List[str]
    prev_context: str
    next_context: str
    enclosing_identifier: Optional[str] = None


@dataclass
class ExtractCounters:
    units: int = 0
    dropped_class_token_limit: int = 0
    inline_samples: int = 0


_WORD_RE = re.compile(r"[A-Za-z0-9_]+|[^A-Za-z0-9_\s]")


def tokenize_text(text: str) -> List[str]:
    """Split on whitespace, then break punctuation into single-char tokens."""
    out: List[str] = []
    for chunk in text.split():
        i = 0
        while i < len(chunk):
            m = re.match(r"[A-Za-z0-9_]+", chunk[i:])
            if m:
                out.append(m.group(0))
                i += m.end()
            else:
                out.append(chunk[i])
                i += 1
    return out


def tokenize_code_ex(code: str, language: LanguageId) -> Tuple[List[str], bool]:
    """Leaf tokens of a code fragment; falls back to word+punct splitting
    when the fragment does not lex cleanly.  Returns (tokens, used_fallback)."""
    tokens = lexer.tokenize(code, language)
    if tokens and lexer.error_ratio(tokens) > 0.25:
        return tokenize_text(code), True
    return (
        [t.text for t in tokens if t.kind not in (COMMENT_LINE, COMMENT_BLOCK)],
        False,
    )


def tokenize_code(code: str, language: LanguageId) -> List[str]:
    return tokenize_code_ex(code, language)[0]


def _bfs_definitions(root: Node) -> List[Node]:
    """Level-order traversal of function/class definition nodes."""
    out: List[Node] = []
    queue = deque(root.children)
    while queue:
        node = queue.popleft()
        if node.kind in (FUNCTION, CLASS):
            out.append(node)
        queue.extend(node.children)
    return out


def extract_units(
    tree: SyntaxTree,
    file: RawSourceFile,
    counters: Optional[ExtractCounters] = None,
) -> List[ExtractedUnit]:
    """All function/class units in BFS order, each with its associated
    docstring (or None).  Class units above CLASS_TOKEN_LIMIT code tokens
    are dropped."""
    counters = counters if counters is not None else ExtractCounters()
    units: List[ExtractedUnit] = []
    for node in _bfs_definitions(tree.root):
        code = file.content[node.start_byte : node.end_byte]
        toks = [t.text for t in tree.code_tokens(node.start_byte, node.end_byte)]
        if node.kind == CLASS and len(toks) > CLASS_TOKEN_LIMIT:
            counters.dropped_class_token_limit += 1
            continue
        identifier = node.name or f"<anonymous:{node.line + 1}>"
        units.append(
            ExtractedUnit(
                repo_id=file.repo_id,
                rel_path=file.rel_path,
                language=file.language,
                kind=node.kind,
                identifier=identifier,
                code=code,
                code_span=(node.start_byte, node.end_byte),
                code_tokens=toks,
                docstring_raw=node.docstring,
            )
        )
        counters.units += 1
    return units


_COMMENT_MARKER_RE = re.compile(r"^\s*(#+|/{2,}|\*+)\s?")


def comment_text(raw: str) -> str:
    """Strip comment markers from a raw line-comment run or block comment."""
    text = raw
    for pre, post in (("/**", "*/"), ("/*", "*/"), ("<!--", "-->")):
        if text.startswith(pre) and text.endswith(post) and len(text) >= len(pre) + len(post):
            text = text[len(pre) : -len(post)]
            break
    lines = []
    for line in text.splitlines():
        line = _COMMENT_MARKER_RE.sub("", line).rstrip()
        lines.append(line)
    return " ".join(l for l in lines if l).strip()


def extract_inline_blocks(
    tree: SyntaxTree,
    file: RawSourceFile,
    counters: Optional[ExtractCounters] = None,
) -> List[InlineSample]:
    """One sample per (merged) inline line-comment run inside a function
    body, with the statement runs before and after as context."""
    counters = counters if counters is not None else ExtractCounters()
    text = file.content
    comments = [t for t in tree.tokens if t.kind == COMMENT_LINE]
    functions = [n for n in _bfs_definitions(tree.root) if n.kind == FUNCTION]

    # assign each comment to its innermost enclosing function body
    samples: List[InlineSample] = []
    for fn in functions:
        body_start = fn.body_start if fn.body_start is not None else fn.start_byte
        body_end = fn.body_end if fn.body_end is not None else fn.end_byte
        # context windows start after the docstring, when it sits in the body
        if fn.docstring is not None:
            ds_start = text.find(fn.docstring, body_start, body_end)
            if ds_start != -1:
                body_start = ds_start + len(fn.docstring)
        inner_spans = [
            (c.start_byte, c.end_byte) for c in fn.children if c.kind in (FUNCTION, CLASS)
        ]

        def in_inner(tok) -> bool:
            return any(s <= tok.start and tok.end <= e for s, e in inner_spans)

        body_comments = [
            c
            for c in comments
            if body_start <= c.start and c.end <= body_end and not in_inner(c)
        ]
        # skip the doc comment when it is the body-leading run (Ruby style)
        if fn.docstring is not None:
            ds_start = text.find(fn.docstring, body_start)
            if ds_start != -1:
                ds_end = ds_start + len(fn.docstring)
                body_comments = [
                    c for c in body_comments if not (ds_start <= c.start and c.end <= ds_end)
                ]

        # merge consecutive comment lines into runs
        runs: List[Tuple[int, int]] = []
        for c in body_comments:
            if runs and c.line - _line_of(text, runs[-1][1]) <= 1 and (
                text[runs[-1][1] : c.start].strip() == ""
            ):
                runs[-1] = (runs[-1][0], c.end)
            else:
                runs.append((c.start, c.end))

        for idx, (cs, ce) in enumerate(runs):
            prev_lo = runs[idx - 1][1] if idx > 0 else body_start
            next_hi = runs[idx + 1][0] if idx + 1 < len(runs) else body_end
            prev_context = text[prev_lo:cs].strip()
            next_context = text[ce:next_hi].strip()
            if not prev_context and not next_context:
                continue
            comment = comment_text(text[cs:ce])
            if not comment:
                continue
            samples.append(
                InlineSample(
                    repo_id=file.repo_id,
                    rel_path=file.rel_path,
                    language=file.language,
                    comment=comment,
                    comment_tokens=tokenize_text(comment),
                    prev_context=prev_context,
                    next_context=next_context,
                    enclosing_identifier=fn.name,
                )
            )
            counters.inline_samples += 1
    return samples


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos)
