"""The 13 rule-based docstring filters: eight update-action rewrites and
five remove-action predicates, plus per-rule corpus statistics.

Update filters run in a fixed order and each is iterated to a fixed point,
which makes every one of them idempotent by construction.
"""

from __future__ import annotations

import csv
import dataclasses
import html
import io
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from . import langid
from .extract import ExtractedUnit, InlineSample, tokenize_text


class FilterId(str, Enum):
    STRIP_DELIMITERS = "StripDelimiters"
    STRIP_MATH_FORMULAS = "StripMathFormulas"
    STRIP_HTML_TAGS = "StripHtmlTags"
    STRIP_METADATA_TAGS = "StripMetadataTags"
    STRIP_HYPERLINK = "StripHyperlink"
    STRIP_EMBEDDED_CODE = "StripEmbeddedCode"
    REMOVE_EMPTY = "RemoveEmpty"
    REMOVE_BAD_LENGTH = "RemoveBadLength"
    REMOVE_NON_ENGLISH = "RemoveNonEnglish"
    REMOVE_AUTO_GEN = "RemoveAutoGen"
    REMOVE_WIP = "RemoveWip"
    HANDLE_QUESTIONS = "HandleQuestions"
    HANDLE_EXAMPLES_NOTES = "HandleExamplesNotes"


UPDATE_FILTERS = (
    FilterId.STRIP_DELIMITERS,
    FilterId.STRIP_HYPERLINK,
    FilterId.STRIP_EMBEDDED_CODE,
    FilterId.STRIP_MATH_FORMULAS,
    FilterId.STRIP_METADATA_TAGS,
    FilterId.STRIP_HTML_TAGS,
    FilterId.HANDLE_EXAMPLES_NOTES,
    FilterId.HANDLE_QUESTIONS,
)

REMOVE_FILTERS = (
    FilterId.REMOVE_EMPTY,
    FilterId.REMOVE_BAD_LENGTH,
    FilterId.REMOVE_NON_ENGLISH,
    FilterId.REMOVE_AUTO_GEN,
    FilterId.REMOVE_WIP,
)


@dataclass
class FilterConfig:
    enabled: frozenset = frozenset(FilterId)
    min_tokens: int = 5
    max_tokens: int = 500
    inline_min_tokens: int = 3
    inline_max_tokens: int = 15
    english_threshold: float = 0.5
    autogen_patterns: Tuple[str, ...] = (
        r"@generated",
        r"begin-user-doc",
        r"end-user-doc",
        r"auto[\s_-]?generated",
        r"generated\s+by",
        r"do\s+not\s+(edit|modify)",
        r"automatically\s+(?:generated|created)",
    )
    wip_patterns: Tuple[str, ...] = (
        r"\btodo\b",
        r"\bfixme\b",
        r"\bwip\b",
        r"\bwork\s+in\s+progress\b",
        r"\bunder\s+construction\b",
        r"\bdeprecated?\b",
        r"\bdeprecates?\b",
        r"\bnot\s+(?:yet\s+)?implemented\b",
    )

    @classmethod
    def from_file(cls, path) -> "FilterConfig":
        """Load overrides from a JSON/TOML config file."""
        text = open(path, "r", encoding="utf-8").read()
        if str(path).endswith(".toml"):
            import tomllib

            data = tomllib.loads(text)
        else:
            data = json.loads(text)
        kwargs = {}
        if "disabled" in data:
            disabled = {FilterId(x) for x in data["disabled"]}
            kwargs["enabled"] = frozenset(set(FilterId) - disabled)
        for key in (
            "min_tokens", "max_tokens", "inline_min_tokens",
            "inline_max_tokens", "english_threshold",
        ):
            if key in data:
                kwargs[key] = data[key]
        for key in ("autogen_patterns", "wip_patterns"):
            if key in data:
                kwargs[key] = tuple(data[key])
        return cls(**kwargs)


@dataclass
class FilterTrace:
    key: str
    applied: List[FilterId] = field(default_factory=list)
    removed_by: Optional[FilterId] = None
    text_before: str = ""
    text_after: Optional[str] = None
    language: str = ""


# ---------------------------------------------------------------------------
# update filters


def _fixpoint(fn: Callable[[str], str], text: str, max_iter: int = 16) -> str:
    for _ in range(max_iter):
        new = fn(text)
        if new == text:
            return text
        text = new
    return text


_BLOCK_DELIMS = [
    ("/**", "*/"), ("/*!", "*/"), ("/*", "*/"),
    ('"""', '"""'), ("'''", "'''"), ("<!--", "-->"),
]
_PURE_DELIM_LINE = re.compile(r"^\s*(/\*+!?|\*+/|\*+|/{2,}!?|#{1,}|=begin|=end|-->|<!--)\s*$")
_LEADING_MARKER = re.compile(r"^\s*(?:\*+(?!/)|/{2,}!?|#+|=begin|=end)\s?")


def strip_delimiters(text: str) -> str:
    def one_pass(t: str) -> str:
        t = t.strip()
        for pre, post in _BLOCK_DELIMS:
            if t.startswith(pre) and t.endswith(post) and len(t) >= len(pre) + len(post):
                t = t[len(pre) : len(t) - len(post)]
                break
        # python string prefixes before a quote
        m = re.match(r"^[rRbBuUfF]{1,2}(['\"])", t)
        if m:
            t = t[m.end() - 1 :]
        if len(t) >= 2 and t[0] == t[-1] and t[0] in "'\"":
            t = t[1:-1]
        lines = []
        for line in t.splitlines():
            if _PURE_DELIM_LINE.match(line):
                lines.append("")
                continue
            line = _LEADING_MARKER.sub("", line).rstrip()
            lines.append(line)
        # drop leading/trailing blank lines
        while lines and not lines[0]:
            lines.pop(0)
        while lines and not lines[-1]:
            lines.pop()
        return "\n".join(lines)

    return _fixpoint(one_pass, text)


_URL_RE = re.compile(r"(?:https?://|ftp://|www\.)[^\s<>\"')\]]+")
_MD_LINK_RE = re.compile(r"\[([^\]]*)\]\(\s*(?:https?://|ftp://|www\.)[^)]*\)")
_URL_LINE_RESIDUE = re.compile(
    r"^[\s*@:.,;\-–—<>#]*"
    r"(?:see(?:\s+also)?|ref(?:erence)?|refer\s+to|link|url|more\s+info(?:rmation)?|"
    r"docs?|documentation|details|source|via|at|read\s+more|visit)?"
    r"[\s*:.,;\-–—<>#]*$",
    re.IGNORECASE,
)


def strip_hyperlink(text: str) -> str:
    def one_pass(t: str) -> str:
        lines = []
        for line in t.splitlines():
            had_url = bool(_URL_RE.search(line)) or bool(_MD_LINK_RE.search(line))
            line2 = _MD_LINK_RE.sub(r"\1", line)
            line2 = _URL_RE.sub("", line2)
            if had_url and _URL_LINE_RESIDUE.match(line2):
                continue
            lines.append(line2.rstrip() if had_url else line)
        out = "\n".join(lines)
        while out.endswith("\n"):
            out = out[:-1]
        return out

    return _fixpoint(one_pass, text)


_DIRECTIVE_RE = re.compile(r"^\s*(?:\.\.\s+)?[\w-]*code(?:-block)?::|^\s*(```|~~~)")
_CODE_LINE_RE = re.compile(r"^\s*(?:>>>|\.\.\.\s|\$ )")


def strip_embedded_code(text: str) -> str:
    def one_pass(t: str) -> str:
        lines = t.splitlines()
        out = []
        i = 0
        while i < len(lines):
            line = lines[i]
            m = _DIRECTIVE_RE.match(line)
            if m and m.group(1):  # fenced block: drop fence and contents
                i += 1
                while i < len(lines) and not re.match(r"^\s*(```|~~~)", lines[i]):
                    i += 1
                i += 1
                continue
            if m:  # directive header: keep it, drop the code until a blank line
                out.append(line.rstrip())
                i += 1
                while i < len(lines) and lines[i].strip():
                    i += 1
                continue
            if _CODE_LINE_RE.match(line):
                i += 1
                continue
            out.append(line)
            i += 1
        while out and not out[-1].strip():
            out.pop()
        return "\n".join(out)

    return _fixpoint(one_pass, text)


_MATH_MARKER_RE = re.compile(
    r"\\(?:sqrt|exp|log|frac|sum|prod|int|mathbf|mathrm|mathit|alpha|beta|gamma|"
    r"delta|lambda|mu|sigma|theta|pi|cdot|times|leq|geq|infty)\b"
    r"|\$[^$]+\$"
    r"|^\s*\{?\[[\w, ]+\]\}?\s*=",
)


def strip_math_formulas(text: str) -> str:
    def one_pass(t: str) -> str:
        lines = t.splitlines()
        out = []
        i = 0
        while i < len(lines):
            line = lines[i]
            if _MATH_MARKER_RE.search(line):
                # drop the formula line and its sentence continuation
                while i < len(lines) and lines[i].strip() and not re.search(
                    r"[.!?]\s*$", lines[i]
                ):
                    i += 1
                i += 1
                continue
            out.append(line)
            i += 1
        while out and not out[-1].strip():
            out.pop()
        return "\n".join(out)

    return _fixpoint(one_pass, text)


_TAG_LINE_RE = re.compile(r"^\s*(?:[@\\][a-zA-Z]\w*\b|:[\w\s-]+(?:\s+\w+)?:)")
_INLINE_JAVADOC_RE = re.compile(r"\{@(?:code|link|linkplain|literal|value)\s+([^}]*)\}")


def strip_metadata_tags(text: str) -> str:
    def one_pass(t: str) -> str:
        t = _INLINE_JAVADOC_RE.sub(r"\1", t)
        lines = [l for l in t.splitlines() if not _TAG_LINE_RE.match(l)]
        while lines and not lines[-1].strip():
            lines.pop()
        while lines and not lines[0].strip():
            lines.pop(0)
        return "\n".join(lines)

    return _fixpoint(one_pass, text)


_HTML_TAG_NAMES = (
    "code|pre|p|b|i|em|strong|a|tt|u|s|div|span|ul|ol|li|dl|dt|dd|br|hr|"
    "h[1-6]|table|thead|tbody|tr|td|th|blockquote|sub|sup|small|big|kbd|"
    "samp|var|cite|abbr|img|font|center|summary|param|returns?|remarks|"
    "para|c|see|seealso|exception|typeparam|value|example|html|body|head"
)
_HTML_TAG_RE = re.compile(rf"</?(?:{_HTML_TAG_NAMES})(?:\s[^<>]*)?/?>", re.IGNORECASE)


def strip_html_tags(text: str) -> str:
    def one_pass(t: str) -> str:
        t = _HTML_TAG_RE.sub("", t)
        if "&" in t:
            decoded = html.unescape(t)
            if len(decoded) < len(t):
                t = decoded
        lines = [l.rstrip() for l in t.splitlines()]
        while lines and not lines[-1]:
            lines.pop()
        while lines and not lines[0]:
            lines.pop(0)
        return "\n".join(lines)

    return _fixpoint(one_pass, text)


_NOTE_LINE_RE = re.compile(
    r"^\s*(?:note|notes|n\.b\.|nb|example|examples|sample usage|usage|e\.g\.|"
    r"for example|warning|see also)\s*[:\-]",
    re.IGNORECASE,
)


def handle_examples_notes(text: str) -> str:
    def one_pass(t: str) -> str:
        lines = t.splitlines()
        for i, line in enumerate(lines):
            if _NOTE_LINE_RE.match(line):
                lines = lines[:i]
                break
        while lines and not lines[-1].strip():
            lines.pop()
        return "\n".join(lines)

    return _fixpoint(one_pass, text)


_QUESTION_SEPARATORS = (" - ", " -- ", " – ", " — ", ": ")


def handle_questions(text: str) -> str:
    """Drop trailing/embedded question sentences; the question starts after
    the last sentence terminator or dash/colon separator preceding the '?'."""

    def one_pass(t: str) -> str:
        qpos = -1
        for i, c in enumerate(t):
            if c == "?" and (i + 1 == len(t) or t[i + 1].isspace()):
                qpos = i
                break
        if qpos == -1:
            return t
        start = 0
        sep_start = 0
        for i in range(qpos):
            c = t[i]
            if c in ".!?" and (i + 1 >= len(t) or t[i + 1].isspace()):
                start = i + 1
                sep_start = i + 1
        for sep in _QUESTION_SEPARATORS:
            j = t.rfind(sep, start, qpos)
            if j != -1:
                sep_start = max(sep_start, j)
        out = t[:sep_start] + t[qpos + 1 :]
        return out.strip(" \t").rstrip("-–—:,").rstrip(" \t")

    return _fixpoint(one_pass, text)


_UPDATE_IMPL: Dict[FilterId, Callable[[str], str]] = {
    FilterId.STRIP_DELIMITERS: strip_delimiters,
    FilterId.STRIP_HYPERLINK: strip_hyperlink,
    FilterId.STRIP_EMBEDDED_CODE: strip_embedded_code,
    FilterId.STRIP_MATH_FORMULAS: strip_math_formulas,
    FilterId.STRIP_METADATA_TAGS: strip_metadata_tags,
    FilterId.STRIP_HTML_TAGS: strip_html_tags,
    FilterId.HANDLE_EXAMPLES_NOTES: handle_examples_notes,
    FilterId.HANDLE_QUESTIONS: handle_questions,
}


def apply_update_filters(
    docstring: str, config: Optional[FilterConfig] = None
) -> Tuple[str, List[FilterId]]:
    config = config or FilterConfig()
    applied: List[FilterId] = []
    text = docstring
    for fid in UPDATE_FILTERS:
        if fid not in config.enabled:
            continue
        new = _UPDATE_IMPL[fid](text)
        if new != text:
            applied.append(fid)
            text = new
    return text, applied


# ---------------------------------------------------------------------------
# remove filters


def apply_remove_filters(
    docstring_tokens: List[str],
    docstring: str,
    config: Optional[FilterConfig] = None,
) -> Optional[FilterId]:
    """First matching remove rule, or None to keep the sample."""
    config = config or FilterConfig()
    enabled = config.enabled
    lower = docstring.lower()

    if FilterId.REMOVE_EMPTY in enabled and (not docstring.strip() or not docstring_tokens):
        return FilterId.REMOVE_EMPTY
    if FilterId.REMOVE_BAD_LENGTH in enabled and not (
        config.min_tokens <= len(docstring_tokens) <= config.max_tokens
    ):
        return FilterId.REMOVE_BAD_LENGTH
    if FilterId.REMOVE_NON_ENGLISH in enabled and not langid.is_english(
        docstring, config.english_threshold
    ):
        return FilterId.REMOVE_NON_ENGLISH
    if FilterId.REMOVE_AUTO_GEN in enabled and any(
        re.search(p, lower) for p in config.autogen_patterns
    ):
        return FilterId.REMOVE_AUTO_GEN
    if FilterId.REMOVE_WIP in enabled and any(
        re.search(p, lower) for p in config.wip_patterns
    ):
        return FilterId.REMOVE_WIP
    return None


# ---------------------------------------------------------------------------
# composition


def clean_pair(
    unit: ExtractedUnit, config: Optional[FilterConfig] = None
) -> Tuple[Optional[ExtractedUnit], FilterTrace]:
    """Run update then remove filters on a unit's docstring.

    Returns (cleaned unit or None, trace); None means the sample was dropped.
    """
    config = config or FilterConfig()
    assert unit.docstring_raw is not None
    key = f"{unit.repo_id}/{unit.rel_path}:{unit.identifier}"
    text, applied = apply_update_filters(unit.docstring_raw, config)
    tokens = tokenize_text(text)
    removed_by = apply_remove_filters(tokens, text, config)
    trace = FilterTrace(
        key=key,
        applied=applied,
        removed_by=removed_by,
        text_before=unit.docstring_raw,
        text_after=None if removed_by else text,
        language=unit.language.value,
    )
    if removed_by is not None:
        return None, trace
    unit.docstring = text
    unit.docstring_tokens = tokens
    return unit, trace


def clean_inline(
    sample: InlineSample, config: Optional[FilterConfig] = None
) -> Tuple[Optional[InlineSample], FilterTrace]:
    """Clean an inline comment and enforce the [min, max] token bounds."""
    config = config or FilterConfig()
    key = f"{sample.repo_id}/{sample.rel_path}:{sample.comment[:40]}"
    text, applied = apply_update_filters(sample.comment, config)
    tokens = tokenize_text(text)
    # inline comments use their own length window, not the docstring one
    inline_cfg = dataclasses.replace(
        config,
        min_tokens=config.inline_min_tokens,
        max_tokens=config.inline_max_tokens,
    )
    removed_by = apply_remove_filters(tokens, text, inline_cfg)
    trace = FilterTrace(
        key=key,
        applied=applied,
        removed_by=removed_by,
        text_before=sample.comment,
        text_after=None if removed_by else text,
        language=sample.language.value,
    )
    if removed_by is not None:
        return None, trace
    sample.comment = text
    sample.comment_tokens = tokens
    return sample, trace


# ---------------------------------------------------------------------------
# reporting


def filter_report(
    traces: Iterable[FilterTrace], totals: Dict[str, int]
) -> Dict[str, Dict[str, Dict[str, float]]]:
    """Per (language, rule) counts and percentages of input samples touched.

    Percentages are against pre-filter counts; update columns overlap.
    """
    counts: Dict[str, Dict[str, int]] = {
        lang: {fid.value: 0 for fid in FilterId} for lang in totals
    }
    for tr in traces:
        row = counts.setdefault(tr.language, {fid.value: 0 for fid in FilterId})
        for fid in tr.applied:
            row[fid.value] += 1
        if tr.removed_by is not None:
            row[tr.removed_by.value] += 1

    report: Dict[str, Dict[str, Dict[str, float]]] = {}
    total_inputs = sum(totals.values())
    for lang, row in sorted(counts.items()):
        n = totals.get(lang, 0)
        report[lang] = {
            fid: {
                "count": c,
                "percent": round(100.0 * c / n, 4) if n else 0.0,
            }
            for fid, c in row.items()
        }
    total_row: Dict[str, Dict[str, float]] = {}
    for fid in FilterId:
        c = sum(counts[lang][fid.value] for lang in counts)
        total_row[fid.value] = {
            "count": c,
            "percent": round(100.0 * c / total_inputs, 4) if total_inputs else 0.0,
        }
    report["total"] = total_row
    return report


def write_report(report: dict, json_path, csv_path) -> None:
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    buf = io.StringIO()
    writer = csv.writer(buf)
    langs = [l for l in sorted(report) if l != "total"] + ["total"]
    writer.writerow(["filter"] + langs)
    for fid in FilterId:
        writer.writerow(
            [fid.value] + [report[lang][fid.value]["percent"] for lang in langs]
        )
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
