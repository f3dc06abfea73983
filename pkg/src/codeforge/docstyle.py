"""Docstring style detection and metadata parsing.

Eleven style conventions plus Unstyled.  Detection is strict: a docstring
must match a style's section grammar exactly or it falls back to Unstyled.
Parsing turns section bodies into params / returns / raises / other_tags
and keeps the prose outside sections as the description.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .languages import LanguageId


class StyleId(str, Enum):
    GOOGLE = "google"
    NUMPY = "numpy"
    REST = "rest"
    EPYTEXT = "epytext"
    JAVADOC = "javadoc"
    JSDOC = "jsdoc"
    PHPDOC = "phpdoc"
    DOXYGEN = "doxygen"
    XMLDOC = "xmldoc"
    YARD = "yard"
    RDOC = "rdoc"
    UNSTYLED = "unstyled"


@dataclass
class ParamDoc:
    name: str
    type_hint: Optional[str] = None
    description: str = ""


@dataclass
class ReturnDoc:
    type_hint: Optional[str] = None
    description: str = ""


@dataclass
class RaiseDoc:
    exception: str = ""
    description: str = ""


@dataclass
class DocstringMetadata:
    style: StyleId = StyleId.UNSTYLED
    description: str = ""
    short_docstring: str = ""
    params: List[ParamDoc] = field(default_factory=list)
    returns: Optional[ReturnDoc] = None
    raises: List[RaiseDoc] = field(default_factory=list)
    other_tags: Dict[str, str] = field(default_factory=dict)

    def attribute_count(self) -> int:
        return (
            len(self.params)
            + len(self.raises)
            + (1 if self.returns is not None else 0)
            + len(self.other_tags)
        )

    def to_dict(self) -> dict:
        return {
            "style": self.style.value,
            "description": self.description,
            "short_docstring": self.short_docstring,
            "params": [
                {"name": p.name, "type": p.type_hint, "description": p.description}
                for p in self.params
            ],
            "returns": (
                {"type": self.returns.type_hint, "description": self.returns.description}
                if self.returns
                else None
            ),
            "raises": [
                {"exception": r.exception, "description": r.description}
                for r in self.raises
            ],
            "other_tags": dict(self.other_tags),
        }


# ---------------------------------------------------------------------------
# short docstring

_TERMINATOR_RE = re.compile(r"[.!?]")


def short_docstring(description: str) -> str:
    """First sentence: up to a terminator followed by end, newline, or
    whitespace before an uppercase letter (so `e.g.` does not split)."""
    for m in _TERMINATOR_RE.finditer(description):
        i = m.end()
        if i >= len(description):
            return description
        nxt = description[i]
        if nxt == "\n":
            return description[:i]
        if nxt.isspace():
            rest = description[i:].lstrip(" \t")
            if not rest or rest[0] == "\n" or rest[0].isupper():
                return description[:i]
    first_line = description.split("\n", 1)[0]
    return first_line if first_line else description


# ---------------------------------------------------------------------------
# detection

_GOOGLE_SECTION_RE = re.compile(
    r"^(Args|Arguments|Returns|Yields|Raises|Attributes)\s*:\s*$", re.MULTILINE
)
_NUMPY_SECTION_RE = re.compile(
    r"^(Parameters|Returns|Yields|Raises|Attributes|Other Parameters)\s*\n\s*-{3,}\s*$",
    re.MULTILINE,
)
_REST_FIELD_RE = re.compile(
    r"^\s*:(param|parameter|arg|argument|key|keyword|type|returns?|rtype|raises?|"
    r"except|exception|var|ivar|cvar|vartype|yields?|meta)\b[^:\n]*:",
    re.MULTILINE,
)
_EPYTEXT_FIELD_RE = re.compile(
    r"^\s*@(param|type|return|returns|rtype|raise|raises|keyword|ivar|cvar|var)\b[^:\n]*:",
    re.MULTILINE,
)
_JAVADOC_TAG_RE = re.compile(
    r"^\s*@(param|return|throws|exception|see|since|author|version|deprecated|serial)\b",
    re.MULTILINE,
)
_JSDOC_TAG_RE = re.compile(
    r"^\s*@(param|arg|argument|returns?|throws|exception|property|typedef|callback|"
    r"async|function|method|memberof|augments|extends|deprecated|example|see|type)\b",
    re.MULTILINE,
)
_JSDOC_TYPED_RE = re.compile(r"^\s*@(?:param|arg|argument|returns?|type)\s*\{", re.MULTILINE)
_PHPDOC_TAG_RE = re.compile(
    r"^\s*@(param|return|throws|var|property|method|author|since|deprecated|see|link)\b",
    re.MULTILINE,
)
_PHPDOC_SIGIL_RE = re.compile(r"^\s*@param\s+\S+\s+\$\w+", re.MULTILINE)
_DOXYGEN_TAG_RE = re.compile(
    r"^\s*[\\@](param|return|returns|retval|brief|throws?|exception|tparam|"
    r"details|note|warning|see|sa|author|since|deprecated)\b",
    re.MULTILINE,
)
_DOXYGEN_BACKSLASH_RE = re.compile(r"^\s*\\[a-z]+\b", re.MULTILINE)
_XMLDOC_TAG_RE = re.compile(
    r"<(summary|param|returns|exception|remarks|value|typeparam)\b[^>]*>", re.IGNORECASE
)
_YARD_TAG_RE = re.compile(
    r"^\s*@(param|return|raise|option|yield|yieldparam|yieldreturn|attr|"
    r"attr_reader|attr_writer|example|note|see|deprecated|since|author)\b",
    re.MULTILINE,
)
_YARD_BRACKET_RE = re.compile(r"^\s*@(?:param\s+\w+|return)\s+\[[^\]]+\]", re.MULTILINE)
_RDOC_RE = re.compile(r"^\s*(?:=+\s+\w|[+*]?\w+[+*]?\s*::\s+\S)", re.MULTILINE)


def _matches(style: StyleId, text: str) -> bool:
    if style is StyleId.GOOGLE:
        return bool(_GOOGLE_SECTION_RE.search(text))
    if style is StyleId.NUMPY:
        return bool(_NUMPY_SECTION_RE.search(text))
    if style is StyleId.REST:
        return bool(_REST_FIELD_RE.search(text))
    if style is StyleId.EPYTEXT:
        return bool(_EPYTEXT_FIELD_RE.search(text))
    if style is StyleId.JAVADOC:
        return bool(_JAVADOC_TAG_RE.search(text))
    if style is StyleId.JSDOC:
        return bool(_JSDOC_TYPED_RE.search(text)) or bool(_JSDOC_TAG_RE.search(text))
    if style is StyleId.PHPDOC:
        return bool(_PHPDOC_SIGIL_RE.search(text)) or bool(_PHPDOC_TAG_RE.search(text))
    if style is StyleId.DOXYGEN:
        return bool(_DOXYGEN_TAG_RE.search(text)) or bool(_DOXYGEN_BACKSLASH_RE.search(text))
    if style is StyleId.XMLDOC:
        return bool(_XMLDOC_TAG_RE.search(text))
    if style is StyleId.YARD:
        return bool(_YARD_BRACKET_RE.search(text)) or bool(_YARD_TAG_RE.search(text))
    if style is StyleId.RDOC:
        return bool(_RDOC_RE.search(text))
    return False


# First match in priority order wins; Go has no supported style.
STYLE_PRIORITY: Dict[LanguageId, Tuple[StyleId, ...]] = {
    LanguageId.PYTHON: (StyleId.GOOGLE, StyleId.NUMPY, StyleId.REST, StyleId.EPYTEXT),
    LanguageId.JAVA: (StyleId.JAVADOC,),
    LanguageId.JAVASCRIPT: (StyleId.JSDOC,),
    LanguageId.PHP: (StyleId.PHPDOC,),
    LanguageId.C: (StyleId.DOXYGEN,),
    LanguageId.CPP: (StyleId.DOXYGEN, StyleId.JAVADOC),
    LanguageId.CSHARP: (StyleId.XMLDOC, StyleId.DOXYGEN),
    LanguageId.GO: (),
    LanguageId.RUBY: (StyleId.YARD, StyleId.RDOC),
    LanguageId.RUST: (StyleId.RDOC,),
}


def detect_style(docstring: str, language: LanguageId) -> StyleId:
    """First style in the language's priority order whose markers match."""
    for style in STYLE_PRIORITY.get(language, ()):
        if _matches(style, docstring):
            return style
    return StyleId.UNSTYLED


# ---------------------------------------------------------------------------
# parsing


def _add_unparsed(meta: DocstringMetadata, text: str) -> None:
    if not text.strip():
        return
    existing = meta.other_tags.get("unparsed", "")
    meta.other_tags["unparsed"] = (existing + "\n" + text).strip()


def _parse_google(text: str, meta: DocstringMetadata) -> None:
    lines = text.splitlines()
    desc: List[str] = []
    i = 0
    while i < len(lines):
        m = _GOOGLE_SECTION_RE.match(lines[i])
        if not m:
            desc.append(lines[i])
            i += 1
            continue
        section = m.group(1)
        body: List[str] = []
        i += 1
        while i < len(lines) and (not lines[i].strip() or lines[i][:1] in (" ", "\t")):
            body.append(lines[i])
            i += 1
        _parse_google_section(section, body, meta)
    meta.description = "\n".join(desc).strip()


def _parse_google_section(section: str, body: List[str], meta: DocstringMetadata) -> None:
    # entries look like "    name (type): description" with continuations
    entries: List[Tuple[str, str]] = []
    current: Optional[List[str]] = None
    head = ""
    base_indent = None
    for line in body:
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        if base_indent is None:
            base_indent = indent
        if indent <= base_indent and ":" in line:
            if current is not None:
                entries.append((head, " ".join(current)))
            head, _, rest = line.strip().partition(":")
            current = [rest.strip()] if rest.strip() else []
        elif current is not None:
            current.append(line.strip())
        else:
            _add_unparsed(meta, line)
    if current is not None:
        entries.append((head, " ".join(current)))

    for head, desc in entries:
        if section in ("Args", "Arguments"):
            m = re.match(r"^(\*{0,2}\w+)\s*(?:\(([^)]*)\))?$", head.strip())
            if m:
                meta.params.append(ParamDoc(m.group(1), m.group(2), desc))
            else:
                _add_unparsed(meta, f"{head}: {desc}")
        elif section in ("Returns", "Yields"):
            type_hint = head.strip() if re.match(r"^[\w.\[\], ]+$", head.strip()) else None
            meta.returns = ReturnDoc(type_hint, desc if type_hint else f"{head}: {desc}".strip(": "))
        elif section == "Raises":
            meta.raises.append(RaiseDoc(head.strip(), desc))
        else:
            meta.other_tags[section.lower()] = (f"{head}: {desc}").strip(": ")


def _parse_numpy(text: str, meta: DocstringMetadata) -> None:
    lines = text.splitlines()
    desc: List[str] = []
    i = 0
    while i < len(lines):
        if (
            i + 1 < len(lines)
            and re.match(r"^\s*-{3,}\s*$", lines[i + 1])
            and lines[i].strip()
        ):
            section = lines[i].strip()
            i += 2
            body: List[str] = []
            while i < len(lines) and not (
                i + 1 < len(lines)
                and re.match(r"^\s*-{3,}\s*$", lines[i + 1])
                and lines[i].strip()
            ):
                body.append(lines[i])
                i += 1
            _parse_numpy_section(section, body, meta)
        else:
            desc.append(lines[i])
            i += 1
    meta.description = "\n".join(desc).strip()


def _parse_numpy_section(section: str, body: List[str], meta: DocstringMetadata) -> None:
    entries: List[Tuple[str, Optional[str], str]] = []
    current_desc: Optional[List[str]] = None
    name, type_hint = "", None
    for line in body:
        if not line.strip():
            continue
        m = re.match(r"^(\w[\w, *]*?)\s*:\s*(.+)$", line.strip()) if not line[:1].isspace() else None
        m2 = re.match(r"^(\w[\w, *]*)$", line.strip()) if not line[:1].isspace() else None
        if m:
            if current_desc is not None:
                entries.append((name, type_hint, " ".join(current_desc)))
            name, type_hint, current_desc = m.group(1), m.group(2), []
        elif m2:
            if current_desc is not None:
                entries.append((name, type_hint, " ".join(current_desc)))
            name, type_hint, current_desc = m2.group(1), None, []
        elif current_desc is not None:
            current_desc.append(line.strip())
        else:
            _add_unparsed(meta, line)
    if current_desc is not None:
        entries.append((name, type_hint, " ".join(current_desc)))

    for name, type_hint, desc in entries:
        if section in ("Parameters", "Other Parameters"):
            for part in name.split(","):
                if part.strip():
                    meta.params.append(ParamDoc(part.strip(), type_hint, desc))
        elif section in ("Returns", "Yields"):
            meta.returns = ReturnDoc(type_hint or (name if name else None), desc)
        elif section == "Raises":
            meta.raises.append(RaiseDoc(name, desc))
        else:
            meta.other_tags[section.lower()] = desc or name


_COLON_FIELD_RE = re.compile(r"^\s*([:@])(\w+)([^:\n]*):\s*(.*)$")
_BARE_TAG_RE = re.compile(r"^\s*([@\\])(\w+)\s*(.*)$")

_PARAM_TAGS = ("param", "parameter", "arg", "argument", "key", "keyword", "option")
_RETURN_TAGS = ("return", "returns", "retval", "yieldreturn")
_RAISE_TAGS = ("raise", "raises", "throw", "throws", "exception", "except")


def _parse_tagged(
    text: str,
    meta: DocstringMetadata,
    sigil: str,
    colon_required: bool,
    style: StyleId,
) -> None:
    """Shared parser for reST/epytext/javadoc/jsdoc/phpdoc/doxygen/yard:
    `<sigil>tag payload` lines with indented continuations."""
    lines = text.splitlines()
    desc: List[str] = []
    entries: List[Tuple[str, str, List[str]]] = []  # (tag, head, body lines)
    current: Optional[List[str]] = None
    for line in lines:
        if colon_required:
            m = _COLON_FIELD_RE.match(line)
            if m and m.group(1) == sigil:
                current = [m.group(4).strip()] if m.group(4).strip() else []
                entries.append((m.group(2), m.group(3).strip(), current))
                continue
            if re.match(rf"^\s*{re.escape(sigil)}\w+", line):
                current = None
                _add_unparsed(meta, line)
                continue
        else:
            m = _BARE_TAG_RE.match(line)
            if m and (m.group(1) == sigil or (sigil == "\\" and m.group(1) in "\\@")):
                current = []
                entries.append((m.group(2), m.group(3).strip(), current))
                continue
        if current is not None and (line.startswith((" ", "\t")) or not line.strip()):
            if line.strip():
                current.append(line.strip())
        else:
            current = None
            desc.append(line)
    meta.description = "\n".join(desc).strip()

    for tag, head, dlines in entries:
        body = " ".join(dlines).strip()
        _assign_tag(meta, tag.lower(), head, body, style, colon_required)


def _split_head(payload: str, style: StyleId) -> Tuple[Optional[str], str, str]:
    """Split a param/return payload into (type_hint, name, description)."""
    type_hint = None
    m = re.match(r"^\{([^}]*)\}\s*(.*)$", payload, re.DOTALL)
    if m:  # jsdoc: {type} name desc
        type_hint, payload = m.group(1).strip(), m.group(2)
    parts = payload.split()
    if not parts:
        return type_hint, "", ""
    name = parts[0]
    rest = parts[1:]
    if style is StyleId.PHPDOC and rest and rest[0].startswith("$"):
        # phpdoc: type $name desc; the variable sigil is not part of the name
        type_hint, name, rest = name, rest[0].lstrip("$"), rest[1:]
    if style is StyleId.YARD and rest and rest[0].startswith("["):
        # yard: name [Type] desc
        joined = " ".join(rest)
        m = re.match(r"^\[([^\]]+)\]\s*(.*)$", joined)
        if m:
            type_hint = m.group(1)
            return type_hint, name, m.group(2)
    return type_hint, name, " ".join(rest)


def _assign_tag(
    meta: DocstringMetadata,
    tag: str,
    head: str,
    body: str,
    style: StyleId,
    colon_separated: bool,
) -> None:
    if tag in _PARAM_TAGS:
        if colon_separated:
            # reST/epytext: ":param [type] name: desc"
            parts = head.split()
            if not parts:
                _add_unparsed(meta, f":{tag}: {body}")
                return
            name = parts[-1]
            ptype = " ".join(parts[:-1]) or None
            meta.params.append(ParamDoc(name, ptype, body))
        else:
            ptype, name, desc = _split_head(head, style)
            desc = (desc + " " + body).strip()
            if name and not name.startswith("{"):
                meta.params.append(ParamDoc(name, ptype, desc))
            else:
                _add_unparsed(meta, f"@{tag} {head} {body}".strip())
    elif tag in ("type", "vartype"):
        target = head.split()[-1] if head.split() else ""
        hint = body if colon_separated else ""
        for p in meta.params:
            if p.name == target:
                p.type_hint = hint or p.type_hint
                return
        meta.other_tags[f"type {target}".strip()] = hint
    elif tag in _RETURN_TAGS or (tag == "yield" and style is StyleId.YARD):
        if colon_separated:
            meta.returns = ReturnDoc(head or None, body)
        else:
            rtype = None
            payload = (head + " " + body).strip()
            m = re.match(r"^\{([^}]*)\}\s*(.*)$", payload, re.DOTALL)
            if m:
                rtype, payload = m.group(1).strip(), m.group(2).strip()
            elif style is StyleId.YARD:
                m = re.match(r"^\[([^\]]+)\]\s*(.*)$", payload, re.DOTALL)
                if m:
                    rtype, payload = m.group(1).strip(), m.group(2).strip()
            elif style is StyleId.PHPDOC:
                parts = payload.split()
                if parts:
                    rtype, payload = parts[0], " ".join(parts[1:])
            meta.returns = ReturnDoc(rtype, payload)
    elif tag == "rtype":
        hint = (body if colon_separated else (head + " " + body)).strip()
        if meta.returns is None:
            meta.returns = ReturnDoc(hint, "")
        else:
            meta.returns.type_hint = hint
    elif tag in _RAISE_TAGS:
        if colon_separated:
            meta.raises.append(RaiseDoc(head, body))
        else:
            payload = (head + " " + body).strip()
            m = re.match(r"^\{([^}]*)\}\s*(.*)$", payload, re.DOTALL)
            if m:
                payload = (m.group(1) + " " + m.group(2)).strip()
            parts = payload.split()
            exc = parts[0] if parts else ""
            meta.raises.append(RaiseDoc(exc, " ".join(parts[1:])))
    elif tag == "brief":
        # doxygen: \brief text is the leading description
        payload = (head + " " + body).strip()
        meta.description = (payload + "\n" + meta.description).strip()
    else:
        payload = (head + " " + body).strip() if not colon_separated else body
        key = tag if colon_separated and not head else tag
        if colon_separated and head:
            key = f"{tag} {head}"
        prev = meta.other_tags.get(key)
        meta.other_tags[key] = (prev + "; " + payload).strip("; ") if prev else payload


def _parse_xmldoc(text: str, meta: DocstringMetadata) -> None:
    def grab(tag: str) -> List[Tuple[str, str]]:
        out = []
        for m in re.finditer(
            rf"<{tag}\b([^>]*)>(.*?)</{tag}>", text, re.DOTALL | re.IGNORECASE
        ):
            attrs = m.group(1)
            name = ""
            nm = re.search(r'(?:name|cref)\s*=\s*"([^"]*)"', attrs)
            if nm:
                name = nm.group(1)
            out.append((name, re.sub(r"\s+", " ", m.group(2)).strip()))
        return out

    for name, body in grab("param"):
        if name:
            meta.params.append(ParamDoc(name, None, body))
    for _, body in grab("returns"):
        meta.returns = ReturnDoc(None, body)
    for name, body in grab("exception"):
        meta.raises.append(RaiseDoc(name, body))
    for name, body in grab("typeparam"):
        meta.other_tags[f"typeparam {name}".strip()] = body
    for _, body in grab("remarks"):
        meta.other_tags["remarks"] = body
    for _, body in grab("value"):
        meta.other_tags["value"] = body
    summaries = grab("summary")
    if summaries:
        meta.description = summaries[0][1]
    else:
        stripped = re.sub(r"<[^>]+>", "", text)
        meta.description = re.sub(r"\s+", " ", stripped).strip()


def _parse_rdoc(text: str, meta: DocstringMetadata) -> None:
    lines = text.splitlines()
    desc: List[str] = []
    for line in lines:
        m = re.match(r"^\s*[+*]?(\w+)[+*]?\s*::\s*(.+)$", line)
        if m:
            meta.params.append(ParamDoc(m.group(1), None, m.group(2).strip()))
        elif re.match(r"^\s*=+\s+\w", line):
            meta.other_tags[line.strip().lstrip("= ").lower()] = ""
        else:
            desc.append(line)
    meta.description = "\n".join(desc).strip()


def parse_metadata(docstring: str, style: StyleId) -> DocstringMetadata:
    """Parse a delimiter-stripped docstring according to its detected style."""
    meta = DocstringMetadata(style=style)
    if not docstring.strip():
        return meta
    if style is StyleId.GOOGLE:
        _parse_google(docstring, meta)
    elif style is StyleId.NUMPY:
        _parse_numpy(docstring, meta)
    elif style is StyleId.REST:
        _parse_tagged(docstring, meta, ":", colon_required=True, style=style)
    elif style is StyleId.EPYTEXT:
        _parse_tagged(docstring, meta, "@", colon_required=True, style=style)
    elif style in (StyleId.JAVADOC, StyleId.JSDOC, StyleId.PHPDOC, StyleId.YARD):
        _parse_tagged(docstring, meta, "@", colon_required=False, style=style)
    elif style is StyleId.DOXYGEN:
        _parse_tagged(docstring, meta, "\\", colon_required=False, style=style)
    elif style is StyleId.XMLDOC:
        _parse_xmldoc(docstring, meta)
    elif style is StyleId.RDOC:
        _parse_rdoc(docstring, meta)
    else:
        meta.description = docstring.strip()

    # params must appear verbatim in the source text; drop fabrications
    meta.params = [p for p in meta.params if p.name and p.name in docstring]
    meta.short_docstring = short_docstring(meta.description)
    return meta


def analyze_docstring(docstring: str, language: LanguageId) -> DocstringMetadata:
    style = detect_style(docstring, language)
    return parse_metadata(docstring, style)
