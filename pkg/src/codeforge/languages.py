"""Supported languages and extension-based detection."""

from __future__ import annotations

from enum import Enum
from typing import Optional


class LanguageId(str, Enum):
    PYTHON = "python"
    JAVA = "java"
    JAVASCRIPT = "javascript"
    PHP = "php"
    C = "c"
    CPP = "cpp"
    CSHARP = "csharp"
    GO = "go"
    RUBY = "ruby"
    RUST = "rust"


ALL_LANGUAGES = frozenset(LanguageId)

# Closed extension map; unknown extensions are rejected, never guessed.
# .h is assigned to C (deterministic choice over content sniffing).
EXTENSION_MAP = {
    ".py": LanguageId.PYTHON,
    ".java": LanguageId.JAVA,
    ".js": LanguageId.JAVASCRIPT,
    ".php": LanguageId.PHP,
    ".c": LanguageId.C,
    ".h": LanguageId.C,
    ".cpp": LanguageId.CPP,
    ".cc": LanguageId.CPP,
    ".hpp": LanguageId.CPP,
    ".cs": LanguageId.CSHARP,
    ".go": LanguageId.GO,
    ".rb": LanguageId.RUBY,
    ".rs": LanguageId.RUST,
}


def detect_language(rel_path: str) -> Optional[LanguageId]:
    """Map a file path to a supported language by extension, or None."""
    name = rel_path.rsplit("/", 1)[-1]
    if "." not in name:
        return None
    ext = "." + name.rsplit(".", 1)[-1].lower()
    return EXTENSION_MAP.get(ext)


def parse_language(value: str) -> Optional[LanguageId]:
    """Parse a user-supplied language name (accepts common aliases); None if unknown."""
    aliases = {
        "python": LanguageId.PYTHON,
        "py": LanguageId.PYTHON,
        "java": LanguageId.JAVA,
        "javascript": LanguageId.JAVASCRIPT,
        "js": LanguageId.JAVASCRIPT,
        "php": LanguageId.PHP,
        "c": LanguageId.C,
        "cpp": LanguageId.CPP,
        "c++": LanguageId.CPP,
        "csharp": LanguageId.CSHARP,
        "c#": LanguageId.CSHARP,
        "cs": LanguageId.CSHARP,
        "go": LanguageId.GO,
        "golang": LanguageId.GO,
        "ruby": LanguageId.RUBY,
        "rb": LanguageId.RUBY,
        "rust": LanguageId.RUST,
        "rs": LanguageId.RUST,
    }
    return aliases.get(value.strip().lower())
