"""Corpus discovery: walk directory trees (or a JSONL manifest), attach
repository provenance, detect language, and stream immutable records."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Set

from .languages import EXTENSION_MAP, LanguageId, detect_language

logger = logging.getLogger(__name__)

MAX_FILE_BYTES = 1 << 20  # generated/minified files dominate beyond 1 MiB


def content_fingerprint(text: str) -> int:
    """Stable 64-bit fingerprint of file content."""
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class RawSourceFile:
    repo_id: str
    rel_path: str
    language: LanguageId
    content: str
    content_hash: int


@dataclass
class ScanCounters:
    emitted: int = 0
    skipped_undecodable: int = 0
    skipped_unreadable: int = 0
    skipped_too_large: int = 0
    by_reason: dict = field(default_factory=dict)

    @property
    def skipped(self) -> int:
        return (
            self.skipped_undecodable
            + self.skipped_unreadable
            + self.skipped_too_large
        )


def _decode(data: bytes) -> Optional[str]:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return None


def scan_corpus(
    roots: Iterable[Path],
    include_langs: Optional[Set[LanguageId]] = None,
    max_file_bytes: int = MAX_FILE_BYTES,
    counters: Optional[ScanCounters] = None,
) -> Iterator[RawSourceFile]:
    """Stream source files under the given roots in deterministic order.

    repo_id is the first path component under each root; files directly
    under a root get repo_id equal to the root's own name.  Emission order
    is lexicographic by (repo_id, rel_path).
    """
    include = set(include_langs) if include_langs is not None else None
    counters = counters if counters is not None else ScanCounters()

    entries = []
    for root in roots:
        root = Path(root)
        if not root.is_dir():
            raise FileNotFoundError(f"corpus root not found or unreadable: {root}")
        for dirpath, dirnames, filenames in os.walk(root):
            dirnames.sort()
            for fname in sorted(filenames):
                full = Path(dirpath) / fname
                rel = full.relative_to(root)
                lang = detect_language(str(rel))
                if lang is None or (include is not None and lang not in include):
                    continue
                parts = rel.parts
                repo_id = parts[0] if len(parts) > 1 else root.name
                rel_path = "/".join(parts[1:]) if len(parts) > 1 else parts[0]
                entries.append((repo_id, rel_path, full, lang))

    entries.sort(key=lambda e: (e[0], e[1]))
    for repo_id, rel_path, full, lang in entries:
        try:
            data = full.read_bytes()
        except OSError as exc:
            logger.warning("skipping unreadable file %s: %s", full, exc)
            counters.skipped_unreadable += 1
            continue
        if len(data) > max_file_bytes:
            logger.info("skipping oversized file %s (%d bytes)", full, len(data))
            counters.skipped_too_large += 1
            continue
        text = _decode(data)
        if text is None:
            logger.info("skipping undecodable file %s", full)
            counters.skipped_undecodable += 1
            continue
        counters.emitted += 1
        yield RawSourceFile(
            repo_id=repo_id,
            rel_path=rel_path,
            language=lang,
            content=text,
            content_hash=content_fingerprint(text),
        )


def scan_manifest(
    manifest_path: Path,
    include_langs: Optional[Set[LanguageId]] = None,
    counters: Optional[ScanCounters] = None,
) -> Iterator[RawSourceFile]:
    """Stream records from a corpus.jsonl manifest with fields repo/path/content."""
    include = set(include_langs) if include_langs is not None else None
    counters = counters if counters is not None else ScanCounters()
    records = []
    with open(manifest_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            records.append((obj["repo"], obj["path"], obj["content"]))
    records.sort(key=lambda r: (r[0], r[1]))
    for repo, path, content in records:
        lang = detect_language(path)
        if lang is None or (include is not None and lang not in include):
            continue
        counters.emitted += 1
        yield RawSourceFile(
            repo_id=repo,
            rel_path=path,
            language=lang,
            content=content,
            content_hash=content_fingerprint(content),
        )


def dump_raw(files: Iterable[RawSourceFile], out_path: Path) -> int:
    """Write one JSON line per scanned file: {repo, path, language, content_hash}."""
    n = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for f in files:
            fh.write(
                json.dumps(
                    {
                        "repo": f.repo_id,
                        "path": f.rel_path,
                        "language": f.language.value,
                        "content_hash": f.content_hash,
                    },
                    separators=(",", ":"),
                )
                + "\n"
            )
            n += 1
    return n
