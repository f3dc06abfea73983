"""Tokenization and input framing for the consistency scorer.

Inputs are framed as: [CLS] docstring tokens [SEP] code tokens, with a
hashing vocabulary (no learned tokenizer assets to ship).  When the frame
exceeds the length budget the code side is truncated first, then the
docstring; the separator is always present exactly once.
"""

import hashlib
import re
from typing import List

PAD_ID = 0
CLS_ID = 1
SEP_ID = 2
N_SPECIAL = 3

_WORD_RE = re.compile(r"[A-Za-z]+|[0-9]+|[^\sA-Za-z0-9]")
_CAMEL_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+")


def tokenize(text: str) -> List[str]:
    """Split into lowercase word pieces; camelCase and snake_case split."""
    out: List[str] = []
    for raw in _WORD_RE.findall(text):
        if raw.isalpha():
            out.extend(m.lower() for m in _CAMEL_RE.findall(raw))
        else:
            out.append(raw)
    return out


def hash_id(token: str, vocab_size: int) -> int:
    h = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return N_SPECIAL + int.from_bytes(h, "big") % vocab_size


def frame(
    code: str,
    docstring: str,
    vocab_size: int,
    max_len: int,
    doc_budget: int,
) -> List[int]:
    """Token ids for one (code, docstring) pair; never raises on length."""
    doc_ids = [hash_id(t, vocab_size) for t in tokenize(docstring)]
    code_ids = [hash_id(t, vocab_size) for t in tokenize(code)]
    doc_ids = doc_ids[: min(doc_budget, max_len - 2)]
    # code is truncated first: it gets only what the budget leaves over
    code_room = max_len - 2 - len(doc_ids)
    return [CLS_ID] + doc_ids + [SEP_ID] + code_ids[:code_room]
