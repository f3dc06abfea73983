"""NDJSON scoring server on stdin/stdout.

Protocol (one JSON object per line, reply flushed per line):
  -> {"op": "hello", "proto": 1}
  <- {"ok": true, "proto": 1}
  -> {"id": <int>, "op": "score", "code": ..., "docstring": ..., "lang": ...}
  <- {"id": <int>, "score": <float>}
Malformed lines get {"id": null, "error": "..."} and the stream continues;
EOF exits cleanly.
"""

import json
import logging
import sys
from pathlib import Path

from .model import load_scorer

logger = logging.getLogger(__name__)

PROTO_VERSION = 1


def serve(model_dir: Path, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    model = load_scorer(Path(model_dir))

    def reply(obj: dict) -> None:
        stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")
        stdout.flush()

    line = stdin.readline()
    if not line:
        return 0
    try:
        hello = json.loads(line)
        assert hello.get("op") == "hello"
    except (json.JSONDecodeError, AssertionError):
        reply({"id": None, "error": "expected hello handshake"})
        return 0
    if hello.get("proto") != PROTO_VERSION:
        reply({"ok": False, "error": f"unsupported proto {hello.get('proto')!r}"})
        return 0
    reply({"ok": True, "proto": PROTO_VERSION})

    for line in stdin:
        if not line.strip():
            continue
        try:
            req = json.loads(line)
        except json.JSONDecodeError as exc:
            reply({"id": None, "error": f"bad json: {exc}"})
            continue
        rid = req.get("id")
        if req.get("op") != "score":
            reply({"id": rid, "error": f"unknown op {req.get('op')!r}"})
            continue
        try:
            score = model.predict_batch([(req["code"], req["docstring"])])[0]
        except KeyError as exc:
            reply({"id": rid, "error": f"missing field {exc}"})
            continue
        reply({"id": rid, "score": score})
    return 0
