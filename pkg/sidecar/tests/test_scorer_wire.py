"""Protocol conformance of `docscorer serve` over a real child process."""

import json
import random
import subprocess
import sys
import threading

import pytest


def _spawn(model_dir):
    return subprocess.Popen(
        [sys.executable, "-m", "docscorer.cli", "serve", "--model", str(model_dir)],
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        text=True,
        bufsize=1,
    )


def _hello(proc):
    proc.stdin.write(json.dumps({"op": "hello", "proto": 1}) + "\n")
    proc.stdin.flush()
    return json.loads(proc.stdout.readline())


def test_handshake(tiny_model_dir):
    proc = _spawn(tiny_model_dir)
    assert _hello(proc) == {"ok": True, "proto": 1}
    proc.stdin.close()
    assert proc.wait(timeout=30) == 0


def test_eof_before_handshake_exits_zero(tiny_model_dir):
    proc = _spawn(tiny_model_dir)
    proc.stdin.close()
    assert proc.wait(timeout=30) == 0


def test_unsupported_proto_refused(tiny_model_dir):
    proc = _spawn(tiny_model_dir)
    proc.stdin.write(json.dumps({"op": "hello", "proto": 99}) + "\n")
    proc.stdin.flush()
    reply = json.loads(proc.stdout.readline())
    assert reply["ok"] is False
    assert proc.wait(timeout=30) == 0


def test_malformed_line_gets_error_and_stream_continues(tiny_model_dir):
    proc = _spawn(tiny_model_dir)
    assert _hello(proc)["ok"]
    proc.stdin.write("this is not json\n")
    proc.stdin.write(
        json.dumps({"id": 7, "op": "score", "code": "def f(): pass",
                    "docstring": "Do f.", "lang": "python"}) + "\n"
    )
    proc.stdin.flush()
    err = json.loads(proc.stdout.readline())
    assert err["id"] is None and "error" in err
    ok = json.loads(proc.stdout.readline())
    assert ok["id"] == 7 and 0.0 < ok["score"] < 1.0
    proc.stdin.close()
    assert proc.wait(timeout=30) == 0


def test_unknown_op_reported(tiny_model_dir):
    proc = _spawn(tiny_model_dir)
    assert _hello(proc)["ok"]
    proc.stdin.write(json.dumps({"id": 1, "op": "explode"}) + "\n")
    proc.stdin.flush()
    reply = json.loads(proc.stdout.readline())
    assert reply["id"] == 1 and "error" in reply
    proc.stdin.close()
    assert proc.wait(timeout=30) == 0


def test_1000_interleaved_requests_each_answered_once(tiny_model_dir):
    proc = _spawn(tiny_model_dir)
    assert _hello(proc)["ok"]

    rng = random.Random(13)
    ids = list(range(1000))
    rng.shuffle(ids)  # ids arrive out of numeric order

    def writer():
        for rid in ids:
            proc.stdin.write(
                json.dumps({
                    "id": rid, "op": "score",
                    "code": f"def f{rid}(x):\n    return x + {rid}",
                    "docstring": f"Add {rid} to the input.",
                    "lang": "python",
                }) + "\n"
            )
            if rid % 97 == 0:
                proc.stdin.flush()  # interleave partial batches
        proc.stdin.flush()

    t = threading.Thread(target=writer)
    t.start()
    seen = {}
    for _ in range(1000):
        reply = json.loads(proc.stdout.readline())
        assert reply["id"] not in seen, f"duplicate response for {reply['id']}"
        assert 0.0 < reply["score"] < 1.0
        seen[reply["id"]] = reply["score"]
    t.join()
    assert set(seen) == set(range(1000))
    proc.stdin.close()
    assert proc.wait(timeout=30) == 0
