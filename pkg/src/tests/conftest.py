import gzip
import json
import threading
import zlib

from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest
import zstandard as zstd

# 2021-01-15 and 2021-02-15, 12:00 UTC
JAN_2021 = 1610712000
FEB_2021 = 1613390400


def comment(body, author="user", created_utc=JAN_2021, subreddit="sub", id=None):
    return {
        "id": id or f"c{zlib.crc32(f'{author}|{created_utc}|{body}'.encode()):08x}",
        "author": author,
        "body": body,
        "created_utc": created_utc,
        "subreddit": subreddit,
    }


def _encode(records) -> bytes:
    lines = []
    for record in records:
        lines.append(record if isinstance(record, str) else json.dumps(record))
    return ("\n".join(lines) + "\n").encode("utf-8")


@pytest.fixture
def write_dump(tmp_path):
    """Write a Pushshift-style dump; strings are written as raw lines."""

    def write(name: str, records) -> Path:
        path = tmp_path / name
        data = _encode(records)
        if path.suffix == ".zst":
            data = zstd.ZstdCompressor().compress(data)
        elif path.suffix == ".gz":
            data = gzip.compress(data)
        path.write_bytes(data)
        return path

    return write


class ServerState:
    def __init__(self, payload: bytes):
        self.payload = payload
        self.ranges = True
        self.failures = 0
        self.truncate_once = False
        self.ranges_seen = []
        self.etag = '"v1"'
        self.honor_if_range = True
        self.if_ranges_seen = []


class DumpHandler(BaseHTTPRequestHandler):
    def log_message(self, format, *args):
        pass

    def _empty(self, status: int):
        self.send_response(status)
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        state = self.server.state
        if self.path != "/dump.ndjson":
            self._empty(404)
            return
        if state.failures > 0:
            state.failures -= 1
            self._empty(503)
            return

        data = state.payload
        start = 0
        requested = self.headers.get("Range")
        condition = self.headers.get("If-Range")
        state.ranges_seen.append(requested)
        state.if_ranges_seen.append(condition)
        if condition is not None and state.honor_if_range and condition != state.etag:
            requested = None

        if requested and state.ranges:
            start = int(requested.removeprefix("bytes=").rstrip("-"))
            if start >= len(data):
                self._empty(416)
                return
            self.send_response(206)
            self.send_header("Content-Range", f"bytes {start}-{len(data) - 1}/{len(data)}")
        else:
            self.send_response(200)

        body = data[start:]
        self.send_header("Content-Length", str(len(body)))
        if state.etag is not None:
            self.send_header("ETag", state.etag)
        self.end_headers()

        if state.truncate_once:
            state.truncate_once = False
            self.wfile.write(body[: len(body) // 2])
            self.wfile.flush()
            self.close_connection = True
            return
        self.wfile.write(body)


@pytest.fixture
def dump_server():
    """Local HTTP server serving `/dump.ndjson` with `Range` support."""
    payload = _encode(comment(f"word{i} shared text", id=f"id{i}") for i in range(2000))
    server = ThreadingHTTPServer(("127.0.0.1", 0), DumpHandler)
    server.state = ServerState(payload)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server
    finally:
        server.shutdown()
        server.server_close()


def url_of(server, path="/dump.ndjson") -> str:
    host, port = server.server_address
    return f"http://{host}:{port}{path}"
