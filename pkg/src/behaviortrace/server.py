"""Wire transports for sessions.

Two ways in, one frame vocabulary (see protocol.md):

* a persistent TCP channel carrying length-delimited JSON frames
  (4-byte big-endian length prefix, UTF-8 payload), one session per
  connection;
* an HTTP fallback that accepts the same client frames one at a time
  (``POST /sessions`` to open, ``POST /sessions/<id>/messages`` to send).

Event application stays single-writer per session; outbound frames go
through a per-connection queue so a slow reader never blocks the ledger.
"""

from __future__ import annotations

import json
import queue
import socket
import socketserver
import struct
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .ledger import entry_line
from .session import Session

_LENGTH = struct.Struct(">I")
MAX_FRAME_BYTES = 64 * 1024 * 1024


def write_frame(sock: socket.socket, frame: dict) -> None:
    payload = json.dumps(frame, separators=(",", ":")).encode("utf-8")
    sock.sendall(_LENGTH.pack(len(payload)) + payload)


def read_frame(sock: socket.socket) -> dict | None:
    header = _read_exact(sock, _LENGTH.size)
    if header is None:
        return None
    (length,) = _LENGTH.unpack(header)
    if length > MAX_FRAME_BYTES:
        raise ValueError(f"frame of {length} bytes exceeds limit")
    payload = _read_exact(sock, length)
    if payload is None:
        return None
    return json.loads(payload.decode("utf-8"))


def _read_exact(sock: socket.socket, n: int) -> bytes | None:
    buf = b""
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            return None
        buf += chunk
    return buf


class _SessionHandler(socketserver.BaseRequestHandler):
    def handle(self):
        session = Session(condition=self.server.condition)
        outbound: queue.Queue = queue.Queue()
        done = threading.Event()

        def drain():
            while not done.is_set() or not outbound.empty():
                try:
                    frame = outbound.get(timeout=0.1)
                except queue.Empty:
                    continue
                try:
                    write_frame(self.request, frame)
                except OSError:
                    done.set()
                    return

        writer = threading.Thread(target=drain, daemon=True)
        writer.start()
        try:
            while True:
                try:
                    msg = read_frame(self.request)
                except (ValueError, json.JSONDecodeError, OSError):
                    break
                if msg is None:
                    break
                for frame in session.handle_message(msg):
                    outbound.put(frame)
        finally:
            done.set()
            writer.join(timeout=5)


class TraceTCPServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, condition: str = "awareness"):
        self.condition = condition
        super().__init__(address, _SessionHandler)


class _HttpSessions:
    """Session registry shared by HTTP handler threads."""

    def __init__(self, condition: str):
        self.condition = condition
        self._lock = threading.Lock()
        self._sessions: dict[str, tuple[Session, threading.Lock]] = {}
        self._counter = 0

    def create(self) -> str:
        with self._lock:
            self._counter += 1
            sid = f"s{self._counter}"
            self._sessions[sid] = (Session(condition=self.condition), threading.Lock())
            return sid

    def get(self, sid: str):
        with self._lock:
            return self._sessions.get(sid)


class _HttpHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, *args):  # quiet by default
        pass

    def _send(self, status: int, body: bytes, content_type: str = "application/json"):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, doc) -> None:
        self._send(status, json.dumps(doc).encode("utf-8"))

    def do_POST(self):
        parts = self.path.strip("/").split("/")
        registry: _HttpSessions = self.server.sessions
        if parts == ["sessions"]:
            sid = registry.create()
            self._send_json(201, {"session": sid, "condition": registry.condition})
            return
        if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "messages":
            entry = registry.get(parts[1])
            if entry is None:
                self._send_json(404, {"error": f"no session {parts[1]}"})
                return
            length = int(self.headers.get("Content-Length", 0))
            try:
                msg = json.loads(self.rfile.read(length).decode("utf-8"))
            except json.JSONDecodeError as e:
                self._send_json(400, {"error": f"invalid JSON: {e}"})
                return
            session, lock = entry
            with lock:
                frames = session.handle_message(msg)
            self._send_json(200, {"frames": frames})
            return
        self._send_json(404, {"error": "unknown endpoint"})

    def do_GET(self):
        parts = self.path.strip("/").split("/")
        registry: _HttpSessions = self.server.sessions
        if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "log":
            entry = registry.get(parts[1])
            if entry is None:
                self._send_json(404, {"error": f"no session {parts[1]}"})
                return
            session, lock = entry
            with lock:
                body = "".join(entry_line(e) + "\n" for e in session.log_entries)
            self._send(200, body.encode("utf-8"), content_type="application/x-ndjson")
            return
        self._send_json(404, {"error": "unknown endpoint"})


class TraceHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, condition: str = "awareness"):
        super().__init__(address, _HttpHandler)
        self.sessions = _HttpSessions(condition)


def serve_forever(port: int, http_port: int | None = None, condition: str = "awareness"):
    """Run the TCP channel (and optionally the HTTP fallback) until killed."""
    tcp = TraceTCPServer(("0.0.0.0", port), condition=condition)
    servers = [tcp]
    if http_port is not None:
        servers.append(TraceHTTPServer(("0.0.0.0", http_port), condition=condition))
    threads = [
        threading.Thread(target=s.serve_forever, daemon=True) for s in servers[1:]
    ]
    for t in threads:
        t.start()
    try:
        tcp.serve_forever()
    finally:
        for s in servers:
            s.shutdown()


class FrameClient:
    """Small blocking client for the TCP channel (tests and scripts)."""

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self.sock = socket.create_connection((host, port), timeout=timeout)

    def send(self, msg: dict) -> None:
        write_frame(self.sock, msg)

    def recv(self) -> dict | None:
        return read_frame(self.sock)

    def roundtrip(self, msg: dict) -> list[dict]:
        """Send one message and read its full frame batch.

        The first frame of every batch carries the batch size in its
        ``frames`` field.
        """
        self.send(msg)
        first = self.recv()
        if first is None:
            return []
        frames = [first]
        for _ in range(first.get("frames", 1) - 1):
            frame = self.recv()
            if frame is None:
                break
            frames.append(frame)
        return frames

    def close(self) -> None:
        self.sock.close()
