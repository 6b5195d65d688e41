"""Interactive-debugging protocol.

One Session holds a compiled program and its current net; the client
steps, runs, undoes, and reads back over a revision-checked JSON message
protocol.  serve() speaks the protocol over a local TCP socket using
4-byte big-endian length-prefixed JSON, and upgrades connections that
start with an HTTP GET to WebSocket (text frames, same messages) so
browsers can connect to the same port.

Undo stores inverse patches (the agents and wires a step removed and
created, plus the id counters), so replaying the recorded history from
the initial net reproduces the current net exactly, ids included.
"""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import socket
import socketserver
import struct
import threading

from .engine import TraceEvent, _is_eval_rule, fire
from .net import NoRuleForPair, Patch, active_pairs, undo_patch
from .parser import ParseError, parse
from .systemgen import dump_system, program_system
from .terms import pretty
from .translate import (
    NotSyntacticForm, ReadbackError, attach_token, readback, translate,
)
from .typecheck import TypecheckError, typecheck

log = logging.getLogger(__name__)

PROTOCOL_VERSION = 1


class SessionError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


class Session:
    def __init__(self) -> None:
        self.revision = 0
        self.source: str | None = None
        self.system = None
        self.symtab = None
        self.net = None
        self.history: list[tuple[TraceEvent, Patch]] = []
        self.eval_steps = 0
        self.mgmt_steps = 0

    # -- state transitions --------------------------------------------------

    def load(self, source: str, token: bool = True) -> None:
        t = parse(source)
        typecheck(t)
        system, symtab = program_system(t)
        result = translate(t, symtab)
        if token:
            net = attach_token(result)
        else:
            net = result.net
        self.source = source
        self.system = system
        self.symtab = symtab
        self.net = net
        self.history = []
        self.revision = 0
        self.eval_steps = 0
        self.mgmt_steps = 0

    def _require_loaded(self) -> None:
        if self.net is None:
            raise SessionError("no_program", "no program loaded")

    def pairs(self) -> list[dict]:
        self._require_loaded()
        return [
            {
                "index": i,
                "agents": [p.left[0], p.right[0]],
                "symbols": [p.left[1], p.right[1]],
            }
            for i, p in enumerate(active_pairs(self.net))
        ]

    def step(self, pair_index: int) -> TraceEvent:
        self._require_loaded()
        pairs = active_pairs(self.net)
        if not (0 <= pair_index < len(pairs)):
            raise SessionError(
                "bad_pair", f"pair index {pair_index} out of range "
                f"(have {len(pairs)})"
            )
        patch = fire(self.net, pairs[pair_index], self.system)
        event = TraceEvent(
            len(self.history) + 1, patch.rule_key,
            tuple(patch.consumed), tuple(patch.created),
        )
        self.history.append((event, patch))
        if _is_eval_rule(self.system, patch.rule_key):
            self.eval_steps += 1
        else:
            self.mgmt_steps += 1
        self.revision += 1
        return event

    def run(self, n: int | None = None, to_normal: bool = False) -> list[TraceEvent]:
        self._require_loaded()
        events = []
        budget = n if not to_normal else None
        while budget is None or len(events) < budget:
            if not active_pairs(self.net):
                break
            events.append(self.step(0))  # fifo: lowest wire id first
        return events

    def undo(self) -> None:
        self._require_loaded()
        if not self.history:
            raise SessionError("nothing_to_undo", "history is empty")
        event, patch = self.history.pop()
        undo_patch(self.net, patch)
        if _is_eval_rule(self.system, patch.rule_key):
            self.eval_steps -= 1
        else:
            self.mgmt_steps -= 1
        self.revision += 1

    # -- views ---------------------------------------------------------------

    def snapshot(self) -> dict:
        self._require_loaded()
        return {
            "net": self.net.to_json_obj(),
            "pairs": self.pairs(),
            "steps": len(self.history),
            "stats": {
                "total": len(self.history),
                "eval": self.eval_steps,
                "mgmt": self.mgmt_steps,
            },
        }

    def readback_view(self) -> dict:
        self._require_loaded()
        try:
            term = readback(self.net, self.symtab)
            return {"term": pretty(term)}
        except NotSyntacticForm as e:
            return {"not_syntactic": sorted(set(e.symbols))}

    def system_view(self) -> str:
        self._require_loaded()
        return dump_system(self.system)


def handle(session: Session, request: dict) -> dict:
    """Process one protocol message; always returns a response dict."""
    try:
        cmd = request.get("cmd")
        if cmd == "load":
            session.load(request["source"], token=request.get("token", True))
            return _ok(session, snapshot=session.snapshot())
        if cmd == "snapshot":
            return _ok(session, snapshot=session.snapshot())
        if cmd == "pairs":
            return _ok(session, pairs=session.pairs())
        if cmd == "step":
            _check_revision(session, request)
            event = session.step(int(request["pair_index"]))
            return _ok(session, event=event.to_json_obj(), snapshot=session.snapshot())
        if cmd == "run":
            _check_revision(session, request)
            events = session.run(
                n=request.get("n"), to_normal=bool(request.get("to_normal"))
            )
            return _ok(
                session,
                events=[e.to_json_obj() for e in events],
                snapshot=session.snapshot(),
            )
        if cmd == "undo":
            _check_revision(session, request)
            session.undo()
            return _ok(session, snapshot=session.snapshot())
        if cmd == "readback":
            return _ok(session, readback=session.readback_view())
        if cmd == "system":
            return _ok(session, system=session.system_view())
        return _err(session, "bad_command", f"unknown command {cmd!r}")
    except SessionError as e:
        return _err(session, e.code, str(e))
    except ParseError as e:
        return _err(session, "parse_error", str(e))
    except TypecheckError as e:
        return _err(session, "type_error", str(e))
    except (NoRuleForPair, ReadbackError) as e:
        return _err(session, "internal_error", str(e))
    except (KeyError, TypeError, ValueError) as e:
        return _err(session, "bad_request", f"malformed request: {e}")


def _check_revision(session: Session, request: dict) -> None:
    rev = request.get("rev")
    if rev is None or int(rev) != session.revision:
        raise SessionError(
            "stale_revision",
            f"request revision {rev} != current {session.revision}",
        )


def _ok(session: Session, **extra) -> dict:
    return {"rev": session.revision, "ok": True, **extra}


def _err(session: Session, code: str, message: str) -> dict:
    return {"rev": session.revision, "ok": False, "error": code, "message": message}


# --------------------------------------------------------------------------
# Transport: length-prefixed JSON over TCP, with WebSocket upgrade
# --------------------------------------------------------------------------

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


def _recv_exact(sock: socket.socket, n: int) -> bytes | None:
    buf = b""
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            return None
        buf += chunk
    return buf


class _Handler(socketserver.BaseRequestHandler):
    def handle(self) -> None:
        session = Session()
        initial = getattr(self.server, "initial_source", None)
        if initial is not None:
            session.load(initial)
        head = _recv_exact(self.request, 4)
        if head is None:
            return
        if head == b"GET ":
            self._serve_websocket(session, head)
        else:
            self._serve_framed(session, head)

    # -- raw framing: 4-byte big-endian length, UTF-8 JSON -------------------

    def _serve_framed(self, session: Session, head: bytes) -> None:
        while True:
            (length,) = struct.unpack(">I", head)
            payload = _recv_exact(self.request, length)
            if payload is None:
                return
            response = self._dispatch(session, payload)
            out = json.dumps(response, separators=(",", ":")).encode()
            self.request.sendall(struct.pack(">I", len(out)) + out)
            head = _recv_exact(self.request, 4)
            if head is None:
                return

    def _dispatch(self, session: Session, payload: bytes) -> dict:
        try:
            request = json.loads(payload.decode("utf-8"))
            if not isinstance(request, dict):
                raise ValueError("request is not an object")
        except (ValueError, UnicodeDecodeError) as e:
            return _err(session, "bad_json", f"cannot parse request: {e}")
        return handle(session, request)

    # -- WebSocket ------------------------------------------------------------

    def _serve_websocket(self, session: Session, head: bytes) -> None:
        data = head
        while b"\r\n\r\n" not in data:
            chunk = self.request.recv(4096)
            if not chunk:
                return
            data += chunk
        headers = {}
        for line in data.split(b"\r\n")[1:]:
            if b":" in line:
                k, v = line.split(b":", 1)
                headers[k.strip().lower().decode()] = v.strip().decode()
        key = headers.get("sec-websocket-key")
        if not key or "websocket" not in headers.get("upgrade", "").lower():
            self.request.sendall(
                b"HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n\r\n"
            )
            return
        accept = base64.b64encode(
            hashlib.sha1((key + _WS_GUID).encode()).digest()
        ).decode()
        self.request.sendall(
            (
                "HTTP/1.1 101 Switching Protocols\r\n"
                "Upgrade: websocket\r\n"
                "Connection: Upgrade\r\n"
                f"Sec-WebSocket-Accept: {accept}\r\n\r\n"
            ).encode()
        )
        while True:
            msg = self._ws_read()
            if msg is None:
                return
            response = self._dispatch(session, msg)
            self._ws_send(json.dumps(response, separators=(",", ":")).encode())

    def _ws_read(self) -> bytes | None:
        # single-frame text messages; close on anything else we can't serve
        message = b""
        while True:
            head = _recv_exact(self.request, 2)
            if head is None:
                return None
            fin = head[0] & 0x80
            opcode = head[0] & 0x0F
            masked = head[1] & 0x80
            length = head[1] & 0x7F
            if length == 126:
                ext = _recv_exact(self.request, 2)
                if ext is None:
                    return None
                (length,) = struct.unpack(">H", ext)
            elif length == 127:
                ext = _recv_exact(self.request, 8)
                if ext is None:
                    return None
                (length,) = struct.unpack(">Q", ext)
            mask = _recv_exact(self.request, 4) if masked else b"\x00" * 4
            if mask is None:
                return None
            payload = _recv_exact(self.request, length) if length else b""
            if payload is None:
                return None
            if masked:
                payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
            if opcode == 0x8:  # close
                self._ws_send(b"", opcode=0x8)
                return None
            if opcode == 0x9:  # ping
                self._ws_send(payload, opcode=0xA)
                continue
            if opcode in (0x1, 0x2, 0x0):
                message += payload
                if fin:
                    return message
                continue
            return None

    def _ws_send(self, payload: bytes, opcode: int = 0x1) -> None:
        head = bytes([0x80 | opcode])
        n = len(payload)
        if n < 126:
            head += bytes([n])
        elif n < (1 << 16):
            head += bytes([126]) + struct.pack(">H", n)
        else:
            head += bytes([127]) + struct.pack(">Q", n)
        self.request.sendall(head + payload)


class SessionServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, port: int, source_file: str | None = None):
        self.initial_source = None
        if source_file:
            with open(source_file, encoding="utf-8") as f:
                self.initial_source = f.read()
        super().__init__(("127.0.0.1", port), _Handler)

    @property
    def port(self) -> int:
        return self.server_address[1]


def serve(port: int, source_file: str | None = None) -> None:
    """Serve sessions until interrupted; one independent session per
    connection."""
    server = SessionServer(port, source_file)
    log.info("session server listening on 127.0.0.1:%d", server.port)
    print(f"listening on 127.0.0.1:{server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


class SessionClient:
    """Blocking client for the length-prefixed framing (tests, tooling)."""

    def __init__(self, port: int, host: str = "127.0.0.1", timeout: float = 10.0):
        self.sock = socket.create_connection((host, port), timeout=timeout)

    def request(self, message: dict) -> dict:
        out = json.dumps(message, separators=(",", ":")).encode()
        self.sock.sendall(struct.pack(">I", len(out)) + out)
        head = _recv_exact(self.sock, 4)
        assert head is not None, "server closed the connection"
        (length,) = struct.unpack(">I", head)
        payload = _recv_exact(self.sock, length)
        assert payload is not None, "server closed mid-response"
        return json.loads(payload.decode("utf-8"))

    def close(self) -> None:
        self.sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
