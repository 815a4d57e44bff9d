"""Live solving sessions with human steering.

A session runs one search in a worker thread and exposes the stack of
couples under evaluation, exactly as the solver's interactive display
shows it: one row per level with the position part, the nim part and the
expansion progress.  Commands (redirect a child, pick a land, pause,
resume, single-step) queue up and apply at node-expansion boundaries, so
the store stays consistent and a steered run can be replayed from its
command log.  Steering changes only the order of exploration, never the
result.

Transport: newline-delimited JSON over a local TCP socket.  Messages are
versioned with `v: 1`.  Server to client: `{"v":1,"type":"snapshot",...}`
and command acks; client to server: `{"v":1,"type":"redirectChild"|
"redirectLand"|"pause"|"resume"|"step","level":...,"ordinal":...}`.
"""

from __future__ import annotations

import json
import queue
import socket
import socketserver
import threading
import time
from dataclasses import dataclass, field
from typing import Any

from .canonize import canonical_form
from .engine import Couple, Engine, Outcome, _Unwind
from .errors import SearchAbortedError, SproutsError
from .store import Store

__all__ = ["Session", "SteeringError", "ExploreServer", "PROTOCOL_VERSION"]

PROTOCOL_VERSION = 1


class SteeringError(SproutsError):
    """A steering command could not be applied (stale level, bad ordinal)."""


@dataclass
class _Command:
    kind: str
    level: int = 0
    ordinal: int = 0
    done: threading.Event = field(default_factory=threading.Event)
    error: str | None = None

    def finish(self, error: str | None = None) -> None:
        self.error = error
        self.done.set()


class Session:
    """One steerable search over a couple.

    The worker thread publishes an immutable snapshot dict at every node
    boundary; readers always see a complete snapshot.  Command methods
    are thread-safe, block until the worker acknowledges, and raise
    SteeringError when the command no longer applies.
    """

    def __init__(self, couple: Couple, store: Store | None = None,
                 budget: int | None = None, log_commands: bool = True):
        self.couple = couple
        self.engine = Engine(store=store, budget=budget, controller=self._checkpoint)
        self.status = "running"
        self.result: Outcome | None = None
        self.error: str | None = None
        self._commands: "queue.Queue[_Command]" = queue.Queue()
        self._paused = False
        self._step_tokens = 0
        self._wake = threading.Condition()
        self._snapshot: dict[str, Any] = self._build_snapshot()
        self.command_log: list[dict[str, Any]] = []
        self._log_commands = log_commands
        self._thread = threading.Thread(target=self._run, daemon=True)

    # --- lifecycle ---------------------------------------------------------

    def start(self) -> "Session":
        self._thread.start()
        return self

    @classmethod
    def for_string(cls, text: str, nim_part: int = 0, **kwargs: Any) -> "Session":
        return cls(Couple(canonical_form(text), nim_part), **kwargs)

    def _run(self) -> None:
        try:
            outcome = self.engine.outcome(self.couple)
            self.result = outcome
            self.status = "done"
        except SearchAbortedError:
            self.status = "aborted"
        except SproutsError as exc:
            self.status = "error"
            self.error = str(exc)
        self._publish()
        self._drain(final=True)

    def join(self, timeout: float | None = None) -> None:
        self._thread.join(timeout)

    # --- worker-side checkpoint ---------------------------------------------

    def _checkpoint(self, engine: Engine) -> None:
        self._publish()
        self._drain()
        while self._paused:
            with self._wake:
                if self._step_tokens > 0:
                    self._step_tokens -= 1
                    return  # expand exactly one node
                self._wake.wait(0.05)
            self._drain()
            self._publish()

    def _drain(self, final: bool = False) -> None:
        while True:
            try:
                cmd = self._commands.get_nowait()
            except queue.Empty:
                return
            if final:
                cmd.finish("session is not running")
                continue
            try:
                self._apply(cmd)
            except _Unwind:
                cmd.finish(None)
                raise
            except (SteeringError, IndexError, ValueError) as exc:
                cmd.finish(str(exc))
            else:
                cmd.finish(None)

    def _apply(self, cmd: _Command) -> None:
        if self._log_commands:
            self.command_log.append(
                {"t": time.time(), "type": cmd.kind, "level": cmd.level, "ordinal": cmd.ordinal}
            )
        if cmd.kind == "redirectChild":
            self.engine.redirect_child(cmd.level, cmd.ordinal)
        elif cmd.kind == "redirectLand":
            self.engine.redirect_land(cmd.level, cmd.ordinal)
        elif cmd.kind == "pause":
            self._paused = True
        elif cmd.kind == "resume":
            self._paused = False
            self._step_tokens = 0
        elif cmd.kind == "step":
            if not self._paused:
                raise SteeringError("step requires a paused session")
            with self._wake:
                self._step_tokens += 1
                self._wake.notify_all()
        elif cmd.kind == "abort":
            raise SearchAbortedError("session aborted")
        else:
            raise SteeringError(f"unknown command {cmd.kind!r}")

    # --- snapshots ----------------------------------------------------------

    def _build_snapshot(self) -> dict[str, Any]:
        levels = []
        for lv in self.engine.stack:
            levels.append({
                "level": lv.index,
                "position": lv.key,
                "nimberPart": lv.nim_part,
                "phase": lv.phase,
                "tried": lv.tried,
                "total": lv.total,
                "pending": [[c.key, c.nim_part] for c in lv.pending],
                "pendingLands": list(lv.pending_lands),
            })
        snap: dict[str, Any] = {
            "v": PROTOCOL_VERSION,
            "type": "snapshot",
            "levels": levels,
            "status": "paused" if (self._paused and self.status == "running") else self.status,
            "nodes": self.engine.nodes,
            "storeSize": len(self.engine.store),
        }
        if self.result is not None:
            snap["result"] = self.result.value
        if self.error is not None:
            snap["error"] = self.error
        return snap

    def _publish(self) -> None:
        self._snapshot = self._build_snapshot()

    def snapshot(self) -> dict[str, Any]:
        """Most recent complete point-in-time view (never torn)."""
        return self._snapshot

    # --- client-side commands -------------------------------------------------

    def _send(self, kind: str, level: int = 0, ordinal: int = 0,
              timeout: float = 30.0) -> None:
        if self.status != "running":
            raise SteeringError(f"session is {self.status}")
        cmd = _Command(kind, level, ordinal)
        self._commands.put(cmd)
        if self.status != "running":
            self._drain(final=True)  # worker exited while we enqueued
        if not cmd.done.wait(timeout):
            raise SteeringError("command timed out")
        if cmd.error is not None:
            raise SteeringError(cmd.error)

    def redirect_child(self, level: int, ordinal: int) -> None:
        """Continue at `level` with its `ordinal`-th untried child next."""
        self._send("redirectChild", level, ordinal)

    def redirect_land(self, level: int, ordinal: int) -> None:
        """Compute the `ordinal`-th pending land's nimber first at `level`."""
        self._send("redirectLand", level, ordinal)

    def pause(self) -> None:
        self._send("pause")

    def resume(self) -> None:
        self._send("resume")

    def step(self) -> None:
        """Expand exactly one node while paused."""
        self._send("step")

    def abort(self) -> None:
        self._send("abort")


# --- TCP transport -----------------------------------------------------------

_COMMAND_KINDS = {"redirectChild", "redirectLand", "pause", "resume", "step", "abort"}


def validate_command(message: dict[str, Any]) -> tuple[str, int, int]:
    """Check a wire command against the schema; returns (kind, level, ordinal)."""
    if not isinstance(message, dict):
        raise SteeringError("command must be a JSON object")
    if message.get("v") != PROTOCOL_VERSION:
        raise SteeringError(f"unsupported protocol version {message.get('v')!r}")
    kind = message.get("type")
    if kind not in _COMMAND_KINDS:
        raise SteeringError(f"unknown command type {kind!r}")
    level = message.get("level", 0)
    ordinal = message.get("ordinal", 0)
    if not isinstance(level, int) or not isinstance(ordinal, int):
        raise SteeringError("level and ordinal must be integers")
    return kind, level, ordinal


class ExploreServer:
    """Serves one session over newline-delimited JSON on a local socket.

    Every client receives a snapshot whenever the published one changes
    (polled at `interval`), plus an ack line for each command it sends.
    """

    def __init__(self, session: Session, host: str = "127.0.0.1", port: int = 0,
                 interval: float = 0.05):
        self.session = session
        self.interval = interval
        outer = self

        class Handler(socketserver.StreamRequestHandler):
            def handle(self) -> None:
                self.request.settimeout(outer.interval)
                last_sent: dict[str, Any] | None = None
                buffer = b""
                while True:
                    snap = outer.session.snapshot()
                    if snap is not last_sent:
                        last_sent = snap
                        try:
                            self.wfile.write(json.dumps(snap).encode() + b"\n")
                        except OSError:
                            return
                    if outer.session.status != "running":
                        return  # final snapshot (published before the status flip) is out
                    try:
                        chunk = self.request.recv(65536)
                        if not chunk:
                            return
                        buffer += chunk
                    except socket.timeout:
                        continue
                    except OSError:
                        return
                    while b"\n" in buffer:
                        line, buffer = buffer.split(b"\n", 1)
                        if not line.strip():
                            continue
                        self._handle_line(line)

            def _handle_line(self, line: bytes) -> None:
                try:
                    message = json.loads(line)
                    kind, level, ordinal = validate_command(message)
                    if kind == "pause":
                        outer.session.pause()
                    elif kind == "resume":
                        outer.session.resume()
                    elif kind == "step":
                        outer.session.step()
                    elif kind == "abort":
                        outer.session.abort()
                    elif kind == "redirectChild":
                        outer.session.redirect_child(level, ordinal)
                    else:
                        outer.session.redirect_land(level, ordinal)
                    reply: dict[str, Any] = {"v": PROTOCOL_VERSION, "type": "ack",
                                             "of": message.get("type")}
                except (json.JSONDecodeError, SteeringError) as exc:
                    reply = {"v": PROTOCOL_VERSION, "type": "error", "message": str(exc)}
                try:
                    self.wfile.write(json.dumps(reply).encode() + b"\n")
                except OSError:
                    pass

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self._server = Server((host, port), Handler)
        self.address = self._server.server_address
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    def start(self) -> "ExploreServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
