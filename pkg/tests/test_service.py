from __future__ import annotations

import json
import socket
import time

import pytest

from sprouts.canonize import canonical_form
from sprouts.engine import Couple, Engine
from sprouts.service import ExploreServer, Session, SteeringError, validate_command
from sprouts.store import Store


def wait_for(predicate, timeout=10.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        if predicate():
            return True
        time.sleep(0.005)
    return False


class TestSession:
    def test_empty_position_finishes_immediately(self):
        session = Session(Couple("!", 0)).start()
        session.join(5)
        snap = session.snapshot()
        assert snap["status"] == "done"
        assert snap["result"] == "Loss"

    def test_snapshot_shape_and_result(self):
        session = Session.for_string("A.B.C.}!").start()
        session.join(30)
        snap = session.snapshot()
        assert snap["v"] == 1
        assert snap["type"] == "snapshot"
        assert snap["status"] == "done"
        assert snap["result"] == "Win"
        assert snap["nodes"] > 0

    def test_pause_step_resume(self):
        session = Session.for_string("A.B.C.D.}!")
        session._paused = True  # paused before the first node expands
        session.start()
        assert wait_for(lambda: session.snapshot()["status"] == "paused")
        nodes = session.snapshot()["nodes"]
        session.step()
        assert wait_for(lambda: session.snapshot()["nodes"] == nodes + 1)
        time.sleep(0.1)
        assert session.snapshot()["nodes"] == nodes + 1  # still paused
        session.resume()
        with pytest.raises(SteeringError):
            session.step()  # stepping is only honored while paused
        session.join(30)
        assert session.snapshot()["result"] == "Win"

    def test_resume_after_done_errors(self):
        session = Session(Couple("!", 0)).start()
        session.join(5)
        with pytest.raises(SteeringError):
            session.resume()

    def test_paused_snapshots_identical(self):
        session = Session.for_string("A.B.C.D.}!")
        session._paused = True
        session.start()
        assert wait_for(lambda: session.snapshot()["status"] == "paused")
        first = session.snapshot()
        time.sleep(0.15)
        second = session.snapshot()
        assert first["nodes"] == second["nodes"]
        assert first["levels"] == second["levels"]
        session.resume()
        session.join(30)

    def test_redirect_stale_level_signals(self):
        session = Session.for_string("A.B.C.D.}!")
        session._paused = True
        session.start()
        assert wait_for(lambda: session.snapshot()["status"] == "paused")
        with pytest.raises(SteeringError):
            session.redirect_child(99, 0)
        session.resume()
        session.join(30)
        assert session.snapshot()["result"] == "Win"

    def test_redirect_out_of_range_ordinal(self):
        session = Session.for_string("A.B.C.D.}!")
        session._paused = True
        session.start()
        assert wait_for(lambda: len(session.snapshot()["levels"]) >= 1 or
                        session.snapshot()["status"] != "paused")
        # drive a few steps so a level with pending children exists
        for _ in range(3):
            session.step()
            time.sleep(0.02)
        snap = session.snapshot()
        level = next((lv for lv in snap["levels"] if lv["pending"]), None)
        if level is not None:
            with pytest.raises(SteeringError):
                session.redirect_child(level["level"], len(level["pending"]) + 5)
        session.resume()
        session.join(30)

    def test_steering_preserves_result_and_store(self, oracle):
        import random

        rng = random.Random(31)
        baseline = Session.for_string("A.B.C.}!").start()
        baseline.join(30)
        expected = baseline.snapshot()["result"]

        store = Store()
        session = Session.for_string("A.B.C.}!", store=store)
        applied = []

        # steer by redirecting from a second thread while running
        session.start()
        for _ in range(40):
            snap = session.snapshot()
            if snap["status"] != "running":
                break
            levels = [lv for lv in snap["levels"] if len(lv["pending"]) > 1]
            if levels:
                lv = rng.choice(levels)
                try:
                    session.redirect_child(lv["level"], rng.randrange(len(lv["pending"])))
                    applied.append(lv["level"])
                except SteeringError:
                    pass
            time.sleep(0.001)
        session.join(30)
        assert session.snapshot()["result"] == expected
        # every stored record is a true losing couple
        for key, nimber in store.items():
            assert oracle.nimber_of_key(key) == nimber

    def test_command_log_records_redirects(self):
        session = Session.for_string("A.B.C.}!")
        session._paused = True
        session.start()
        assert wait_for(lambda: session.snapshot()["status"] == "paused")
        session.step()
        try:
            session.redirect_child(1, 0)
        except SteeringError:
            pass
        session.resume()
        session.join(30)
        kinds = [entry["type"] for entry in session.command_log]
        assert "step" in kinds and "resume" in kinds


class TestWireProtocol:
    def test_validate_accepts_commands(self):
        kind, level, ordinal = validate_command(
            {"v": 1, "type": "redirectChild", "level": 5, "ordinal": 2})
        assert (kind, level, ordinal) == ("redirectChild", 5, 2)

    @pytest.mark.parametrize("bad", [
        {"type": "redirectChild"},                      # missing version
        {"v": 2, "type": "pause"},                      # wrong version
        {"v": 1, "type": "launch"},                     # unknown type
        {"v": 1, "type": "step", "level": "one"},       # bad field type
    ])
    def test_validate_rejects(self, bad):
        with pytest.raises(SteeringError):
            validate_command(bad)

    def test_tcp_round_trip(self):
        session = Session.for_string("A.B.C.D.}!")
        session._paused = True
        server = ExploreServer(session).start()
        session.start()
        try:
            with socket.create_connection(server.address, timeout=10) as sock:
                fh = sock.makefile("rwb")

                def read_msg():
                    line = fh.readline()
                    assert line
                    return json.loads(line)

                def send(obj):
                    fh.write(json.dumps(obj).encode() + b"\n")
                    fh.flush()

                snap = read_msg()
                assert snap["type"] == "snapshot" and snap["v"] == 1

                send({"v": 1, "type": "step"})
                seen_ack = False
                for _ in range(50):
                    msg = read_msg()
                    if msg["type"] == "ack" and msg["of"] == "step":
                        seen_ack = True
                        break
                    assert msg["type"] in ("snapshot", "error")
                assert seen_ack

                send({"v": 1, "type": "bogus"})
                for _ in range(50):
                    msg = read_msg()
                    if msg["type"] == "error":
                        break
                else:
                    pytest.fail("no error reply for a bogus command")

                send({"v": 1, "type": "resume"})
                final = None
                for _ in range(2000):
                    msg = read_msg()
                    if msg.get("type") == "snapshot" and msg.get("status") == "done":
                        final = msg
                        break
                assert final is not None
                assert final["result"] == "Win"
        finally:
            session.join(30)
            server.stop()
