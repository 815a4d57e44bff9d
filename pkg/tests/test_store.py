from __future__ import annotations

import pytest

from sprouts.errors import StoreConflictError, StoreFormatError
from sprouts.store import Store


@pytest.fixture
def store() -> Store:
    s = Store()
    s.put("22.}]!", 1)
    s.put("12.}]!", 0)
    s.put("AB.}AB.}]!", 1)
    return s


class TestPutGet:
    def test_roundtrip(self, store):
        assert store.get("22.}]!") == 1

    def test_absent_means_unknown(self, store):
        assert store.get("0.}]!") is None

    def test_duplicate_put_is_noop(self, store):
        before = len(store)
        store.put("22.}]!", 1)
        assert len(store) == before

    def test_conflict_rejected(self, store):
        with pytest.raises(StoreConflictError):
            store.put("22.}]!", 2)

    def test_exact_key_lookup_only(self, store):
        assert store.get("22.}]! ") is None
        assert store.get("2AB.}AB.}]!") is None


class TestTextFormat:
    def test_export_import_byte_roundtrip(self, store, tmp_path):
        first = tmp_path / "a.db"
        second = tmp_path / "b.db"
        store.export_text(str(first))
        loaded = Store()
        loaded.import_text(str(first))
        loaded.export_text(str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_sorted_lines(self, store, tmp_path):
        path = tmp_path / "s.db"
        store.export_text(str(path))
        lines = path.read_text().splitlines()
        assert lines == ["12.}]! 0", "22.}]! 1", "AB.}AB.}]! 1"]

    def test_single_line_parses(self, tmp_path):
        path = tmp_path / "one.db"
        path.write_text("22.}]! 1\n")
        s = Store()
        assert s.import_text(str(path)) == 1
        assert s.get("22.}]!") == 1

    @pytest.mark.parametrize("line,hint", [
        ("22.}]! 9", "exceeds"),          # nimber above the land's lives
        ("22.}]!", "expected"),           # missing nimber
        ("22.}]! x", "bad nimber"),
        ("22.}]! -1", "negative"),
        ("2.0.}]! 1", "not canonical"),   # boundary order is not minimal
        ("Q#! 1", "unparsable"),
        ("22.}]AB.}AB.}]! 0", "single land"),
    ])
    def test_rejects_bad_lines(self, tmp_path, line, hint):
        path = tmp_path / "bad.db"
        path.write_text(line + "\n")
        with pytest.raises(StoreFormatError, match=hint):
            Store().import_text(str(path))

    def test_conflicting_lines_rejected(self, tmp_path):
        path = tmp_path / "conflict.db"
        path.write_text("22.}]! 1\n22.}]! 2\n")
        with pytest.raises(StoreFormatError, match="conflicting"):
            Store().import_text(str(path))


class TestJournal:
    def test_append_then_compact(self, tmp_path):
        path = tmp_path / "run.db"
        s = Store()
        s.attach_journal(str(path))
        s.put("22.}]!", 1)
        s.put("12.}]!", 0)
        s.close()
        # journal is append-ordered; a resume can read it back
        assert path.read_text() == "22.}]! 1\n12.}]! 0\n"
        resumed = Store()
        resumed.import_text(str(path))
        assert resumed.get("12.}]!") == 0
        resumed.export_text(str(path))  # compact: sorted now
        assert path.read_text() == "12.}]! 0\n22.}]! 1\n"
