"""Transposition table of proven losing couples.

Only losing couples are kept: a record pairs a canonized single-land key
with its proven nimber.  Winning couples are recomputed on demand, which
trades time for a much smaller table.  The table exports to a sorted
text file, one "<key> <nimber>" line per record; an existing file can be
used as a journal so an interrupted run can resume.
"""

from __future__ import annotations

import os
import threading
from typing import Iterator

from .canonize import canonize, parse_key
from .errors import StoreConflictError, StoreFormatError
from .position import lex_key, total_lives

__all__ = ["Store"]


class Store:
    """In-memory nimber table with text import/export and an append journal."""

    def __init__(self) -> None:
        self._records: dict[str, int] = {}
        self._lock = threading.Lock()
        self._journal = None

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: str) -> bool:
        return key in self._records

    def get(self, key: str) -> int | None:
        """Proven nimber for an exact key, or None when unknown.

        Absence means unknown, never "winning".
        """
        return self._records.get(key)

    def put(self, key: str, nimber: int) -> None:
        """Record a proven losing couple.

        Re-recording the same nimber is a no-op; a different nimber for a
        known key signals a search defect and raises StoreConflictError.
        """
        with self._lock:
            existing = self._records.get(key)
            if existing is not None:
                if existing != nimber:
                    raise StoreConflictError(
                        f"{key} already proven {existing}, refusing {nimber}"
                    )
                return
            self._records[key] = nimber
            if self._journal is not None:
                self._journal.write(f"{key} {nimber}\n")
                self._journal.flush()

    def items(self) -> Iterator[tuple[str, int]]:
        return iter(sorted(self._records.items(), key=lambda kv: lex_key(kv[0])))

    # --- text persistence -------------------------------------------------

    def export_text(self, path: str) -> None:
        """Write all records, sorted by key, replacing the file atomically."""
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="ascii") as fh:
            for key, nimber in self.items():
                fh.write(f"{key} {nimber}\n")
        os.replace(tmp, path)

    def import_text(self, path: str) -> int:
        """Load records from a text file; returns the number of new records.

        Every line is validated: the key must parse, must be a single
        canonized land, and the nimber must not exceed the land's lives.
        """
        added = 0
        with open(path, encoding="ascii") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                added += self._import_line(line, path, lineno)
        return added

    def _import_line(self, line: str, path: str, lineno: int) -> int:
        parts = line.split(" ")
        if len(parts) != 2:
            raise StoreFormatError(f"{path}:{lineno}: expected '<key> <nimber>'")
        key, raw_nimber = parts
        try:
            nimber = int(raw_nimber)
        except ValueError:
            raise StoreFormatError(f"{path}:{lineno}: bad nimber {raw_nimber!r}") from None
        if nimber < 0:
            raise StoreFormatError(f"{path}:{lineno}: negative nimber")
        try:
            pos = parse_key(key)
        except Exception as exc:
            raise StoreFormatError(f"{path}:{lineno}: unparsable key: {exc}") from None
        if len(pos.lands) != 1:
            raise StoreFormatError(f"{path}:{lineno}: key must be a single land")
        if canonize(pos) != key:
            raise StoreFormatError(f"{path}:{lineno}: key is not canonical")
        if nimber > total_lives(pos):
            raise StoreFormatError(
                f"{path}:{lineno}: nimber {nimber} exceeds {total_lives(pos)} lives"
            )
        existing = self._records.get(key)
        if existing is not None:
            if existing != nimber:
                raise StoreFormatError(
                    f"{path}:{lineno}: conflicting nimber for {key}: "
                    f"{existing} vs {nimber}"
                )
            return 0
        self._records[key] = nimber
        return 1

    # --- journal ----------------------------------------------------------

    def attach_journal(self, path: str) -> None:
        """Append every future record to `path` (resume support).

        Export over the same path later to compact it into sorted form.
        """
        self._journal = open(path, "a", encoding="ascii")

    def close(self) -> None:
        if self._journal is not None:
            self._journal.close()
            self._journal = None
