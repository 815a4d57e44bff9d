"""Couple-based search engine.

The engine evaluates couples (position + nim heap).  A couple loses
exactly when the position's nimber equals the heap.  Multi-land positions
are never searched whole: stored lands fold their nimbers into the heap
by XOR, the remaining lands except the largest get their nimbers computed
recursively, and only a single land plus a heap goes depth-first.  Only
losing couples are stored; winning couples are re-derived on demand.

A controller object may hook node-expansion boundaries to observe the
live stack and steer the search (reorder children, pick lands, pause).
Steering changes the order of the work, never its results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple

from .canonize import canonical_form, canonize, parse_key
from .errors import BudgetExceededError, NimberRangeError
from .moves import child_keys
from .position import Position, lex_key, start_string, total_lives
from .store import Store

__all__ = [
    "Outcome",
    "Couple",
    "Level",
    "Engine",
    "xor_merge",
    "estimate_children",
    "order_children",
    "couple_children",
    "land_schedule",
    "compute_win_loss",
]


class Outcome(Enum):
    WIN = "Win"
    LOSS = "Loss"

    def __str__(self) -> str:
        return self.value


class Couple(NamedTuple):
    """A position (by canonical key) plus a nim heap of size `nim_part`."""

    key: str
    nim_part: int

    @property
    def position(self) -> Position:
        return parse_key(self.key)

    def __str__(self) -> str:
        return f"({self.key}+{self.nim_part})"


def xor_merge(n1: int, n2: int) -> int:
    """Nimber of the sum of two independent games."""
    return n1 ^ n2


def land_keys_of(key: str) -> tuple[str, ...]:
    """Single-land position keys for each land of a position key."""
    if key == "!":
        return ()
    body = key[:-1]  # drop '!'
    return tuple(f + "]!" for f in body.split("]") if f)


def estimate_children(pos: Position) -> int:
    """Cheap upper-ish estimate of the number of children of a position.

    Per region: linking a boundary to itself contributes (occurrence
    count)^2 times the 2^k ways to split the other boundaries, and every
    boundary pair contributes the product of their occurrence counts.
    """
    total = 0
    for land in pos.lands:
        for region in land.regions:
            sizes = [len(b.symbols) for b in region.boundaries]
            k = len(sizes)
            for n in sizes:
                total += n * n * (1 << (k - 1))
            for i in range(k):
                for j in range(i + 1, k):
                    total += sizes[i] * sizes[j]
    return total


class _Unwind(Exception):
    """Internal: pop the search back to a level and continue there."""

    def __init__(self, level: int):
        self.level = level


@dataclass
class Level:
    """One entry of the live couple stack (mirrors the steering display)."""

    index: int
    key: str
    nim_part: int
    phase: str  # "expanding", "lands" or "trying-nimber <k>"
    pending: list[Couple] = field(default_factory=list)
    pending_lands: list[str] = field(default_factory=list)
    tried: int = 0
    total: int = 0
    forced: Couple | None = None
    forced_land: str | None = None


class _Entry(NamedTuple):
    key: str
    lives: int
    lands: int
    estimate: int


class Engine:
    """Search session: owns a store, caches, node budget and steering hook.

    `controller`, when given, is called as `controller(engine)` at every
    node-expansion boundary; it may raise to redirect or abort, or block
    to pause.  Without a controller two runs with equal stores visit
    identical node sequences.
    """

    def __init__(
        self,
        store: Store | None = None,
        budget: int | None = None,
        controller: Callable[["Engine"], None] | None = None,
    ):
        self.store = store if store is not None else Store()
        self.budget = budget
        self.controller = controller
        self.nodes = 0
        self.stack: list[Level] = []
        self._entries: dict[str, _Entry] = {}
        self._children: dict[str, tuple[_Entry, ...]] = {}

    # --- cached position facts --------------------------------------------

    def _entry(self, key: str) -> _Entry:
        entry = self._entries.get(key)
        if entry is None:
            pos = parse_key(key)
            entry = _Entry(key, total_lives(pos), len(pos.lands), estimate_children(pos))
            self._entries[key] = entry
        return entry

    def children_entries(self, key: str) -> tuple[_Entry, ...]:
        got = self._children.get(key)
        if got is None:
            got = tuple(self._entry(k) for k in child_keys(parse_key(key)))
            self._children[key] = got
        return got

    # --- steering plumbing --------------------------------------------------

    def _checkpoint(self) -> None:
        if self.controller is not None:
            self.controller(self)

    def redirect_child(self, level: int, ordinal: int) -> None:
        """Make `ordinal` of the level's untried children the next one tried.

        Must be called from the controller hook (worker thread).  Raises
        IndexError for a stale level or ordinal, ValueError if the level
        is not expanding children.
        """
        if not 1 <= level <= len(self.stack):
            raise IndexError(f"no level {level} on the stack")
        lv = self.stack[level - 1]
        if not lv.pending:
            raise ValueError(f"level {level} is not expanding children")
        if not 0 <= ordinal < len(lv.pending):
            raise IndexError(f"level {level} has {len(lv.pending)} untried children")
        lv.forced = lv.pending[ordinal]
        if level < len(self.stack):
            raise _Unwind(level)

    def redirect_land(self, level: int, ordinal: int) -> None:
        """Compute the given pending land's nimber first at that level."""
        if not 1 <= level <= len(self.stack):
            raise IndexError(f"no level {level} on the stack")
        lv = self.stack[level - 1]
        if lv.phase != "lands" or not lv.pending_lands:
            raise ValueError(f"level {level} is not scheduling lands")
        if not 0 <= ordinal < len(lv.pending_lands):
            raise IndexError(f"level {level} has {len(lv.pending_lands)} pending lands")
        lv.forced_land = lv.pending_lands[ordinal]
        if level < len(self.stack):
            raise _Unwind(level)

    # --- the search ---------------------------------------------------------

    def _count_node(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceededError(f"node budget of {self.budget} exhausted")

    def _order_key(self, couple: Couple):
        entry = self._entry(couple.key)
        return (
            entry.lives + couple.nim_part,
            -entry.lands,
            entry.estimate,
            lex_key(couple.key),
            couple.nim_part,
        )

    def _is_loss(self, key: str, nim_part: int, phase: str) -> bool:
        self._count_node()
        lands = land_keys_of(key)
        heap = nim_part
        unknown: list[str] = []
        for land_key in lands:
            stored = self.store.get(land_key)
            if stored is None:
                unknown.append(land_key)
            else:
                heap ^= stored
        if not unknown:
            return heap == 0

        level = Level(len(self.stack) + 1, key, nim_part, phase)
        self.stack.append(level)
        try:
            if len(unknown) > 1:
                heap = self._schedule_lands(level, unknown, heap)
            (last,) = level.pending_lands or unknown  # single land left
            return self._expand(level, last, heap)
        finally:
            self.stack.pop()

    def _schedule_lands(self, level: Level, unknown: list[str], heap: int) -> int:
        unknown.sort(key=lambda k: (self._entry(k).lives, lex_key(k)))
        level.phase = "lands"
        level.pending_lands = unknown
        level.total = len(unknown)
        while len(level.pending_lands) > 1:
            try:
                self._checkpoint()
                land = level.forced_land
                if land is None or land not in level.pending_lands:
                    land = level.pending_lands[0]
                level.forced_land = None
                nimber = self._nimber_of(land)
            except _Unwind as unwind:
                if unwind.level != level.index:
                    raise
                continue
            level.pending_lands.remove(land)
            level.tried += 1
            heap ^= nimber
        return heap

    def _expand(self, level: Level, land_key: str, heap: int) -> bool:
        level.phase = level.phase if level.phase.startswith("trying") else "expanding"
        couples = [Couple(e.key, heap) for e in self.children_entries(land_key)]
        couples.extend(Couple(land_key, m) for m in range(heap))
        couples.sort(key=self._order_key)
        level.pending = couples
        level.pending_lands = [land_key]
        level.total = len(couples)
        level.tried = 0
        while level.pending:
            try:
                self._checkpoint()
                pick = level.forced
                if pick is None or pick not in level.pending:
                    pick = level.pending[0]
                level.forced = None
                child_loss = self._is_loss(pick.key, pick.nim_part, "expanding")
            except _Unwind as unwind:
                if unwind.level != level.index:
                    raise
                continue
            level.pending.remove(pick)
            level.tried += 1
            if child_loss:
                return False  # one losing child proves the win
        self.store.put(land_key, heap)  # every child wins: nimber proven
        return True

    def _nimber_of(self, land_key: str) -> int:
        cap = self._entry(land_key).lives
        for trial in range(cap + 1):
            if self._is_loss(land_key, trial, f"trying-nimber {trial}"):
                return trial
        raise NimberRangeError(f"no nimber up to {cap} for {land_key}")

    # --- public queries -------------------------------------------------------

    def outcome(self, couple: Couple) -> Outcome:
        """Win/Loss of a couple (Algorithm-style depth-first search)."""
        return Outcome.LOSS if self._is_loss(couple.key, couple.nim_part, "expanding") else Outcome.WIN

    def outcome_of_string(self, text: str, nim_part: int = 0) -> Outcome:
        return self.outcome(Couple(canonical_form(text), nim_part))

    def nimber_of_land(self, land_key: str) -> int:
        """Least n for which (land + n) loses (the land's nimber)."""
        return self._nimber_of(land_key)

    def nimber_of_string(self, text: str) -> int:
        """Nimber of an arbitrary position: XOR over its lands' nimbers."""
        key = canonical_form(text)
        value = 0
        for land_key in land_keys_of(key):
            value ^= self._nimber_of(land_key)
        return value

    def solve_spots(self, spots: int) -> tuple[Outcome, int]:
        """Outcome and nimber of the game starting with `spots` spots."""
        nimber = self.nimber_of_string(start_string(spots))
        return (Outcome.WIN if nimber else Outcome.LOSS), nimber


# --- module-level forms of the pure operations -----------------------------


def order_children(couples: list[Couple], engine: Engine | None = None) -> list[Couple]:
    """Stable priority order: fewest lives+heap first, then most lands,
    then smallest child estimate, then key text, then heap."""
    eng = engine if engine is not None else Engine()
    return sorted(couples, key=eng._order_key)


def couple_children(couple: Couple, engine: Engine | None = None) -> list[Couple]:
    """Ordered children of a single-land couple.

    Position children keep the heap; the heap's own children lower it.
    """
    eng = engine if engine is not None else Engine()
    pos = parse_key(couple.key)
    if len(pos.lands) > 1:
        raise ValueError("couple children are defined for single-land couples")
    couples = [Couple(e.key, couple.nim_part) for e in eng.children_entries(couple.key)]
    couples.extend(Couple(couple.key, m) for m in range(couple.nim_part))
    return order_children(couples, eng)


def land_schedule(pos: Position) -> tuple[str, ...]:
    """Land keys to resolve before the search keeps the largest land.

    Sorted by lives ascending (ties by key text); the last land of the
    full sort stays in the couple, so it is not part of the schedule.
    """
    keys = sorted(
        (canonize(Position((land,), pos.stage)) for land in pos.lands),
        key=lambda k: (total_lives(parse_key(k)), lex_key(k)),
    )
    return tuple(keys[:-1])


def compute_win_loss(
    couple: Couple,
    store: Store | None = None,
    steering: Callable[[Engine], None] | None = None,
) -> Outcome:
    """One-shot outcome computation (convenience wrapper over Engine)."""
    return Engine(store=store, controller=steering).outcome(couple)
