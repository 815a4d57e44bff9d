"""Brute-force reference solver.

Plain mex recursion over the full child set, with no land decomposition,
no XOR shortcut and no child ordering; transpositions are merged only by
exact canonical key.  Slow but structurally independent of the search
engine, which makes it the ground truth for the test suite.
"""

from __future__ import annotations

from .canonize import canonical_form, parse_key
from .errors import BudgetExceededError
from .moves import child_keys
from .position import Position, total_lives
from .simplify import simplify

__all__ = ["Oracle", "brute_nimber", "brute_outcome", "mex"]


def mex(values) -> int:
    """Smallest non-negative integer absent from `values`."""
    present = set(values)
    n = 0
    while n in present:
        n += 1
    return n


class Oracle:
    """Memoized brute-force nimber computation for small positions."""

    def __init__(self, lives_bound: int = 15):
        self.lives_bound = lives_bound
        self._memo: dict[str, int] = {}

    def nimber_of_key(self, key: str) -> int:
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        pos = parse_key(key)
        value = mex(self.nimber_of_key(child) for child in child_keys(pos))
        self._memo[key] = value
        return value

    def nimber(self, pos: Position) -> int:
        if pos.stage.name != "SIMPLIFIED":
            pos = simplify(pos)
        if total_lives(pos) > self.lives_bound:
            raise BudgetExceededError(
                f"position has more than {self.lives_bound} lives; "
                "raise the bound to brute-force it"
            )
        from .canonize import canonize

        return self.nimber_of_key(canonize(pos))

    def nimber_of_string(self, text: str) -> int:
        key = canonical_form(text)
        if total_lives(parse_key(key)) > self.lives_bound:
            raise BudgetExceededError(
                f"position has more than {self.lives_bound} lives; "
                "raise the bound to brute-force it"
            )
        return self.nimber_of_key(key)

    def outcome_is_loss(self, text: str, nim_part: int) -> bool:
        """A couple loses exactly when the position's nimber equals its heap."""
        return self.nimber_of_string(text) == nim_part


_default = Oracle()


def brute_nimber(pos: Position | str, lives_bound: int | None = None) -> int:
    """Nimber by direct mex recursion (module-level convenience)."""
    oracle = _default if lives_bound is None else Oracle(lives_bound)
    if isinstance(pos, str):
        return oracle.nimber_of_string(pos)
    return oracle.nimber(pos)


def brute_outcome(pos: Position | str, nim_part: int) -> str:
    """'Loss' when the nimber equals the heap part, else 'Win'."""
    return "Loss" if brute_nimber(pos) == nim_part else "Win"
