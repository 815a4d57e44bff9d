from __future__ import annotations

import pytest

from sprouts.canonize import canonical_form, parse_key
from sprouts.errors import BudgetExceededError
from sprouts.moves import child_keys
from sprouts.oracle import Oracle, brute_nimber, brute_outcome, mex
from sprouts.position import parse, start_string


def test_mex():
    assert mex([]) == 0
    assert mex([0, 1, 2]) == 3
    assert mex([1, 2]) == 0
    assert mex([0, 2, 2]) == 1


class TestBruteNimber:
    def test_one_spot(self, oracle):
        assert oracle.nimber_of_string("A.}!") == 0

    def test_empty(self, oracle):
        assert oracle.nimber_of_string("!") == 0

    def test_loop_of_four(self, oracle):
        assert oracle.nimber_of_string("ABCD.}ABCD.}]!") == 0

    def test_accepts_positions_and_strings(self):
        assert brute_nimber(parse("22.}]!")) == 1
        assert brute_nimber("22.}]!") == 1

    def test_lives_bound(self):
        with pytest.raises(BudgetExceededError):
            Oracle(lives_bound=5).nimber_of_string(start_string(4))


class TestBruteOutcome:
    def test_couple_examples(self):
        assert brute_outcome("22.}]!", 1) == "Loss"
        assert brute_outcome("22.}]!", 0) == "Win"
        assert brute_outcome("!", 0) == "Loss"


def test_game_length_bound():
    # exhaustively: no play from a p-spot start exceeds 3p - 1 moves
    for spots in (1, 2, 3):
        root = canonical_form(start_string(spots))
        depth_of = {root: 0}
        stack = [root]
        deepest = 0
        while stack:
            key = stack.pop()
            depth = depth_of[key]
            deepest = max(deepest, depth)
            for child in child_keys(parse_key(key)):
                known = depth_of.get(child)
                if known is None or known < depth + 1:
                    depth_of[child] = depth + 1
                    stack.append(child)
        assert deepest <= 3 * spots - 1, f"{spots}-spot play of {deepest} moves"
