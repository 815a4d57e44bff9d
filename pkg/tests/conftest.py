from __future__ import annotations

import random

import pytest

from sprouts.canonize import canonical_form, parse_key
from sprouts.moves import child_keys
from sprouts.oracle import Oracle
from sprouts.position import start_string, total_lives


@pytest.fixture(scope="session")
def oracle() -> Oracle:
    return Oracle(lives_bound=15)


def reachable_keys(spots: int, depth: int) -> list[str]:
    """All canonical keys within `depth` moves of the spots-spot start."""
    frontier = [canonical_form(start_string(spots))]
    seen = set(frontier)
    out = list(frontier)
    for _ in range(depth):
        nxt = []
        for key in frontier:
            for child in child_keys(parse_key(key)):
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        out.extend(nxt)
        frontier = nxt
    return out


def random_small_keys(count: int, seed: int, max_lives: int = 9) -> list[str]:
    """Deterministic sample of small positions from random playouts."""
    rng = random.Random(seed)
    found: set[str] = set()
    starts = [canonical_form(start_string(p)) for p in (2, 3, 4)]
    while len(found) < count:
        key = rng.choice(starts)
        for _ in range(rng.randrange(1, 10)):
            kids = child_keys(parse_key(key))
            if not kids:
                break
            key = rng.choice(kids)
            if total_lives(parse_key(key)) <= max_lives:
                found.add(key)
                if len(found) >= count:
                    break
    return sorted(found)


@pytest.fixture(scope="session")
def small_corpus() -> list[str]:
    """Positions within 3 moves of the 2- and 3-spot starts."""
    keys = set(reachable_keys(2, 3)) | set(reachable_keys(3, 3))
    return sorted(keys)
