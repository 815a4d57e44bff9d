"""Deterministic pseudo-canonization of simplified positions.

A full canonization would have to try every renaming of the link letters,
which is factorial in their count; instead each land is normalized by
iterating a cheap pass: orient and rotate every boundary minimally, sort
boundaries and regions, then rename letters by order of appearance.  The
pass is repeated until its output cycles, and the smallest string of the
cycle is the key.  Equal positions may still map to a few distinct keys
(link renaming is best-effort), but a key is a pure function of the
position structure and canonizing a key returns it unchanged.
"""

from __future__ import annotations

from .errors import BudgetExceededError
from .position import (
    Boundary,
    Kind,
    Land,
    Position,
    Region,
    Stage,
    Sym,
    lex_key,
    parse,
    start_string,
)

__all__ = [
    "canonize_land",
    "canonize",
    "canonical_form",
    "parse_key",
    "count_complete_tree",
]

_LOWER = "abcdefghijklmnopqrstuvwxyz"
_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_MAX_ROUNDS = 16
_CACHE_MAX = 1 << 18


def _char_of(sym: Sym) -> str:
    if sym.kind == Kind.INNER:
        return _LOWER[sym.code]
    if sym.kind == Kind.LINK:
        return _UPPER[sym.code]
    return "012"[sym.kind]


_rotation_cache: dict[tuple[Sym, ...], tuple[str, tuple[Sym, ...]]] = {}


def _best_rotation(symbols: tuple[Sym, ...]) -> tuple[str, tuple[Sym, ...]]:
    """Minimal rotation of a cyclic boundary.

    Inner letters are renamed from 'a' by order of appearance within each
    candidate rotation before comparison; link letters keep their names.
    Returns the comparison key (translated text) and the rotated symbols.
    """
    cached = _rotation_cache.get(symbols)
    if cached is not None:
        return cached
    n = len(symbols)
    if not any(sym.kind == Kind.INNER for sym in symbols):
        text = "".join(map(_char_of, symbols))
        doubled = text + text
        start = min(range(n), key=lambda r: lex_key(doubled[r:r + n]))
        result = (lex_key(doubled[start:start + n] + "."),
                  symbols[start:] + symbols[:start])
    else:
        best_key: str | None = None
        best_syms: tuple[Sym, ...] = symbols
        for r in range(n):
            seq = symbols[r:] + symbols[:r]
            inner: dict[int, int] = {}
            chars: list[str] = []
            out: list[Sym] = []
            for sym in seq:
                if sym.kind == Kind.INNER:
                    code = inner.setdefault(sym.code, len(inner))
                    chars.append(_LOWER[code])
                    out.append(Sym(Kind.INNER, code))
                else:
                    chars.append(_char_of(sym))
                    out.append(sym)
            key = lex_key("".join(chars) + ".")
            if best_key is None or key < best_key:
                best_key = key
                best_syms = tuple(out)
        assert best_key is not None
        result = (best_key, best_syms)
    if len(_rotation_cache) >= _CACHE_MAX:
        _rotation_cache.clear()
    _rotation_cache[symbols] = result
    return result


_orient_cache: dict[tuple[Boundary, ...], tuple[str, Region]] = {}
_RBRACE = lex_key("}")


def _orient_region(region: Region) -> tuple[str, Region]:
    """Pick the region orientation with the smaller sorted-boundary string.

    Orientation is a whole-region choice: either every boundary keeps its
    direction or every boundary is reversed.  Returns the region's sort
    key (terminator included) along with the normalized region.
    """
    cached = _orient_cache.get(region.boundaries)
    if cached is not None:
        return cached
    variants: list[tuple[str, Region]] = []
    for flip in (False, True):
        bounds = []
        for boundary in region.boundaries:
            syms = tuple(reversed(boundary.symbols)) if flip else boundary.symbols
            bounds.append(_best_rotation(syms))
        bounds.sort(key=lambda item: item[0])
        key = "".join(k for k, _ in bounds) + _RBRACE
        variants.append((key, Region(tuple(Boundary(s) for _, s in bounds))))
    variants.sort(key=lambda item: item[0])
    result = variants[0]
    if len(_orient_cache) >= _CACHE_MAX:
        _orient_cache.clear()
    _orient_cache[region.boundaries] = result
    return result


def _normalize_once(land: Land) -> tuple[Land, str]:
    """One normalization pass; returns the land and its rendered key text."""
    oriented = sorted((_orient_region(r) for r in land.regions), key=lambda t: t[0])
    link_names: dict[int, int] = {}
    out_regions: list[Region] = []
    chars: list[str] = []
    for _, region in oriented:
        bounds = []
        for boundary in region.boundaries:
            syms = []
            for sym in boundary.symbols:
                if sym.kind == Kind.LINK:
                    code = link_names.setdefault(sym.code, len(link_names))
                    syms.append(Sym(Kind.LINK, code))
                    chars.append(_UPPER[code])
                else:
                    syms.append(sym)
                    chars.append(_char_of(sym))
            chars.append(".")
            bounds.append(Boundary(tuple(syms)))
        chars.append("}")
        out_regions.append(Region(tuple(bounds)))
    chars.append("]!")
    return Land(tuple(out_regions), closed=True), "".join(chars)


def _cycle_min(land: Land) -> str:
    """Iterate the normalization pass until it cycles; min of the cycle."""
    seen: dict[str, int] = {}
    texts: list[str] = []
    cur = land
    for _ in range(_MAX_ROUNDS):
        cur, text = _normalize_once(cur)
        at = seen.get(text)
        if at is not None:
            return min(texts[at:], key=lex_key)
        seen[text] = len(texts)
        texts.append(text)
    return min(texts, key=lex_key)


def _relabel_links(land: Land, mapping: dict[int, int]) -> Land:
    regions = []
    for region in land.regions:
        bounds = []
        for boundary in region.boundaries:
            bounds.append(Boundary(tuple(
                Sym(Kind.LINK, mapping[s.code]) if s.kind == Kind.LINK else s
                for s in boundary.symbols
            )))
        regions.append(Region(tuple(bounds)))
    return Land(tuple(regions), closed=True)


_MAX_SEEDS = 32


def _seed_relabelings(land: Land) -> list[dict[int, int]]:
    """Alternative appearance-order link namings worth trying.

    The boundaries minimizing the link-blind text (links masked to 'A')
    are structural anchors independent of the current names; every tied
    rotation/orientation of them seeds one renaming: its links are named
    first, in walking order, then the rest of the land as encountered.
    """
    best: str | None = None
    anchors: list[tuple[int, tuple[Sym, ...]]] = []
    for ri, region in enumerate(land.regions):
        for flip in (False, True):
            for boundary in region.boundaries:
                syms = tuple(reversed(boundary.symbols)) if flip else boundary.symbols
                if not any(s.kind == Kind.LINK for s in syms):
                    continue
                blind = "".join(
                    "A" if s.kind == Kind.LINK else _char_of(s) for s in syms
                )
                doubled = lex_key(blind + blind)
                n = len(syms)
                for r in range(n):
                    cand = doubled[r:r + n]
                    if best is None or cand < best:
                        best = cand
                        anchors = [(ri, syms[r:] + syms[:r])]
                    elif cand == best and len(anchors) < _MAX_SEEDS:
                        anchors.append((ri, syms[r:] + syms[:r]))
    seeds: list[dict[int, int]] = []
    taken: set[tuple] = set()
    for ri, seq in anchors:
        mapping: dict[int, int] = {}

        def note(sym: Sym) -> None:
            if sym.kind == Kind.LINK and sym.code not in mapping:
                mapping[sym.code] = len(mapping)

        for sym in seq:
            note(sym)
        for boundary in land.regions[ri].boundaries:
            for sym in boundary.symbols:
                note(sym)
        for rj, region in enumerate(land.regions):
            if rj == ri:
                continue
            for boundary in region.boundaries:
                for sym in boundary.symbols:
                    note(sym)
        signature = tuple(sorted(mapping.items()))
        if signature not in taken:
            taken.add(signature)
            seeds.append(mapping)
    return seeds


def _count_links(land: Land) -> int:
    return len({
        s.code
        for region in land.regions
        for boundary in region.boundaries
        for s in boundary.symbols
        if s.kind == Kind.LINK
    })


def _canonize_once(land: Land) -> str:
    key = _cycle_min(land)
    if _count_links(land) >= 2:
        for mapping in _seed_relabelings(land):
            candidate = _cycle_min(_relabel_links(land, mapping))
            if lex_key(candidate) < lex_key(key):
                key = candidate
    return key


_land_cache: dict[tuple[Region, ...], str] = {}


def canonize_land(land: Land) -> str:
    """Canonical key of one land, as a single-land position string."""
    cached = _land_cache.get(land.regions)
    if cached is not None:
        return cached
    key = _canonize_once(land)
    for _ in range(8):
        again = _canonize_once(parse(key).lands[0])
        if again == key:
            break
        key = again  # strictly smaller; repeat until stable
    if len(_land_cache) >= _CACHE_MAX:
        _land_cache.clear()
    _land_cache[land.regions] = key
    return key


def canonize(pos: Position) -> str:
    """Canonical key of a simplified position.

    Lands are canonized independently and their keys concatenated in
    lexicographic order (per the grammar's character order).
    """
    fragments = sorted((canonize_land(land)[:-2] for land in pos.lands), key=lex_key)
    return "".join(f + "]" for f in fragments) + "!"


def parse_key(key: str) -> Position:
    """Parse a canonical key back into a (simplified) position."""
    return Position(parse(key).lands, Stage.SIMPLIFIED)


def canonical_form(text: str) -> str:
    """Simplify and canonize an arbitrary position string."""
    from .simplify import simplify

    return canonize(simplify(parse(text)))


def count_complete_tree(spots: int, node_budget: int | None = None) -> int:
    """Distinct keys stored by a complete game tree development.

    Develops every position reachable from the `spots`-spot start and
    counts the distinct canonical keys (the start included).  Only desk
    scale is supported; pass a `node_budget` to cap the development.
    """
    from .moves import child_keys

    if spots > 6:
        raise BudgetExceededError("complete tree development is limited to 6 spots")
    root = canonical_form(start_string(spots))
    seen = {root}
    stack = [root]
    while stack:
        key = stack.pop()
        for child in child_keys(parse_key(key)):
            if child not in seen:
                if node_budget is not None and len(seen) >= node_budget:
                    raise BudgetExceededError(f"more than {node_budget} distinct positions")
                seen.add(child)
                stack.append(child)
    return len(seen)
