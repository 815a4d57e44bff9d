"""Move generation.

Moves connect two alive vertices of one region and create one new vertex
on the drawn curve: either two different boundaries merge into one, or a
boundary is split and the region's other boundaries are distributed over
the two new regions in every possible way.  Move generation works on
materialized positions (letters only); `children` wraps the whole
pipeline and yields simplified, canonized child positions.
"""

from __future__ import annotations

from .canonize import parse_key
from .position import (
    Boundary,
    Kind,
    Land,
    LetterInfo,
    Position,
    Region,
    Stage,
    Sym,
    letter_groups,
    letter_identity,
)
from .simplify import simplify

__all__ = [
    "materialize",
    "two_boundary_moves",
    "one_boundary_moves",
    "children",
    "child_keys",
]


def materialize(pos: Position) -> Position:
    """Expand generic digits and renamed letters into fresh plain letters.

    '0' becomes a letter alone in its boundary, '1' a letter tagged as
    formerly accompanied (2 lives, even if alone), '2' an adjacent letter
    pair, and each inner/link vertex one fresh letter at both of its
    slots.  The result is raw and game-equivalent to the input.
    """
    groups = letter_groups(pos)
    letter_codes: dict[tuple, int] = {}
    counter = 0

    def fresh() -> int:
        nonlocal counter
        counter += 1
        return counter - 1

    lands: list[Land] = []
    for li, land in enumerate(pos.lands):
        regions: list[Region] = []
        for ri, region in enumerate(land.regions):
            bounds: list[Boundary] = []
            for bi, boundary in enumerate(region.boundaries):
                syms: list[Sym] = []
                for sym in boundary.symbols:
                    if sym.kind == Kind.GENERIC0:
                        syms.append(Sym(Kind.LINK, fresh()))
                    elif sym.kind == Kind.GENERIC1:
                        syms.append(Sym(Kind.LINK, fresh(), accompanied=True))
                    elif sym.kind == Kind.GENERIC2:
                        code = fresh()
                        syms.append(Sym(Kind.LINK, code))
                        syms.append(Sym(Kind.LINK, code))
                    else:
                        ident = letter_identity(li, ri, bi, sym)
                        if ident not in letter_codes:
                            letter_codes[ident] = fresh()
                        info = groups[ident]
                        syms.append(Sym(
                            Kind.LINK,
                            letter_codes[ident],
                            survivor=info.survivor,
                            accompanied=info.accompanied,
                        ))
                bounds.append(Boundary(tuple(syms)))
            regions.append(Region(tuple(bounds)))
        lands.append(Land(tuple(regions), land.closed))
    return Position(tuple(lands), Stage.RAW)


def _check_letters_only(pos: Position) -> None:
    for land in pos.lands:
        for region in land.regions:
            for boundary in region.boundaries:
                for sym in boundary.symbols:
                    if sym.kind not in (Kind.INNER, Kind.LINK):
                        raise ValueError("move generation requires a materialized position")


def _is_isolated(info: LetterInfo) -> bool:
    # True isolated spot: shows once, alone, and nothing was deleted near it.
    return info.lives == 3


def _fresh_sym(pos: Position) -> Sym:
    top = -1
    for land in pos.lands:
        for region in land.regions:
            for boundary in region.boundaries:
                for sym in boundary.symbols:
                    if sym.kind == Kind.LINK and sym.code > top:
                        top = sym.code
    return Sym(Kind.LINK, top + 1)


def _replace_region(pos: Position, li: int, ri: int, replacement: tuple[Region, ...]) -> Position:
    land = pos.lands[li]
    regions = land.regions[:ri] + replacement + land.regions[ri + 1:]
    lands = pos.lands[:li] + (Land(regions, land.closed),) + pos.lands[li + 1:]
    return Position(lands, Stage.RAW)


def _dedup(raws: list[Position]) -> tuple[Position, ...]:
    from .position import render

    seen: set[str] = set()
    out: list[Position] = []
    for raw in raws:
        text = render(raw)
        if text not in seen:
            seen.add(text)
            out.append(raw)
    return tuple(out)


def two_boundary_moves(pos: Position) -> tuple[Position, ...]:
    """All raw children connecting vertices of two different boundaries."""
    return _dedup(_two_boundary_raw(pos))


def _two_boundary_raw(pos: Position) -> list[Position]:
    _check_letters_only(pos)
    groups = letter_groups(pos)
    z = _fresh_sym(pos)
    out: list[Position] = []
    for li, land in enumerate(pos.lands):
        for ri, region in enumerate(land.regions):
            bs = region.boundaries
            for bx in range(len(bs)):
                x = bs[bx].symbols
                x_infos = [groups[letter_identity(li, ri, bx, s)] for s in x]
                for by in range(len(bs)):
                    if by == bx:
                        continue
                    y = bs[by].symbols
                    y_infos = [groups[letter_identity(li, ri, by, s)] for s in y]
                    for i, xi in enumerate(x):
                        if x_infos[i].effective_occurrences > 2:
                            continue
                        x_tail = () if _is_isolated(x_infos[i]) else x[i:]
                        for j, yj in enumerate(y):
                            if y_infos[j].effective_occurrences > 2:
                                continue
                            y_head = () if _is_isolated(y_infos[j]) else y[j:]
                            merged = x[:i + 1] + (z,) + y_head + y[:j + 1] + (z,) + x_tail
                            bounds = tuple(
                                Boundary(merged) if k == bx else bs[k]
                                for k in range(len(bs))
                                if k != by
                            )
                            out.append(_replace_region(pos, li, ri, (Region(bounds),)))
    return out


def one_boundary_moves(pos: Position) -> tuple[Position, ...]:
    """All raw children connecting a boundary to itself.

    The region splits in two; the remaining boundaries go to either side
    in all 2^k ways.  A vertex may be linked to itself only while it has
    two lives left (a letter with a single effective occurrence).
    """
    return _dedup(_one_boundary_raw(pos))


def _one_boundary_raw(pos: Position) -> list[Position]:
    _check_letters_only(pos)
    groups = letter_groups(pos)
    z = _fresh_sym(pos)
    out: list[Position] = []
    for li, land in enumerate(pos.lands):
        for ri, region in enumerate(land.regions):
            bs = region.boundaries
            for bb in range(len(bs)):
                x = bs[bb].symbols
                infos = [groups[letter_identity(li, ri, bb, s)] for s in x]
                idents = [letter_identity(li, ri, bb, s) for s in x]
                others = tuple(bs[k] for k in range(len(bs)) if k != bb)
                k = len(others)
                pieces: list[tuple[tuple[Sym, ...], tuple[Sym, ...]]] = []
                for i in range(len(x)):
                    if infos[i].effective_occurrences > 2:
                        continue
                    for j in range(i + 1, len(x)):
                        if infos[j].effective_occurrences > 2 or idents[j] == idents[i]:
                            continue
                        pieces.append((x[:i + 1] + (z,) + x[j:], x[i:j + 1] + (z,)))
                    if infos[i].effective_occurrences == 1:
                        tail = () if _is_isolated(infos[i]) else x[i:]
                        pieces.append((x[:i + 1] + (z,) + tail, (x[i], z)))
                for piece1, piece2 in pieces:
                    for mask in range(1 << k):
                        b1 = tuple(others[t] for t in range(k) if not mask & (1 << t))
                        b2 = tuple(others[t] for t in range(k) if mask & (1 << t))
                        r1 = Region((Boundary(piece1),) + b1)
                        r2 = Region((Boundary(piece2),) + b2)
                        out.append(_replace_region(pos, li, ri, (r1, r2)))
    return out


def _min_rotation(t: tuple) -> tuple:
    n = len(t)
    if n <= 1:
        return t
    doubled = t + t
    best = t
    for i in range(1, n):
        cand = doubled[i:i + n]
        if cand < best:
            best = cand
    return best


def _raw_sketch(pos: Position) -> tuple:
    """Equivalence-safe dedup key for a raw single-land move result.

    Applies only game-preserving transformations (boundary rotation,
    boundary/region order, renaming by appearance, applied twice), so two
    positions with equal sketches are equal positions.  Cheaper than the
    full simplify-and-canonize pipeline; flags are part of the key.
    """
    land = pos.lands[0]
    regions = []
    for region in land.regions:
        bounds = sorted(
            _min_rotation(tuple(
                (s.code, s.survivor, s.accompanied) for s in b.symbols
            ))
            for b in region.boundaries
        )
        regions.append(bounds)
    regions.sort()
    names: dict[int, int] = {}
    for bounds in regions:
        for bound in bounds:
            for code, _, _ in bound:
                if code not in names:
                    names[code] = len(names)
    final = []
    for bounds in regions:
        renamed = sorted(
            _min_rotation(tuple(
                (names[code], surv, acmp) for code, surv, acmp in bound
            ))
            for bound in bounds
        )
        final.append(tuple(renamed))
    final.sort()
    return tuple(final)


_sketch_cache: dict[tuple, tuple[str, ...]] = {}
_SKETCH_CACHE_MAX = 1 << 17


def _position_of_sketch(sketch: tuple) -> Position:
    regions = []
    for bounds in sketch:
        regions.append(Region(tuple(
            Boundary(tuple(Sym(Kind.LINK, code, surv, acmp) for code, surv, acmp in bound))
            for bound in bounds
        )))
    return Position((Land(tuple(regions), closed=True),), Stage.RAW)


def _simplified_fragments(raw: Position) -> tuple[str, ...]:
    """Canonical land fragments of one raw move result, cached by sketch.

    The fragments are computed from the sketch itself (not from `raw`),
    so equal sketches yield byte-equal fragments in any process and any
    call order.
    """
    from .canonize import canonize_land

    sketch = _raw_sketch(raw)
    got = _sketch_cache.get(sketch)
    if got is None:
        sim = simplify(_position_of_sketch(sketch))
        got = tuple(canonize_land(land)[:-2] for land in sim.lands)
        if len(_sketch_cache) >= _SKETCH_CACHE_MAX:
            _sketch_cache.clear()
        _sketch_cache[sketch] = got
    return got


def child_keys(pos: Position) -> tuple[str, ...]:
    """Canonical keys of all children of a simplified position, sorted.

    Moves take place inside a single land, so each land is expanded on its
    own and recombined with the untouched lands' canonical fragments.
    """
    from .canonize import canonize_land
    from .position import lex_key

    frags = [canonize_land(land)[:-2] for land in pos.lands]
    keys: set[str] = set()
    expanded: set[str] = set()
    for i, land in enumerate(pos.lands):
        if frags[i] in expanded:
            continue  # an equal land yields the same children
        expanded.add(frags[i])
        others = frags[:i] + frags[i + 1:]
        mat = materialize(Position((land,), Stage.SIMPLIFIED))
        for raw in _two_boundary_raw(mat) + _one_boundary_raw(mat):
            parts = others + list(_simplified_fragments(raw))
            parts.sort(key=lex_key)
            keys.add("".join(f + "]" for f in parts) + "!")
    return tuple(sorted(keys, key=lex_key))


def children(pos: Position) -> tuple[Position, ...]:
    """All distinct children of a simplified position, canonized."""
    return tuple(parse_key(k) for k in child_keys(pos))
