"""String simplification pipeline.

Five steps, applied in order and looped to a fixpoint: dead-part deletion,
generic-vertex substitution, land splitting, letter renaming, and merging
of boundaries in regions with 3 lives or less.  Each step preserves the
game value; only the fixpoint result is marked Simplified.
"""

from __future__ import annotations

from .position import (
    G0,
    G1,
    G2,
    Boundary,
    Kind,
    Land,
    LetterInfo,
    Position,
    Region,
    Stage,
    Sym,
    inner_sym,
    letter_groups,
    letter_identity,
    link_sym,
)

__all__ = [
    "delete_dead",
    "genericize",
    "split_lands",
    "rename_letters",
    "merge_small_regions",
    "simplify",
]

_GENERIC_LIVES = {Kind.GENERIC0: 3, Kind.GENERIC1: 2, Kind.GENERIC2: 1}
_INNER = Kind.INNER
_LINK = Kind.LINK

Groups = dict[tuple, LetterInfo]


def _region_lives(pos: Position, groups: Groups, li: int, ri: int) -> int:
    total = 0
    seen: set[tuple] = set()
    for bi, boundary in enumerate(pos.lands[li].regions[ri].boundaries):
        for sym in boundary.symbols:
            kind = sym.kind
            if kind == _INNER:
                ident = (li, ri, bi, _INNER, sym.code)
            elif kind == _LINK:
                ident = (li, _LINK, sym.code)
            else:
                total += _GENERIC_LIVES[kind]
                continue
            if ident not in seen:
                seen.add(ident)
                total += groups[ident].lives
    return total


def _delete_dead_g(pos: Position, groups: Groups) -> tuple[Position, bool]:
    dead = {ident for ident, info in groups.items() if info.effective_occurrences >= 3}
    changed = False
    if dead:
        changed = True
        lands: list[Land] = []
        for li, land in enumerate(pos.lands):
            regions: list[Region] = []
            for ri, region in enumerate(land.regions):
                bounds: list[Boundary] = []
                for bi, boundary in enumerate(region.boundaries):
                    kept = [
                        sym
                        for sym in boundary.symbols
                        if sym.kind < _INNER or letter_identity(li, ri, bi, sym) not in dead
                    ]
                    if not kept:
                        continue
                    if len(kept) < len(boundary.symbols):
                        kept = [
                            sym._replace(accompanied=True) if sym.kind >= _INNER else sym
                            for sym in kept
                        ]
                    bounds.append(Boundary(tuple(kept)))
                if bounds:
                    regions.append(Region(tuple(bounds)))
            if regions:
                lands.append(Land(tuple(regions), land.closed))
        pos = Position(tuple(lands), pos.stage)
        groups = letter_groups(pos)

    # Dead regions: 0 or 1 reachable lives.
    dead_regions = {
        (li, ri)
        for li, land in enumerate(pos.lands)
        for ri in range(len(land.regions))
        if _region_lives(pos, groups, li, ri) <= 1
    }
    if not dead_regions:
        return pos, changed

    removed: dict[tuple, int] = {}
    for ident, info in groups.items():
        for li, ri, _, _ in info.slots:
            if (li, ri) in dead_regions:
                removed[ident] = removed.get(ident, 0) + 1

    lands = []
    for li, land in enumerate(pos.lands):
        regions = []
        for ri, region in enumerate(land.regions):
            if (li, ri) in dead_regions:
                continue
            bounds = []
            for bi, boundary in enumerate(region.boundaries):
                syms = []
                for sym in boundary.symbols:
                    if sym.kind >= _INNER and removed.get(letter_identity(li, ri, bi, sym)):
                        sym = sym._replace(survivor=True)
                    syms.append(sym)
                bounds.append(Boundary(tuple(syms)))
            regions.append(Region(tuple(bounds)))
        if regions:
            lands.append(Land(tuple(regions), land.closed))
    return Position(tuple(lands), pos.stage), True


def _genericize_g(pos: Position, groups: Groups) -> tuple[Position, bool]:
    # slot -> replacement Sym, or None to drop the slot
    plan: dict[tuple[int, int, int, int], Sym | None] = {}
    clear: list[tuple[int, int, int, int]] = []
    for ident, info in groups.items():
        occ = len(info.slots)
        if occ == 1:
            slot = info.slots[0]
            if info.survivor:
                plan[slot] = G2
            elif info.alone and not info.accompanied:
                plan[slot] = G0
            else:
                plan[slot] = G1
        elif occ == 2:
            s_a, s_b = info.slots
            if s_a > s_b:
                s_a, s_b = s_b, s_a
            if s_a[:3] == s_b[:3]:
                n = len(pos.lands[s_a[0]].regions[s_a[1]].boundaries[s_a[2]].symbols)
                if s_b[3] - s_a[3] == 1 or (s_a[3] == 0 and s_b[3] == n - 1):
                    plan[s_a] = G2
                    plan[s_b] = None
                    continue
            if info.survivor or info.accompanied:
                clear.extend(info.slots)
        elif info.survivor or info.accompanied:
            clear.extend(info.slots)

    if not plan:
        flagged = [
            slot for slot in clear
            if (sym := pos.lands[slot[0]].regions[slot[1]].boundaries[slot[2]].symbols[slot[3]]).survivor
            or sym.accompanied
        ]
        if not flagged:
            return pos, False
        clear = flagged

    clear_set = set(clear)
    lands: list[Land] = []
    for li, land in enumerate(pos.lands):
        regions: list[Region] = []
        for ri, region in enumerate(land.regions):
            bounds: list[Boundary] = []
            for bi, boundary in enumerate(region.boundaries):
                syms: list[Sym] = []
                for si, sym in enumerate(boundary.symbols):
                    ref = (li, ri, bi, si)
                    if ref in plan:
                        rep = plan[ref]
                        if rep is not None:
                            syms.append(rep)
                    elif ref in clear_set and (sym.survivor or sym.accompanied):
                        syms.append(Sym(sym.kind, sym.code))
                    else:
                        syms.append(sym)
                bounds.append(Boundary(tuple(syms)))
            regions.append(Region(tuple(bounds)))
        lands.append(Land(tuple(regions), land.closed))
    return Position(tuple(lands), pos.stage), True


def _split_lands_g(pos: Position, groups: Groups) -> tuple[Position, bool]:
    lands: list[Land] = []
    changed = False
    for li, land in enumerate(pos.lands):
        n = len(land.regions)
        if n == 1:
            if land.closed:
                lands.append(land)
            else:
                changed = True
                lands.append(Land(land.regions, closed=True))
            continue
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ident, info in groups.items():
            if ident[0] != li or len(info.slots) < 2:
                continue
            first = find(info.slots[0][1])
            for slot in info.slots[1:]:
                other = find(slot[1])
                if other != first:
                    parent[other] = first
        components: dict[int, list[Region]] = {}
        order: list[int] = []
        for ri, region in enumerate(land.regions):
            root = find(ri)
            if root not in components:
                components[root] = []
                order.append(root)
            components[root].append(region)
        if len(order) > 1 or not land.closed:
            changed = True
        for root in order:
            lands.append(Land(tuple(components[root]), closed=True))
    if not changed:
        return pos, False
    return Position(tuple(lands), pos.stage), True


def _rename_letters_g(pos: Position, groups: Groups) -> tuple[Position, bool]:
    inner_idents = {
        ident
        for ident, info in groups.items()
        if len(info.slots) == 2 and info.slots[0][:3] == info.slots[1][:3]
    }
    changed = False
    lands: list[Land] = []
    for li, land in enumerate(pos.lands):
        link_codes: dict[tuple, int] = {}
        regions: list[Region] = []
        for ri, region in enumerate(land.regions):
            bounds: list[Boundary] = []
            for bi, boundary in enumerate(region.boundaries):
                inner_codes: dict[tuple, int] = {}
                syms: list[Sym] = []
                for sym in boundary.symbols:
                    if sym.kind < _INNER:
                        syms.append(sym)
                        continue
                    ident = letter_identity(li, ri, bi, sym)
                    if ident in inner_idents:
                        new = inner_sym(inner_codes.setdefault(ident, len(inner_codes)))
                    else:
                        new = link_sym(link_codes.setdefault(ident, len(link_codes)))
                    if new != sym:
                        changed = True
                    syms.append(new)
                bounds.append(Boundary(tuple(syms)))
            regions.append(Region(tuple(bounds)))
        lands.append(Land(tuple(regions), land.closed))
    if not changed:
        return pos, False
    return Position(tuple(lands), pos.stage), True


def _merge_small_regions_g(pos: Position, groups: Groups) -> tuple[Position, bool]:
    changed = False
    lands: list[Land] = []
    for li, land in enumerate(pos.lands):
        regions: list[Region] = []
        for ri, region in enumerate(land.regions):
            if len(region.boundaries) > 1 and _region_lives(pos, groups, li, ri) <= 3:
                changed = True
                merged: list[Sym] = []
                used_inner: set[int] = set()
                for boundary in region.boundaries:
                    remap: dict[int, int] = {}
                    for sym in boundary.symbols:
                        if sym.kind == _INNER:
                            if sym.code not in remap:
                                code = sym.code
                                while code in used_inner:
                                    code += 1  # avoid capturing another piece's vertex
                                remap[sym.code] = code
                            merged.append(inner_sym(remap[sym.code]))
                        else:
                            merged.append(sym)
                    used_inner.update(remap.values())
                regions.append(Region((Boundary(tuple(merged)),)))
            else:
                regions.append(region)
        lands.append(Land(tuple(regions), land.closed))
    if not changed:
        return pos, False
    return Position(tuple(lands), pos.stage), True


def delete_dead(pos: Position) -> Position:
    """Remove dead vertices, then empty boundaries, then dead regions.

    A letter left behind by a dead-region deletion keeps its missing
    occurrence as a `survivor` tag; a letter whose boundary lost vertices
    is tagged `accompanied` so a later single-letter boundary is not
    mistaken for an isolated spot.
    """
    return _delete_dead_g(pos, letter_groups(pos))[0]


def genericize(pos: Position) -> Position:
    """Replace resolved letters by the generic digits '0', '1' and '2'.

    Single-occurrence letters become '0' (alone in their boundary) or '1';
    dead-region survivors and cyclically adjacent doubles become '2'.
    Existing generic digits are never reclassified.
    """
    return _genericize_g(pos, letter_groups(pos))[0]


def split_lands(pos: Position) -> Position:
    """Cut every land into maximal groups of regions sharing letters."""
    return _split_lands_g(pos, letter_groups(pos))[0]


def rename_letters(pos: Position) -> Position:
    """Canonical letter classes and codes, assigned by order of appearance.

    Letters occurring twice in one boundary become lower-case, restarting
    from 'a' at each boundary; all other letters become upper-case,
    restarting from 'A' at each land.
    """
    return _rename_letters_g(pos, letter_groups(pos))[0]


def merge_small_regions(pos: Position) -> Position:
    """Concatenate all boundaries of every region with 3 lives or less."""
    return _merge_small_regions_g(pos, letter_groups(pos))[0]


_MAX_PASSES = 10


def simplify(pos: Position) -> Position:
    """Run the full pipeline until no step changes the position."""
    cur = pos
    for _ in range(_MAX_PASSES):
        groups = letter_groups(cur)
        nxt, c1 = _delete_dead_g(cur, groups)
        if c1:
            groups = letter_groups(nxt)
        nxt2, c2 = _genericize_g(nxt, groups)
        if c2:
            groups = letter_groups(nxt2)
        nxt3, c3 = _split_lands_g(nxt2, groups)
        if c3:
            groups = letter_groups(nxt3)
        nxt4, c4 = _rename_letters_g(nxt3, groups)
        if c4:
            groups = letter_groups(nxt4)
        nxt5, c5 = _merge_small_regions_g(nxt4, groups)
        if not (c1 or c2 or c3 or c4 or c5):
            break
        cur = nxt5
    return Position(cur.lands, Stage.SIMPLIFIED)
