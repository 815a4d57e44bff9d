"""Position model and string grammar for Sprouts.

A position nests four levels: lands (independent parts) contain regions
(connected components of the plane), regions contain boundaries (connected
curve components), and a boundary is a cyclic walk of vertex symbols.

The text form uses one character per vertex plus four terminators:
'.' ends a boundary, '}' ends a region, ']' ends a land, '!' ends the
position.  Vertex characters are the generic digits '0', '1', '2'
(3, 2 and 1 lives respectively), lower-case letters (vertices occurring
twice in one boundary) and upper-case letters (vertices shared between
regions).  Parsing preserves the text exactly; `render(parse(s)) == s`.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterator, NamedTuple

from .errors import ParseError, RenderError

__all__ = [
    "Kind",
    "Sym",
    "Boundary",
    "Region",
    "Land",
    "Position",
    "Stage",
    "G0",
    "G1",
    "G2",
    "ALPHABET",
    "lex_key",
    "parse",
    "render",
    "render_land",
    "lives",
    "total_lives",
    "region_lives",
    "land_lives",
    "start_position",
    "start_string",
]


class Kind(IntEnum):
    GENERIC0 = 0  # '0': isolated spot, 3 lives
    GENERIC1 = 1  # '1': one free end, 2 lives
    GENERIC2 = 2  # '2': 1 life
    INNER = 3     # 'a'..'z': occurs twice in one boundary
    LINK = 4      # 'A'..'Z': occurs in two regions (also raw letters)


class Sym(NamedTuple):
    """One vertex occurrence.

    `survivor` marks a letter whose other occurrence was removed with a
    dead region; `accompanied` marks a letter whose boundary used to hold
    further (since deleted) vertices.  Both flags exist only between
    simplification passes and never show in rendered text.
    """

    kind: Kind
    code: int = 0
    survivor: bool = False
    accompanied: bool = False


G0 = Sym(Kind.GENERIC0)
G1 = Sym(Kind.GENERIC1)
G2 = Sym(Kind.GENERIC2)

# Flag-free symbols are interned; hot paths index these instead of calling Sym().
INNER_SYMS = tuple(Sym(Kind.INNER, c) for c in range(64))
LINK_SYMS = tuple(Sym(Kind.LINK, c) for c in range(64))


def inner_sym(code: int) -> Sym:
    return INNER_SYMS[code] if code < 64 else Sym(Kind.INNER, code)


def link_sym(code: int) -> Sym:
    return LINK_SYMS[code] if code < 64 else Sym(Kind.LINK, code)


class Boundary(NamedTuple):
    symbols: tuple[Sym, ...]


class Region(NamedTuple):
    boundaries: tuple[Boundary, ...]


class Land(NamedTuple):
    regions: tuple[Region, ...]
    closed: bool = True  # terminated by ']' in the text form


class Stage(IntEnum):
    RAW = 0
    SIMPLIFIED = 1


class Position(NamedTuple):
    lands: tuple[Land, ...] = ()
    stage: Stage = Stage.RAW


# Lexicographic order of the grammar: 0 < 1 < 2 < a..z < A..Z < . < } < ] < !
_LOWER = "abcdefghijklmnopqrstuvwxyz"
_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
ALPHABET = "012" + _LOWER + _UPPER + ".}]!"
_LEX_TABLE = str.maketrans({c: chr(i) for i, c in enumerate(ALPHABET)})


def lex_key(text: str) -> str:
    """Sort key implementing the grammar's character order (not ASCII)."""
    return text.translate(_LEX_TABLE)


def _sym_char(sym: Sym) -> str:
    if sym.kind == Kind.INNER:
        if sym.code >= 26:
            raise RenderError(f"more than 26 inner vertices in one boundary ({sym.code + 1})")
        return _LOWER[sym.code]
    if sym.kind == Kind.LINK:
        if sym.code >= 26:
            raise RenderError(f"more than 26 link vertices in one land ({sym.code + 1})")
        return _UPPER[sym.code]
    return "012"[sym.kind]


def render(pos: Position) -> str:
    """Inverse of `parse`; raises RenderError past 26 letters per scope."""
    out: list[str] = []
    for land in pos.lands:
        for region in land.regions:
            for boundary in region.boundaries:
                out.extend(_sym_char(s) for s in boundary.symbols)
                out.append(".")
            out.append("}")
        if land.closed:
            out.append("]")
    out.append("!")
    return "".join(out)


def render_land(land: Land) -> str:
    """Single land as a stand-alone position string (always closed)."""
    return render(Position((Land(land.regions, closed=True),), Stage.SIMPLIFIED))


def parse(text: str) -> Position:
    """Parse a position string, mirroring its structure exactly.

    Raises ParseError for characters outside the alphabet, missing
    terminators, empty boundaries/regions/lands, text after '!', or a
    letter used more than three times within its scope.
    """
    lands: list[Land] = []
    regions: list[Region] = []
    boundaries: list[Boundary] = []
    syms: list[Sym] = []
    ended = False
    for idx, ch in enumerate(text):
        if ended:
            raise ParseError("text after end-of-position '!'", idx)
        if ch in "012":
            syms.append((G0, G1, G2)["012".index(ch)])
        elif "a" <= ch <= "z":
            syms.append(INNER_SYMS[ord(ch) - ord("a")])
        elif "A" <= ch <= "Z":
            syms.append(LINK_SYMS[ord(ch) - ord("A")])
        elif ch == ".":
            if not syms:
                raise ParseError("empty boundary", idx)
            boundaries.append(Boundary(tuple(syms)))
            syms = []
        elif ch == "}":
            if syms:
                raise ParseError("boundary missing '.' before '}'", idx)
            if not boundaries:
                raise ParseError("empty region", idx)
            regions.append(Region(tuple(boundaries)))
            boundaries = []
        elif ch == "]":
            if syms or boundaries:
                raise ParseError("region missing '}' before ']'", idx)
            if not regions:
                raise ParseError("empty land", idx)
            lands.append(Land(tuple(regions), closed=True))
            regions = []
        elif ch == "!":
            if syms or boundaries:
                raise ParseError("unterminated boundary or region before '!'", idx)
            if regions:
                lands.append(Land(tuple(regions), closed=False))
                regions = []
            ended = True
        else:
            raise ParseError(f"character {ch!r} outside alphabet", idx)
    if not ended:
        raise ParseError("missing end-of-position '!'")
    pos = Position(tuple(lands), Stage.RAW)
    for ident, info in letter_groups(pos).items():
        if len(info.slots) > 3:
            raise ParseError(f"letter {_ident_char(ident)!r} occurs more than 3 times")
    return pos


def _ident_char(ident: tuple) -> str:
    kind, code = ident[-2], ident[-1]
    return _LOWER[code] if kind == Kind.INNER else _UPPER[code]


# --- vertex identity and lives -------------------------------------------
#
# A letter names one vertex within a scope: upper-case letters are scoped
# to their land (raw positions form one implicit land), lower-case letters
# to their boundary.  Each generic digit occurrence is its own vertex.

SlotRef = tuple[int, int, int, int]  # (land, region, boundary, slot)


class LetterInfo(NamedTuple):
    slots: tuple[SlotRef, ...]
    survivor: bool
    accompanied: bool
    alone: bool  # single occurrence forming a whole boundary

    @property
    def occurrences(self) -> int:
        return len(self.slots)

    @property
    def effective_occurrences(self) -> int:
        # A survivor's removed occurrence still counts toward its degree.
        return len(self.slots) + (1 if self.survivor else 0)

    @property
    def lives(self) -> int:
        if self.survivor:
            return 3 - self.effective_occurrences
        if self.occurrences == 1 and self.alone and not self.accompanied:
            return 3  # an isolated spot shows one occurrence but has 3 lives
        return 3 - self.occurrences


def iter_slots(pos: Position) -> Iterator[tuple[int, int, int, int, Sym]]:
    for li, land in enumerate(pos.lands):
        for ri, region in enumerate(land.regions):
            for bi, boundary in enumerate(region.boundaries):
                for si, sym in enumerate(boundary.symbols):
                    yield li, ri, bi, si, sym


def letter_identity(li: int, ri: int, bi: int, sym: Sym) -> tuple:
    if sym.kind == Kind.INNER:
        return (li, ri, bi, Kind.INNER, sym.code)
    return (li, Kind.LINK, sym.code)


def letter_groups(pos: Position) -> dict[tuple, LetterInfo]:
    """Group letter occurrences by vertex identity."""
    acc: dict[tuple, list] = {}
    for li, land in enumerate(pos.lands):
        for ri, region in enumerate(land.regions):
            for bi, boundary in enumerate(region.boundaries):
                symbols = boundary.symbols
                blen = len(symbols)
                for si, sym in enumerate(symbols):
                    kind = sym.kind
                    if kind == Kind.INNER:
                        ident = (li, ri, bi, Kind.INNER, sym.code)
                    elif kind == Kind.LINK:
                        ident = (li, Kind.LINK, sym.code)
                    else:
                        continue
                    entry = acc.get(ident)
                    if entry is None:
                        acc[ident] = entry = [[], False, False, blen == 1]
                    entry[0].append((li, ri, bi, si))
                    if sym.survivor:
                        entry[1] = True
                    if sym.accompanied:
                        entry[2] = True
    return {
        ident: LetterInfo(tuple(slots), surv, acmp, alone and len(slots) == 1)
        for ident, (slots, surv, acmp, alone) in acc.items()
    }


_GENERIC_LIVES = {Kind.GENERIC0: 3, Kind.GENERIC1: 2, Kind.GENERIC2: 1}


def lives(sym: Sym, context: Position) -> int:
    """Lives of the vertex a symbol denotes.

    Generic digits carry their lives directly.  For a letter the value is
    resolved against every identity in `context` using that character;
    they must all agree (they always do for grammatically scoped input).
    """
    if sym.kind in _GENERIC_LIVES:
        return _GENERIC_LIVES[sym.kind]
    values = {
        info.lives
        for ident, info in letter_groups(context).items()
        if ident[-2] == sym.kind and ident[-1] == sym.code
    }
    if not values:
        raise ValueError("symbol does not occur in the position")
    if len(values) > 1:
        raise ValueError("letter denotes vertices with different lives; pass indices instead")
    return values.pop()


def total_lives(pos: Position) -> int:
    total = sum(info.lives for info in letter_groups(pos).values())
    for _, _, _, _, sym in iter_slots(pos):
        if sym.kind in _GENERIC_LIVES:
            total += _GENERIC_LIVES[sym.kind]
    return total


def _region_lives_at(pos: Position, groups: dict[tuple, LetterInfo], li: int, ri: int) -> int:
    total = 0
    seen: set[tuple] = set()
    region = pos.lands[li].regions[ri]
    for bi, boundary in enumerate(region.boundaries):
        for sym in boundary.symbols:
            if sym.kind in _GENERIC_LIVES:
                total += _GENERIC_LIVES[sym.kind]
            else:
                ident = letter_identity(li, ri, bi, sym)
                if ident not in seen:
                    seen.add(ident)
                    total += groups[ident].lives
    return total


def region_lives(region: Region, context: Position) -> int:
    """Lives reachable from a region (each distinct vertex counted once).

    A link vertex shared with another region contributes its life to both
    regions.  The region is located in `context` by value; all matches
    must agree.
    """
    groups = letter_groups(context)
    values = {
        _region_lives_at(context, groups, li, ri)
        for li, land in enumerate(context.lands)
        for ri, reg in enumerate(land.regions)
        if reg == region
    }
    if not values:
        raise ValueError("region does not occur in the position")
    if len(values) > 1:
        raise ValueError("region value is ambiguous in this position")
    return values.pop()


def land_lives(pos: Position, li: int) -> int:
    groups = letter_groups(pos)
    total = 0
    for ident, info in groups.items():
        if ident[0] == li:
            total += info.lives
    for l2, _, _, _, sym in iter_slots(pos):
        if l2 == li and sym.kind in _GENERIC_LIVES:
            total += _GENERIC_LIVES[sym.kind]
    return total


def start_string(spots: int) -> str:
    """Raw starting position: `spots` isolated vertices in one region."""
    if spots < 0:
        raise ValueError("spot count must be non-negative")
    if spots == 0:
        return "!"
    if spots > 26:
        raise RenderError("raw starting strings support at most 26 spots")
    return ".".join(_UPPER[i] for i in range(spots)) + ".}!"


def start_position(spots: int) -> Position:
    return parse(start_string(spots))
