"""Sprouts solver: string positions, simplification, nimber search."""

from .canonize import canonical_form, canonize, canonize_land, count_complete_tree, parse_key
from .errors import (
    BudgetExceededError,
    CheckError,
    NimberRangeError,
    ParseError,
    RenderError,
    SearchAbortedError,
    SproutsError,
    StoreConflictError,
    StoreFormatError,
)
from .moves import children, materialize, one_boundary_moves, two_boundary_moves
from .position import (
    Boundary,
    Kind,
    Land,
    Position,
    Region,
    Stage,
    Sym,
    lex_key,
    lives,
    parse,
    region_lives,
    render,
    start_position,
    start_string,
    total_lives,
)
from .simplify import (
    delete_dead,
    genericize,
    merge_small_regions,
    rename_letters,
    simplify,
    split_lands,
)

__all__ = [name for name in dir() if not name.startswith("_")]
