from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sprouts.errors import ParseError, RenderError
from sprouts.position import (
    G0,
    G2,
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
    start_string,
    total_lives,
)

WORKED = "AL.}AL.BNMCMN.}D.COFPGQFOCM.}E.HRISJSIUKTKUIR.FQGP.}KT.}!"


class TestParse:
    def test_one_spot_structure(self):
        pos = parse("A.}!")
        assert len(pos.lands) == 1
        (land,) = pos.lands
        assert len(land.regions) == 1
        assert not land.closed
        (region,) = land.regions
        assert len(region.boundaries) == 1
        assert region.boundaries[0].symbols == (Sym(Kind.LINK, 0),)

    def test_empty_position(self):
        assert parse("!") == Position((), Stage.RAW)

    def test_missing_terminator(self):
        with pytest.raises(ParseError):
            parse("A.}")

    @pytest.mark.parametrize("bad", [
        "A.}x!",       # unterminated trailing boundary
        "A*}!",        # character outside the alphabet
        "..}!",        # empty boundary
        "}!",          # empty region
        "]!",          # empty land
        "A.}!x",       # text after end of position
        "AA.AA.}!",    # 4 occurrences of one letter
        "A.!",         # boundary closed but region is not
    ])
    def test_rejects(self, bad):
        with pytest.raises(ParseError):
            parse(bad)

    def test_three_occurrences_allowed(self):
        parse("AAA.B.}!")  # dead vertex in a raw string is legal


class TestRender:
    @pytest.mark.parametrize("text", [
        "!",
        "A.}!",
        "0.0.0.0.0.0.AB.}0.0.0.0.0.AB.}]!",
        "0.1ab1bc2ca.ABC.}0.2ABC.}]12.AB.}AB.}]!",
        WORKED,
        "122a2a.22.2AB.}2A.}2C.}BC.}]1122.}]!",
    ])
    def test_round_trip(self, text):
        assert render(parse(text)) == text

    def test_alphabet_exhaustion(self):
        big = Position(
            (Land((Region((Boundary((Sym(Kind.LINK, 26),)),)),), True),),
            Stage.RAW,
        )
        with pytest.raises(RenderError):
            render(big)


class TestLives:
    def test_generics(self):
        pos = parse("0.2.}]!")
        assert lives(G0, pos) == 3
        assert lives(G2, pos) == 1

    def test_dead_raw_letter(self):
        pos = parse("AAA.B.}!")
        assert lives(Sym(Kind.LINK, 0), pos) == 0
        assert lives(Sym(Kind.LINK, 1), pos) == 3

    def test_three_spots(self):
        assert total_lives(parse("A.B.C.}!")) == 9

    def test_two_generic2(self):
        assert total_lives(parse("22.}]!")) == 2

    def test_start_total(self):
        for p in range(1, 7):
            assert total_lives(parse(start_string(p))) == 3 * p

    def test_region_lives_worked_example(self):
        # the region holding "0.2PGQ.}" in the worked simplification chain
        from sprouts.simplify import delete_dead, genericize

        pos = genericize(delete_dead(parse(WORKED)))
        region = pos.lands[0].regions[2]
        assert render(Position((Land((region,), False),), Stage.RAW)) == "0.2PGQ.}!"
        assert region_lives(region, pos) == 7

    def test_shared_link_counts_in_both_regions(self):
        pos = parse("1A.}2A.}]!")
        r1, r2 = pos.lands[0].regions
        assert region_lives(r1, pos) == 3  # '1' (2) + A (1)
        assert region_lives(r2, pos) == 2  # '2' (1) + A (1)


class TestLexOrder:
    def test_grammar_order(self):
        ordered = ["0", "1", "2", "a", "z", "A", "Z", ".", "}", "]", "!"]
        keys = [lex_key(c) for c in ordered]
        assert keys == sorted(keys)

    def test_differs_from_ascii(self):
        assert lex_key("A") > lex_key("z")  # ASCII would say otherwise
        assert lex_key("AB.") < lex_key("A.")  # '.' sorts after letters


# --- grammar-driven round-trip property -------------------------------------

_vertex = st.sampled_from("012abcABC")


@st.composite
def position_text(draw) -> str:
    lands = draw(st.integers(0, 3))
    parts = []
    for _ in range(lands):
        regions = draw(st.integers(1, 3))
        for _ in range(regions):
            boundaries = draw(st.integers(1, 3))
            for _ in range(boundaries):
                syms = draw(st.lists(_vertex, min_size=1, max_size=4))
                parts.append("".join(syms) + ".")
            parts.append("}")
        parts.append("]")
    return "".join(parts) + "!"


@settings(max_examples=200, deadline=None)
@given(position_text())
def test_round_trip_property(text):
    try:
        pos = parse(text)
    except ParseError:
        return  # occurrence limits can reject generated text; that is fine
    assert render(pos) == text
