import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import four_piece
from solitaire_chess.engine import BoardState, Bounds, Move, PieceKind, Position, Witness
from solitaire_chess.formats import (
    CnfInstance, FormatError, Lit, bounding_box, emit_dimacs, emit_puzzle, normalize,
    parse_assignment, parse_dimacs, parse_puzzle, witness_from_json, witness_to_json,
)
from solitaire_chess.reducer import Mode, reduce

FOUR_TEXT = "bounds 0 0 3 3\nR 0 1\nP 1 1\nB 1 2\nN 3 0\n"


def test_parse_compact_four_piece():
    s = parse_puzzle(FOUR_TEXT)
    assert s.as_dict() == four_piece().as_dict()
    assert s.bounds == Bounds(0, 0, 3, 3)


def test_emit_compact_sorted_rows():
    s = parse_puzzle(FOUR_TEXT)
    assert emit_puzzle(s) == "bounds 0 0 3 3\nN 3 0\nR 0 1\nP 1 1\nB 1 2\n"


def test_parse_errors():
    with pytest.raises(FormatError, match="duplicate"):
        parse_puzzle("R 0 0\nR 0 0")
    with pytest.raises(FormatError, match="unknown piece"):
        parse_puzzle("X 0 0")
    with pytest.raises(FormatError, match="malformed number"):
        parse_puzzle("R 0 zero")
    with pytest.raises(FormatError, match="outside bounds"):
        parse_puzzle("bounds 0 0 3 3\nR 9 0")
    with pytest.raises(FormatError):
        parse_puzzle('{"pieces": [{"kind": "R", "x": 1.5, "y": 0}]}')
    with pytest.raises(FormatError):
        parse_puzzle("R 0 0", fmt="yaml")


def test_parse_json():
    s = parse_puzzle('{"pieces":[{"kind":"K","x":2,"y":2}]}')
    assert len(s) == 1 and s[Position(2, 2)] is PieceKind.KING
    assert s.bounds is None


def test_comments_and_blank_lines():
    s = parse_puzzle("# four pieces\n\nR 0 1  # rook\nP 1 1\n")
    assert len(s) == 2


def test_emit_empty_instance():
    with pytest.raises(FormatError, match="empty instance"):
        emit_puzzle(BoardState())


def test_negative_coordinates_verbatim():
    s = BoardState({(-3, -4): PieceKind.ROOK, (2, -1): PieceKind.PAWN})
    assert "R -3 -4" in emit_puzzle(s)
    assert parse_puzzle(emit_puzzle(s, "json")) == s


def test_normalize():
    s = BoardState({(-2, 5): PieceKind.ROOK, (0, 7): PieceKind.PAWN})
    assert normalize(s) == BoardState({(0, 0): PieceKind.ROOK, (2, 2): PieceKind.PAWN})
    fig = parse_puzzle(FOUR_TEXT)
    assert normalize(fig) == fig
    board, _ = reduce(CnfInstance.from_ints(1, [[1, 1, 1]]), Mode.AMENDED)
    box = bounding_box(normalize(board))
    assert box.min_x == 0 and box.min_y == 0
    assert len(normalize(board)) == len(board)


# -- round trips --------------------------------------------------------------

coords = st.integers(-50, 50)


@st.composite
def puzzles(draw):
    squares = draw(st.lists(st.tuples(coords, coords), min_size=1, max_size=12, unique=True))
    s = BoardState({sq: draw(st.sampled_from(list(PieceKind))) for sq in squares})
    if draw(st.booleans()):
        b = bounding_box(s)
        pad = draw(st.integers(0, 3))
        s = BoardState(s.as_dict(), Bounds(b.min_x - pad, b.min_y, b.max_x, b.max_y + pad))
    return s


@given(puzzles(), st.sampled_from(["compact", "json"]))
@settings(max_examples=150, deadline=None)
def test_puzzle_round_trip(s, fmt):
    again = parse_puzzle(emit_puzzle(s, fmt))
    assert again == s and again.bounds == s.bounds


@given(st.lists(st.tuples(st.tuples(coords, coords), st.tuples(coords, coords)), max_size=10))
def test_witness_round_trip(pairs):
    w = Witness(tuple(Move(a, b) for a, b in pairs if a != b))
    assert witness_from_json(witness_to_json(w)) == w


def test_witness_json_shape():
    w = Witness((Move((3, 0), (1, 1)),))
    assert json.loads(witness_to_json(w)) == {"moves": [{"from": [3, 0], "to": [1, 1]}]}
    with pytest.raises(FormatError):
        witness_from_json('{"moves": [{"from": [1]}]}')


# -- DIMACS -------------------------------------------------------------------

def test_parse_dimacs_examples():
    cnf = parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0")
    assert cnf.num_vars == 1
    assert cnf.to_ints() == [[1, 1, 1], [-1, -1, -1]]
    with pytest.raises(FormatError, match="2 literals"):
        parse_dimacs("p cnf 2 1\n1 -2 0")
    assert parse_dimacs(b"p cnf 2 1\n1 -2 1 0").clauses[0] == (Lit(1, True), Lit(2, False), Lit(1, True))


def test_parse_dimacs_rejections():
    with pytest.raises(FormatError, match="header"):
        parse_dimacs("1 2 3 0")
    with pytest.raises(FormatError, match="out of range"):
        parse_dimacs("p cnf 2 1\n1 2 3 0")
    with pytest.raises(FormatError, match="announces"):
        parse_dimacs("p cnf 3 2\n1 2 3 0")
    with pytest.raises(FormatError, match="0-terminated"):
        parse_dimacs("p cnf 3 1\n1 2 3")


def test_dimacs_comments_and_line_wrapping():
    cnf = parse_dimacs("c hello\np cnf 3 2\n1 2\n3 0 -1 -2 -3\n0\n")
    assert cnf.to_ints() == [[1, 2, 3], [-1, -2, -3]]


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])),
                      min_size=3, max_size=3), min_size=1, max_size=8))))
def test_dimacs_round_trip(case):
    n, clauses = case
    cnf = CnfInstance.from_ints(n, clauses)
    assert parse_dimacs(emit_dimacs(cnf)) == cnf


def test_cnf_instance_validation():
    with pytest.raises(ValueError):
        CnfInstance.from_ints(2, [[1, 2]])
    with pytest.raises(ValueError):
        CnfInstance.from_ints(2, [[1, 2, 3]])


def test_parse_assignment():
    assert parse_assignment("1,-2", 3) == {1: True, 2: False, 3: False}
    assert parse_assignment("-1 2 3", 3) == {1: False, 2: True, 3: True}
    for bad in ("1,x", "0", "4"):
        with pytest.raises(FormatError):
            parse_assignment(bad, 3)
