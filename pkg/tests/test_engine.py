import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import four_piece, random_board
from solitaire_chess.engine import (
    BoardState, Bounds, Color, IllegalMove, Move, PieceKind, Position, Witness,
    apply_move, attacks, canonical_key, is_legal, is_solved, legal_moves,
    replay, square_color, validate_witness,
)

R, B, N, P, K, Q = (PieceKind.ROOK, PieceKind.BISHOP, PieceKind.KNIGHT,
                    PieceKind.PAWN, PieceKind.KING, PieceKind.QUEEN)

FOUR_WITNESS = [Move((3, 0), (1, 1)), Move((0, 1), (1, 1)), Move((1, 1), (1, 2))]


def ref_attacks(board: dict, a, b) -> bool:
    """Independent capture rule: walks ray by ray instead of listing between-squares."""
    kind = board[a]
    dx, dy = b[0] - a[0], b[1] - a[1]
    if kind == N:
        return sorted((abs(dx), abs(dy))) == [1, 2]
    if kind == K:
        return (dx, dy) != (0, 0) and abs(dx) <= 1 and abs(dy) <= 1
    if kind == P:
        return dy == 1 and dx in (-1, 1)
    rays = {R: [(1, 0), (-1, 0), (0, 1), (0, -1)], B: [(1, 1), (1, -1), (-1, 1), (-1, -1)]}
    dirs = rays[R] + rays[B] if kind == Q else rays[kind]
    for sx, sy in dirs:
        x, y = a
        for _ in range(16):
            x, y = x + sx, y + sy
            if (x, y) == tuple(b):
                return True
            if (x, y) in board:
                break
    return False


# -- colours -------------------------------------------------------------

@pytest.mark.parametrize("p,color", [
    ((0, 0), Color.WHITE),   # parity definition
    ((0, 1), Color.BLACK),
    ((-3, 2), Color.BLACK),
    ((-3, -3), Color.WHITE),
])
def test_square_color(p, color):
    assert square_color(Position(*p)) is color


# -- attacks ---------------------------------------------------------------

def test_attacks_four_piece(four):
    assert attacks(four, (0, 1), (1, 1))
    assert attacks(four, (3, 0), (1, 1))
    assert not attacks(four, (1, 1), (0, 0))   # pawns never go backwards


def test_attacks_empty_source(four):
    with pytest.raises(IllegalMove, match="no piece at source"):
        attacks(four, (2, 2), (1, 1))


def test_attacks_ignores_target_occupancy():
    s = BoardState({(0, 0): R})
    assert attacks(s, (0, 0), (0, 5))


def test_pawn_forward_is_plus_y():
    s = BoardState({(2, 2): P, (1, 3): R, (3, 3): R, (1, 1): R, (2, 3): R})
    assert [m.dst for m in legal_moves(s) if m.src == (2, 2)] == [(1, 3), (3, 3)]


# -- legal_moves -----------------------------------------------------------

def test_legal_moves_four_piece(four):
    # exhaustive pair enumeration through ref_attacks; the board has 4 captures
    expected = [((3, 0), (1, 1)), ((0, 1), (1, 1)), ((1, 2), (3, 0)), ((1, 2), (0, 1))]
    assert [(m.src, m.dst) for m in legal_moves(four)] == expected
    assert Move((3, 0), (1, 1)) in legal_moves(four)


def test_legal_moves_trivial():
    assert legal_moves(BoardState({(4, 4): K})) == []
    assert legal_moves(BoardState({(0, 0): R, (5, 5): R})) == []


def test_legal_moves_order_is_row_major():
    rng = random.Random(3)
    for _ in range(50):
        s = random_board(rng, 6)
        keys = [((m.src.y, m.src.x), (m.dst.y, m.dst.x)) for m in legal_moves(s)]
        assert keys == sorted(keys)


def test_legal_moves_matches_reference_on_random_boards():
    rng = random.Random(11)
    for _ in range(300):
        s = random_board(rng, rng.randint(2, 8))
        d = {tuple(p): k for p, k in s.items()}
        expected = {(a, b) for a in d for b in d if a != b and ref_attacks(d, a, b)}
        assert {(tuple(m.src), tuple(m.dst)) for m in legal_moves(s)} == expected


# -- apply_move ------------------------------------------------------------

def test_apply_move_four_piece(four):
    after = apply_move(four, Move((3, 0), (1, 1)))
    assert after == BoardState({(0, 1): R, (1, 2): B, (1, 1): N})


def test_apply_move_errors(four):
    with pytest.raises(IllegalMove) as e:
        apply_move(four, Move((0, 1), (2, 1)))
    assert e.value.rule == "empty target"
    row = BoardState({(0, 0): R, (1, 0): P, (2, 0): P})
    with pytest.raises(IllegalMove) as e:
        apply_move(row, Move((0, 0), (2, 0)))
    assert e.value.rule == "path blocked"
    with pytest.raises(IllegalMove) as e:
        apply_move(four, Move((1, 1), (0, 1)))
    assert e.value.rule == "pawn cannot reach target"


def test_pawn_is_never_promoted():
    s = BoardState({(0, 0): P, (1, 1): Q})
    assert apply_move(s, Move((0, 0), (1, 1))) == BoardState({(1, 1): P})


def test_is_solved():
    assert is_solved(BoardState({(0, 0): K}))
    assert not is_solved(BoardState({(0, 0): K, (1, 1): K}))
    assert not is_solved(BoardState())


# -- canonical keys --------------------------------------------------------

def test_canonical_key():
    a = BoardState([((0, 0), R), ((1, 2), P)])
    b = BoardState([((1, 2), P), ((0, 0), R)])
    assert canonical_key(a) == canonical_key(b)
    assert canonical_key(a) != canonical_key(BoardState([((0, 0), R), ((2, 2), P)]))
    assert canonical_key(a) != canonical_key(a.translated(1, 0))


def test_board_rejects_duplicates_and_out_of_bounds():
    with pytest.raises(ValueError, match="duplicate"):
        BoardState([((0, 0), R), ((0, 0), R)])
    with pytest.raises(ValueError, match="outside bounds"):
        BoardState({(5, 0): R}, bounds=Bounds(0, 0, 3, 3))


# -- witnesses -------------------------------------------------------------

def test_validate_witness_four_piece(four):
    assert validate_witness(four, FOUR_WITNESS).ok
    assert validate_witness(four, Witness(FOUR_WITNESS)).ok


def test_validate_witness_swapped(four):
    # playback: the rook takes the pawn, the knight takes the rook, and the
    # third move then asks a knight on (1,1) to capture on (1,2)
    swapped = [FOUR_WITNESS[1], FOUR_WITNESS[0], FOUR_WITNESS[2]]
    rep = validate_witness(four, swapped)
    assert not rep.ok
    assert rep.failed_index == 2
    assert rep.reason == "knight cannot reach target"


def test_validate_witness_edge_cases(four):
    assert validate_witness(BoardState({(0, 0): K}), []).ok
    short = validate_witness(four, FOUR_WITNESS[:2])
    assert not short.ok and short.failed_index is None and short.final_pieces == 2


def test_replay_lengths(four):
    states = replay(four, FOUR_WITNESS)
    assert [len(s) for s in states] == [4, 3, 2, 1]


# -- properties ------------------------------------------------------------

coords = st.integers(-6, 6)
kinds = st.sampled_from(list(PieceKind))


@st.composite
def boards(draw, min_size=2, max_size=8):
    squares = draw(st.lists(st.tuples(coords, coords), min_size=min_size, max_size=max_size, unique=True))
    return BoardState({sq: draw(kinds) for sq in squares})


@st.composite
def play_sequences(draw):
    s = draw(boards())
    states = [s]
    moves = []
    for _ in range(draw(st.integers(0, 7))):
        options = legal_moves(states[-1])
        if not options:
            break
        m = draw(st.sampled_from(options))
        moves.append(m)
        states.append(apply_move(states[-1], m))
    return states, moves


@given(play_sequences())
@settings(max_examples=150, deadline=None)
def test_move_invariants(seq):
    states, moves = seq
    initial = set(states[0].squares())
    for i, (before, m) in enumerate(zip(states, moves)):
        after = states[i + 1]
        kind = before[m.src]
        assert len(after) == len(before) - 1
        assert after[m.dst] is kind and m.src not in after
        assert set(after.squares()) <= initial
        if kind is PieceKind.BISHOP:
            assert square_color(m.src) == square_color(m.dst)
        if kind is PieceKind.ROOK:
            assert (m.src.x == m.dst.x) != (m.src.y == m.dst.y)
        if kind is PieceKind.PAWN:
            assert m.dst.y == m.src.y + 1
    assert len(states[-1]) == len(states[0]) - len(moves)


@given(boards(), coords, coords)
@settings(max_examples=150, deadline=None)
def test_translation_invariance(s, dx, dy):
    moved = s.translated(dx, dy)
    expected = [Move((m.src.x + dx, m.src.y + dy), (m.dst.x + dx, m.dst.y + dy)) for m in legal_moves(s)]
    assert legal_moves(moved) == expected


@given(boards(max_size=8))
@settings(max_examples=200, deadline=None)
def test_legal_moves_is_filter_of_attacks(s):
    pairs = [(a, b) for a in s.squares() for b in s.squares() if a != b]
    assert legal_moves(s) == [Move(a, b) for a, b in pairs if attacks(s, a, b)]
    assert all(is_legal(s, m) for m in legal_moves(s))
