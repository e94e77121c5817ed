import sys
import random

import pytest

from solitaire_chess.engine import BoardState, Position, PieceKind

LETTERS = "KQRBNP"


def four_piece() -> BoardState:
    return BoardState({
        Position(0, 1): PieceKind.ROOK,
        Position(1, 1): PieceKind.PAWN,
        Position(1, 2): PieceKind.BISHOP,
        Position(3, 0): PieceKind.KNIGHT,
    })


def random_board(rng: random.Random, pieces: int, size: int = 8, letters: str = LETTERS) -> BoardState:
    squares = rng.sample([(x, y) for x in range(size) for y in range(size)], pieces)
    return BoardState({Position(x, y): PieceKind.from_letter(rng.choice(letters)) for x, y in squares})


def naive_solvable(state, legal_moves, apply_move) -> bool:
    # plain recursion, no memo: the reference the solver is compared against
    if len(state) == 1:
        return True
    return any(naive_solvable(apply_move(state, m), legal_moves, apply_move) for m in legal_moves(state))


@pytest.fixture
def four() -> BoardState:
    return four_piece()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
