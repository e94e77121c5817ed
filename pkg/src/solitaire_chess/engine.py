"""Capture-only chess on an unbounded integer board.

Every move captures, pieces have no colour, pawns capture towards +y and
are never promoted.  A position is solved when a single piece is left.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence


class Position(NamedTuple):
    x: int
    y: int

    def __str__(self) -> str:
        return f"({self.x},{self.y})"


def order_key(p: Position) -> tuple[int, int]:
    """Row-major sort key used for every deterministic ordering."""
    return (p.y, p.x)


class PieceKind(enum.Enum):
    KING = "K"
    QUEEN = "Q"
    ROOK = "R"
    BISHOP = "B"
    KNIGHT = "N"
    PAWN = "P"

    @property
    def letter(self) -> str:
        return self.value

    @classmethod
    def from_letter(cls, letter: str) -> "PieceKind":
        try:
            return cls(letter.upper())
        except ValueError:
            raise ValueError(f"unknown piece letter {letter!r}") from None


class Color(enum.Enum):
    WHITE = "white"
    BLACK = "black"


def square_color(p: Position) -> Color:
    # Python's % is Euclidean for a positive modulus, so negatives are fine
    return Color.WHITE if (p.x + p.y) % 2 == 0 else Color.BLACK


class IllegalMove(ValueError):
    """Raised when a move breaks the capture rules.  ``rule`` names the rule."""

    def __init__(self, rule: str, move: "Move | None" = None):
        self.rule = rule
        self.move = move
        super().__init__(rule if move is None else f"{rule}: {move}")


@dataclass(frozen=True)
class Bounds:
    min_x: int
    min_y: int
    max_x: int
    max_y: int

    def __post_init__(self) -> None:
        if self.min_x > self.max_x or self.min_y > self.max_y:
            raise ValueError(f"empty bounds {self}")

    def contains(self, p: Position) -> bool:
        return self.min_x <= p.x <= self.max_x and self.min_y <= p.y <= self.max_y


class BoardState:
    """Immutable map from occupied squares to piece kinds.

    Pieces of the same kind are interchangeable; equality and hashing only
    look at (square, kind) pairs and the optional bounds.
    """

    __slots__ = ("_pieces", "bounds", "_key")

    def __init__(
        self,
        pieces: Mapping[Position, PieceKind] | Iterable[tuple[Position, PieceKind]] = (),
        bounds: Optional[Bounds] = None,
    ):
        items = pieces.items() if isinstance(pieces, Mapping) else pieces
        board: dict[Position, PieceKind] = {}
        for pos, kind in items:
            pos = Position(int(pos[0]), int(pos[1]))
            if pos in board:
                raise ValueError(f"duplicate square {pos}")
            if not isinstance(kind, PieceKind):
                kind = PieceKind.from_letter(kind)
            if bounds is not None and not bounds.contains(pos):
                raise ValueError(f"piece at {pos} outside bounds {bounds}")
            board[pos] = kind
        self._pieces = board
        self.bounds = bounds
        self._key = None

    @classmethod
    def _trusted(cls, pieces: dict[Position, PieceKind], bounds: Optional[Bounds]) -> "BoardState":
        obj = cls.__new__(cls)
        obj._pieces = pieces
        obj.bounds = bounds
        obj._key = None
        return obj

    def __len__(self) -> int:
        return len(self._pieces)

    def __contains__(self, pos: object) -> bool:
        return pos in self._pieces

    def __getitem__(self, pos: Position) -> PieceKind:
        return self._pieces[pos]

    def get(self, pos: Position) -> Optional[PieceKind]:
        return self._pieces.get(pos)

    def squares(self) -> list[Position]:
        return sorted(self._pieces, key=order_key)

    def items(self) -> list[tuple[Position, PieceKind]]:
        return [(p, self._pieces[p]) for p in self.squares()]

    def as_dict(self) -> dict[Position, PieceKind]:
        return dict(self._pieces)

    def translated(self, dx: int, dy: int) -> "BoardState":
        bounds = None
        if self.bounds is not None:
            b = self.bounds
            bounds = Bounds(b.min_x + dx, b.min_y + dy, b.max_x + dx, b.max_y + dy)
        return BoardState._trusted(
            {Position(p.x + dx, p.y + dy): k for p, k in self._pieces.items()}, bounds
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoardState):
            return NotImplemented
        return self._pieces == other._pieces and self.bounds == other.bounds

    def __hash__(self) -> int:
        return hash((canonical_key(self), self.bounds))

    def __repr__(self) -> str:
        body = ", ".join(f"{k.letter}{p}" for p, k in self.items())
        return f"BoardState({body})"


@dataclass(frozen=True)
class Move:
    src: Position
    dst: Position

    def __post_init__(self) -> None:
        object.__setattr__(self, "src", Position(*self.src))
        object.__setattr__(self, "dst", Position(*self.dst))

    def __str__(self) -> str:
        return f"{self.src}->{self.dst}"


@dataclass(frozen=True)
class Witness:
    moves: tuple[Move, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "moves", tuple(self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __getitem__(self, i):
        return self.moves[i]


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def between(src: Position, dst: Position) -> list[Position]:
    """Squares strictly between two squares on a shared line, else ``[]``."""
    dx, dy = dst.x - src.x, dst.y - src.y
    if not (dx == 0 or dy == 0 or abs(dx) == abs(dy)):
        return []
    sx, sy = _sign(dx), _sign(dy)
    steps = max(abs(dx), abs(dy))
    return [Position(src.x + sx * s, src.y + sy * s) for s in range(1, steps)]


def geometric_reach(kind: PieceKind, src: Position, dst: Position) -> bool:
    """Whether ``kind`` on ``src`` could capture on ``dst`` on an empty board."""
    dx, dy = dst.x - src.x, dst.y - src.y
    adx, ady = abs(dx), abs(dy)
    if adx == 0 and ady == 0:
        return False
    if kind is PieceKind.ROOK:
        return dx == 0 or dy == 0
    if kind is PieceKind.BISHOP:
        return adx == ady
    if kind is PieceKind.QUEEN:
        return dx == 0 or dy == 0 or adx == ady
    if kind is PieceKind.KNIGHT:
        return (adx, ady) in ((1, 2), (2, 1))
    if kind is PieceKind.KING:
        return max(adx, ady) == 1
    if kind is PieceKind.PAWN:
        return dy == 1 and adx == 1
    raise AssertionError(kind)


SLIDERS = frozenset({PieceKind.ROOK, PieceKind.BISHOP, PieceKind.QUEEN})


def attacks(state: BoardState, src: Position, dst: Position) -> bool:
    """Capture rule for the piece on ``src`` against square ``dst``.

    Whether ``dst`` is occupied is not checked here.
    """
    kind = state.get(Position(*src))
    if kind is None:
        raise IllegalMove("no piece at source")
    src, dst = Position(*src), Position(*dst)
    if not geometric_reach(kind, src, dst):
        return False
    if kind in SLIDERS:
        return not any(sq in state for sq in between(src, dst))
    return True


def _violation(state: BoardState, m: Move) -> Optional[str]:
    if m.src == m.dst:
        return "source equals target"
    kind = state.get(m.src)
    if kind is None:
        return "no piece at source"
    if m.dst not in state:
        return "empty target"
    if not geometric_reach(kind, m.src, m.dst):
        return f"{kind.name.lower()} cannot reach target"
    if kind in SLIDERS and any(sq in state for sq in between(m.src, m.dst)):
        return "path blocked"
    return None


def is_legal(state: BoardState, m: Move) -> bool:
    return _violation(state, m) is None


def legal_moves(state: BoardState) -> list[Move]:
    """All captures, ordered by source then target in row-major order."""
    squares = state.squares()
    moves = []
    for a in squares:
        for b in squares:
            if a != b and attacks(state, a, b):
                moves.append(Move(a, b))
    return moves


def apply_move(state: BoardState, m: Move) -> BoardState:
    problem = _violation(state, m)
    if problem is not None:
        raise IllegalMove(problem, m)
    pieces = dict(state._pieces)
    pieces[m.dst] = pieces.pop(m.src)
    return BoardState._trusted(pieces, state.bounds)


def is_solved(state: BoardState) -> bool:
    return len(state) == 1


def canonical_key(state: BoardState) -> tuple[tuple[int, int, str], ...]:
    """Order-insensitive hashable key over (square, kind) pairs."""
    if state._key is None:
        state._key = tuple(sorted((p.x, p.y, k.value) for p, k in state._pieces.items()))
    return state._key


@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    failed_index: Optional[int] = None
    reason: Optional[str] = None
    final_pieces: int = 0

    def __bool__(self) -> bool:
        return self.ok


def validate_witness(initial: BoardState, w: Witness | Sequence[Move]) -> WitnessReport:
    """Replay ``w``; report the first illegal move or an unsolved final state."""
    state = initial
    for idx, m in enumerate(w):
        problem = _violation(state, m)
        if problem is not None:
            return WitnessReport(False, idx, problem, len(state))
        state = apply_move(state, m)
    if not is_solved(state):
        return WitnessReport(False, None, f"{len(state)} pieces remain", len(state))
    return WitnessReport(True, final_pieces=1)


def replay(initial: BoardState, w: Witness | Sequence[Move]) -> list[BoardState]:
    """States visited by ``w`` (inclusive of both ends); raises on illegal moves."""
    states = [initial]
    for m in w:
        states.append(apply_move(states[-1], m))
    return states
