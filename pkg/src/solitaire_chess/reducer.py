"""3-SAT to Solitaire Chess compiler.

Every variable gets a rook, a three-pawn column gate and two columns
(``i*M`` for true, ``i*M + 2`` for false).  Every clause gets three rows,
two rooks with row gates, and one pair of bishops per literal linking the
literal's row to the column of its variable.  A cleaning bishop on the
origin plus pawns on the anti-diagonal mop up whatever survives.

Two layouts are produced:

``Mode.PAPER``
    the textbook coordinates, verbatim.  They collide as soon as a clause
    mentions one variable twice, and at small ``m`` some placements share
    lines they should not.
``Mode.AMENDED``
    the variable band is lifted to ``6m^2 + 8m + 8i`` (above every clause
    row and bishop), and each literal gets a diagonal *lane*.  The lane is
    the textbook value ``(i + j) mod m`` whenever that keeps every literal
    bishop on its own lines, every literal's row and column private, and
    the b1 square inside the bounds the isolation argument relies on.
    Otherwise the first lane in ``0 .. 3m-1`` meeting those conditions is
    used, and failing that the first conflict-free one.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .engine import (
    BoardState,
    Color,
    Move,
    PieceKind,
    Position,
    Witness,
    square_color,
    validate_witness,
    apply_move,
)
from .formats import Assignment, CnfInstance, FormatError


class Mode(enum.Enum):
    PAPER = "paper"
    AMENDED = "amended"


class ReductionError(ValueError):
    pass


class PlacementCollision(ReductionError):
    def __init__(self, pos: Position, first: "Role", second: "Role"):
        self.pos, self.first, self.second = pos, first, second
        super().__init__(f"placement collision at {pos}: {first} and {second}")


class SynthesisError(ValueError):
    def __init__(self, message: str, index: Optional[int] = None, roles: tuple = ()):
        self.index = index
        self.roles = roles
        super().__init__(message)


# -- roles ---------------------------------------------------------------------


_ROLE_ARITY = {
    "VariableRook": 1,
    "VariableGatePawn": 2,
    "ClauseRook": 2,
    "ClauseGatePawn": 3,
    "LiteralBishopB1": 2,
    "LiteralBishopB2": 2,
    "CleaningBishop": 0,
    "CleaningPawnClause": 2,
    "CleaningPawnVariable": 2,
}

_ROLE_KIND = {
    "VariableRook": PieceKind.ROOK,
    "VariableGatePawn": PieceKind.PAWN,
    "ClauseRook": PieceKind.ROOK,
    "ClauseGatePawn": PieceKind.PAWN,
    "LiteralBishopB1": PieceKind.BISHOP,
    "LiteralBishopB2": PieceKind.BISHOP,
    "CleaningBishop": PieceKind.BISHOP,
    "CleaningPawnClause": PieceKind.PAWN,
    "CleaningPawnVariable": PieceKind.PAWN,
}


@dataclass(frozen=True, order=True)
class Role:
    """Gadget role of one placed piece, e.g. ``ClauseGatePawn(2,1,3)``.

    Index conventions: variables ``i`` and clauses ``j`` are 1-based; clause
    rook slot 1 starts on the clause's middle row, slot 2 on its top row;
    gate pawn ``idx`` 1..3 is the pawn the rook takes first when it keeps
    its line; cleaning pawn ``side`` 0 sits under the true column, 1 under
    the false column.
    """

    name: str
    args: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if _ROLE_ARITY.get(self.name) != len(self.args):
            raise ValueError(f"bad role {self.name}{self.args}")

    @property
    def kind(self) -> PieceKind:
        return _ROLE_KIND[self.name]

    @property
    def is_rook(self) -> bool:
        return self.name in ("VariableRook", "ClauseRook")

    @property
    def is_literal_bishop(self) -> bool:
        return self.name in ("LiteralBishopB1", "LiteralBishopB2")

    def __str__(self) -> str:
        return f"{self.name}({','.join(map(str, self.args))})"

    @classmethod
    def parse(cls, text: str) -> "Role":
        match = re.fullmatch(r"(\w+)\(([\d,\s]*)\)", text.strip())
        if not match:
            raise FormatError(f"malformed role {text!r}")
        args = tuple(int(a) for a in match.group(2).split(",") if a.strip())
        try:
            return cls(match.group(1), args)
        except ValueError as exc:
            raise FormatError(str(exc)) from None


def VariableRook(i):
    return Role("VariableRook", (i,))


def VariableGatePawn(i, idx):
    return Role("VariableGatePawn", (i, idx))


def ClauseRook(j, slot):
    return Role("ClauseRook", (j, slot))


def ClauseGatePawn(j, slot, idx):
    return Role("ClauseGatePawn", (j, slot, idx))


def LiteralBishopB1(j, k):
    return Role("LiteralBishopB1", (j, k))


def LiteralBishopB2(j, k):
    return Role("LiteralBishopB2", (j, k))


CLEANING_BISHOP = Role("CleaningBishop")


def CleaningPawnClause(j, k):
    return Role("CleaningPawnClause", (j, k))


def CleaningPawnVariable(i, side):
    return Role("CleaningPawnVariable", (i, side))


# -- coordinates -------------------------------------------------------------------


def column_spacing(m: int) -> int:
    return 8 * m * m


def clause_row(m: int, j: int, k: int) -> int:
    return 6 * m * j + 2 * k


def variable_band(mode: Mode, m: int, i: int) -> int:
    """Row of the variable rook (and the upper gate pawn)."""
    if mode is Mode.PAPER:
        return 5 * m * m + 8 * i
    return 6 * m * m + 8 * m + 8 * i


def textbook_lane(m: int, i: int, j: int) -> int:
    return (i + j) % m


def b1_position(m: int, i: int, j: int, k: int, lane: int) -> Position:
    big = column_spacing(m)
    return Position(i * big - 7 - 2 * lane + 2 * k, clause_row(m, j, k))


def b2_position(m: int, i: int, j: int, positive: bool, lane: int) -> Position:
    big = column_spacing(m)
    if positive:
        return Position(i * big, 6 * m * j + 7 + 2 * lane)
    return Position(i * big + 2, 6 * m * j + 9 + 2 * lane)


def b1_in_bounds(m: int, i: int, j: int, k: int, lane: int) -> bool:
    """(i-1)M < x-y < iM and iM+6mj-3m < x+y < iM+6mj+3m for the b1 square."""
    big = column_spacing(m)
    b1 = b1_position(m, i, j, k, lane)
    diff, total = b1.x - b1.y, b1.x + b1.y
    return (i - 1) * big < diff < i * big and i * big + 6 * m * j - 3 * m < total < i * big + 6 * m * j + 3 * m


def clause_rook_starts(m: int, n: int, j: int) -> tuple[Position, Position]:
    big = column_spacing(m)
    return (
        Position(big * n + 10 * j, 6 * m * j + 4),
        Position(big * n + 10 * j - 4, 6 * m * j + 6),
    )


# gate pawns relative to a clause rook, in the order taken when keeping the row
CLAUSE_GATE_OFFSETS = ((0, -2), (-2, -2), (-2, 0))


def piece_count(n: int, m_padded: int) -> int:
    """Pieces placed by :func:`reduce`: ``17m + 6n + 1``."""
    if m_padded < 2:
        raise ValueError("m_padded must be at least 2")
    return 17 * m_padded + 6 * n + 1


def stated_piece_count(n: int, m: int) -> int:
    """The count quoted alongside the construction, ``17m + 1 + 4n``.

    It leaves out the two cleaning pawns of every variable; kept so reports
    can show the gap against :func:`piece_count`.
    """
    return 17 * m + 1 + 4 * n


# -- layout ---------------------------------------------------------------------


@dataclass(frozen=True)
class LiteralSlot:
    j: int
    k: int
    var: int
    positive: bool
    lane: int
    b1: Position
    b2: Position


@dataclass
class ReductionLayout:
    mode: Mode
    n: int
    m_original: int
    m_padded: int
    clauses: tuple
    roles: dict[Role, Position] = field(default_factory=dict)
    literals: dict[tuple[int, int], LiteralSlot] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.m_padded

    @property
    def M(self) -> int:
        return column_spacing(self.m_padded)

    def true_column(self, i: int) -> int:
        return i * self.M

    def false_column(self, i: int) -> int:
        return i * self.M + 2

    def clause_rows(self, j: int) -> tuple[int, int, int]:
        return tuple(clause_row(self.m, j, k) for k in (1, 2, 3))

    def variable_band(self, i: int) -> int:
        return variable_band(self.mode, self.m, i)

    def role_at(self) -> dict[Position, Role]:
        return {pos: role for role, pos in self.roles.items()}

    def board(self) -> BoardState:
        return BoardState((pos, role.kind) for role, pos in self.roles.items())

    def gate_roles(self) -> set[Role]:
        return {
            r for r in self.roles
            if r.name in ("VariableRook", "VariableGatePawn", "ClauseRook", "ClauseGatePawn")
        }

    def to_json(self) -> str:
        doc = {
            "mode": self.mode.value,
            "n": self.n,
            "m_original": self.m_original,
            "m_padded": self.m_padded,
            "clauses": [[lit.to_int() for lit in c] for c in self.clauses],
            "pieces": [
                {"role": str(role), "kind": role.kind.letter, "x": pos.x, "y": pos.y}
                for role, pos in sorted(self.roles.items(), key=lambda rp: (rp[1].y, rp[1].x))
            ],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str | bytes) -> "ReductionLayout":
        try:
            doc = json.loads(text)
            cnf = CnfInstance.from_ints(int(doc["n"]), doc["clauses"])
            layout = cls(Mode(doc["mode"]), cnf.num_vars, int(doc["m_original"]),
                         int(doc["m_padded"]), cnf.clauses)
            for entry in doc["pieces"]:
                role = Role.parse(entry["role"])
                if entry.get("kind", role.kind.letter) != role.kind.letter:
                    raise FormatError(f"kind mismatch for {role}")
                layout.roles[role] = Position(int(entry["x"]), int(entry["y"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed layout: {exc}") from None
        for j, clause in enumerate(layout.clauses, 1):
            for k, lit in enumerate(clause, 1):
                b1 = layout.roles[LiteralBishopB1(j, k)]
                b2 = layout.roles[LiteralBishopB2(j, k)]
                lane = (layout.M * lit.var - 7 + 2 * k - b1.x) // 2
                layout.literals[(j, k)] = LiteralSlot(j, k, lit.var, lit.positive, lane, b1, b2)
        return layout


def pad_cnf(cnf: CnfInstance) -> CnfInstance:
    """Duplicate a lone clause so the construction has ``m >= 2``."""
    if cnf.num_clauses == 1:
        return CnfInstance(cnf.num_vars, cnf.clauses * 2)
    return cnf


class _Placer:
    def __init__(self, layout: ReductionLayout):
        self.layout = layout
        self.occupied: dict[Position, Role] = {}

    def put(self, role: Role, pos: Position) -> None:
        if pos in self.occupied:
            raise PlacementCollision(pos, self.occupied[pos], role)
        self.occupied[pos] = role
        self.layout.roles[role] = pos


def reduce(cnf: CnfInstance, mode: Mode = Mode.AMENDED) -> tuple[BoardState, ReductionLayout]:
    """Compile ``cnf`` into a Solitaire Chess board plus its role layout."""
    if cnf.num_clauses == 0:
        raise ReductionError("need at least one clause")
    padded = pad_cnf(cnf)
    n, m = padded.num_vars, padded.num_clauses
    if m < 2:
        raise ReductionError("m too small after padding")
    big = column_spacing(m)
    layout = ReductionLayout(mode, n, cnf.num_clauses, m, padded.clauses)
    placer = _Placer(layout)

    for i in range(1, n + 1):
        y = variable_band(mode, m, i)
        placer.put(VariableRook(i), Position(i * big + 2, y))
        placer.put(VariableGatePawn(i, 1), Position(i * big, y))
        placer.put(VariableGatePawn(i, 2), Position(i * big, y - 2))
        placer.put(VariableGatePawn(i, 3), Position(i * big + 2, y - 2))

    for j in range(1, m + 1):
        for slot, start in enumerate(clause_rook_starts(m, n, j), 1):
            placer.put(ClauseRook(j, slot), start)
            for idx, (dx, dy) in enumerate(CLAUSE_GATE_OFFSETS, 1):
                placer.put(ClauseGatePawn(j, slot, idx), Position(start.x + dx, start.y + dy))

    placer.put(CLEANING_BISHOP, Position(0, 0))
    for j in range(1, m + 1):
        for k in (1, 2, 3):
            y = clause_row(m, j, k)
            placer.put(CleaningPawnClause(j, k), Position(-y, y))
    for i in range(1, n + 1):
        for side, x in enumerate((i * big, i * big + 2)):
            placer.put(CleaningPawnVariable(i, side), Position(x, -x))

    slots = [(j, k, lit) for j, clause in enumerate(padded.clauses, 1) for k, lit in enumerate(clause, 1)]
    if mode is Mode.PAPER:
        lanes = [textbook_lane(m, lit.var, j) for j, k, lit in slots]
    else:
        lanes = _assign_lanes(m, slots, set(placer.occupied))

    for (j, k, lit), lane in zip(slots, lanes):
        b1 = b1_position(m, lit.var, j, k, lane)
        b2 = b2_position(m, lit.var, j, lit.positive, lane)
        placer.put(LiteralBishopB1(j, k), b1)
        placer.put(LiteralBishopB2(j, k), b2)
        layout.literals[(j, k)] = LiteralSlot(j, k, lit.var, lit.positive, lane, b1, b2)

    board = layout.board()
    assert len(board) == piece_count(n, m)
    return board, layout


def _assign_lanes(m: int, slots, taken: set[Position]) -> list[int]:
    """Pick a lane per literal so that distinct literal pairs never share a
    diagonal, a b1 column or a b2 row.  Backtracks, textbook lane first.

    A first pass only admits lanes whose b1 square stays inside the bounds
    the isolation argument uses; when that pass finds nothing within a small
    node budget, any conflict-free lane is allowed."""
    lanes: list[int] = []
    squares: set[Position] = set(taken)
    diag: set[int] = set()
    anti: set[int] = set()
    cols: set[int] = set()
    rows: set[int] = set()
    budget = [0]

    def options(idx: int, strict: bool) -> list[int]:
        j, k, lit = slots[idx]
        first = textbook_lane(m, lit.var, j)
        order = [first] + [lane for lane in range(3 * m) if lane != first]
        if strict:
            return [lane for lane in order if b1_in_bounds(m, lit.var, j, k, lane)]
        return order

    def fits(b1: Position, b2: Position) -> bool:
        if b1 in squares or b2 in squares or b1.x in cols or b2.y in rows:
            return False
        if b1.x - b1.y in diag:
            return False
        return not ({b1.x + b1.y, b2.x + b2.y} & anti) and b1.x + b1.y != b2.x + b2.y

    def place(idx: int, strict: bool) -> bool:
        if idx == len(slots):
            return True
        budget[0] -= 1
        if budget[0] < 0:
            return False
        j, k, lit = slots[idx]
        for lane in options(idx, strict):
            b1 = b1_position(m, lit.var, j, k, lane)
            b2 = b2_position(m, lit.var, j, lit.positive, lane)
            if not fits(b1, b2):
                continue
            added = (b1.x - b1.y, (b1.x + b1.y, b2.x + b2.y))
            squares.update((b1, b2))
            diag.add(added[0])
            anti.update(added[1])
            cols.add(b1.x)
            rows.add(b2.y)
            lanes.append(lane)
            if place(idx + 1, strict):
                return True
            lanes.pop()
            squares.difference_update((b1, b2))
            diag.discard(added[0])
            anti.difference_update(added[1])
            cols.discard(b1.x)
            rows.discard(b2.y)
        return False

    budget[0] = 20_000
    if place(0, True):
        return lanes
    budget[0] = 10**6
    if not place(0, False):
        raise ReductionError("no conflict-free lane assignment for the literal bishops")
    return lanes


# -- forward direction -------------------------------------------------------------


def _routing(layout: ReductionLayout, assignment: Assignment, merge: bool) -> dict[int, tuple[set[int], str]]:
    """Per clause: literals whose b1 heads for the variable column, and the
    rook plan ("23", "13", "12" rows covered, or "merge" into row 2)."""
    plan = {}
    for j, clause in enumerate(layout.clauses, 1):
        sat = [k for k, lit in enumerate(clause, 1) if lit.holds(assignment)]
        if merge and 1 in sat and 3 in sat:
            plan[j] = ({1, 3}, "merge")
            continue
        z = sat[0]
        plan[j] = ({z}, {1: "23", 2: "13", 3: "12"}[z])
    return plan


def synthesize_witness(
    cnf: CnfInstance,
    assignment: Assignment,
    layout: ReductionLayout,
    *,
    merge_clause_rooks: bool = False,
    validate: bool = True,
) -> Witness:
    """Solving move sequence for the reduced board, built from a model of ``cnf``.

    With ``merge_clause_rooks`` a clause whose first and third literals both
    hold sends both rooks to its middle row, where one takes the other.
    """
    missing = [v for v in range(1, layout.n + 1) if v not in assignment]
    if missing:
        raise SynthesisError(f"assignment leaves variables {missing} unset")
    if not cnf.satisfied_by(assignment):
        raise SynthesisError("assignment does not satisfy the formula")
    if pad_cnf(cnf).clauses != layout.clauses:
        raise SynthesisError("layout was built from a different formula")

    board = layout.board()
    occupied = set(board.squares())
    moves: list[Move] = []

    def go(src: Position, dst: Position) -> Position:
        moves.append(Move(src, dst))
        occupied.discard(src)
        return dst

    plan = _routing(layout, assignment, merge_clause_rooks)

    # literal bishops pair off
    for (j, k), slot in sorted(layout.literals.items()):
        via_variable, _ = plan[j]
        if k in via_variable:
            go(slot.b1, slot.b2)
        else:
            go(slot.b2, slot.b1)

    # variable rooks pass their gate and sweep their column down to the cleaning pawn
    for i in range(1, layout.n + 1):
        rook = layout.roles[VariableRook(i)]
        gate = [layout.roles[VariableGatePawn(i, idx)] for idx in (1, 2, 3)]
        order = reversed(gate) if assignment[i] else gate
        for pawn in order:
            rook = go(rook, pawn)
        rook = _sweep(go, occupied, rook, dx=0, dy=-1, stop=layout.roles[CleaningPawnVariable(i, 0 if assignment[i] else 1)])

    # clause rooks pass their gates, then sweep their rows leftwards
    for j in range(1, layout.m + 1):
        _, rows = plan[j]
        keep2 = rows in ("23", "13")
        keep1 = rows in ("23", "merge")
        r2 = _run_gate(go, layout, j, 2, keep2)
        r1 = _run_gate(go, layout, j, 1, keep1)
        finishers = [r2, r1]
        if rows == "merge":
            finishers = [go(r1, r2)]
        for rook in finishers:
            row_index = (rook.y - 6 * layout.m * j) // 2
            _sweep(go, occupied, rook, dx=-1, dy=0, stop=layout.roles[CleaningPawnClause(j, row_index)])

    # the cleaning bishop walks the anti-diagonal outwards, one side at a time
    bishop = layout.roles[CLEANING_BISHOP]
    upper = sorted((p for p in occupied if p.x < 0), key=lambda p: p.y)
    lower = sorted((p for p in occupied if p.x > 0), key=lambda p: p.x)
    for target in upper + lower:
        bishop = go(bishop, target)

    witness = Witness(tuple(moves))
    if validate:
        report = validate_witness(board, witness)
        if not report.ok:
            roles_at = layout.role_at()
            idx = report.failed_index
            roles = ()
            if idx is not None:
                m = moves[idx]
                roles = (roles_at.get(m.src), roles_at.get(m.dst))
            raise SynthesisError(f"synthesized witness fails: {report.reason} (move {idx})", idx, roles)
    return witness


def _run_gate(go, layout: ReductionLayout, j: int, slot: int, keep: bool) -> Position:
    rook = layout.roles[ClauseRook(j, slot)]
    pawns = [layout.roles[ClauseGatePawn(j, slot, idx)] for idx in (1, 2, 3)]
    for pawn in (pawns if keep else reversed(pawns)):
        rook = go(rook, pawn)
    return rook


def _sweep(go, occupied: set[Position], start: Position, dx: int, dy: int, stop: Position) -> Position:
    """Capture every occupied square from ``start`` towards ``stop`` in order."""
    def along(p: Position) -> int:
        return (p.x - start.x) * dx + (p.y - start.y) * dy

    on_line = [
        p for p in occupied
        if p != start and along(p) > 0 and along(p) <= along(stop)
        and (p.x - start.x) * dy == (p.y - start.y) * dx
    ]
    rook = start
    for target in sorted(on_line, key=along):
        rook = go(rook, target)
    return rook


# -- reverse direction -----------------------------------------------------------------


def extract_assignment(layout: ReductionLayout, w: Witness) -> Assignment:
    """Read a truth assignment off a solving witness.

    ``x_i`` is true iff the variable rook, on its first capture outside its
    own gate, stands on the true column ``i*M``.
    """
    board = layout.board()
    report = validate_witness(board, w)
    if not report.ok:
        raise SynthesisError(f"witness does not solve the board: {report.reason}", report.failed_index)
    where = {layout.roles[VariableRook(i)]: i for i in range(1, layout.n + 1)}
    gate_squares = {
        i: {layout.roles[VariableGatePawn(i, idx)] for idx in (1, 2, 3)} for i in range(1, layout.n + 1)
    }
    assignment = {i: False for i in range(1, layout.n + 1)}
    committed: set[int] = set()
    for m in w:
        victim = where.pop(m.dst, None)
        if victim is not None:
            committed.add(victim)
        mover = where.pop(m.src, None)
        if mover is None:
            continue
        if mover not in committed and m.dst not in gate_squares[mover]:
            assignment[mover] = m.src.x == layout.true_column(mover)
            committed.add(mover)
        where[m.dst] = mover
    return assignment


def layout_summary(layout: ReductionLayout) -> dict:
    board = layout.board()
    xs = [p.x for p in board.squares()]
    ys = [p.y for p in board.squares()]
    return {
        "mode": layout.mode.value,
        "n": layout.n,
        "m_original": layout.m_original,
        "m_padded": layout.m_padded,
        "pieces": len(board),
        "bounding_box": [min(xs), min(ys), max(xs), max(ys)],
        "textbook_lanes": all(
            s.lane == textbook_lane(layout.m, s.var, s.j) for s in layout.literals.values()
        ),
    }
