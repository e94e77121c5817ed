"""Mechanical checks of the reduction's claims on concrete instances.

Each check returns a :class:`CheckReport`.  A failing report always names
a concrete counterexample (squares, roles, moves) and embeds the board it
was computed on, so ``recheck`` can replay it.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from .engine import (
    BoardState,
    Color,
    Move,
    Position,
    Witness,
    apply_move,
    is_legal,
    legal_moves,
    square_color,
    validate_witness,
)
from .formats import Assignment, CnfInstance, emit_puzzle, parse_puzzle
from .reducer import (
    Mode,
    ReductionError,
    ReductionLayout,
    Role,
    SynthesisError,
    column_spacing,
    extract_assignment,
    reduce,
    synthesize_witness,
)
from .solver import ResourceExceeded, Solvable, SolverConfig, Unsolvable, solve

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class CheckReport:
    name: str
    status: str
    counterexample: Any = None
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {"check": self.name, "status": self.status,
                "counterexample": self.counterexample, "stats": self.stats}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, default=str) + "\n"


def _sq(p: Position) -> list[int]:
    return [p.x, p.y]


def _finish(name: str, problems: list, stats: dict, board: BoardState) -> CheckReport:
    if problems:
        return CheckReport(name, FAIL, {"problems": problems, "board": emit_puzzle(board)}, stats)
    return CheckReport(name, PASS, None, stats)


# -- SAT oracle -----------------------------------------------------------------


MAX_BRUTE_FORCE_VARS = 24


def brute_force_sat(cnf: CnfInstance) -> Optional[Assignment]:
    """First model in binary counting order (x1 is the low bit, 1 = true)."""
    n = cnf.num_vars
    if n > MAX_BRUTE_FORCE_VARS:
        raise ValueError(f"{n} variables is too many for enumeration (max {MAX_BRUTE_FORCE_VARS})")
    # per clause: bits that must be set / cleared for some literal to hold
    clauses = [[(lit.var - 1, lit.positive) for lit in c] for c in cnf.clauses]
    for code in range(1 << n):
        if all(any(((code >> v) & 1) == pos for v, pos in c) for c in clauses):
            return {v + 1: bool((code >> v) & 1) for v in range(n)}
    return None


# -- layout checks -----------------------------------------------------------------


def _roles_on(board: BoardState, layout: ReductionLayout) -> dict[Position, Optional[Role]]:
    at = layout.role_at()
    return {p: at.get(p) for p in board.squares()}


def check_color_separation(board: BoardState, layout: ReductionLayout) -> CheckReport:
    """Literal bishops on black squares, every other piece on white."""
    problems = []
    for pos, role in _roles_on(board, layout).items():
        want = Color.BLACK if role is not None and role.is_literal_bishop else Color.WHITE
        got = square_color(pos)
        if got is not want:
            problems.append({"square": _sq(pos), "role": str(role), "color": got.value, "expected": want.value})
    return _finish("color_separation", problems, {"pieces": len(board)}, board)


def b1_bound_violations(layout: ReductionLayout) -> list[dict]:
    """b1 squares violating (i-1)M < x-y < iM or iM+6mj-3m < x+y < iM+6mj+3m."""
    m, big = layout.m, layout.M
    bad = []
    for (j, k), slot in sorted(layout.literals.items()):
        i = slot.var
        b1 = layout.roles.get(Role("LiteralBishopB1", (j, k)), slot.b1)
        diff, total = b1.x - b1.y, b1.x + b1.y
        if not (i - 1) * big < diff < i * big:
            bad.append({"literal": [j, k], "variable": i, "square": _sq(b1), "family": "x-y",
                        "value": diff, "range": [(i - 1) * big, i * big]})
        low, high = i * big + 6 * m * j - 3 * m, i * big + 6 * m * j + 3 * m
        if not low < total < high:
            bad.append({"literal": [j, k], "variable": i, "square": _sq(b1), "family": "x+y",
                        "value": total, "range": [low, high]})
    return bad


def check_bishop_isolation(board: BoardState, layout: ReductionLayout) -> CheckReport:
    """Every literal bishop's only capture is onto its partner's square.

    The two inequality families bounding the b1 squares are re-checked too
    and land in ``stats``; they do not decide the status."""
    at = _roles_on(board, layout)
    moves_from: dict[Position, list[Move]] = {}
    for mv in legal_moves(board):
        moves_from.setdefault(mv.src, []).append(mv)
    isolation = []
    bishops = 0
    for (j, k), slot in sorted(layout.literals.items()):
        b1 = layout.roles[Role("LiteralBishopB1", (j, k))]
        b2 = layout.roles[Role("LiteralBishopB2", (j, k))]
        for own, partner in ((b1, b2), (b2, b1)):
            if own not in board:
                continue
            bishops += 1
            got = moves_from.get(own, [])
            if [mv.dst for mv in got] != [partner]:
                isolation.append({
                    "role": str(at.get(own)), "square": _sq(own), "partner": _sq(partner),
                    "captures": [{"to": _sq(mv.dst), "role": str(at.get(mv.dst))} for mv in got],
                })
    inequalities = b1_bound_violations(layout)
    colour = check_color_separation(board, layout)
    stats = {
        "literal_bishops": bishops,
        "isolation": PASS if not isolation else FAIL,
        "inequalities": PASS if not inequalities else FAIL,
        "color_separation": colour.status,
        "inequality_violations": inequalities,
    }
    # the verdict is isolation itself; the inequalities are a sufficient
    # condition and are reported alongside, like the colour sub-check
    problems = [dict(p, kind="isolation") for p in isolation]
    return _finish("bishop_isolation", problems, stats, board)


def _owner(role: Optional[Role]) -> Optional[tuple[str, int]]:
    """('clause', j) or ('variable', i) for the gadget a role belongs to."""
    if role is None or role.name == "CleaningBishop":
        return None
    if role.name in ("VariableRook", "VariableGatePawn", "CleaningPawnVariable"):
        return ("variable", role.args[0])
    return ("clause", role.args[0])


def check_rook_confinement(board: BoardState, layout: ReductionLayout) -> CheckReport:
    """Rooks can only change line inside their gates.

    Instantiated on the initial board: each clause row and variable column
    carries only its own gadget's pieces, gate rows/columns likewise, and
    every non-gate piece on a clause row (variable column) is alone in its
    column (row).
    """
    at = _roles_on(board, layout)
    by_row: dict[int, list[Position]] = {}
    by_col: dict[int, list[Position]] = {}
    for p in at:
        by_row.setdefault(p.y, []).append(p)
        by_col.setdefault(p.x, []).append(p)
    gate = layout.gate_roles()
    problems = []

    def foreign(line: str, coord: int, squares, owner, allowed=None):
        for p in squares:
            role = at[p]
            if _owner(role) != owner or (allowed is not None and role not in allowed):
                problems.append({"line": line, "at": coord, "owner": list(owner),
                                 "square": _sq(p), "role": str(role)})

    for j in range(1, layout.m + 1):
        for y in layout.clause_rows(j):
            foreign("clause_row", y, by_row.get(y, []), ("clause", j))
            for p in by_row.get(y, []):
                if at[p] in gate:
                    continue
                for q in by_col.get(p.x, []):
                    if q != p:
                        problems.append({"line": "column_of_row_piece", "at": p.x, "square": _sq(p),
                                         "role": str(at[p]), "shared_with": _sq(q), "other_role": str(at[q])})
        gate_cols = {layout.roles[Role("ClauseGatePawn", (j, s, idx))].x for s in (1, 2) for idx in (1, 2, 3)}
        gate_cols |= {layout.roles[Role("ClauseRook", (j, s))].x for s in (1, 2)}
        allowed = {r for r in gate if _owner(r) == ("clause", j)}
        for x in sorted(gate_cols):
            foreign("clause_gate_column", x, by_col.get(x, []), ("clause", j), allowed)

    for i in range(1, layout.n + 1):
        for x in (layout.true_column(i), layout.false_column(i)):
            for p in by_col.get(x, []):
                role = at[p]
                ok = _owner(role) == ("variable", i)
                if role is not None and role.is_literal_bishop:
                    ok = layout.literals[tuple(role.args)].var == i
                if not ok:
                    problems.append({"line": "variable_column", "at": x, "owner": ["variable", i],
                                     "square": _sq(p), "role": str(role)})
                if role in gate:
                    continue
                for q in by_row.get(p.y, []):
                    if q != p:
                        problems.append({"line": "row_of_column_piece", "at": p.y, "square": _sq(p),
                                         "role": str(role), "shared_with": _sq(q), "other_role": str(at[q])})
        band = layout.variable_band(i)
        allowed = {r for r in gate if _owner(r) == ("variable", i)}
        for y in (band, band - 2):
            foreign("variable_gate_row", y, by_row.get(y, []), ("variable", i), allowed)
    return _finish("rook_confinement", problems, {"pieces": len(board)}, board)


def check_rook_capture_requirement(board: BoardState, layout: ReductionLayout, w: Witness) -> CheckReport:
    """Along ``w``, some rook captures on the b1 or b2 square of every literal."""
    identity: dict[Position, Role] = dict(layout.role_at())
    state = board
    touched: set[tuple[int, int]] = set()
    squares = {}
    for (j, k) in layout.literals:
        squares[layout.roles[Role("LiteralBishopB1", (j, k))]] = (j, k)
        squares[layout.roles[Role("LiteralBishopB2", (j, k))]] = (j, k)
    for idx, mv in enumerate(w):
        if not is_legal(state, mv):
            raise SynthesisError(f"witness move {idx} is illegal: {mv}", idx)
        state = apply_move(state, mv)
        mover = identity.pop(mv.src, None)
        identity[mv.dst] = mover
        if mover is not None and mover.is_rook and mv.dst in squares:
            touched.add(squares[mv.dst])
    missing = [{"literal": [j, k]} for (j, k) in sorted(layout.literals) if (j, k) not in touched]
    stats = {"moves": len(w), "pairs": len(layout.literals), "pairs_hit": len(touched)}
    return _finish("rook_capture_requirement", missing, stats, board)


# -- round trips -----------------------------------------------------------------------


def forward_check(cnf: CnfInstance, mode: Mode = Mode.AMENDED, **synth) -> CheckReport:
    """Solver-free direction: a model yields a witness that solves the board."""
    t0 = time.monotonic()
    model = brute_force_sat(cnf)
    if model is None:
        return CheckReport("forward", INCONCLUSIVE, None, {"sat": False})
    try:
        board, layout = reduce(cnf, mode)
    except ReductionError as exc:
        return CheckReport("forward", FAIL, {"reduce": str(exc)}, {"sat": True})
    try:
        w = synthesize_witness(cnf, model, layout, **synth)
    except SynthesisError as exc:
        return CheckReport("forward", FAIL, {"synthesis": str(exc), "index": exc.index,
                                             "roles": [str(r) for r in exc.roles]}, {"sat": True})
    report = validate_witness(board, w)
    stats = {"sat": True, "pieces": len(board), "witness_length": len(w),
             "elapsed": time.monotonic() - t0}
    if not report.ok or len(w) != len(board) - 1:
        return CheckReport("forward", FAIL, {"reason": report.reason, "index": report.failed_index}, stats)
    back = extract_assignment(layout, w)
    stats["extracted_satisfies"] = cnf.satisfied_by(back)
    if not stats["extracted_satisfies"]:
        return CheckReport("forward", FAIL, {"extracted": back}, stats)
    return CheckReport("forward", PASS, None, stats)


def round_trip(cnf: CnfInstance, mode: Mode = Mode.AMENDED,
               solver_cfg: Optional[SolverConfig] = None) -> CheckReport:
    """Satisfiable iff the reduced board is solvable, on one instance."""
    t0 = time.monotonic()
    model = brute_force_sat(cnf)
    stats: dict = {"cnf": cnf.to_ints(), "n": cnf.num_vars, "mode": mode.value, "sat": model is not None}
    try:
        board, layout = reduce(cnf, mode)
    except ReductionError as exc:
        return CheckReport("round_trip", FAIL, {"reduce": str(exc)}, stats)
    stats["pieces"] = len(board)
    if model is not None:
        fwd = forward_check(cnf, mode)
        stats["forward"] = fwd.status
        if not fwd.passed:
            return CheckReport("round_trip", FAIL, {"forward": fwd.counterexample}, stats)
    verdict = solve(board, solver_cfg or SolverConfig())
    stats["verdict"] = type(verdict).__name__
    stats["states_explored"] = verdict.states_explored
    stats["solver_elapsed"] = round(verdict.elapsed, 3)
    stats["elapsed"] = round(time.monotonic() - t0, 3)
    if isinstance(verdict, ResourceExceeded):
        stats["limit"] = verdict.limit
        return CheckReport("round_trip", INCONCLUSIVE, None, stats)
    solvable = isinstance(verdict, Solvable)
    if solvable:
        back = extract_assignment(layout, verdict.witness)
        stats["extracted_satisfies"] = cnf.satisfied_by(back)
    if solvable != (model is not None):
        ce = {"sat": model, "solvable": solvable}
        if solvable:
            ce["witness"] = [[_sq(mv.src), _sq(mv.dst)] for mv in verdict.witness]
        return CheckReport("round_trip", FAIL, ce, stats)
    if solvable and not stats["extracted_satisfies"]:
        return CheckReport("round_trip", FAIL, {"extracted": back}, stats)
    return CheckReport("round_trip", PASS, None, stats)


LAYOUT_CHECKS = {
    "color_separation": check_color_separation,
    "bishop_isolation": check_bishop_isolation,
    "rook_confinement": check_rook_confinement,
}


def check_layout(board: BoardState, layout: ReductionLayout) -> list[CheckReport]:
    return [fn(board, layout) for fn in LAYOUT_CHECKS.values()]


def recheck(report: CheckReport, layout: ReductionLayout) -> CheckReport:
    """Re-run a failed layout check on the board stored in its counterexample."""
    if report.status != FAIL or report.name not in LAYOUT_CHECKS:
        raise ValueError("only failed layout checks can be replayed")
    board = parse_puzzle(report.counterexample["board"])
    return LAYOUT_CHECKS[report.name](board, layout)
