"""Command-line front end.

Exit codes: 0 solvable / pass / sat, 1 unsolvable / fail / unsat,
2 usage or input error, 3 resource limit.  Summaries go to stdout,
artifacts to the files named by the flags.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from .engine import BoardState, PieceKind, Position, replay, validate_witness
from .formats import (
    FormatError, bounding_box, emit_puzzle, parse_assignment, parse_dimacs,
    parse_puzzle, witness_from_json, witness_to_json,
)
from .reducer import (
    Mode, ReductionError, ReductionLayout, SynthesisError, layout_summary, reduce, synthesize_witness,
)
from .solver import ResourceExceeded, Solvable, SolverConfig, Unsolvable, solve
from .verifier import (
    FAIL, INCONCLUSIVE, CheckReport, brute_force_sat, check_color_separation, check_layout,
    check_rook_capture_requirement, round_trip,
)

OK, NO, USAGE, LIMIT = 0, 1, 2, 3


class InputError(Exception):
    """Bad file or argument detected after parsing; maps to exit 2."""


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _solver_cfg(args) -> SolverConfig:
    try:
        return SolverConfig(
            max_states=args.max_states,
            time_limit=args.time_limit,
            parallel_workers=args.workers,
            prune_unreachable=args.cuts,
            partial_order=args.por,
            ordering="heuristic" if args.cuts else "lex",
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, metavar="SECONDS")
    p.add_argument("--max-states", type=int, metavar="N")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cuts", action="store_true",
                   help="prune boards with no possible capture tree and try rooks first")
    p.add_argument("--por", action="store_true",
                   help="partial-order reduction; cuts refutations but slows witness search")


def _report(reports: list[CheckReport], out: Optional[str]) -> None:
    for r in reports:
        print(f"{r.name}: {r.status}")
    if out:
        doc = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        _write(out, json.dumps(doc, indent=1, default=str) + "\n")


def _status_code(reports: list[CheckReport]) -> int:
    if any(r.status == FAIL for r in reports):
        return NO
    if any(r.status == INCONCLUSIVE for r in reports):
        return LIMIT
    return OK


# -- commands ------------------------------------------------------------------------


def cmd_solve(args) -> int:
    board = parse_puzzle(_read(args.puzzle))
    verdict = solve(board, _solver_cfg(args))
    print(f"pieces: {len(board)}")
    print(f"states explored: {verdict.states_explored}, elapsed {verdict.elapsed:.3f}s")
    if isinstance(verdict, Solvable):
        print(f"solvable in {len(verdict.witness)} moves")
        for state, mv in zip(replay(board, verdict.witness), verdict.witness):
            print(f"  {state[mv.src].letter} {mv}")
        if args.witness:
            _write(args.witness, witness_to_json(verdict.witness))
        return OK
    if isinstance(verdict, Unsolvable):
        print("unsolvable")
        return NO
    print(f"resource limit reached ({verdict.limit})")
    return LIMIT


def cmd_reduce(args) -> int:
    cnf = parse_dimacs(_read(args.cnf))
    mode = Mode(args.mode)
    board, layout = reduce(cnf, mode)
    summary = layout_summary(layout)
    box = bounding_box(board)
    print(f"mode: {mode.value}, n={cnf.num_vars}, m={summary['m_original']} (padded {summary['m_padded']})")
    print(f"pieces: {len(board)}")
    print(f"bounding box: ({box.min_x},{box.min_y})..({box.max_x},{box.max_y})")
    colour = check_color_separation(board, layout)
    if not colour.passed:
        print(f"warning: color separation fails on {len(colour.counterexample['problems'])} pieces",
              file=sys.stderr)
    _write(args.output, emit_puzzle(board, args.format))
    layout_path = args.layout or (None if args.output == "-" else args.output + ".layout.json")
    if layout_path:
        _write(layout_path, layout.to_json())
    return OK


def _load_layout(path: str) -> ReductionLayout:
    return ReductionLayout.from_json(_read(path))


def cmd_verify_layout(args) -> int:
    board = parse_puzzle(_read(args.puzzle))
    reports = check_layout(board, _load_layout(args.layout))
    _report(reports, args.output)
    return _status_code(reports)


def cmd_verify_witness(args) -> int:
    board = parse_puzzle(_read(args.puzzle))
    w = witness_from_json(_read(args.witness))
    rep = validate_witness(board, w)
    stats = {"moves": len(w), "pieces": len(board), "final_pieces": rep.final_pieces}
    if rep.ok:
        reports = [CheckReport("witness", "pass", None, stats)]
    else:
        ce = {"index": rep.failed_index, "reason": rep.reason}
        if rep.failed_index is not None:
            mv = w[rep.failed_index]
            ce["move"] = {"from": [mv.src.x, mv.src.y], "to": [mv.dst.x, mv.dst.y]}
        reports = [CheckReport("witness", FAIL, ce, stats)]
        where = f"move {rep.failed_index}" if rep.failed_index is not None else "end of witness"
        print(f"invalid at {where}: {rep.reason}")
    if args.layout and rep.ok:
        reports.append(check_rook_capture_requirement(board, _load_layout(args.layout), w))
    _report(reports, args.output)
    return _status_code(reports)


def cmd_verify_roundtrip(args) -> int:
    cnf = parse_dimacs(_read(args.cnf))
    rep = round_trip(cnf, Mode(args.mode), _solver_cfg(args))
    s = rep.stats
    print(f"sat: {s['sat']}, pieces: {s.get('pieces')}, verdict: {s.get('verdict')}, "
          f"states: {s.get('states_explored')}")
    _report([rep], args.output)
    return _status_code([rep])


def cmd_synth(args) -> int:
    cnf = parse_dimacs(_read(args.cnf))
    if args.auto:
        model = brute_force_sat(cnf)
        if model is None:
            print("formula is unsatisfiable")
            return NO
    else:
        model = parse_assignment(args.assignment, cnf.num_vars)
        if not cnf.satisfied_by(model):
            raise InputError("assignment does not satisfy the formula")
    if args.layout:
        layout = _load_layout(args.layout)
    else:
        _, layout = reduce(cnf, Mode(args.mode))
    w = synthesize_witness(cnf, model, layout, merge_clause_rooks=args.merge)
    board = layout.board()
    rep = validate_witness(board, w)
    if not rep.ok:
        print(f"synthesized witness is invalid at move {rep.failed_index}: {rep.reason}", file=sys.stderr)
        return NO
    print(f"witness: {len(w)} moves for {len(board)} pieces")
    _write(args.output, witness_to_json(w))
    return OK


LETTERS = "KQRBNP"


def generate(pieces: int, size: int, rng: random.Random) -> BoardState:
    squares = rng.sample([(x, y) for y in range(size) for x in range(size)], pieces)
    return BoardState({Position(x, y): PieceKind.from_letter(rng.choice(LETTERS)) for x, y in squares})


def cmd_gen(args) -> int:
    if args.pieces < 1:
        raise InputError("--pieces must be at least 1")
    if args.size < 1 or args.pieces > args.size ** 2:
        raise InputError(f"{args.pieces} pieces do not fit on a {args.size}x{args.size} board")
    rng = random.Random(args.seed)
    cfg = SolverConfig(max_states=args.max_states)
    for attempt in range(1, (args.retries if args.solvable else 1) + 1):
        board = generate(args.pieces, args.size, rng)
        if not args.solvable or isinstance(solve(board, cfg), Solvable):
            _write(args.output, emit_puzzle(board, args.format))
            if args.output != "-":
                print(f"wrote {len(board)} pieces after {attempt} attempt(s)")
            return OK
    print(f"no solvable board in {args.retries} attempts", file=sys.stderr)
    return LIMIT


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="solitaire-chess", description="Solitaire Chess toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a puzzle")
    p.add_argument("puzzle")
    p.add_argument("--witness", metavar="OUT", help="write the witness JSON here when solvable")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="compile a 3-CNF into a puzzle")
    p.add_argument("cnf")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.AMENDED.value)
    p.add_argument("-o", "--output", default="-", help="puzzle file (default stdout)")
    p.add_argument("--layout", help="layout JSON (default: OUTPUT.layout.json)")
    p.add_argument("--format", choices=["compact", "json"], default="compact")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="run verifier checks")
    vsub = p.add_subparsers(dest="what", required=True)
    q = vsub.add_parser("layout")
    q.add_argument("puzzle")
    q.add_argument("--layout", required=True)
    q.add_argument("-o", "--output", help="report JSON")
    q.set_defaults(func=cmd_verify_layout)
    q = vsub.add_parser("witness")
    q.add_argument("puzzle")
    q.add_argument("witness")
    q.add_argument("--layout", help="also check that every literal pair is rook-captured")
    q.add_argument("-o", "--output", help="report JSON")
    q.set_defaults(func=cmd_verify_witness)
    q = vsub.add_parser("roundtrip")
    q.add_argument("cnf")
    q.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.AMENDED.value)
    q.add_argument("-o", "--output", help="report JSON")
    _add_solver_flags(q)
    q.set_defaults(func=cmd_verify_roundtrip)

    p = sub.add_parser("synth", help="build a witness from a satisfying assignment")
    p.add_argument("cnf")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--assignment", metavar="SPEC", help='true literals, e.g. "1,-2,3"')
    how.add_argument("--auto", action="store_true", help="use the first model found by enumeration")
    p.add_argument("--layout", help="layout JSON written by reduce (default: rebuild)")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.AMENDED.value)
    p.add_argument("--merge", action="store_true", help="let doubly satisfied clauses merge their rooks")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("gen", help="random puzzle")
    p.add_argument("--pieces", type=int, required=True)
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solvable", action="store_true", help="resample until the solver finds a witness")
    p.add_argument("--retries", type=int, default=1000)
    p.add_argument("--max-states", type=int, default=10**6, help="solver budget per attempt")
    p.add_argument("--format", choices=["compact", "json"], default="compact")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, ReductionError, SynthesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
