"""Puzzle, witness and DIMACS 3-CNF serialization.

Compact puzzle text is one piece per line (``<letter> <x> <y>``) with an
optional leading ``bounds minx miny maxx maxy`` line.  The JSON form is
``{"pieces": [{"kind": "R", "x": 0, "y": 1}, ...], "bounds": {...}}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .engine import BoardState, Bounds, Move, PieceKind, Position, Witness


class FormatError(ValueError):
    pass


# -- 3-CNF -------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    var: int
    positive: bool = True

    @classmethod
    def from_int(cls, v: int) -> "Lit":
        if v == 0:
            raise ValueError("literal 0")
        return cls(abs(v), v > 0)

    def to_int(self) -> int:
        return self.var if self.positive else -self.var

    def holds(self, assignment: Mapping[int, bool]) -> bool:
        return assignment[self.var] == self.positive

    def __str__(self) -> str:
        return f"x{self.var}" if self.positive else f"~x{self.var}"


Clause = tuple[Lit, Lit, Lit]
Assignment = dict[int, bool]


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise FormatError("need at least one variable")
        clauses = tuple(tuple(c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise FormatError(f"clause {c} does not have exactly 3 literals")
            for lit in c:
                if not 1 <= lit.var <= self.num_vars:
                    raise FormatError(f"variable {lit.var} out of range 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Sequence[int]]) -> "CnfInstance":
        return cls(num_vars, tuple(tuple(Lit.from_int(v) for v in c) for c in clauses))

    def to_ints(self) -> list[list[int]]:
        return [[lit.to_int() for lit in c] for c in self.clauses]

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(lit.holds(assignment) for lit in c) for c in self.clauses)

    def __str__(self) -> str:
        return " & ".join("(" + " | ".join(map(str, c)) + ")" for c in self.clauses)


def parse_dimacs(text: str | bytes) -> CnfInstance:
    """Strict DIMACS reader: every clause must carry exactly three literals."""
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: bad header {line!r}") from None
            continue
        if header is None:
            raise FormatError("missing 'p cnf' header")
        for tok in line.split():
            try:
                tokens.append(int(tok))
            except ValueError:
                raise FormatError(f"line {lineno}: malformed literal {tok!r}") from None
    if header is None:
        raise FormatError("missing 'p cnf' header")
    n, m = header
    clauses: list[list[int]] = []
    current: list[int] = []
    for v in tokens:
        if v == 0:
            clauses.append(current)
            current = []
            continue
        if abs(v) > n:
            raise FormatError(f"variable {abs(v)} out of range 1..{n}")
        current.append(v)
    if current:
        raise FormatError("last clause is not 0-terminated")
    for c in clauses:
        if len(c) != 3:
            raise FormatError(f"clause {c} has {len(c)} literals, expected 3")
    if len(clauses) != m:
        raise FormatError(f"header announces {m} clauses, found {len(clauses)}")
    return CnfInstance.from_ints(n, clauses)


def emit_dimacs(cnf: CnfInstance) -> str:
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    lines += [" ".join(str(v) for v in c) + " 0" for c in cnf.to_ints()]
    return "\n".join(lines) + "\n"


def parse_assignment(spec: str, num_vars: int) -> Assignment:
    """Read ``"1,-2,3"`` style assignments (DIMACS literal signs).

    Variables left out default to false.
    """
    assignment = {v: False for v in range(1, num_vars + 1)}
    for tok in re.split(r"[,\s]+", spec.strip()):
        if not tok:
            continue
        try:
            v = int(tok)
        except ValueError:
            raise FormatError(f"malformed assignment token {tok!r}") from None
        if v == 0 or abs(v) > num_vars:
            raise FormatError(f"assignment literal {v} out of range")
        assignment[abs(v)] = v > 0
    return assignment


# -- puzzles ------------------------------------------------------------------


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"malformed number {tok!r} in {what}") from None


def _parse_compact(text: str) -> BoardState:
    bounds = None
    pieces: list[tuple[Position, PieceKind]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].lower() == "bounds":
            if pieces or bounds is not None or len(parts) != 5:
                raise FormatError(f"line {lineno}: bounds must be a single leading line of 4 numbers")
            bounds = Bounds(*(_int(t, f"line {lineno}") for t in parts[1:]))
            continue
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected '<letter> <x> <y>', got {line!r}")
        try:
            kind = PieceKind.from_letter(parts[0])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        pieces.append((Position(_int(parts[1], f"line {lineno}"), _int(parts[2], f"line {lineno}")), kind))
    return _build(pieces, bounds)


def _build(pieces, bounds) -> BoardState:
    try:
        return BoardState(pieces, bounds)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _parse_json(text: str) -> BoardState:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("pieces"), list):
        raise FormatError("JSON puzzle needs a 'pieces' list")
    bounds = None
    if doc.get("bounds") is not None:
        b = doc["bounds"]
        try:
            bounds = Bounds(int(b["min_x"]), int(b["min_y"]), int(b["max_x"]), int(b["max_y"]))
        except (KeyError, TypeError, ValueError):
            raise FormatError(f"malformed bounds {b!r}") from None
    pieces = []
    for entry in doc["pieces"]:
        try:
            kind = PieceKind.from_letter(str(entry["kind"]))
        except KeyError:
            raise FormatError(f"piece entry without kind: {entry!r}") from None
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        x, y = entry.get("x"), entry.get("y")
        if not isinstance(x, int) or not isinstance(y, int) or isinstance(x, bool) or isinstance(y, bool):
            raise FormatError(f"malformed coordinates in {entry!r}")
        pieces.append((Position(x, y), kind))
    return _build(pieces, bounds)


def sniff_format(text: str) -> str:
    return "json" if text.lstrip().startswith("{") else "compact"


def parse_puzzle(text: str | bytes, fmt: str | None = None) -> BoardState:
    if isinstance(text, bytes):
        text = text.decode()
    fmt = fmt or sniff_format(text)
    if fmt == "json":
        return _parse_json(text)
    if fmt == "compact":
        return _parse_compact(text)
    raise FormatError(f"unknown puzzle format {fmt!r}")


def emit_puzzle(state: BoardState, fmt: str = "compact") -> str:
    if len(state) == 0:
        raise FormatError("empty instance")
    if fmt == "compact":
        lines = []
        if state.bounds is not None:
            b = state.bounds
            lines.append(f"bounds {b.min_x} {b.min_y} {b.max_x} {b.max_y}")
        lines += [f"{k.letter} {p.x} {p.y}" for p, k in state.items()]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc: dict = {"pieces": [{"kind": k.letter, "x": p.x, "y": p.y} for p, k in state.items()]}
        if state.bounds is not None:
            b = state.bounds
            doc["bounds"] = {"min_x": b.min_x, "min_y": b.min_y, "max_x": b.max_x, "max_y": b.max_y}
        return json.dumps(doc, indent=1) + "\n"
    raise FormatError(f"unknown puzzle format {fmt!r}")


def normalize(state: BoardState) -> BoardState:
    """Translate so the smallest occupied x and y are both zero.

    Declared bounds move with the pieces.
    """
    if len(state) == 0:
        return state
    xs = [p.x for p in state.squares()]
    ys = [p.y for p in state.squares()]
    return state.translated(-min(xs), -min(ys))


def bounding_box(state: BoardState) -> Bounds:
    xs = [p.x for p in state.squares()]
    ys = [p.y for p in state.squares()]
    return Bounds(min(xs), min(ys), max(xs), max(ys))


# -- witnesses -----------------------------------------------------------------


def witness_to_json(w: Witness) -> str:
    doc = {"moves": [{"from": [m.src.x, m.src.y], "to": [m.dst.x, m.dst.y]} for m in w]}
    return json.dumps(doc) + "\n"


def witness_from_json(text: str | bytes) -> Witness:
    try:
        doc = json.loads(text)
        moves = [Move(Position(*map(int, e["from"])), Position(*map(int, e["to"]))) for e in doc["moves"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed witness: {exc}") from None
    return Witness(tuple(moves))
