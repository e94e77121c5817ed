"""Exact solvability search.

Squares can only lose pieces, so a position is fully described by which
kind sits on each of the initially occupied squares.  The search indexes
those squares once and packs a position into one integer (three bits per
square), precomputing for every (kind, square) the capturable squares and
the bit mask of squares that must be empty in between.

The search is a depth-first walk that remembers refuted positions.  Two
further sound cuts are optional:

* ``prune_unreachable``: the captures of a solution form a tree rooted at
  the survivor, so some piece must be able to reach every other piece in
  the graph of possible captures (blockers ignored).
* ``partial_order``: explore only a stubborn subset of the captures.  The
  subset is closed under "shares a square with" for enabled captures and
  under a necessary enabling set for disabled ones, which preserves every
  reachable dead end, the solved position included.
"""

from __future__ import annotations

import concurrent.futures
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .engine import (
    BoardState,
    Move,
    PieceKind,
    Position,
    SLIDERS,
    Witness,
    between,
    geometric_reach,
    order_key,
)

KINDS = list(PieceKind)
CODE = {k: i + 1 for i, k in enumerate(KINDS)}


@dataclass
class SolverConfig:
    max_states: Optional[int] = None
    time_limit: Optional[float] = None
    parallel_workers: int = 1
    enable_memo: bool = True
    prune_unreachable: bool = False
    partial_order: bool = False
    ordering: str = "lex"   # or "heuristic"
    # test hook: reorders the candidate captures of every node
    shuffle_seed: Optional[int] = None

    def __post_init__(self) -> None:
        for name in ("max_states", "time_limit"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.parallel_workers < 1:
            raise ValueError("parallel_workers must be at least 1")
        if self.ordering not in ("lex", "heuristic"):
            raise ValueError(f"unknown ordering {self.ordering!r}")


@dataclass(frozen=True)
class Solvable:
    witness: Witness
    states_explored: int = 0
    elapsed: float = 0.0


@dataclass(frozen=True)
class Unsolvable:
    states_explored: int = 0
    elapsed: float = 0.0


@dataclass(frozen=True)
class ResourceExceeded:
    states_explored: int
    elapsed: float
    limit: str = ""


Verdict = Solvable | Unsolvable | ResourceExceeded


class _Limit(Exception):
    def __init__(self, which: str):
        self.which = which


class Indexed:
    """A board compiled onto the index set of its occupied squares."""

    def __init__(self, state: BoardState):
        self.squares: list[Position] = state.squares()
        self.index = {p: i for i, p in enumerate(self.squares)}
        size = len(self.squares)
        present = {k for _, k in state.items()}
        # targets[code][a] -> tuple of (b, bit_b, path_mask), b ascending
        self.targets: list[list[tuple]] = [[()] * size for _ in range(len(KINDS) + 1)]
        for kind in present:
            code = CODE[kind]
            for a, pa in enumerate(self.squares):
                row = []
                for b, pb in enumerate(self.squares):
                    if a == b or not geometric_reach(kind, pa, pb):
                        continue
                    mask = 0
                    if kind in SLIDERS:
                        for q in between(pa, pb):
                            qi = self.index.get(q)
                            if qi is not None:
                                mask |= 1 << qi
                    row.append((b, 1 << b, mask))
                self.targets[code][a] = tuple(row)
        occ = 0
        packed = 0
        for p, k in state.items():
            i = self.index[p]
            occ |= 1 << i
            packed |= CODE[k] << (3 * i)
        self.occ0 = occ
        self.packed0 = packed

    def moves(self, occ: int, packed: int) -> list[tuple[int, int]]:
        out = []
        rest = occ
        while rest:
            low = rest & -rest
            a = low.bit_length() - 1
            rest ^= low
            for b, bb, mask in self.targets[(packed >> (3 * a)) & 7][a]:
                if occ & bb and not occ & mask:
                    out.append((a, b))
        return out

    @staticmethod
    def play(occ: int, packed: int, a: int, b: int) -> tuple[int, int]:
        code = (packed >> (3 * a)) & 7
        packed &= ~((7 << (3 * a)) | (7 << (3 * b)))
        packed |= code << (3 * b)
        return occ & ~(1 << a), packed

    def to_move(self, a: int, b: int) -> Move:
        return Move(self.squares[a], self.squares[b])

    def board(self, occ: int, packed: int) -> BoardState:
        pieces = {}
        for i, p in enumerate(self.squares):
            if occ >> i & 1:
                pieces[p] = KINDS[((packed >> (3 * i)) & 7) - 1]
        return BoardState(pieces)

    # -- sound cuts -----------------------------------------------------------

    def reach(self, occ: int, packed: int, code: int, start: int) -> int:
        """Squares a ``code`` piece on ``start`` could ever land on, ignoring
        blockers but only through squares that are occupied now."""
        seen = 0
        frontier = 1 << start
        targets = self.targets[code]
        while frontier:
            low = frontier & -frontier
            a = low.bit_length() - 1
            frontier ^= low
            for b, bb, _ in targets[a]:
                if occ & bb and not seen & bb:
                    seen |= bb
                    frontier |= bb
        return seen

    def capture_graph_rooted(self, occ: int, packed: int) -> bool:
        """Necessary condition for solvability.

        Draw an arc p -> q when p could ever land on a square q could ever
        stand on.  The captures of a solution form a tree hanging from the
        survivor along such arcs, so some piece must reach every other one.
        """
        pieces = list(_bits(occ))
        spots = {}
        reach_of = {}
        for a in pieces:
            r = self.reach(occ, packed, (packed >> (3 * a)) & 7, a)
            reach_of[a] = r
            spots[a] = r | (1 << a)
        arcs = {a: [q for q in pieces if q != a and reach_of[a] & spots[q]] for a in pieces}
        has_in = set()
        for a in pieces:
            has_in.update(arcs[a])
        roots = [a for a in pieces if a not in has_in]
        if len(roots) > 1:
            return False
        for r in roots or pieces:
            seen = {r}
            todo = [r]
            while todo:
                for q in arcs[todo.pop()]:
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
            if len(seen) == len(pieces):
                return True
            if roots:
                return False
        return False

    def priority(self, occ: int, packed: int, moves: list[tuple[int, int]]) -> list[tuple[int, int]]:
        """Heuristic order: orthogonal sliders first, bishops last; then
        pieces with few options, then targets with few attackers."""
        options: dict[int, int] = {}
        attackers: dict[int, int] = {}
        for a, b in moves:
            options[a] = options.get(a, 0) + 1
            attackers[b] = attackers.get(b, 0) + 1

        def score(m):
            a, b = m
            return (_RANK[(packed >> (3 * a)) & 7], options[a], attackers[b])

        return sorted(moves, key=score)


# rook, queen, king, pawn, knight, bishop
_RANK = {CODE[k]: r for r, k in enumerate((PieceKind.ROOK, PieceKind.QUEEN, PieceKind.KING,
                                             PieceKind.PAWN, PieceKind.KNIGHT, PieceKind.BISHOP))}


def _stubborn(ix: Indexed, occ: int, packed: int, enabled: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Enabled captures of a stubborn set seeded by each enabled capture in
    turn; the smallest result wins.

    A capture is a triple (source, target, kind of mover).  Dependencies:
    an enabled capture conflicts with every capture that uses its source or
    target square.  A disabled capture needs one of: a capture that brings
    the right kind onto its source, or a capture that vacates one of the
    occupied squares in between.
    """
    if len(enabled) <= 1:
        return enabled
    size = len(ix.squares)
    # kinds that could ever stand on each square (origin kind plus arrivals)
    arrive: list[int] = [0] * size
    rest = occ
    codes_on = {}
    while rest:
        low = rest & -rest
        a = low.bit_length() - 1
        rest ^= low
        code = (packed >> (3 * a)) & 7
        codes_on[a] = code
    kind_at = [0] * size  # bit set of codes
    for a, code in codes_on.items():
        kind_at[a] |= 1 << code
        r = ix.reach(occ, packed, code, a)
        while r:
            low = r & -r
            b = low.bit_length() - 1
            r ^= low
            kind_at[b] |= 1 << code
    enabled_set = set(enabled)
    best = None
    for seed in enabled:
        chosen = _closure(ix, occ, packed, codes_on, kind_at, enabled_set, seed, size)
        if chosen is not None and (best is None or len(chosen) < len(best)):
            best = chosen
            if len(best) == 1:
                break
    return best if best is not None else enabled


def _closure(ix, occ, packed, codes_on, kind_at, enabled_set, seed, size, cap=None):
    targets = ix.targets
    todo = [(seed[0], seed[1], codes_on[seed[0]])]
    seen = {todo[0]}
    picked = []

    def add(t):
        if t not in seen:
            seen.add(t)
            todo.append(t)

    def into(b):
        # captures landing on b by any kind that may stand somewhere occupied
        for a in _bits(occ):
            if a == b:
                continue
            kinds = kind_at[a]
            for code in _codes(kinds):
                for bb_idx, bb, _ in targets[code][a]:
                    if bb_idx == b:
                        add((a, b, code))
                        break

    def out_of(a):
        for code in _codes(kind_at[a]):
            for b, bb, _ in targets[code][a]:
                if occ & bb:
                    add((a, b, code))

    while todo:
        a, b, code = todo.pop()
        live = (occ >> a & 1) and (occ >> b & 1)
        if not live:
            continue
        current = codes_on.get(a)
        if current == code and (a, b) in enabled_set:
            picked.append((a, b))
            out_of(a)
            out_of(b)
            into(a)
            into(b)
            continue
        if current != code:
            # some capture must bring a ``code`` piece onto a
            for src in _bits(occ):
                if src != a and kind_at[src] >> code & 1:
                    for bi, bb, _ in targets[code][src]:
                        if bi == a:
                            add((src, a, code))
                            break
            continue
        # right kind, path blocked: the first blocker has to leave
        mask = 0
        for bi, bb, pm in targets[code][a]:
            if bi == b:
                mask = pm & occ
                break
        blocker = (mask & -mask).bit_length() - 1
        out_of(blocker)
    return picked


def _bits(v: int):
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def _codes(mask: int):
    c = 1
    mask >>= 1
    while mask:
        if mask & 1:
            yield c
        mask >>= 1
        c += 1


class _Search:
    def __init__(self, ix: Indexed, cfg: SolverConfig, deadline: Optional[float]):
        self.ix = ix
        self.cfg = cfg
        self.deadline = deadline
        self.refuted: set[int] = set()
        self.states = 0
        self.rng = random.Random(cfg.shuffle_seed) if cfg.shuffle_seed is not None else None

    def run(self, occ: int, packed: int, pieces: int) -> Optional[list[tuple[int, int]]]:
        path: list[tuple[int, int]] = []
        return path if self._dfs(occ, packed, pieces, path) else None

    def _dfs(self, occ: int, packed: int, pieces: int, path: list) -> bool:
        if pieces == 1:
            return True
        cfg = self.cfg
        if cfg.enable_memo and packed in self.refuted:
            return False
        self.states += 1
        if cfg.max_states is not None and self.states > cfg.max_states:
            raise _Limit("max_states")
        if self.deadline is not None and not self.states & 255 and time.monotonic() > self.deadline:
            raise _Limit("time_limit")
        moves = self.ix.moves(occ, packed)
        if moves and cfg.prune_unreachable and pieces > 2 and not self.ix.capture_graph_rooted(occ, packed):
            moves = []
        if len(moves) > 1 and cfg.partial_order:
            moves = _stubborn(self.ix, occ, packed, moves)
        if self.rng is not None:
            self.rng.shuffle(moves)
        elif cfg.ordering == "heuristic" and len(moves) > 1:
            moves = self.ix.priority(occ, packed, moves)
        for a, b in moves:
            nocc, npacked = Indexed.play(occ, packed, a, b)
            path.append((a, b))
            if self._dfs(nocc, npacked, pieces - 1, path):
                return True
            path.pop()
        if cfg.enable_memo:
            self.refuted.add(packed)
        return False


def solve(state: BoardState, cfg: Optional[SolverConfig] = None) -> Verdict:
    """Decide whether ``state`` can be reduced to a single piece.

    With one worker, row-major ordering and no partial-order cut, the
    witness is the first solution in row-major move order.
    """
    cfg = cfg or SolverConfig()
    if len(state) == 0:
        raise ValueError("empty board")
    start = time.monotonic()
    if cfg.parallel_workers > 1:
        return _solve_parallel(state, cfg, start)
    ix = Indexed(state)
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    search = _Search(ix, cfg, deadline)
    try:
        path = search.run(ix.occ0, ix.packed0, len(state))
    except _Limit as lim:
        return ResourceExceeded(search.states, time.monotonic() - start, lim.which)
    except RecursionError:
        return ResourceExceeded(search.states, time.monotonic() - start, "recursion")
    elapsed = time.monotonic() - start
    if path is None:
        return Unsolvable(search.states, elapsed)
    return Solvable(Witness(tuple(ix.to_move(a, b) for a, b in path)), search.states, elapsed)


def _subtree_job(state: BoardState, first: tuple, cfg: SolverConfig, deadline: Optional[float]):
    ix = Indexed(state)
    a, b = ix.index[first[0]], ix.index[first[1]]
    occ, packed = Indexed.play(ix.occ0, ix.packed0, a, b)
    search = _Search(ix, cfg, deadline)
    try:
        path = search.run(occ, packed, len(state) - 1)
    except _Limit as lim:
        return ("limit", lim.which, search.states)
    if path is None:
        return ("refuted", None, search.states)
    return ("solved", [first] + [(ix.squares[x], ix.squares[y]) for x, y in path], search.states)


def _solve_parallel(state: BoardState, cfg: SolverConfig, start: float) -> Verdict:
    """Split the first ply across worker processes; each keeps its own memo."""
    if len(state) == 1:
        return Solvable(Witness(()), 0, 0.0)
    ix = Indexed(state)
    roots = ix.moves(ix.occ0, ix.packed0)
    if cfg.partial_order:
        roots = _stubborn(ix, ix.occ0, ix.packed0, roots)
    if not roots:
        return Unsolvable(1, time.monotonic() - start)
    deadline = start + cfg.time_limit if cfg.time_limit is not None else None
    sub_cfg = SolverConfig(
        max_states=cfg.max_states, time_limit=None, parallel_workers=1,
        enable_memo=cfg.enable_memo, prune_unreachable=cfg.prune_unreachable,
        partial_order=cfg.partial_order, ordering=cfg.ordering, shuffle_seed=cfg.shuffle_seed,
    )
    firsts = [(ix.squares[a], ix.squares[b]) for a, b in roots]
    total = 1
    limited = None
    with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.parallel_workers) as pool:
        futures = [pool.submit(_subtree_job, state, f, sub_cfg, deadline) for f in firsts]
        try:
            for fut in concurrent.futures.as_completed(futures):
                status, payload, states = fut.result()
                total += states
                if status == "solved":
                    for other in futures:
                        other.cancel()
                    moves = tuple(Move(Position(*s), Position(*d)) for s, d in payload)
                    return Solvable(Witness(moves), total, time.monotonic() - start)
                if status == "limit":
                    limited = payload
        finally:
            for other in futures:
                other.cancel()
    if limited is not None:
        return ResourceExceeded(total, time.monotonic() - start, limited)
    return Unsolvable(total, time.monotonic() - start)


def count_solutions(state: BoardState, cap: int) -> int:
    """Distinct solving move sequences, saturating at ``cap``; no memo."""
    if len(state) == 0:
        raise ValueError("empty board")
    ix = Indexed(state)

    def walk(occ: int, packed: int, pieces: int, budget: int) -> int:
        if pieces == 1:
            return 1
        total = 0
        for a, b in ix.moves(occ, packed):
            nocc, npacked = Indexed.play(occ, packed, a, b)
            total += walk(nocc, npacked, pieces - 1, budget - total)
            if total >= budget:
                return budget
        return total

    return walk(ix.occ0, ix.packed0, len(state), cap)
