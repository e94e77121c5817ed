import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import four_piece, naive_solvable, random_board
from solitaire_chess.engine import BoardState, Move, PieceKind, apply_move, legal_moves, validate_witness
from solitaire_chess.formats import CnfInstance
from solitaire_chess.reducer import Mode, reduce
from solitaire_chess.solver import (
    ResourceExceeded, Solvable, SolverConfig, Unsolvable, count_solutions, solve,
)

R, K = PieceKind.ROOK, PieceKind.KING


def first_solution(state):
    """Row-major first solving sequence, by plain recursion."""
    if len(state) == 1:
        return []
    for m in legal_moves(state):
        rest = first_solution(apply_move(state, m))
        if rest is not None:
            return [m] + rest
    return None


def naive_count(state):
    if len(state) == 1:
        return 1
    return sum(naive_count(apply_move(state, m)) for m in legal_moves(state))


def corpus(seed, count=220):
    rng = random.Random(seed)
    return [random_board(rng, rng.randint(2, 7)) for _ in range(count)]


# -- examples -----------------------------------------------------------------

def test_four_piece_solvable(four):
    v = solve(four)
    assert isinstance(v, Solvable)
    assert len(v.witness) == 3
    assert validate_witness(four, v.witness).ok
    assert list(v.witness) == first_solution(four)


def test_trivial_verdicts():
    v = solve(BoardState({(3, 3): K}))
    assert isinstance(v, Solvable) and len(v.witness) == 0
    assert isinstance(solve(BoardState({(0, 0): R, (5, 5): R})), Unsolvable)
    with pytest.raises(ValueError, match="empty"):
        solve(BoardState())


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(max_states=-1)
    with pytest.raises(ValueError):
        SolverConfig(time_limit=-0.5)
    with pytest.raises(ValueError):
        SolverConfig(parallel_workers=0)
    with pytest.raises(ValueError):
        SolverConfig(ordering="random")


# -- exactness against the naive enumerator ----------------------------------------

@pytest.mark.parametrize("cfg", [
    SolverConfig(),
    SolverConfig(enable_memo=False),
    SolverConfig(prune_unreachable=True),
    SolverConfig(partial_order=True),
    SolverConfig(prune_unreachable=True, partial_order=True, ordering="heuristic"),
], ids=["default", "no-memo", "prune", "por", "all-cuts"])
def test_decision_matches_naive(cfg):
    for s in corpus(17):
        expected = naive_solvable(s, legal_moves, apply_move)
        v = solve(s, cfg)
        assert isinstance(v, Solvable) == expected, s
        assert isinstance(v, (Solvable, Unsolvable))
        if expected:
            assert len(v.witness) == len(s) - 1
            assert validate_witness(s, v.witness).ok


def test_lexicographic_witness():
    for s in corpus(23, 120):
        v = solve(s)
        first = first_solution(s)
        assert (list(v.witness) if isinstance(v, Solvable) else None) == first


def test_shuffled_ordering_keeps_decisions():
    boards = corpus(29, 120)
    base = [isinstance(solve(s), Solvable) for s in boards]
    for seed in (1, 2, 3):
        assert [isinstance(solve(s, SolverConfig(shuffle_seed=seed)), Solvable) for s in boards] == base


def test_parallel_matches_sequential():
    boards = corpus(31, 16)
    cfg = SolverConfig(parallel_workers=2)
    for s in boards:
        seq = solve(s)
        par = solve(s, cfg)
        assert type(par) is type(seq)
        if isinstance(par, Solvable):
            assert validate_witness(s, par.witness).ok


# -- limits -------------------------------------------------------------------

def hard_board():
    board, _ = reduce(CnfInstance.from_ints(1, [[1, 1, 1], [-1, -1, -1]]), Mode.AMENDED)
    return board


def test_state_limit():
    v = solve(hard_board(), SolverConfig(max_states=500))
    assert isinstance(v, ResourceExceeded)
    assert v.limit == "max_states"
    assert v.states_explored == 501


def test_time_limit():
    v = solve(hard_board(), SolverConfig(time_limit=0.3))
    assert isinstance(v, ResourceExceeded) and v.limit == "time_limit"
    assert 0.3 <= v.elapsed < 5


def test_parallel_time_limit():
    v = solve(hard_board(), SolverConfig(time_limit=1.0, parallel_workers=2))
    assert isinstance(v, ResourceExceeded)


# -- counting -----------------------------------------------------------------------

def test_count_solutions_examples(four):
    assert count_solutions(BoardState({(0, 0): K}), 10) == 1
    assert count_solutions(BoardState({(0, 0): R, (0, 4): R}), 10) == 2
    # value frozen from exhaustive enumeration of the 4-piece board
    assert count_solutions(four, 100) == 1 == naive_count(four)


def test_count_solutions_matches_naive_and_saturates():
    for s in corpus(37, 80):
        exact = naive_count(s)
        assert count_solutions(s, 10**6) == exact
        assert count_solutions(s, 2) == min(exact, 2)


# -- properties ---------------------------------------------------------------------

@given(st.integers(0, 10**6), st.integers(1, 7))
@settings(max_examples=120, deadline=None)
def test_witness_length_law(seed, pieces):
    s = random_board(random.Random(seed), pieces, size=5)
    v = solve(s)
    if isinstance(v, Solvable):
        assert len(v.witness) == pieces - 1
        assert validate_witness(s, v.witness).ok
    else:
        assert count_solutions(s, 1) == 0
