"""A first look at the game: four pieces, every move a capture, one survivor."""
# %%
from solitaire_chess import (
    Move, SolverConfig, count_solutions, legal_moves, parse_puzzle, replay, solve, validate_witness,
)

board = parse_puzzle("""
bounds 0 0 3 3
R 0 1
P 1 1
B 1 2
N 3 0
""")
print(board)

# %% what can move right now
for m in legal_moves(board):
    print(board[m.src].letter, m)

# %% the solver finds the row-major first solution
verdict = solve(board)
print(verdict)
for state, m in zip(replay(board, verdict.witness), verdict.witness):
    print(f"{len(state)} pieces, {state[m.src].letter} {m}")

# %% and it's the only one
print("solutions:", count_solutions(board, 10))

# order matters; swapping the first two moves breaks the sequence later
swapped = [Move((0, 1), (1, 1)), Move((3, 0), (1, 1)), Move((1, 1), (1, 2))]
print(validate_witness(board, swapped))

# %% bigger random boards; limits turn into ResourceExceeded rather than hanging
import random
from solitaire_chess import BoardState, PieceKind

rng = random.Random(3)
squares = rng.sample([(x, y) for x in range(6) for y in range(6)], 9)
big = BoardState({sq: rng.choice(list(PieceKind)) for sq in squares})
print(solve(big, SolverConfig(max_states=10_000)))
