"""Satisfiable iff solvable, on instances small enough to search."""
# %%
from solitaire_chess import CnfInstance, Mode, SolverConfig, forward_check, round_trip

cfg = SolverConfig(prune_unreachable=True, ordering="heuristic", time_limit=20)

for clauses in ([[1, 1, 1]], [[-1, -1, -1]], [[1, 1, 1], [-1, -1, -1]]):
    cnf = CnfInstance.from_ints(1, clauses)
    rep = round_trip(cnf, Mode.AMENDED, cfg)
    print(clauses, rep.status, {k: rep.stats[k] for k in ("sat", "pieces", "verdict", "states_explored")})

# %% the forward half needs no search at all and scales much further
cnf = CnfInstance.from_ints(5, [[1, -2, 3], [2, 4, -5], [-1, -3, 5], [3, 4, 5], [-2, -4, 1]])
print(forward_check(cnf).stats)
