"""Mechanical checks on generated layouts, including ones built to fail."""
# %%
import json

from solitaire_chess import CnfInstance, Mode, check_layout, recheck, reduce

cnf = CnfInstance.from_ints(3, [[1, 2, -3], [-1, 2, 3]])
for mode in Mode:
    board, layout = reduce(cnf, mode)
    print(mode.value, [(r.name, r.status) for r in check_layout(board, layout)])

# %% the failing paper-mode confinement report names the shared lines
board, layout = reduce(cnf, Mode.PAPER)
bad = [r for r in check_layout(board, layout) if not r.passed]
for r in bad:
    print(r.name, json.dumps(r.counterexample["problems"][:2]))

# %% reports embed their board and replay identically
for r in bad:
    print(r.name, recheck(r, layout).counterexample == r.counterexample)

# %% the b1 bounds used by the isolation argument are reported, not enforced
board, layout = reduce(cnf, Mode.AMENDED)
iso = check_layout(board, layout)[1]
print(iso.status, iso.stats["inequalities"], iso.stats["inequality_violations"][:1])
