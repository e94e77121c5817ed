"""Compiling a 3-CNF into a puzzle, and reading an assignment back out."""
# %%
from solitaire_chess import (
    CnfInstance, Mode, brute_force_sat, extract_assignment, layout_summary, parse_dimacs,
    reduce, synthesize_witness, validate_witness,
)

cnf = parse_dimacs("""
c three variables, three clauses
p cnf 3 3
1 2 3 0
-1 2 -3 0
1 -2 3 0
""")
board, layout = reduce(cnf, Mode.AMENDED)
print(layout_summary(layout))

# %% who stands where; roles name the gadget each piece belongs to
from collections import Counter
print(Counter(role.name for role in layout.roles))

# %% a model gives a solving sequence without any search
model = brute_force_sat(cnf)
w = synthesize_witness(cnf, model, layout)
print(model, len(w), "moves;", validate_witness(board, w))
print("read back:", extract_assignment(layout, w))

# %% verbatim coordinates: odd m breaks colour parity of the variable band
_, paper = reduce(cnf, Mode.PAPER)
print("paper band  ", [paper.variable_band(i) for i in (1, 2, 3)])
print("amended band", [layout.variable_band(i) for i in (1, 2, 3)])

# %% one clause is padded to two
b1, l1 = reduce(CnfInstance.from_ints(1, [[1, 1, 1]]))
print(l1.m_original, "->", l1.m_padded, "clauses,", len(b1), "pieces")
