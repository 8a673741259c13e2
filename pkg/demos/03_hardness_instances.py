"""The two hardness reductions as instance generators.

The 3SAT construction behaves as advertised on small formulas. The
multicolored independent set construction does not: its answer only
depends on whether p <= n/2.
"""

import numpy as np

from cek.graph import Variant, apply_edits, recognize
from cek.instances import (
    CnfFormula,
    has_multicolored_independent_set,
    random_colored_regular,
    reduce_3sat,
    reduce_mris,
    satisfying_edit,
)
from cek.oracle import oracle_branch_deletion
from cek.starforest import solve_p_starforest

phi = CnfFormula(3, ((1, -2, 3),))
g, k, gmap = reduce_3sat(phi)
print(f"one clause: n={g.n} m={g.m} budget {k}")
print("gadget of x1:", gmap.to_json()["variables"]["1"])

edits = satisfying_edit(phi, {1: True, 2: False, 3: False}, gmap)
print("edit from x1=T:", len(edits), "deletions, starforest:",
      recognize(apply_edits(g, edits), Variant.STARFOREST) is not None)
print("budget 7 suffices:", oracle_branch_deletion(g, Variant.STARFOREST, k - 1))

# Multicolored regular independent set. Compare the brute-force answer with the solver.
rng = np.random.default_rng(6)
rows = []
while len(rows) < 12:
    inst = random_colored_regular(int(rng.integers(6, 11)), 3, int(rng.integers(2, 6)), rng, tries=200)
    if inst is None:
        continue
    h, p, budget = reduce_mris(inst)
    rows.append((h.n, p, budget, has_multicolored_independent_set(inst) is not None,
                 solve_p_starforest(h, p, budget).yes))
print(" n  p  k  independent-set  solver  p<=n/2")
for n, p, budget, mis, solved in rows:
    print(f"{n:2d} {p:2d} {budget:2d}  {mis!s:15}  {solved!s:6}  {2 * p <= n}")
