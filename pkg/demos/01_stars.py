"""Editing a graph into exactly p stars.

Walks through the center-set view of the problem on a small graph, then
solves a planted instance with ten thousand vertices.
"""

import time

from cek.graph import Graph, Variant, apply_edits, recognize
from cek.instances import gen_planted
from cek.oracle import oracle_optimum
from cek.starforest import centers_cost, solve_p_starforest, solve_with_centers

# A path on six vertices. Two stars need the middle edge gone.
g = Graph(6, [(i, i + 1) for i in range(5)])
print("P6:", g)

# Once the centers are chosen the cheapest completion is forced.
for centers in ({1, 4}, {1, 3}, {2}):
    print(f"centers {sorted(centers)} cost {centers_cost(g, centers)}")

edits = solve_with_centers(g, {1, 4})
print("edits for centers {1, 4}:", edits.to_json())
print("result is a starforest:", recognize(apply_edits(g, edits), Variant.STARFOREST) is not None)

# The solver searches center sets among high-degree vertices only.
for p in (1, 2, 3):
    opt, _ = oracle_optimum(g, Variant.STARFOREST, p)
    res = solve_p_starforest(g, p, k=opt)
    print(f"p={p}: solver cost {res.cost}, brute force {opt}, stars {res.solution.to_lists()}")

# Bigger: two planted stars of 4999 leaves each, hit by 20 random edits.
big, planted = gen_planted(2, 2, [1, 4999, 1, 4999], noise=20, seed=1)
start = time.perf_counter()
res = solve_p_starforest(big, 2, planted.size)
print(f"n={big.n} m={big.m}: cost {res.cost} (planted repair {planted.size}) "
      f"in {time.perf_counter() - start:.3f}s")
