"""Bicluster and t-partite cluster editing, and what the twin kernel buys."""

import time

import numpy as np

from cek.bicluster import AnnotatedInstance, solve_annotated, solve_p_bicluster, solve_t_partite
from cek.graph import Graph, ProblemSpec, Variant
from cek.instances import gen_planted
from cek.kernel import kernel_size_bound, kernelize
from cek.oracle import oracle_optimum

# P5 splits into two bicliques by deleting its second edge.
p5 = Graph(5, [(i, i + 1) for i in range(4)])
res = solve_p_bicluster(p5, p=2, k=1)
print("P5, p=2:", res.cost, res.edits.to_json(), res.solution.to_lists())

# Two triangles: bipartite clusters must break each one, three-partite ones need nothing.
two_k3 = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
print("2K3 as 2 bicliques:", solve_p_bicluster(two_k3, 2, 4).cost)
print("2K3 as 2 tripartite cliques:", solve_t_partite(two_k3, 3, 2, 0).cost)

# Annotated editing: side A is already split, B vertices pick a cluster greedily.
g = Graph(7, [(0, 4), (1, 4), (1, 5), (2, 5), (3, 6), (2, 6)])
inst = AnnotatedInstance(g, frozenset({0, 1, 2, 3}), (frozenset({0, 1}), frozenset({2, 3})), k=4)
ann = solve_annotated(inst)
print("annotated:", ann.yes, ann.cost, ann.solution.to_lists())

# Twin classes: a planted biclique with a huge side collapses to a kernel.
big, planted = gen_planted(2, 2, [40, 3, 30, 2], noise=2, seed=4)
k = planted.size
kr = kernelize(big, ProblemSpec(Variant.BICLUSTER, k, 2))
print(f"n={big.n} -> {kr.reduced.n} after the twin rule (bound {kernel_size_bound(2, 2, k)}), "
      f"verdict {kr.verdict.value}")
start = time.perf_counter()
res = solve_p_bicluster(big, 2, k)
print(f"solved with cost {res.cost} in {time.perf_counter() - start:.2f}s")

# Agreement with brute force on a few random graphs.
rng = np.random.default_rng(0)
for _ in range(5):
    n = int(rng.integers(5, 9))
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < 0.5
    h = Graph(n, np.stack([iu[keep], iv[keep]], 1))
    opt, _ = oracle_optimum(h, Variant.TPARTITE, 2, t=3)
    got = solve_t_partite(h, 3, 2, opt)
    print(f"n={n} m={h.m}: brute force {opt}, solver {got.cost}")
