import itertools
import random

import pytest

from cek.graph import Graph, ProblemSpec, Variant
from cek.kernel import (
    Verdict,
    apply_rule_twins,
    kernel_size_bound,
    kernelize,
    lift_solution,
    precheck,
    twin_classes,
    wide_twin_class,
)
from cek.oracle import oracle_optimum


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def test_twin_classes_of_star():
    assert twin_classes(star(4)) == [[0], [1, 2, 3, 4]]
    # isolated vertices belong to no class
    assert twin_classes(Graph(3, [(0, 1)])) == [[0], [1]]


def test_rule_truncates_large_class():
    res = apply_rule_twins(star(6), k=1)
    assert res.reduced.n == 4
    assert res.removed == frozenset({4, 5, 6})
    assert all(res.twin_of[v] == 1 for v in res.removed)
    assert res.kept == (0, 1, 2, 3)


def test_rule_keeps_small_classes():
    res = apply_rule_twins(star(3), k=1)
    assert res.reduced == star(3) and not res.removed


def test_size_bound_formula():
    assert kernel_size_bound(1, 2, 0) == 2
    assert kernel_size_bound(2, 3, 2) == 2 * 3 * 5 + 4


def test_precheck_components_and_size():
    g = Graph(6, [(0, 1), (2, 3), (4, 5)])
    assert precheck(g, ProblemSpec(Variant.BICLUSTER, 0, 2)) is Verdict.TOO_MANY_COMPONENTS
    assert precheck(g, ProblemSpec(Variant.BICLUSTER, 1, 2)) is Verdict.PASS
    assert precheck(Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]), ProblemSpec(Variant.BICLUSTER, 0, 1)) is Verdict.TOO_LARGE
    with pytest.raises(ValueError):
        precheck(g, ProblemSpec(Variant.BICLUSTER, 1))


def test_wide_twin_class_rejects_starforest_only():
    # a 4-class seeing two centers: a C4 that the twin rule would hide
    g = Graph(6, [(c, v) for c in (0, 1) for v in range(2, 6)])
    assert wide_twin_class(g, 0)
    assert kernelize(g, ProblemSpec(Variant.STARFOREST, 0, 1)).verdict is Verdict.WIDE_TWINS
    assert kernelize(g, ProblemSpec(Variant.BICLUSTER, 0, 1)).verdict is Verdict.REDUCED
    assert oracle_optimum(g, Variant.STARFOREST, 1)[0] > 0


def test_lift_solution_places_removed_twins():
    g = star(6)
    res = kernelize(g, ProblemSpec(Variant.BICLUSTER, 1, 1))
    lifted = lift_solution(res, recognize_solution(res.reduced), touched=set())
    assert sorted(lifted.vertices()) == list(range(7))
    assert lifted.num_clusters == 1


def recognize_solution(g):
    from cek.graph import recognize

    return recognize(g, Variant.BICLUSTER)


@pytest.mark.parametrize("seed", range(30))
def test_rule_preserves_capped_optimum(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 1)
    core = rng.randint(2, 5)
    width = 2 * k + 2 + rng.randint(0, 2)
    edges = [e for e in itertools.combinations(range(core), 2) if rng.random() < 0.5]
    hood = rng.sample(range(core), rng.randint(1, core))
    edges += [(h, core + j) for h in hood for j in range(width)]
    g = Graph(core + width, edges)
    reduced = apply_rule_twins(g, k).reduced
    for variant, t in ((Variant.BICLUSTER, 2), (Variant.TPARTITE, 3)):
        for p in (1, 2):
            before, _ = oracle_optimum(g, variant, p, t)
            after, _ = oracle_optimum(reduced, variant, p, t)
            cap = k + 1
            assert min(before if before is not None else cap, cap) == min(after if after is not None else cap, cap)
