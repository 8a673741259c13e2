import io

import numpy as np
import pytest

from cek.graph import Variant, apply_edits, recognize
from cek.instances import (
    ColoredRegularGraph,
    CnfFormula,
    FormulaError,
    gen_planted,
    has_multicolored_independent_set,
    parse_dimacs,
    planted_solution,
    random_3sat,
    random_colored_regular,
    random_gnp,
    random_graph,
    read_dimacs,
    reduce_3sat,
    reduce_mris,
    satisfying_edit,
    variable_deletions,
    write_dimacs,
)
from cek.graph import Graph
from cek.oracle import oracle_optimum
from cek.starforest import solve_p_starforest


def test_single_clause_reduction_shape():
    phi = CnfFormula(3, ((1, -2, 3),))
    g, k, gmap = reduce_3sat(phi)
    assert (g.n, g.m, k) == (19, 21, 8)
    clause = gmap.clause[0]
    assert g.adj[clause] == {gmap.vertex(1, "top", 0), gmap.vertex(2, "bot", 0), gmap.vertex(3, "top", 0)}


def test_satisfying_edit_is_a_starforest():
    phi = CnfFormula(3, ((1, -2, 3),))
    g, k, gmap = reduce_3sat(phi)
    edits = satisfying_edit(phi, {1: True, 2: True, 3: True}, gmap)
    assert edits.size == 8 and not edits.additions
    assert recognize(apply_edits(g, edits), Variant.STARFOREST) is not None
    with pytest.raises(FormulaError):
        satisfying_edit(phi, {1: False, 2: True, 3: False}, gmap)


def test_variable_deletions_true_and_false():
    phi = CnfFormula(3, ((1, -2, 3),))
    _, _, gmap = reduce_3sat(phi)
    c, d, bot, a = (gmap.vertex(1, lab, 0) for lab in ("C", "D", "bot", "A"))
    assert variable_deletions(phi, gmap, 1, True) == {(c, d), (bot, a)}
    b, top = gmap.vertex(1, "B", 0), gmap.vertex(1, "top", 0)
    assert variable_deletions(phi, gmap, 1, False) == {(a, b), (top, d)}


def test_reduction_sizes_for_larger_formulas():
    rng = np.random.default_rng(3)
    for clauses in (2, 4, 7):
        phi = random_3sat(5, clauses, rng)
        g, k, gmap = reduce_3sat(phi)
        occurrences = 3 * clauses
        assert g.n == 6 * occurrences + clauses
        assert g.m == 6 * occurrences + 3 * clauses
        assert k == 8 * clauses
        assert sorted(gmap.to_json()["clauses"]) == list(gmap.clause)


def test_formula_validation():
    with pytest.raises(FormulaError):
        CnfFormula(3, ((1, 1, 2),))
    with pytest.raises(FormulaError):
        CnfFormula(2, ((1, 2, 3),))
    with pytest.raises(FormulaError):
        reduce_3sat(CnfFormula(4, ((1, 2, 3),)))


def test_dimacs_round_trip(tmp_path):
    phi = CnfFormula(4, ((1, -2, 3), (-1, 2, 4)))
    assert parse_dimacs(phi.to_dimacs()) == phi
    path = tmp_path / "f.cnf"
    write_dimacs(phi, path)
    assert read_dimacs(path) == phi
    buf = io.StringIO()
    write_dimacs(phi, buf)
    assert read_dimacs(io.StringIO("c comment\n" + buf.getvalue())) == phi
    with pytest.raises(FormulaError):
        parse_dimacs("p cnf 3 2\n1 2 3 0\n")
    with pytest.raises(FormulaError):
        parse_dimacs("1 2 3 0\n")


def test_mris_examples():
    two_k2 = ColoredRegularGraph(Graph(4, [(0, 1), (2, 3)]), (frozenset({0, 1}), frozenset({2, 3})), 1)
    assert reduce_mris(two_k2)[1:] == (2, 0)
    c4 = ColoredRegularGraph(Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
                             (frozenset({0, 1}), frozenset({2, 3})), 2)
    assert reduce_mris(c4)[1:] == (2, 2)
    k3 = ColoredRegularGraph(Graph(3, [(0, 1), (1, 2), (0, 2)]), tuple(frozenset({v}) for v in range(3)), 2)
    assert reduce_mris(k3)[1:] == (3, 0)
    assert has_multicolored_independent_set(two_k2) is not None
    assert has_multicolored_independent_set(c4) is not None
    assert has_multicolored_independent_set(k3) is None
    for inst in (two_k2, c4, k3):
        g, p, k = reduce_mris(inst)
        expected = has_multicolored_independent_set(inst) is not None
        assert solve_p_starforest(g, p, k).yes == expected
    with pytest.raises(ValueError):
        ColoredRegularGraph(Graph(3, [(0, 1)]), (frozenset({0, 1}), frozenset({2})), 1)


def test_random_colored_regular_is_valid():
    rng = np.random.default_rng(0)
    made = [random_colored_regular(10, 3, 4, rng) for _ in range(5)]
    for inst in made:
        if inst is not None:
            assert inst.p == 4 and all(len(nb) == 3 for nb in inst.graph.adj)


def test_planted_solution_and_noise():
    sol = planted_solution(2, 2, [1, 3, 2, 2])
    assert sol.num_clusters == 2 and sorted(sol.vertices()) == list(range(8))
    g, back = gen_planted(2, 2, [1, 3, 2, 2], 3, seed=5)
    assert back.size <= 3
    assert recognize(apply_edits(g, back), Variant.BICLUSTER) is not None
    g0, back0 = gen_planted(2, 2, [1, 3, 2, 2], 0, seed=5)
    assert back0.size == 0 and g0.m == 3 + 4
    with pytest.raises(ValueError):
        gen_planted(1, 2, [1, 1], 2, seed=0)


def test_planted_upper_bounds_optimum():
    for seed in range(10):
        g, back = gen_planted(2, 2, [2, 2, 1, 3], 2, seed=seed)
        assert oracle_optimum(g, Variant.BICLUSTER, 2)[0] <= back.size


def test_random_graphs():
    g = random_graph(50, 300, seed=1)
    assert g.n == 50 and g.m == 300
    assert random_graph(50, 300, seed=1) == g
    full = random_graph(6, 15, seed=0)
    assert full.m == 15
    assert random_gnp(20, 0.0, seed=0).m == 0
    assert random_gnp(20, 1.0, seed=0).m == 190


def test_mris_budget_only_depends_on_p():
    # one center per clique class dominates everything, costing nd/2 - n + p
    rng = np.random.default_rng(11)
    seen = 0
    while seen < 25:
        n = int(rng.integers(4, 11))
        inst = random_colored_regular(n, int(rng.integers(1, 4)), int(rng.integers(1, n + 1)), rng, tries=100)
        if inst is None:
            continue
        seen += 1
        g, p, k = reduce_mris(inst)
        assert (g.m - g.n + p <= k) == (2 * p <= g.n)
        assert solve_p_starforest(g, p, k).yes == (2 * p <= g.n)
