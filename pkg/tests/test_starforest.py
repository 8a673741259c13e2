import itertools
import random

import pytest

from cek.graph import Graph, Variant, apply_edits, is_valid_solution, recognize
from cek.oracle import oracle_optimum
from cek.starforest import (
    Check,
    InfeasibleError,
    centers_cost,
    degree_bound_check,
    guesses,
    solve_g1,
    solve_p_starforest,
    solve_with_centers,
    split_instance,
)


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def test_p3_is_already_a_star():
    res = solve_p_starforest(path(3), 1, 0)
    assert res.yes and res.cost == 0 and res.edits.size == 0


def test_c4_costs():
    c4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    # one star: delete the two edges away from the center, add the diagonal
    assert not solve_p_starforest(c4, 1, 2).yes
    assert solve_p_starforest(c4, 1, 3).cost == 3
    # two stars: a P3 plus a lone vertex
    assert solve_p_starforest(c4, 2, 2).cost == 2


def test_solve_with_centers_cost_matches_closed_form():
    g = path(5)
    for centers in ({1}, {1, 3}, {2}, {0, 4}):
        for r in range(0, 3):
            expected = centers_cost(g, centers, r)
            if expected is None:
                with pytest.raises(InfeasibleError):
                    solve_with_centers(g, centers, r)
                continue
            edits = solve_with_centers(g, centers, r)
            assert edits.size == expected
            assert recognize(apply_edits(g, edits), Variant.STARFOREST) is not None


@pytest.mark.parametrize("s,t_iso,p1,cost", [(1, 0, 1, 0), (2, 0, 1, 3), (1, 1, 1, 1), (2, 1, 3, 0), (1, 0, 2, 1)])
def test_solve_g1_examples(s, t_iso, p1, cost):
    assert solve_g1(s, t_iso, p1)[0] == cost


def test_solve_g1_matches_oracle():
    for s in range(0, 3):
        for t_iso in range(0, 3):
            if s + t_iso == 0:
                continue
            g = Graph(2 * s + t_iso, [(2 * i, 2 * i + 1) for i in range(s)])
            for p1 in range(1, g.n + 1):
                got = solve_g1(s, t_iso, p1)
                assert got is not None and got[0] == oracle_optimum(g, Variant.STARFOREST, p1)[0]
            assert solve_g1(s, t_iso, g.n + 1) is None


def test_split_and_degree_bound():
    g = Graph(7, [(0, 1), (2, 3), (3, 4)])
    split = split_instance(g)
    assert (split.s, split.t_iso) == (1, 2)
    assert split.g2_vertices == frozenset({2, 3, 4})
    assert degree_bound_check(path(5), 1, 1) is Check.PASS
    assert degree_bound_check(path(8), 1, 1) is Check.PRUNE


def test_guesses_respect_empty_parts():
    assert [(b.p1, b.k1) for b in guesses(2, 1, g1_empty=True, g2_empty=False)] == [(0, 0)]
    assert all(b.p2 == 0 and b.k2 == 0 for b in guesses(2, 1, g1_empty=False, g2_empty=True))


@pytest.mark.parametrize("seed", range(60))
def test_matches_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    g = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < rng.choice((0.2, 0.5))])
    for p in range(1, 4):
        opt, _ = oracle_optimum(g, Variant.STARFOREST, p)
        if opt is None:
            assert not solve_p_starforest(g, p, n * n).yes
            continue
        res = solve_p_starforest(g, p, opt)
        assert res.yes and res.cost == opt
        assert is_valid_solution(g, res.solution, Variant.STARFOREST, p=p)
        assert recognize(apply_edits(g, res.edits), Variant.STARFOREST) is not None
        if opt:
            assert not solve_p_starforest(g, p, opt - 1).yes
        plain = solve_p_starforest(g, p, opt, use_kernel=False)
        assert plain.yes and plain.cost == opt


def test_at_most_p():
    g = Graph(4, [(0, 1), (2, 3)])
    assert not solve_p_starforest(g, 1, 0).yes
    res = solve_p_starforest(g, 3, 0, at_most=True)
    assert res.yes and res.solution.num_clusters == 2


def test_invalid_arguments():
    with pytest.raises(ValueError):
        solve_p_starforest(path(3), 0, 1)
    with pytest.raises(ValueError):
        solve_p_starforest(path(3), 1, -1)
