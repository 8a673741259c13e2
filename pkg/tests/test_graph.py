import io
import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cek.graph import (
    ClusterSolution,
    EditSet,
    Graph,
    GraphFormatError,
    InvalidEditError,
    ProblemSpec,
    Variant,
    apply_edits,
    find_obstruction,
    forced_edits,
    format_graph,
    is_valid_solution,
    obstruction_holds,
    parse_graph,
    read_graph,
    recognize,
    write_graph,
)


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, b in zip(pairs, bits) if b])


def test_graph_basics():
    g = path(4)
    assert (g.n, g.m) == (4, 3)
    assert list(g.edges()) == [(0, 1), (1, 2), (2, 3)]
    assert g.has_edge(2, 1) and not g.has_edge(0, 2)
    sub, ids = g.induced([3, 1, 2])
    assert ids == [1, 2, 3] and sub.m == 2


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(0, 1), (1, 0)]])
def test_graph_rejects_bad_edges(edges):
    with pytest.raises(ValueError):
        Graph(3, edges)


def test_edit_set_validation():
    g = path(3)
    with pytest.raises(InvalidEditError):
        EditSet(additions={(0, 1)}, deletions={(1, 0)})
    with pytest.raises(InvalidEditError):
        EditSet(additions={(0, 1)}).validate(g)
    with pytest.raises(InvalidEditError):
        EditSet(deletions={(0, 2)}).validate(g)
    h = apply_edits(g, EditSet(additions={(0, 2)}, deletions={(0, 1)}))
    assert sorted(h.edges()) == [(0, 2), (1, 2)]


def test_edit_json_round_trip():
    e = EditSet(additions={(3, 1), (0, 2)}, deletions={(4, 5)})
    doc = e.to_json()
    assert doc == {"additions": [[0, 2], [1, 3]], "deletions": [[4, 5]]}
    assert EditSet.from_json(doc) == e


@pytest.mark.parametrize("variant", list(Variant))
def test_recognize_small_examples(variant):
    assert recognize(Graph(0), variant) is not None
    assert recognize(path(2), variant) is not None
    assert recognize(path(3), variant) is not None
    assert recognize(path(4), variant) is None
    assert recognize(path(4), variant, 3 if variant is Variant.TPARTITE else 2) is None


def test_recognize_distinguishes_classes():
    c4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert recognize(c4, Variant.STARFOREST) is None
    assert recognize(c4, Variant.BICLUSTER) is not None
    assert recognize(k3, Variant.BICLUSTER) is None
    assert recognize(k3, Variant.TPARTITE, 3) is not None
    assert find_obstruction(k3, Variant.TPARTITE, 2).kind == "K3"


def test_obstruction_kinds():
    assert find_obstruction(path(4), Variant.STARFOREST).kind == "P4"
    c4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert find_obstruction(c4, Variant.STARFOREST).kind == "C4"
    k4 = Graph(4, list(itertools.combinations(range(4), 2)))
    assert find_obstruction(k4, Variant.TPARTITE, 3).kind == "K4"


def star_forest_nx(h):
    return all(nx.diameter(h.subgraph(c)) <= 2 and nx.is_tree(h.subgraph(c)) for c in nx.connected_components(h))


def multipartite_cluster_nx(h, t):
    # each component's complement splits into at most t cliques, pairwise non-adjacent
    for comp in nx.connected_components(h):
        if len(comp) == 1:
            continue
        comp_graph = nx.complement(h.subgraph(comp))
        parts = list(nx.connected_components(comp_graph))
        if len(parts) > t or len(parts) < 2:
            return False
        if any(comp_graph.subgraph(p).number_of_edges() != len(p) * (len(p) - 1) // 2 for p in parts):
            return False
    return True


def test_recognize_matches_networkx_atlas():
    for h in nx.graph_atlas_g()[1:]:
        g = Graph(h.number_of_nodes(), list(h.edges()))
        assert (recognize(g, Variant.STARFOREST) is not None) == star_forest_nx(h)
        assert (recognize(g, Variant.BICLUSTER) is not None) == multipartite_cluster_nx(h, 2)
        assert (recognize(g, Variant.TPARTITE, 3) is not None) == multipartite_cluster_nx(h, 3)


@settings(max_examples=150, deadline=None)
@given(graphs(), st.sampled_from([(Variant.STARFOREST, 2), (Variant.BICLUSTER, 2), (Variant.TPARTITE, 3)]))
def test_obstruction_iff_not_recognized(g, setting):
    variant, t = setting
    sol = recognize(g, variant, t)
    obs = find_obstruction(g, variant, t)
    assert (sol is None) == (obs is not None)
    if obs is not None:
        assert obstruction_holds(g, obs)
    else:
        assert forced_edits(g, sol).size == 0
        assert is_valid_solution(g, sol, variant, t)


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_forced_edits_reach_solution(g):
    labels = [v % 3 for v in range(g.n)]
    clusters = [[[v for v in range(g.n) if labels[v] == c and v % 2 == s] for s in (0, 1)] for c in range(3)]
    clusters = [[side for side in c if side] for c in clusters]
    clusters = [c for c in clusters if c and not (len(c) == 1 and len(c[0]) > 1)]
    sol = ClusterSolution.from_lists(clusters)
    if not sol.is_partition_of(g.n):
        return
    h = apply_edits(g, forced_edits(g, sol))
    assert recognize(h, Variant.BICLUSTER) is not None
    assert sorted(h.edges()) == sorted(sol.edge_set())


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_format_round_trip(g):
    assert parse_graph(format_graph(g, ["comment"])) == g


def test_read_write_files(tmp_path):
    g = path(5)
    target = tmp_path / "g.txt"
    write_graph(g, target)
    assert read_graph(target) == g
    buf = io.StringIO()
    write_graph(g, buf)
    assert read_graph(io.StringIO(buf.getvalue())) == g


@pytest.mark.parametrize("text", ["", "2 1\n", "2 1\n1 0\n", "3 2\n0 1\n0 1\n", "x y\n"])
def test_parse_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_problem_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec(Variant.BICLUSTER, -1, 1)
    with pytest.raises(ValueError):
        ProblemSpec(Variant.BICLUSTER, 1, 1, t=3)
    assert ProblemSpec("tpartite", 1, 2, 3).variant is Variant.TPARTITE


def test_is_valid_solution_rules():
    sol = ClusterSolution.from_lists([[[0, 1], [2]], [[3]]])
    assert is_valid_solution(Graph(4), sol, Variant.BICLUSTER, p=2)
    assert not is_valid_solution(Graph(4), sol, Variant.BICLUSTER, p=1)
    wide = ClusterSolution.from_lists([[[0, 1], [2, 3]]])
    assert not is_valid_solution(Graph(4), wide, Variant.STARFOREST)
    lone = ClusterSolution.from_lists([[[0, 1]], [[2], [3]]])
    assert not is_valid_solution(Graph(4), lone, Variant.BICLUSTER)
