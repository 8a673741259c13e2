"""Exact reference solvers for small instances.

``oracle_partition`` finds the true optimum over every clustering of the
vertex set. ``oracle_enumerate`` is a slower literal enumeration used to
cross-check it. ``oracle_branch_deletion`` decides deletion-only editing by
branching on induced obstructions.
"""

from __future__ import annotations

import os
from itertools import product
from typing import Optional, Union

from .graph import (
    ClusterSolution,
    EditSet,
    Graph,
    ProblemSpec,
    SolveResult,
    Variant,
    find_obstruction,
    forced_edits,
)

DEFAULT_LIMIT = 10
DEFAULT_DEPTH = 10
INF = float("inf")


class OracleLimitError(RuntimeError):
    pass


def oracle_limit() -> int:
    return int(os.environ.get("CEK_ORACLE_LIMIT", DEFAULT_LIMIT))


def _subset_tables(g: Graph) -> tuple[list[int], list[int]]:
    """Edge count and size of every vertex subset, indexed by bitmask."""
    n = g.n
    masks = g.masks
    edges = [0] * (1 << n)
    size = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        edges[s] = edges[rest] + (masks[low] & rest).bit_count()
        size[s] = size[rest] + 1
    return edges, size


def _cluster_costs(g: Graph, variant: Variant, t: int, edges, size):
    """Cheapest internal edit cost of every subset as one cluster, with its sides.

    For a split into sides X_1..X_s of C the cost is
    (|C|^2 - 2e(C) + sum(4e(X_i) - |X_i|^2)) / 2, which is additive over sides.
    """
    n = g.n
    full = 1 << n
    cost = [0] * full
    choice: list = [None] * full
    masks = g.masks
    if variant is Variant.STARFOREST:
        for c in range(1, full):
            if size[c] == 1:
                cost[c], choice[c] = 0, (c,)
                continue
            best_deg, center = -1, 0
            x = c
            while x:
                low = x & -x
                d = (masks[low.bit_length() - 1] & c).bit_count()
                if d > best_deg:
                    best_deg, center = d, low
                x ^= low
            cost[c] = edges[c] + size[c] - 1 - 2 * best_deg
            choice[c] = (center, c ^ center)
        return cost, choice

    limit = 2 if variant is Variant.BICLUSTER else t
    phi = [4 * edges[x] - size[x] * size[x] for x in range(full)]
    layers = [phi]
    back = [None]
    for s in range(2, limit + 1):
        prev = layers[-1]
        cur = [INF] * full
        arg = [0] * full
        for c in range(1, full):
            if size[c] < s:
                continue
            low = c & -c
            rest = c ^ low
            best, best_x = INF, 0
            sub = rest
            while True:
                x = sub | low
                if x != c:
                    val = phi[x] + prev[c ^ x]
                    if val < best:
                        best, best_x = val, x
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            cur[c], arg[c] = best, best_x
        layers.append(cur)
        back.append(arg)
    for c in range(1, full):
        if size[c] == 1:
            cost[c], choice[c] = 0, (c,)
            continue
        best, best_s = INF, 0
        for s in range(2, limit + 1):
            if layers[s - 1][c] < best:
                best, best_s = layers[s - 1][c], s
        cost[c] = (size[c] * size[c] - 2 * edges[c] + best) // 2
        sides = []
        rem, s = c, best_s
        while s > 1:
            x = back[s - 1][rem]
            sides.append(x)
            rem ^= x
            s -= 1
        sides.append(rem)
        choice[c] = tuple(sides)
    return cost, choice


def _bits(x: int) -> frozenset[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return frozenset(out)


def oracle_optimum(
    g: Graph,
    variant: Union[Variant, str],
    p: Optional[int] = None,
    t: int = 2,
    limit: Optional[int] = None,
) -> tuple[Optional[int], Optional[ClusterSolution]]:
    """True minimum edit cost and a witness clustering (None if infeasible)."""
    variant = Variant(variant)
    limit = oracle_limit() if limit is None else limit
    if g.n > limit:
        raise OracleLimitError(f"n={g.n} exceeds oracle limit {limit}")
    n = g.n
    if n == 0:
        return (0, ClusterSolution(())) if p in (None, 0) else (None, None)
    if p is not None and p > n:
        return None, None
    edges, size = _subset_tables(g)
    cost, choice = _cluster_costs(g, variant, t, edges, size)
    full = 1 << n
    # removing the within-cluster edge count turns the inter-cluster deletions into a constant m
    weight = [cost[c] - edges[c] for c in range(full)]
    levels = p if p is not None else 1
    table = [[INF] * full for _ in range(levels + 1)]
    arg = [[0] * full for _ in range(levels + 1)]
    table[0][0] = 0
    for j in range(1, levels + 1):
        prev = table[j - 1] if p is not None else table[j]
        cur, cur_arg = table[j], arg[j]
        if p is None:
            cur[0] = 0
        for s in range(1, full):
            low = s & -s
            rest = s ^ low
            best, best_c = INF, 0
            sub = rest
            while True:
                c = sub | low
                val = weight[c] + prev[s ^ c]
                if val < best:
                    best, best_c = val, c
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            cur[s], cur_arg[s] = best, best_c
    level = levels
    if table[level][full - 1] == INF:
        return None, None
    total = g.m + table[level][full - 1]
    clusters = []
    rem = full - 1
    while rem:
        c = arg[level][rem]
        clusters.append(tuple(_bits(x) for x in choice[c]))
        rem ^= c
        if p is not None:
            level -= 1
    return int(total), ClusterSolution(tuple(clusters)).canonical()


def oracle_partition(g: Graph, spec: ProblemSpec, limit: Optional[int] = None) -> SolveResult:
    """Brute-force optimum; ``yes`` iff it fits the budget.

    Cost, edits and solution describe the optimum whenever one exists, even
    when it exceeds ``spec.k``.
    """
    best, sol = oracle_optimum(g, spec.variant, spec.p, spec.t, limit)
    if best is None:
        return SolveResult.no()
    edits = forced_edits(g, sol)
    assert edits.size == best
    return SolveResult(best <= spec.k, edits, sol, best)


def _restricted_growth(n: int, blocks: Optional[int]):
    """All restricted-growth strings of length n (optionally exactly ``blocks`` blocks)."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            if blocks is None or top + 1 == blocks:
                yield tuple(a)
            return
        for b in range(top + 2):
            if blocks is not None and b >= blocks:
                break
            a[i] = b
            yield from rec(i + 1, max(top, b))

    yield from rec(1, 0)


def oracle_enumerate(g: Graph, variant: Union[Variant, str], p: Optional[int] = None, t: int = 2,
                     limit: int = 7) -> Optional[int]:
    """Optimum by literal enumeration of clusterings and side splits."""
    variant = Variant(variant)
    if g.n > limit:
        raise OracleLimitError(f"n={g.n} exceeds enumeration limit {limit}")
    if g.n == 0:
        return 0
    best = None
    sides_max = t if variant is Variant.TPARTITE else 2
    for rgs in _restricted_growth(g.n, p):
        clusters = {}
        for v, b in enumerate(rgs):
            clusters.setdefault(b, []).append(v)
        options = []
        for members in clusters.values():
            opts = []
            if len(members) == 1:
                opts.append(((members[0],),))
            elif variant is Variant.STARFOREST:
                for c in members:
                    opts.append(((c,), tuple(x for x in members if x != c)))
            else:
                for lab in _restricted_growth(len(members), None):
                    if not 2 <= max(lab) + 1 <= sides_max:
                        continue
                    split: dict = {}
                    for v, s in zip(members, lab):
                        split.setdefault(s, []).append(v)
                    opts.append(tuple(tuple(x) for x in split.values()))
            options.append(opts)
        for combo in product(*options):
            sol = ClusterSolution.from_lists(combo)
            c = forced_edits(g, sol).size
            if best is None or c < best:
                best = c
    return best


def _branch(g: Graph, variant: Variant, t: int, budget: int, deleted: frozenset, failed: set):
    obs = find_obstruction(g, variant, t)
    if obs is None:
        return deleted
    if budget == 0 or deleted in failed:
        return None
    vs = obs.vertices
    candidates = sorted(
        (min(a, b), max(a, b))
        for i, a in enumerate(vs)
        for b in vs[i + 1:]
        if g.has_edge(a, b)
    )
    for e in candidates:
        adj = list(g.adj)
        u, v = e
        adj[u] = adj[u] - {v}
        adj[v] = adj[v] - {u}
        found = _branch(Graph._trusted(tuple(adj)), variant, t, budget - 1, deleted | {e}, failed)
        if found is not None:
            return found
    failed.add(deleted)
    return None


def oracle_branch_deletion_set(
    g: Graph,
    variant: Union[Variant, str],
    k: int,
    t: int = 2,
    depth_limit: int = DEFAULT_DEPTH,
) -> Optional[EditSet]:
    """A deletion-only edit set of size <= k reaching the class, or None."""
    variant = Variant(variant)
    if k > depth_limit:
        raise OracleLimitError(f"budget {k} exceeds branching depth limit {depth_limit}")
    found = _branch(g, variant, t, k, frozenset(), set())
    if found is None:
        return None
    return EditSet(deletions=found)


def oracle_branch_deletion(
    g: Graph,
    variant: Union[Variant, str],
    k: int,
    t: int = 2,
    depth_limit: int = DEFAULT_DEPTH,
) -> bool:
    """Whether at most k edge deletions suffice."""
    return oracle_branch_deletion_set(g, variant, k, t, depth_limit) is not None
