"""Editing to exactly p stars.

Once the set S of star centers is fixed, the cheapest completion deletes every
edge inside S and every edge between two non-centers, keeps one edge to S for
each other vertex and attaches vertices with no neighbor in S. Its cost is
``m - n + |S| + 2 * (#vertices not dominated by S)``. The solver splits off the
components with at most two vertices, which have a closed form, and
enumerates centers among the degree >= 2 vertices of the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .graph import (
    ClusterSolution,
    EditSet,
    Graph,
    ProblemSpec,
    SolveResult,
    Variant,
    connected_components,
    forced_edits,
)
from .kernel import kernelize, lift_solution


class Check(str, Enum):
    PASS = "pass"
    PRUNE = "prune"


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class SplitInstance:
    g1_vertices: frozenset[int]
    g2_vertices: frozenset[int]
    s: int
    t_iso: int


@dataclass(frozen=True)
class BudgetGuess:
    p1: int
    p2: int
    k1: int
    k2: int


def degree_bound_check(g: Graph, p: int, k: int) -> Check:
    """A yes-instance has at most p + 2k vertices of degree >= 2."""
    high = sum(1 for nb in g.adj if len(nb) >= 2)
    return Check.PRUNE if high > p + 2 * k else Check.PASS


def split_instance(g: Graph) -> SplitInstance:
    small, rest = set(), set()
    s = t_iso = 0
    for comp in connected_components(g):
        if len(comp) <= 2:
            small.update(comp)
            if len(comp) == 2:
                s += 1
            else:
                t_iso += 1
        else:
            rest.update(comp)
    return SplitInstance(frozenset(small), frozenset(rest), s, t_iso)


def _singleton_order(g: Graph, centers: set[int]) -> list[int]:
    """Non-centers, cheapest to isolate first: undominated ones save an attachment."""
    out = [v for v in range(g.n) if v not in centers]
    return sorted(out, key=lambda v: (0 if not (g.adj[v] & centers) else 1, v))


def centers_cost(g: Graph, centers: Iterable[int], r: int = 0) -> Optional[int]:
    """Cost of the best starforest with the given centers plus r extra singletons."""
    centers = set(centers)
    outside = g.n - len(centers)
    if r > outside:
        return None
    covered = set(centers)
    for c in centers:
        covered |= g.adj[c]
    z = g.n - len(covered)
    if not centers and r < outside:
        return None
    return g.m - g.n + len(centers) + 2 * z - min(r, z) + max(0, r - z)


def solve_with_centers(g: Graph, centers: Iterable[int], r: int = 0) -> EditSet:
    """Minimum edits so that ``centers`` plus r singletons form all the stars."""
    centers = set(centers)
    if not centers <= set(range(g.n)):
        raise ValueError("centers must be vertices of g")
    if r < 0:
        raise ValueError("r must be non-negative")
    outside = [v for v in range(g.n) if v not in centers]
    if r > len(outside):
        raise InfeasibleError(f"{r} singletons requested, only {len(outside)} non-centers")
    if not centers and r < len(outside):
        raise InfeasibleError("no center to attach the remaining vertices to")
    singles = set(_singleton_order(g, centers)[:r])
    deletions, additions = set(), set()
    first_center = min(centers) if centers else None
    for u, v in g.edges():
        if (u in centers) == (v in centers):
            deletions.add((u, v))
    for v in outside:
        hubs = sorted(g.adj[v] & centers)
        keep = None if v in singles else (hubs[0] if hubs else None)
        for c in hubs:
            if c != keep:
                deletions.add((min(v, c), max(v, c)))
        if v not in singles and keep is None:
            additions.add((min(v, first_center), max(v, first_center)))
    return EditSet(frozenset(additions), frozenset(deletions))


def star_solution(g: Graph, edits: EditSet) -> ClusterSolution:
    """Read the stars off ``g △ edits``; center side first."""
    from .graph import apply_edits, recognize

    sol = recognize(apply_edits(g, edits), Variant.STARFOREST)
    if sol is None:
        raise AssertionError("edits do not produce a starforest")
    return sol


def _g1_dominated(s: int, t_iso: int, p1: int) -> int:
    on_edges = min(p1, s)
    return 2 * on_edges + min(max(p1 - s, 0), t_iso)


def solve_g1(s: int, t_iso: int, p1: int, k1: Optional[int] = None) -> Optional[tuple[int, list[tuple[str, int]]]]:
    """Cheapest way to turn s isolated edges and t_iso isolated vertices into p1 stars.

    Returns ``(cost, recipe)`` where the recipe lists center placements
    ``("edge", i)`` / ``("vertex", j)`` / ``("split", i)``, or None when
    infeasible or over budget ``k1``.
    """
    if p1 < 1 or s < 0 or t_iso < 0 or s + t_iso < 1:
        raise ValueError("need p1 >= 1 and a nonempty G1")
    n1 = 2 * s + t_iso
    if p1 > n1:
        return None
    cost = s - n1 + p1 + 2 * (n1 - _g1_dominated(s, t_iso, p1))
    if k1 is not None and cost > k1:
        return None
    recipe = [("edge", i) for i in range(min(p1, s))]
    left = p1 - len(recipe)
    recipe += [("vertex", j) for j in range(min(left, t_iso))]
    left -= min(left, t_iso)
    recipe += [("split", i) for i in range(left)]
    return cost, recipe


def _g1_centers(g: Graph, split: SplitInstance, p1: int) -> set[int]:
    edges, singles = [], []
    for comp in connected_components(g):
        if len(comp) == 2:
            edges.append(comp)
        elif len(comp) == 1 and comp[0] in split.g1_vertices:
            singles.append(comp[0])
    _, recipe = solve_g1(split.s, split.t_iso, p1)
    centers = set()
    for kind, i in recipe:
        if kind == "edge":
            centers.add(edges[i][0])
        elif kind == "vertex":
            centers.add(singles[i])
        else:
            centers.add(edges[i][1])
    return centers


def _g2_table(g2: Graph, p: int) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Best (cost, centers) on G2 for every star count 0..p.

    Centers range over degree >= 2 vertices; the remaining stars are
    singletons taken from the other vertices.
    """
    n, m = g2.n, g2.m
    masks = g2.masks
    high = [v for v in range(n) if len(g2.adj[v]) >= 2]
    best: dict[int, tuple[int, tuple[int, ...]]] = {}
    if n == 0:
        return {0: (0, ())}
    best[0] = (m + n, ())  # no star inside G2: dissolve it and attach elsewhere
    for size in range(0, min(p, len(high)) + 1):
        for S in combinations(high, size):
            cover = 0
            for c in S:
                cover |= masks[c] | (1 << c)
            z = n - cover.bit_count()
            outside = n - size
            for p2 in range(max(size, 1), p + 1):
                r = p2 - size
                if r > outside or (size == 0 and r < outside):
                    continue
                cost = m - n + size + 2 * z - min(r, z) + max(0, r - z)
                if p2 not in best or cost < best[p2][0]:
                    best[p2] = (cost, S)
    return best


def guesses(p: int, k: int, g1_empty: bool, g2_empty: bool) -> Iterator[BudgetGuess]:
    for p1 in range(0, p + 1):
        if g1_empty and p1 > 0:
            break
        if g2_empty and p1 < p:
            continue
        for k1 in range(0, k + 1):
            if g1_empty and k1 > 0:
                break
            if g2_empty and k1 < k:
                continue
            yield BudgetGuess(p1, p - p1, k1, k - k1)


def _solve_exact_p(g: Graph, p: int, k: int) -> Optional[tuple[int, set[int], int]]:
    """Best (cost, centers, singleton count) with exactly p stars and cost <= k."""
    if p > g.n:
        return None
    if degree_bound_check(g, p, k) is Check.PRUNE:
        return None
    split = split_instance(g)
    g2, g2_ids = g.induced(split.g2_vertices)
    table = _g2_table(g2, p)
    g1_empty = not split.g1_vertices
    g1_cost: dict[int, int] = {}
    for p1 in range(0, p + 1):
        if g1_empty:
            g1_cost[p1] = 0 if p1 == 0 else None
        elif p1 == 0:
            g1_cost[p1] = 3 * split.s + split.t_iso
        else:
            res = solve_g1(split.s, split.t_iso, p1)
            g1_cost[p1] = None if res is None else res[0]
    best = None
    for guess in guesses(p, k, g1_empty, g2.n == 0):
        c1 = g1_cost[guess.p1]
        entry = table.get(guess.p2)
        if c1 is None or entry is None:
            continue
        if guess.p1 == 0 and guess.p2 == 0:
            continue
        if c1 > guess.k1 or entry[0] > guess.k2:
            continue
        total = c1 + entry[0]
        if best is None or total < best[0]:
            best = (total, guess, entry[1])
    if best is None:
        return None
    total, guess, s2 = best
    centers = {g2_ids[v] for v in s2}
    if guess.p1 > 0:
        centers |= _g1_centers(g, split, guess.p1)
    r = p - len(centers)
    return total, centers, r


def solve_p_starforest(
    g: Graph,
    p: int,
    k: int,
    at_most: bool = False,
    use_kernel: bool = True,
) -> SolveResult:
    """Decide whether at most k edits turn g into exactly p stars (or at most p)."""
    if p < 1 or k < 0:
        raise ValueError("need p >= 1 and k >= 0")
    targets = range(1, p + 1) if at_most else (p,)
    best = None
    for q in targets:
        res = _solve_reduced(g, q, k, use_kernel)
        if res.yes and (best is None or res.cost < best.cost):
            best = res
    return best if best is not None else SolveResult.no()


def _solve_reduced(g: Graph, p: int, k: int, use_kernel: bool) -> SolveResult:
    if use_kernel:
        kr = kernelize(g, ProblemSpec(Variant.STARFOREST, k=k, p=p))
        if kr.rejected:
            return SolveResult.no(kernel=kr.verdict.value)
        work = kr.reduced
    else:
        work = g
    found = _solve_exact_p(work, p, k)
    if found is None:
        return SolveResult.no()
    cost, centers, r = found
    edits = solve_with_centers(work, centers, r)
    assert edits.size == cost, (edits.size, cost)
    sol = star_solution(work, edits)
    if use_kernel and kr.removed:
        touched = {v for e in edits.pairs() for v in e}
        sol = lift_solution(kr, sol, touched)
        edits = forced_edits(g, sol)
        assert edits.size == cost
        sol = star_solution(g, edits)
    return SolveResult(True, edits, sol, cost)
