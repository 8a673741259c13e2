"""Bicluster and t-partite cluster editing with a fixed number of clusters.

The search guesses, for one cluster at a time, the sides that are small
(``|X|^2 <= 4k``) explicitly and recovers the large sides from cheap
vertices, i.e. vertices incident to at most ``sqrt(k)`` edits, whose edited
neighborhood is exactly the union of the other sides. Every cluster keeps at
most one side open; once all p clusters are fixed, the remaining vertices
are placed into open sides independently, which generalizes the greedy for
annotated bicluster editing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph import (
    ClusterSolution,
    EditSet,
    Graph,
    ProblemSpec,
    SolveResult,
    Variant,
    forced_edits,
    is_valid_solution,
)
from .kernel import kernelize, lift_solution

INF = float("inf")
_NEVER = 1 << 40


@dataclass(frozen=True)
class AnnotatedInstance:
    """Bipartite graph with a declared side A already split into clusters."""

    graph: Graph
    side_a: frozenset[int]
    partition: tuple[frozenset[int], ...]
    k: int

    def __post_init__(self) -> None:
        side_a = frozenset(self.side_a)
        parts = tuple(frozenset(x) for x in self.partition)
        object.__setattr__(self, "side_a", side_a)
        object.__setattr__(self, "partition", parts)
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if any(not part for part in parts):
            raise ValueError("partition blocks must be nonempty")
        union: set[int] = set()
        for part in parts:
            if union & part:
                raise ValueError("partition blocks overlap")
            union |= part
        if union != side_a:
            raise ValueError("partition must cover A exactly")
        g = self.graph
        if any(not 0 <= v < g.n for v in side_a):
            raise ValueError("A contains vertices outside the graph")
        for v in range(g.n):
            inside = v in side_a
            if any((u in side_a) == inside for u in g.adj[v]):
                raise ValueError("graph is not bipartite with respect to A")

    @property
    def side_b(self) -> list[int]:
        return [v for v in range(self.graph.n) if v not in self.side_a]


@dataclass(frozen=True)
class CheapGuess:
    """Guess for one cluster: its small sides, plus cheap vertices for the large ones.

    The large side behind cheap vertex ``v`` is read off
    ``N_G(v) △ N`` for its edited neighborhood ``N``.
    """

    small_sides: tuple[frozenset[int], ...] = ()
    cheap_vertices: tuple[int, ...] = ()
    edited_neighborhoods: tuple[frozenset[int], ...] = ()

    def __post_init__(self) -> None:
        if len(self.cheap_vertices) != len(self.edited_neighborhoods):
            raise ValueError("one edited neighborhood per cheap vertex")

    def neighborhoods(self, g: Graph) -> list[frozenset[int]]:
        return [g.adj[v] ^ nb for v, nb in zip(self.cheap_vertices, self.edited_neighborhoods)]


def abe_cost(v: int, part: Iterable[int], g: Graph) -> int:
    """Edits at v for joining the cluster whose fixed side is ``part``."""
    part = part if isinstance(part, (set, frozenset)) else set(part)
    if v in part:
        raise ValueError("v must not lie in the fixed side")
    return len(part) - 2 * len(g.adj[v] & part) + len(g.adj[v])


def solve_annotated(inst: AnnotatedInstance) -> SolveResult:
    """Place every B vertex with the cluster of least cost; ties go to the smaller index.

    Runs in O(n + m) plus the size of the edit set, which is only built when
    the cost fits the budget. A cluster left without B vertices is only a
    valid biclique when its A block is a single vertex, so such outcomes are
    reported as no with ``stats["degenerate"]`` listing the offenders.
    """
    g = inst.graph
    parts = inst.partition
    label = {}
    for i, part in enumerate(parts):
        for a in part:
            label[a] = i
    sizes = [len(part) for part in parts]
    members: list[list[int]] = [[] for _ in parts]
    total = 0
    for b in inst.side_b:
        nb = g.adj[b]
        hits = [0] * len(parts)
        for a in nb:
            hits[label[a]] += 1
        deg = len(nb)
        best, best_i = None, -1
        for i, size in enumerate(sizes):
            c = size - 2 * hits[i] + deg
            if best is None or c < best:
                best, best_i = c, i
        members[best_i].append(b)
        total += best
    clusters = []
    degenerate = []
    for i, part in enumerate(parts):
        if members[i]:
            clusters.append((part, frozenset(members[i])))
        else:
            clusters.append((part,))
            if len(part) > 1:
                degenerate.append(i)
    sol = ClusterSolution(tuple(clusters))
    stats = {"degenerate": degenerate} if degenerate else {}
    if total > inst.k or degenerate:
        # the edit list can be quadratic, so it is only built for yes answers
        return SolveResult(False, None, sol, total, stats)
    additions, deletions = set(), set()
    for i, part in enumerate(parts):
        for b in members[i]:
            nb = g.adj[b]
            for a in nb:
                if a not in part:
                    deletions.add((a, b) if a < b else (b, a))
            for a in part - nb:
                additions.add((a, b) if a < b else (b, a))
    edits = EditSet(frozenset(additions), frozenset(deletions))
    return SolveResult(True, edits, sol, total, stats)


# -- search over cluster guesses ---------------------------------------------


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def _subsets(pool: list[int], max_size: int) -> Iterator[int]:
    """Bitmasks of all subsets of ``pool`` with at most ``max_size`` elements."""
    for r in range(0, min(max_size, len(pool)) + 1):
        for combo in combinations(pool, r):
            mask = 0
            for v in combo:
                mask |= 1 << v
            yield mask


@dataclass(frozen=True)
class _Cluster:
    sides: tuple[int, ...]  # known sides as bitmasks
    is_open: bool  # whether unassigned vertices may join a fresh side
    guess: CheapGuess = field(compare=False)
    known: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        out = 0
        for s in self.sides:
            out |= s
        object.__setattr__(self, "known", out)

    @property
    def key(self) -> int:
        return (self.known & -self.known).bit_length() - 1

    @property
    def needs_cover(self) -> bool:
        return self.is_open and len(self.sides) == 1 and self.sides[0].bit_count() > 1


def _union(sides: Iterable[int]) -> int:
    out = 0
    for s in sides:
        out |= s
    return out


def _small_guess(sides: Sequence[int], cheap=(), edited=()) -> CheapGuess:
    return CheapGuess(
        tuple(frozenset(_bits(s)) for s in sides),
        tuple(cheap),
        tuple(frozenset(_bits(e)) for e in edited),
    )


class _Engine:
    """Depth-first search over cluster guesses with an incremental lower bound.

    Clusters are fixed in increasing order of their smallest known vertex
    (the key). Hence an unknown vertex below the current key can only end up
    in an open side, which the bound exploits.
    """

    def __init__(self, g: Graph, p: int, k: int, t: int):
        self.g = g
        self.n = g.n
        self.adj = g.masks
        self.p, self.k, self.t = p, k, t
        self.small = isqrt(4 * k)  # |X| <= small  <=>  |X|^2 <= 4k
        self.cheap = isqrt(k)  # edits(v) <= cheap  <=>  edits(v)^2 <= k
        self.full = (1 << g.n) - 1
        self.best_cost = k + 1
        self.best: Optional[tuple] = None
        self.nodes = 0

    # bookkeeping -----------------------------------------------------------

    def _side_cost(self, side: int, known: int, cur: int) -> int:
        """Exact cost of pairs created by adding ``side`` as a new side of the current cluster.

        ``known`` holds every known vertex (including ``cur``, the current
        cluster's known part).
        """
        adj = self.adj
        cost = 0
        size = cur.bit_count()
        for x in _bits(side):
            row = adj[x]
            cost += (row & known).bit_count() + size - 2 * (row & cur).bit_count()
        inner = 0
        for x in _bits(side):
            inner += (adj[x] & side).bit_count()
        return cost + inner // 2

    def _vertex_cost(self, x: int, known: int, cur: int, same: int) -> int:
        """Exact cost of pairs created by adding x to side ``same`` of the current cluster."""
        row = self.adj[x]
        other = cur & ~same
        return (row & known).bit_count() + other.bit_count() - 2 * (row & other).bit_count()

    def _bound(self, done: list[_Cluster], known: int, kcost: int, later: int, future: bool,
               cur_sides: tuple[int, ...] = (), cur_open: bool = False, joinable: int = 0) -> float:
        """Lower bound on any leaf below the current node.

        ``later`` holds the unknown vertices that may still become known in a
        cluster after the current one, ``joinable`` those that may still join
        a known side of the cluster under construction (``cur_sides``), and
        ``cur_open`` tells whether that cluster keeps an open side. Every
        other unknown vertex is bound for an open side, so edges among those
        are deleted in any completion. ``future`` says whether clusters after
        the current one remain; joining one of them costs nothing extra here.
        """
        adj = self.adj
        bound = kcost
        rest = self.full & ~known
        opens = [(c.known, c.known.bit_count()) for c in done if c.is_open]
        cur = _union(cur_sides)
        cur_size = cur.bit_count()
        side_info = [(x, x.bit_count()) for x in cur_sides]
        new_side = len(cur_sides) < self.t
        pinned = rest & ~later & ~joinable
        start = 0 if future else _NEVER
        while rest:
            bit = rest & -rest
            rest ^= bit
            row = adj[bit.bit_length() - 1]
            best = start
            for kc, size in opens:
                d = size - 2 * (row & kc).bit_count()
                if d < best:
                    best = d
            base = cur_size - 2 * (row & cur).bit_count()
            if joinable & bit:
                if (cur_open or new_side) and base < best:
                    best = base
                for x, size in side_info:
                    d = base + 2 * (row & x).bit_count() - size
                    if d < best:
                        best = d
            elif cur_open and base < best:
                best = base
            if best == _NEVER:
                return INF
            bound += (row & known).bit_count() + best
            if pinned & bit:
                bound += (row & pinned & (bit - 1)).bit_count()
        return bound

    # search ----------------------------------------------------------------

    def run(self) -> Optional[tuple[int, list[_Cluster], dict[int, int]]]:
        if self.p > self.n:
            return None
        self._next_cluster([], 0, 0, -1)
        return self.best

    def _next_cluster(self, done: list[_Cluster], known: int, kcost: int, theta: int) -> None:
        self.nodes += 1
        if len(done) == self.p:
            res = self.leaf(done, known, kcost)
            if res is not None and res[0] < self.best_cost:
                self.best_cost = res[0]
                self.best = (res[0], list(done), res[1])
            return
        left = self.p - len(done)
        pool = self.full & ~known & ~((1 << (theta + 1)) - 1)
        if pool.bit_count() < left:
            return
        if self._bound(done, known, kcost, pool, True) >= self.best_cost:
            return
        if self.small == 0:
            # a single closed vertex; otherwise a listed side {v} with an empty open side covers it
            for v in _bits(pool):
                cost = kcost + (self.adj[v] & known).bit_count()
                self._finish(done, known, cost, _Cluster((1 << v,), False, _small_guess((1 << v,))))
        # at most one large side: list the small sides, leave one side open
        if self.small >= 1:
            for v in _bits(pool):
                side = 1 << v
                cost = kcost + (self.adj[v] & known).bit_count()
                self._grow(done, known | side, cost, (side,), v)
        # two large sides, or three and more
        self._large(done, known, kcost, theta)
        if self.t >= 3:
            self._large_many(done, known, kcost, theta)

    def _finish(self, done, known, kcost, cl: _Cluster) -> None:
        if kcost >= self.best_cost:
            return
        self._next_cluster(done + [cl], known | cl.known, kcost, cl.key)

    def _grow(self, done, known, kcost, sides, last) -> None:
        """Extend the listed small sides vertex by vertex, keeping one side open.

        ``last`` is the newest vertex of the last side; sides are ordered by
        their smallest vertex and the first one holds the cluster key.
        """
        self.nodes += 1
        rest = self.full & ~known
        tail = sides[-1]
        first = (tail & -tail).bit_length() - 1
        key = (sides[0] & -sides[0]).bit_length() - 1
        future = len(done) + 1 < self.p
        later = rest >> (key + 1) << (key + 1) if future else 0
        joinable = 0
        if tail.bit_count() < self.small:
            joinable |= rest >> (last + 1) << (last + 1)
        if len(sides) < self.t - 1:
            joinable |= rest >> (first + 1) << (first + 1)
        if self._bound(done, known, kcost, later, future, sides, True, joinable) >= self.best_cost:
            return
        self._finish(done, known, kcost, _Cluster(sides, True, _small_guess(sides)))
        cur = _union(sides)
        if tail.bit_count() < self.small:
            for x in _bits(rest >> (last + 1)):
                x += last + 1
                cost = kcost + self._vertex_cost(x, known, cur, tail)
                self._grow(done, known | (1 << x), cost, sides[:-1] + (tail | (1 << x),), x)
        if len(sides) < self.t - 1:
            for y in _bits(rest >> (first + 1)):
                y += first + 1
                cost = kcost + self._vertex_cost(y, known, cur, 0)
                self._grow(done, known | (1 << y), cost, sides + (1 << y,), y)

    def _cheap_neighborhoods(self, w: int, must_in: int, must_out: int, pool: int) -> Iterator[tuple[int, int]]:
        """Edited neighborhoods of w: ``(N_H(w), edit mask)`` with at most ``cheap`` edits.

        ``must_in`` vertices have to be neighbors in H, ``must_out`` must not;
        free changes are drawn from ``pool``.
        """
        base = self.adj[w]
        forced = (must_in & ~base) | (must_out & base)
        room = self.cheap - forced.bit_count()
        if room < 0:
            return
        free = _bits(pool & ~must_in & ~must_out & ~(1 << w))
        for extra in _subsets(free, room):
            edit = forced | extra
            yield base ^ edit, edit

    def _small_lists(self, mask: int, most: int) -> Iterator[tuple[int, ...]]:
        """All lists of at most ``most`` disjoint small sides inside ``mask``, ordered by minimum."""
        yield ()
        if most == 0 or self.small == 0:
            return

        def rec(avail: int, floor: int, acc: tuple[int, ...]):
            for v in _bits(avail >> (floor + 1)):
                v += floor + 1
                higher = _bits(avail >> (v + 1) << (v + 1))
                for extra in _subsets(higher, self.small - 1):
                    side = extra | (1 << v)
                    out = acc + (side,)
                    yield out
                    if len(out) < most:
                        yield from rec(avail & ~side, v, out)

        yield from rec(mask, -1, ())

    def _add_sides(self, known: int, kcost: int, sides: Iterable[int]) -> int:
        """Cost after adding a whole cluster given by its sides."""
        cur = 0
        for s in sides:
            kcost += self._side_cost(s, known, cur)
            known |= s
            cur |= s
        return kcost

    def _large(self, done, known, kcost, theta) -> None:
        """Clusters with exactly two large sides.

        A cheap vertex w of one large side sees, after editing, the other
        large side together with all small sides; split that neighborhood.
        """
        large_min = self.small + 1
        rest = self.full & ~known
        above = rest & ~((1 << (theta + 1)) - 1)
        if above.bit_count() < large_min:
            return
        seen = set()
        for w in _bits(rest):
            for nh, edit in self._cheap_neighborhoods(w, 0, known, rest):
                if nh & ~above or nh.bit_count() < large_min:
                    continue
                for smalls in self._small_lists(nh, self.t - 2):
                    side = nh & ~_union(smalls)
                    if side.bit_count() < large_min:
                        continue
                    sides = tuple(sorted(smalls + (side,), key=lambda s: s & -s))
                    if sides in seen:
                        continue
                    seen.add(sides)
                    cost = self._add_sides(known, kcost, sides)
                    if cost >= self.best_cost:
                        continue
                    guess = _small_guess(smalls, (w,), (edit,))
                    self._finish(done, known, cost, _Cluster(sides, True, guess))

    def _large_many(self, done, known, kcost, theta) -> None:
        """Closed clusters with three or more large sides, each recovered as an
        intersection of cheap-vertex neighborhoods."""
        large_min = self.small + 1
        rest = self.full & ~known
        above = rest & ~((1 << (theta + 1)) - 1)
        seen = set()
        for big in range(3, self.t + 1):
            if above.bit_count() < big * large_min:
                break
            for ws in combinations(_bits(above), big):
                wmask = _union(1 << w for w in ws)
                options = [
                    list(self._cheap_neighborhoods(w, wmask & ~(1 << w), known, rest))
                    for w in ws
                ]
                for chosen in _product(options):
                    common = above
                    for nh, _ in chosen:
                        common &= nh
                    for smalls in self._small_lists(common, self.t - big):
                        used = _union(smalls)
                        sides = []
                        for j in range(big):
                            side = above & ~used
                            for i in range(big):
                                if i != j:
                                    side &= chosen[i][0]
                            if not (side >> ws[j]) & 1 or side.bit_count() < large_min:
                                break
                            sides.append(side)
                        else:
                            if sum(x.bit_count() for x in sides) != _union(sides).bit_count():
                                continue
                            allsides = tuple(sorted(smalls + tuple(sides), key=lambda x: x & -x))
                            if allsides in seen:
                                continue
                            seen.add(allsides)
                            cost = self._add_sides(known, kcost, allsides)
                            if cost >= self.best_cost:
                                continue
                            guess = _small_guess(smalls, ws, [c[1] for c in chosen])
                            self._finish(done, known, cost, _Cluster(allsides, False, guess))

    # leaves ----------------------------------------------------------------

    def leaf(self, clusters: list[_Cluster], known: int, kcost: int) -> Optional[tuple[int, dict[int, int]]]:
        """Exact completion: every unknown vertex joins the open side of least cost."""
        adj = self.adj
        restmask = self.full & ~known
        rest = _bits(restmask)
        opens = [i for i, c in enumerate(clusters) if c.is_open]
        if rest and not opens:
            return None
        cost = kcost + sum((adj[u] & restmask).bit_count() for u in rest) // 2
        table = []
        assign: dict[int, int] = {}
        for u in rest:
            row = adj[u]
            dk = (row & known).bit_count()
            costs = [clusters[i].known.bit_count() - 2 * (row & clusters[i].known).bit_count() + dk for i in opens]
            table.append(costs)
            j = min(range(len(opens)), key=costs.__getitem__)
            assign[u] = opens[j]
            cost += costs[j]
        need = [j for j, i in enumerate(opens) if clusters[i].needs_cover]
        taken = set(assign.values())
        if any(opens[j] not in taken for j in need):
            if len(rest) < len(need):
                return None
            # every open side that must be nonempty receives a distinct vertex
            extra = np.array([[table[r][j] - min(table[r]) for r in range(len(rest))] for j in need])
            rows, cols = linear_sum_assignment(extra)
            cost += int(extra[rows, cols].sum())
            for j, r in zip(rows, cols):
                assign[rest[r]] = opens[need[j]]
        return cost, assign


def _product(options: list[list]) -> Iterator[list]:
    if not options:
        yield []
        return
    for head in options[0]:
        for tail in _product(options[1:]):
            yield [head] + tail


def _solution_from(best, n: int) -> ClusterSolution:
    _, clusters, assign = best
    out = []
    for i, cl in enumerate(clusters):
        sides = [frozenset(_bits(s)) for s in cl.sides]
        joined = frozenset(u for u, c in assign.items() if c == i)
        if joined:
            sides.append(joined)
        out.append(tuple(sides))
    return ClusterSolution(tuple(out)).canonical()


def _solve_clusters(g: Graph, variant: Variant, p: int, k: int, t: int, use_kernel: bool) -> SolveResult:
    if p < 1 or k < 0:
        raise ValueError("need p >= 1 and k >= 0")
    spec = ProblemSpec(variant, k=k, p=p, t=t)
    work, kr = g, None
    if use_kernel:
        kr = kernelize(g, spec)
        if kr.rejected:
            return SolveResult.no(kernel=kr.verdict.value)
        work = kr.reduced
    engine = _Engine(work, p, k, t)
    best = engine.run()
    stats = {"nodes": engine.nodes}
    if best is None:
        return SolveResult.no(**stats)
    sol = _solution_from(best, work.n)
    edits = forced_edits(work, sol)
    if kr is not None and kr.removed:
        touched = {v for e in edits.pairs() for v in e}
        sol = lift_solution(kr, sol, touched).canonical()
        edits = forced_edits(g, sol)
    if edits.size != best[0] or not is_valid_solution(g, sol, variant, t, p):
        raise AssertionError("branch cost does not match its solution")
    stats["guesses"] = [cl.guess for cl in best[1]]
    return SolveResult(True, edits, sol, edits.size, stats)


def solve_p_bicluster(g: Graph, p: int, k: int, use_kernel: bool = True) -> SolveResult:
    """Decide whether at most k edits turn g into exactly p bicliques."""
    return _solve_clusters(g, Variant.BICLUSTER, p, k, 2, use_kernel)


def solve_t_partite(g: Graph, t: int, p: int, k: int, use_kernel: bool = True) -> SolveResult:
    """Decide whether at most k edits turn g into exactly p complete multipartite graphs with at most t sides."""
    if t < 2:
        raise ValueError("t must be at least 2")
    return _solve_clusters(g, Variant.TPARTITE, p, k, t, use_kernel)
