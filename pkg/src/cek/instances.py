"""Instance generators: the 3SAT and multicolored independent set reductions,
planted cluster graphs and plain random graphs."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, TextIO, Union

import numpy as np

from .graph import ClusterSolution, EditSet, Graph, apply_edits, forced_edits

GADGET_LABELS = ("top", "bot", "A", "B", "C", "D")


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF formula; literals are signed 1-based variable ids."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for c in clauses:
            if len(c) != 3:
                raise FormulaError(f"clause {c} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise FormulaError(f"literal {lit} outside 1..{self.num_vars}")
            if len({abs(lit) for lit in c}) != 3:
                raise FormulaError(f"clause {c} repeats a variable")

    def occurrences(self) -> dict[int, list[tuple[int, bool]]]:
        """Per variable, its clauses in order as ``(clause index, positive)``."""
        occ: dict[int, list[tuple[int, bool]]] = {x: [] for x in range(1, self.num_vars + 1)}
        for ci, c in enumerate(self.clauses):
            for lit in c:
                occ[abs(lit)].append((ci, lit > 0))
        return occ

    def satisfied_by(self, alpha: Mapping[int, bool]) -> bool:
        return all(any(alpha[abs(lit)] == (lit > 0) for lit in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(lit) for lit in c) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = num_clauses = None
    tokens: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"bad problem line: {line!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        try:
            tokens.extend(int(x) for x in line.split())
        except ValueError as exc:
            raise FormulaError(f"bad clause line: {line!r}") from exc
    if num_vars is None:
        raise FormulaError("missing 'p cnf' header")
    clauses, cur = [], []
    for tok in tokens:
        if tok == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(tok)
    if cur:
        raise FormulaError("last clause is not terminated by 0")
    if len(clauses) != num_clauses:
        raise FormulaError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def read_dimacs(source: Union[str, os.PathLike, TextIO]) -> CnfFormula:
    if hasattr(source, "read"):
        return parse_dimacs(source.read())
    with open(source) as fh:
        return parse_dimacs(fh.read())


def write_dimacs(phi: CnfFormula, target: Union[str, os.PathLike, TextIO]) -> None:
    if hasattr(target, "write"):
        target.write(phi.to_dimacs())
        return
    with open(target, "w") as fh:
        fh.write(phi.to_dimacs())


@dataclass(frozen=True)
class GadgetMap:
    """Vertex ids of the reduction graph.

    ``variable[x][i]`` holds the six ids of block i of x's cycle in the order
    top, bot, A, B, C, D; ``clause[c]`` is the id of clause c's vertex.
    """

    variable: dict[int, tuple[tuple[int, int, int, int, int, int], ...]]
    clause: tuple[int, ...]

    def vertex(self, x: int, label: str, i: int) -> int:
        block = self.variable[x]
        return block[i % len(block)][GADGET_LABELS.index(label)]

    def to_json(self) -> dict:
        return {
            "variables": {
                str(x): [dict(zip(GADGET_LABELS, blk)) for blk in blocks]
                for x, blocks in self.variable.items()
            },
            "clauses": list(self.clause),
        }


def reduce_3sat(phi: CnfFormula) -> tuple[Graph, int, GadgetMap]:
    """Starforest editing instance with budget 8|C| that is yes iff phi is satisfiable."""
    occ = phi.occurrences()
    missing = [x for x, o in occ.items() if not o]
    if missing:
        raise FormulaError(f"variables without occurrences: {missing}")
    edges = []
    variable = {}
    nxt = 0
    for x in range(1, phi.num_vars + 1):
        px = len(occ[x])
        ids = list(range(nxt, nxt + 6 * px))
        nxt += 6 * px
        variable[x] = tuple(tuple(ids[6 * i: 6 * i + 6]) for i in range(px))
        for j in range(6 * px):
            a, b = ids[j], ids[(j + 1) % (6 * px)]
            edges.append((min(a, b), max(a, b)))
    clause_ids = tuple(range(nxt, nxt + len(phi.clauses)))
    gmap = GadgetMap(variable, clause_ids)
    for x, occurrences in occ.items():
        for i, (ci, positive) in enumerate(occurrences):
            target = gmap.vertex(x, "top" if positive else "bot", i)
            edges.append((target, clause_ids[ci]))
    g = Graph(nxt + len(phi.clauses), edges)
    return g, 8 * len(phi.clauses), gmap


def variable_deletions(phi: CnfFormula, gmap: GadgetMap, x: int, value: bool) -> set[tuple[int, int]]:
    """The true- or false-deletion of x's cycle: every third edge."""
    px = len(gmap.variable[x])
    out = set()
    for i in range(px):
        if value:
            pairs = [("C", i, "D", i), ("bot", i, "A", i)]
        else:
            pairs = [("A", i, "B", i), ("D", i, "top", i + 1)]
        for la, ia, lb, ib in pairs:
            a, b = gmap.vertex(x, la, ia), gmap.vertex(x, lb, ib)
            out.add((min(a, b), max(a, b)))
    return out


def satisfying_edit(phi: CnfFormula, alpha: Mapping[int, bool], gmap: GadgetMap) -> EditSet:
    """Deletion set of size 8|C| built from a satisfying assignment.

    Each clause keeps only the edge to its first satisfying literal.
    """
    if not phi.satisfied_by(alpha):
        raise FormulaError("assignment does not satisfy the formula")
    deletions: set[tuple[int, int]] = set()
    for x in range(1, phi.num_vars + 1):
        deletions |= variable_deletions(phi, gmap, x, bool(alpha[x]))
    occ = phi.occurrences()
    slot = {}
    for x, occurrences in occ.items():
        for i, (ci, positive) in enumerate(occurrences):
            slot[(ci, x)] = gmap.vertex(x, "top" if positive else "bot", i)
    for ci, c in enumerate(phi.clauses):
        keep = next(lit for lit in c if alpha[abs(lit)] == (lit > 0))
        v = gmap.clause[ci]
        for lit in c:
            if lit != keep:
                u = slot[(ci, abs(lit))]
                deletions.add((min(u, v), max(u, v)))
    return EditSet(deletions=frozenset(deletions))


def random_3sat(num_vars: int, num_clauses: int, rng: np.random.Generator,
                plant: Optional[Mapping[int, bool]] = None) -> CnfFormula:
    """Random 3-CNF where every variable occurs; with ``plant`` every clause is satisfied by it."""
    if num_vars < 3 or num_vars > 3 * num_clauses:
        raise ValueError("need 3 <= num_vars <= 3 * num_clauses")
    for _ in range(1000):
        clauses = []
        for _ in range(num_clauses):
            xs = rng.choice(num_vars, size=3, replace=False) + 1
            signs = rng.integers(0, 2, size=3)
            if plant is not None and not any(plant[int(x)] == bool(s) for x, s in zip(xs, signs)):
                j = int(rng.integers(0, 3))
                signs[j] = int(plant[int(xs[j])])
            clauses.append(tuple(int(x) if s else -int(x) for x, s in zip(xs, signs)))
        phi = CnfFormula(num_vars, tuple(clauses))
        if all(phi.occurrences().values()):
            return phi
    raise RuntimeError("could not cover every variable")


# -- multicolored regular independent set --------------------------------------


@dataclass(frozen=True)
class ColoredRegularGraph:
    """A d-regular graph whose color classes are cliques."""

    graph: Graph
    coloring: tuple[frozenset[int], ...]
    d: int

    def __post_init__(self) -> None:
        classes = tuple(frozenset(c) for c in self.coloring)
        object.__setattr__(self, "coloring", classes)
        g = self.graph
        seen: set[int] = set()
        for c in classes:
            if not c or seen & c:
                raise ValueError("color classes must be nonempty and disjoint")
            seen |= c
        if seen != set(range(g.n)):
            raise ValueError("coloring must cover every vertex")
        if any(len(nb) != self.d for nb in g.adj):
            raise ValueError(f"graph is not {self.d}-regular")
        for c in classes:
            for v in c:
                if not (c - {v}) <= g.adj[v]:
                    raise ValueError("a color class does not induce a clique")

    @property
    def p(self) -> int:
        return len(self.coloring)


def reduce_mris(inst: ColoredRegularGraph) -> tuple[Graph, int, int]:
    """The same graph with p = #colors and k = (n - p)(d - 1)."""
    n, p = inst.graph.n, inst.p
    return inst.graph, p, (n - p) * (inst.d - 1)


def has_multicolored_independent_set(inst: ColoredRegularGraph) -> Optional[tuple[int, ...]]:
    """Brute force: one vertex per class, pairwise non-adjacent."""
    adj = inst.graph.adj
    classes = [sorted(c) for c in inst.coloring]

    def rec(i: int, chosen: list[int]):
        if i == len(classes):
            return tuple(chosen)
        for v in classes[i]:
            if not any(u in adj[v] for u in chosen):
                found = rec(i + 1, chosen + [v])
                if found is not None:
                    return found
        return None

    return rec(0, [])


def random_colored_regular(n: int, d: int, p: int, rng: np.random.Generator,
                           tries: int = 2000) -> Optional[ColoredRegularGraph]:
    """Random instance with p clique classes of random sizes, completed to d-regular.

    Cross-class edges are drawn by randomized pairing of remaining degree
    stubs; returns None when no completion is found.
    """
    if not 1 <= p <= n or d < 0:
        raise ValueError("need 1 <= p <= n and d >= 0")
    for _ in range(tries):
        cuts = np.sort(rng.choice(np.arange(1, n), size=p - 1, replace=False)) if p > 1 else np.array([], int)
        bounds = [0, *cuts.tolist(), n]
        sizes = [bounds[i + 1] - bounds[i] for i in range(p)]
        if max(sizes) > d + 1:
            continue
        color = np.repeat(np.arange(p), sizes)
        perm = rng.permutation(n)
        color = color[np.argsort(perm)]
        edges = set()
        for c in range(p):
            members = np.flatnonzero(color == c).tolist()
            for i, u in enumerate(members):
                for v in members[i + 1:]:
                    edges.add((u, v))
        need = [d - (sizes[color[v]] - 1) for v in range(n)]
        if sum(need) % 2:
            continue
        ok = _pair_stubs(need, color, edges, rng)
        if not ok:
            continue
        g = Graph(n, sorted(edges))
        classes = tuple(frozenset(np.flatnonzero(color == c).tolist()) for c in range(p))
        return ColoredRegularGraph(g, classes, d)
    return None


def _pair_stubs(need: list[int], color, edges: set, rng: np.random.Generator) -> bool:
    need = list(need)
    for _ in range(sum(need)):
        open_ = [v for v, r in enumerate(need) if r > 0]
        if not open_:
            return True
        u = open_[int(rng.integers(len(open_)))]
        cand = [v for v in open_ if v != u and color[v] != color[u] and (min(u, v), max(u, v)) not in edges]
        if not cand:
            return False
        v = cand[int(rng.integers(len(cand)))]
        edges.add((min(u, v), max(u, v)))
        need[u] -= 1
        need[v] -= 1
    return all(r == 0 for r in need)


# -- planted and random graphs ------------------------------------------------


def planted_solution(p: int, t: int, sides: Sequence[int], mode: str = "multipartite") -> ClusterSolution:
    """Clusters with the given side sizes.

    ``sides`` lists p*t sizes, cluster by cluster; zero-size sides are
    dropped. ``mode="star"`` expects p*2 sizes with a center side of size 1.
    """
    if len(sides) != p * t:
        raise ValueError(f"expected {p * t} side sizes, got {len(sides)}")
    clusters, nxt = [], 0
    for c in range(p):
        cluster = []
        for s in sides[c * t:(c + 1) * t]:
            if s < 0:
                raise ValueError("side sizes must be non-negative")
            if s:
                cluster.append(frozenset(range(nxt, nxt + s)))
                nxt += s
        if not cluster:
            raise ValueError("every cluster needs a vertex")
        if mode == "star" and len(cluster) == 2 and min(len(x) for x in cluster) != 1:
            raise ValueError("a star needs a one-vertex center side")
        clusters.append(tuple(cluster))
    return ClusterSolution(tuple(clusters))


def gen_planted(p: int, t: int, sides: Sequence[int], noise: int, seed: int,
                mode: str = "any") -> tuple[Graph, EditSet]:
    """Planted cluster graph perturbed by ``noise`` random edits.

    ``mode`` restricts the noise to ``"delete"``, ``"add"`` or ``"any"``.
    Returns the perturbed graph and the edit set that restores the planted
    clustering, whose size bounds the optimum from above.
    """
    rng = np.random.default_rng(seed)
    sol = planted_solution(p, t, sides)
    n = sum(sides)
    clean = Graph(n, sorted(sol.edge_set()))
    total = n * (n - 1) // 2
    room = {"delete": clean.m, "add": total - clean.m, "any": total}[mode]
    if noise > room:
        raise ValueError("more noise edits than candidate pairs")
    if 2 * noise > room:
        # dense request: enumerate the candidates once
        pool = [(u, v) for u in range(n) for v in range(u + 1, n)
                if mode == "any" or (v in clean.adj[u]) == (mode == "delete")]
        flips = [pool[int(i)] for i in rng.choice(len(pool), size=noise, replace=False)]
    else:
        flips, seen = [], set()
        present = sorted(clean.edges()) if mode == "delete" else None
        while len(flips) < noise:
            if present is not None:
                e = present[int(rng.integers(len(present)))]
            else:
                u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
                e = (min(u, v), max(u, v))
                if mode == "add" and clean.has_edge(*e):
                    continue
            if e not in seen:
                seen.add(e)
                flips.append(e)
    noisy = EditSet.from_symmetric_difference(clean, flips)
    g = apply_edits(clean, noisy)
    return g, forced_edits(g, sol)


def gen_planted_stars(p: int, leaves: Sequence[int], noise: int, seed: int) -> tuple[Graph, EditSet]:
    """Planted starforest with p stars, perturbed by ``noise`` random edits."""
    sides = []
    for leaf_count in leaves:
        sides += [1, leaf_count]
    return gen_planted(p, 2, sides, noise, seed)


def random_graph(n: int, m: int, seed: int) -> Graph:
    """Uniform simple graph with exactly m edges, sampled without replacement."""
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError("too many edges")
    rng = np.random.default_rng(seed)
    chosen = np.unique(rng.integers(0, total, size=int(m * 1.1) + 16, dtype=np.int64))
    while chosen.size < m:
        extra = rng.integers(0, total, size=m - chosen.size + 16, dtype=np.int64)
        chosen = np.unique(np.concatenate([chosen, extra]))
    chosen = rng.permutation(chosen)[:m]
    # map a linear index to the pair (u, v) with u < v, row by row
    idx = chosen.astype(np.float64)
    u = np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * idx)) / 2).astype(np.int64)
    start = u * (2 * n - u - 1) // 2
    fix = start > chosen
    u[fix] -= 1
    start = u * (2 * n - u - 1) // 2
    over = chosen - start >= n - u - 1
    u[over] += 1
    start = u * (2 * n - u - 1) // 2
    v = chosen - start + u + 1
    return Graph(n, np.stack([u, v], axis=1))


def random_gnp(n: int, prob: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < prob
    return Graph(n, np.stack([iu[keep], iv[keep]], axis=1))
