"""Graphs, edit sets, cluster solutions and recognition of the target classes.

Vertices are dense 0-based integers. A target graph is a disjoint union of
clusters; every cluster is a list of independent *sides* that are pairwise
fully joined. Stars are clusters with a one-vertex center side, bicliques
have at most two sides and t-partite cliques at most ``t``.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, TextIO, Union

Pair = tuple[int, int]


class Variant(str, Enum):
    STARFOREST = "starforest"
    BICLUSTER = "bicluster"
    TPARTITE = "tpartite"


class InvalidEditError(ValueError):
    pass


class GraphFormatError(ValueError):
    pass


def _pair(u: int, v: int) -> Pair:
    u, v = int(u), int(v)
    if u == v:
        raise ValueError(f"self-loop pair ({u}, {v})")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "_m", "_masks")

    def __init__(self, n: int, edges: Iterable[Pair] = ()):
        n = int(n)
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        if hasattr(edges, "tolist"):
            edges = edges.tolist()
        adj: list[set[int]] = [set() for _ in range(n)]
        count = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
            count += 1
        self.n = n
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)
        self._m = sum(len(s) for s in self.adj) // 2
        if self._m != count:
            raise ValueError("duplicate edges in edge list")
        self._masks: Optional[list[int]] = None

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]) -> "Graph":
        """Build from per-vertex neighbor collections; symmetry is checked."""
        g = cls.__new__(cls)
        g.n = len(adjacency)
        g.adj = tuple(frozenset(int(x) for x in nb) for nb in adjacency)
        for v, nb in enumerate(g.adj):
            for u in nb:
                if u == v or not (0 <= u < g.n) or v not in g.adj[u]:
                    raise ValueError(f"adjacency not symmetric/simple at ({v}, {u})")
        g._m = sum(len(s) for s in g.adj) // 2
        g._masks = None
        return g

    @classmethod
    def _trusted(cls, adj: tuple[frozenset[int], ...]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(adj)
        g.adj = adj
        g._m = sum(len(s) for s in adj) // 2
        g._masks = None
        return g

    @property
    def m(self) -> int:
        return self._m

    @property
    def masks(self) -> list[int]:
        """Neighborhoods as integer bitmasks (cached)."""
        if self._masks is None:
            masks = []
            for nb in self.adj:
                x = 0
                for u in nb:
                    x |= 1 << u
                masks.append(x)
            self._masks = masks
        return self._masks

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> Iterator[Pair]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u in range(self.n):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield (u, v)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabeled to ``0..len-1`` plus the old ids in order."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        adj = tuple(
            frozenset(index[u] for u in self.adj[v] if u in index) for v in keep
        )
        return Graph._trusted(adj), keep

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class EditSet:
    """Pairs to add and pairs to delete; ``G △ F`` applies both."""

    additions: frozenset[Pair] = frozenset()
    deletions: frozenset[Pair] = frozenset()

    def __post_init__(self) -> None:
        add = frozenset(_pair(*e) for e in self.additions)
        dele = frozenset(_pair(*e) for e in self.deletions)
        if add & dele:
            raise InvalidEditError(f"pairs both added and deleted: {sorted(add & dele)}")
        object.__setattr__(self, "additions", add)
        object.__setattr__(self, "deletions", dele)

    @property
    def size(self) -> int:
        return len(self.additions) + len(self.deletions)

    def __len__(self) -> int:
        return self.size

    def pairs(self) -> frozenset[Pair]:
        return self.additions | self.deletions

    def validate(self, g: Graph) -> None:
        for u, v in self.additions | self.deletions:
            if not (0 <= u < g.n and 0 <= v < g.n):
                raise InvalidEditError(f"pair ({u}, {v}) out of range for n={g.n}")
        for u, v in sorted(self.deletions):
            if not g.has_edge(u, v):
                raise InvalidEditError(f"cannot delete non-edge ({u}, {v})")
        for u, v in sorted(self.additions):
            if g.has_edge(u, v):
                raise InvalidEditError(f"cannot add existing edge ({u}, {v})")

    @classmethod
    def from_symmetric_difference(cls, g: Graph, pairs: Iterable[Pair]) -> "EditSet":
        add, dele = set(), set()
        for u, v in pairs:
            (dele if g.has_edge(u, v) else add).add(_pair(u, v))
        return cls(frozenset(add), frozenset(dele))

    def to_json(self) -> dict:
        return {
            "additions": [list(e) for e in sorted(self.additions)],
            "deletions": [list(e) for e in sorted(self.deletions)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "EditSet":
        return cls(
            frozenset(tuple(e) for e in data.get("additions", [])),
            frozenset(tuple(e) for e in data.get("deletions", [])),
        )


def apply_edits(g: Graph, edits: EditSet) -> Graph:
    """Return ``G △ F``; raises InvalidEditError if F does not fit G."""
    edits.validate(g)
    if edits.size == 0:
        return g
    adj = [set(nb) for nb in g.adj]
    for u, v in edits.deletions:
        adj[u].discard(v)
        adj[v].discard(u)
    for u, v in edits.additions:
        adj[u].add(v)
        adj[v].add(u)
    return Graph._trusted(tuple(frozenset(s) for s in adj))


@dataclass(frozen=True)
class ClusterSolution:
    """Clusters as tuples of sides; each side is a frozenset of vertices."""

    clusters: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self) -> None:
        clusters = tuple(
            tuple(frozenset(int(v) for v in side) for side in cluster)
            for cluster in self.clusters
        )
        seen: set[int] = set()
        for cluster in clusters:
            if not cluster:
                raise ValueError("empty cluster")
            for side in cluster:
                if not side:
                    raise ValueError("empty side")
                if seen & side:
                    raise ValueError(f"vertex repeated: {sorted(seen & side)}")
                seen |= side
        object.__setattr__(self, "clusters", clusters)

    @classmethod
    def from_lists(cls, clusters: Iterable[Iterable[Iterable[int]]]) -> "ClusterSolution":
        return cls(tuple(tuple(frozenset(s) for s in c) for c in clusters))

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)

    def vertices(self) -> set[int]:
        return {v for c in self.clusters for side in c for v in side}

    def is_partition_of(self, n: int) -> bool:
        vs = self.vertices()
        return len(vs) == n and vs == set(range(n))

    def labels(self, n: int) -> list[tuple[int, int]]:
        """Per vertex ``(cluster index, side index)``."""
        out: list = [None] * n
        for ci, cluster in enumerate(self.clusters):
            for si, side in enumerate(cluster):
                for v in side:
                    out[v] = (ci, si)
        if any(x is None for x in out):
            raise ValueError("solution does not cover all vertices")
        return out

    def edge_set(self) -> set[Pair]:
        """Edges of the cluster graph this solution describes."""
        edges: set[Pair] = set()
        for cluster in self.clusters:
            for i, a in enumerate(cluster):
                for b in cluster[i + 1:]:
                    for u in a:
                        for v in b:
                            edges.add(_pair(u, v))
        return edges

    def canonical(self) -> "ClusterSolution":
        """Sides sorted by smallest vertex, clusters by smallest vertex."""
        clusters = [tuple(sorted(c, key=min)) for c in self.clusters]
        clusters.sort(key=lambda c: min(min(s) for s in c))
        return ClusterSolution(tuple(clusters))

    def to_lists(self) -> list[list[list[int]]]:
        return [[sorted(side) for side in c] for c in self.clusters]


@dataclass(frozen=True)
class ProblemSpec:
    variant: Variant
    k: int
    p: Optional[int] = None
    t: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.k < 0:
            raise ValueError("budget k must be non-negative")
        if self.p is not None and self.p < 1:
            raise ValueError("p must be at least 1")
        if self.t < 2:
            raise ValueError("t must be at least 2")
        if self.variant is not Variant.TPARTITE and self.t != 2:
            raise ValueError(f"{self.variant.value} requires t=2")


@dataclass(frozen=True)
class Obstruction:
    """Induced pattern certifying non-membership.

    ``kind`` is one of ``K3``, ``P4``, ``C4``, ``coP3`` (an edge plus a vertex
    of the same component adjacent to neither endpoint) or ``K{t+1}``.
    """

    kind: str
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class SolveResult:
    yes: bool
    edits: Optional[EditSet] = None
    solution: Optional[ClusterSolution] = None
    cost: Optional[int] = None
    stats: dict = field(default_factory=dict, compare=False)

    @classmethod
    def no(cls, **stats) -> "SolveResult":
        return cls(False, stats=dict(stats))


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comp.sort()
        comps.append(comp)
    return comps


def _max_sides(variant: Variant, t: int) -> int:
    return 2 if variant in (Variant.STARFOREST, Variant.BICLUSTER) else t


def _component_sides(g: Graph, comp: list[int]) -> list[list[int]]:
    groups: dict[frozenset[int], list[int]] = {}
    for v in comp:
        groups.setdefault(g.adj[v], []).append(v)
    return sorted(groups.values(), key=lambda s: s[0])


def recognize(g: Graph, variant: Union[Variant, str], t: int = 2) -> Optional[ClusterSolution]:
    """Canonical decomposition of ``g`` if it is in the class, else None.

    Clusters are the connected components; sides group vertices with equal
    open neighborhoods. For stars the center side comes first (the smaller
    id for a K2).
    """
    variant = Variant(variant)
    if t < 2:
        raise ValueError("t must be at least 2")
    limit = _max_sides(variant, t)
    clusters = []
    for comp in connected_components(g):
        sides = _component_sides(g, comp)
        if len(sides) > limit:
            return None
        size = len(comp)
        for side in sides:
            # equal neighborhoods make a side independent; full join is checked by degree
            if len(g.adj[side[0]]) != size - len(side):
                return None
        if variant is Variant.STARFOREST and len(sides) == 2:
            small = [s for s in sides if len(s) == 1]
            if not small:
                return None
            center = small[0]
            sides = [center] + [s for s in sides if s is not center]
        clusters.append(tuple(frozenset(s) for s in sides))
    return ClusterSolution(tuple(clusters))


def _find_triangle(g: Graph, comp: Iterable[int]) -> Optional[tuple[int, ...]]:
    for u in sorted(comp):
        for v in sorted(g.adj[u]):
            if v <= u:
                continue
            common = sorted(w for w in g.adj[u] & g.adj[v] if w > v)
            if common:
                return (u, v, common[0])
    return None


def _find_p4_or_c4(g: Graph, comp: Iterable[int], allow_c4: bool) -> Optional[Obstruction]:
    for b in sorted(comp):
        for c in sorted(g.adj[b]):
            left = sorted(g.adj[b] - g.adj[c] - {c})
            right = sorted(g.adj[c] - g.adj[b] - {b})
            for a in left:
                for d in right:
                    if a == d:
                        continue
                    if d not in g.adj[a]:
                        return Obstruction("P4", (a, b, c, d) if a < d else (d, c, b, a))
            if allow_c4:
                for a in left:
                    for d in right:
                        if a != d and d in g.adj[a]:
                            return Obstruction("C4", (a, b, c, d))
    return None


def _find_cop3(g: Graph, comp: list[int]) -> Optional[Obstruction]:
    members = set(comp)
    for w in comp:
        far = members - g.adj[w] - {w}
        for u in sorted(far):
            hit = g.adj[u] & far
            if hit:
                return Obstruction("coP3", (u, min(hit), w))
    return None


def find_obstruction(g: Graph, variant: Union[Variant, str], t: int = 2) -> Optional[Obstruction]:
    """Some induced obstruction to membership, or None iff ``recognize`` succeeds."""
    variant = Variant(variant)
    for comp in connected_components(g):
        if len(comp) < 3:
            continue
        if variant is Variant.TPARTITE:
            obs = _find_cop3(g, comp)
            if obs is not None:
                return obs
            sides = _component_sides(g, comp)
            if len(sides) > t:
                return Obstruction(f"K{t + 1}", tuple(s[0] for s in sides[: t + 1]))
            continue
        tri = _find_triangle(g, comp)
        if tri is not None:
            return Obstruction("K3", tri)
        obs = _find_p4_or_c4(g, comp, allow_c4=variant is Variant.STARFOREST)
        if obs is not None:
            return obs
    return None


def obstruction_holds(g: Graph, obs: Obstruction) -> bool:
    """Check that ``obs.vertices`` induce exactly the named pattern."""
    vs = obs.vertices
    if len(set(vs)) != len(vs):
        return False
    present = {(i, j) for i in range(len(vs)) for j in range(i + 1, len(vs))
               if g.has_edge(vs[i], vs[j])}
    if obs.kind == "P4":
        return present == {(0, 1), (1, 2), (2, 3)}
    if obs.kind == "C4":
        return present == {(0, 1), (1, 2), (2, 3), (0, 3)}
    if obs.kind == "coP3":
        if present != {(0, 1)}:
            return False
        comp = next(c for c in connected_components(g) if vs[0] in c)
        return vs[2] in comp
    if obs.kind.startswith("K"):
        r = int(obs.kind[1:])
        return len(vs) == r and len(present) == r * (r - 1) // 2
    return False


def forced_edits(g: Graph, sol: ClusterSolution) -> EditSet:
    """The unique minimal edit set turning ``g`` into exactly ``sol``."""
    labels = sol.labels(g.n)
    additions, deletions = set(), set()
    for u, v in g.edges():
        cu, su = labels[u]
        cv, sv = labels[v]
        if cu != cv or su == sv:
            deletions.add((u, v))
    for cluster in sol.clusters:
        for i, a in enumerate(cluster):
            for b in cluster[i + 1:]:
                for u in a:
                    nb = g.adj[u]
                    for v in b:
                        if v not in nb:
                            additions.add(_pair(u, v))
    return EditSet(frozenset(additions), frozenset(deletions))


def is_valid_solution(
    g: Graph,
    sol: ClusterSolution,
    variant: Union[Variant, str],
    t: int = 2,
    p: Optional[int] = None,
) -> bool:
    """Structural check of a clustering against the target class."""
    variant = Variant(variant)
    if not sol.is_partition_of(g.n):
        return False
    if p is not None and sol.num_clusters != p:
        return False
    limit = _max_sides(variant, t)
    for cluster in sol.clusters:
        size = sum(len(s) for s in cluster)
        if len(cluster) > limit:
            return False
        if len(cluster) == 1 and size > 1:
            return False
        if variant is Variant.STARFOREST and len(cluster) == 2 and min(len(s) for s in cluster) != 1:
            return False
    return True


# -- text format -------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    if not lines:
        raise GraphFormatError("missing 'n m' header")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise GraphFormatError(f"bad header line: {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise GraphFormatError("negative counts in header")
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}")
    edges = []
    seen = set()
    for line in body:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"bad edge line: {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"bad edge line: {line!r}") from exc
        if not (0 <= u < v < n):
            raise GraphFormatError(f"edge ({u}, {v}) violates 0 <= u < v < n")
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)


def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    out = io.StringIO()
    for c in comments:
        out.write(f"# {c}\n")
    out.write(f"{g.n} {g.m}\n")
    for u, v in g.edges():
        out.write(f"{u} {v}\n")
    return out.getvalue()


def read_graph(source: Union[str, os.PathLike, TextIO]) -> Graph:
    if hasattr(source, "read"):
        return parse_graph(source.read())
    with open(source, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, target: Union[str, os.PathLike, TextIO], comments: Sequence[str] = ()) -> None:
    text = format_graph(g, comments)
    if hasattr(target, "write"):
        target.write(text)
        return
    with open(target, "w", encoding="utf-8") as fh:
        fh.write(text)
