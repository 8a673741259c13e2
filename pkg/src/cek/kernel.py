"""Twin-class truncation and the structural size/component prechecks.

A non-isolate twin class is a maximal set of vertices with the same nonempty
open neighborhood. Keeping only ``2k+1`` members of every such class is
answer-preserving, and afterwards a yes-instance has at most
``p*t*(2k+1) + 2k`` vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import ClusterSolution, Graph, ProblemSpec, Variant, connected_components


class Verdict(str, Enum):
    PASS = "pass"
    REDUCED = "reduced"
    TOO_MANY_COMPONENTS = "rejected-too-many-components"
    TOO_LARGE = "rejected-too-large"
    WIDE_TWINS = "rejected-wide-twin-class"


@dataclass(frozen=True)
class KernelResult:
    reduced: Graph
    removed: frozenset[int]
    verdict: Verdict
    # kept[i] is the original id of reduced vertex i
    kept: tuple[int, ...]
    # removed vertex -> a surviving member of its twin class (original ids)
    twin_of: dict

    @property
    def rejected(self) -> bool:
        return self.verdict in (Verdict.TOO_MANY_COMPONENTS, Verdict.TOO_LARGE, Verdict.WIDE_TWINS)


def twin_classes(g: Graph) -> list[list[int]]:
    """Partition of the non-isolated vertices into false-twin classes.

    Neighborhoods are frozensets, so grouping by them hashes each one once
    and resolves hash collisions by exact comparison.
    """
    groups: dict[frozenset[int], list[int]] = {}
    for v, nb in enumerate(g.adj):
        if nb:
            groups.setdefault(nb, []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def apply_rule_twins(g: Graph, k: int) -> KernelResult:
    """Truncate every twin class of size >= 2k+2 to its 2k+1 smallest ids.

    Removing members of one class never makes two other vertices twins, so a
    single pass is exhaustive.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    keep_count = 2 * k + 1
    removed: set[int] = set()
    twin_of = {}
    for cls in twin_classes(g):
        if len(cls) >= keep_count + 1:
            anchor = cls[0]
            for v in cls[keep_count:]:
                removed.add(v)
                twin_of[v] = anchor
    if not removed:
        return KernelResult(g, frozenset(), Verdict.REDUCED, tuple(range(g.n)), {})
    reduced, kept = g.induced(v for v in range(g.n) if v not in removed)
    return KernelResult(reduced, frozenset(removed), Verdict.REDUCED, tuple(kept), twin_of)


def kernel_size_bound(p: int, t: int, k: int) -> int:
    return p * t * (2 * k + 1) + 2 * k


def precheck(g: Graph, spec: ProblemSpec) -> Verdict:
    """Sound rejection tests: more than p+k components, or too many vertices.

    The size test is only meaningful on a graph already reduced by
    ``apply_rule_twins`` with the same k.
    """
    if spec.p is None:
        raise ValueError("precheck needs a bounded component count p")
    if len(connected_components(g)) > spec.p + spec.k:
        return Verdict.TOO_MANY_COMPONENTS
    if g.n > kernel_size_bound(spec.p, spec.t, spec.k):
        return Verdict.TOO_LARGE
    return Verdict.PASS


def wide_twin_class(g: Graph, k: int) -> bool:
    """Whether some twin class of size >= 2k+2 has two or more neighbors.

    Stars are not closed under adding a twin of a center, so for starforest
    editing the twin rule is only sound on pendant classes. A large class
    with a wider neighborhood keeps two untouched members in any solution,
    which would then be leaves sharing two centers: a no-instance.
    """
    return any(len(cls) >= 2 * k + 2 and len(g.adj[cls[0]]) >= 2 for cls in twin_classes(g))


def kernelize(g: Graph, spec: ProblemSpec) -> KernelResult:
    """Apply the twin rule, then the prechecks; verdict records the outcome."""
    if spec.variant is Variant.STARFOREST and wide_twin_class(g, spec.k):
        return KernelResult(g, frozenset(), Verdict.WIDE_TWINS, tuple(range(g.n)), {})
    result = apply_rule_twins(g, spec.k)
    if spec.p is None:
        return result
    verdict = precheck(result.reduced, spec)
    if verdict is Verdict.PASS:
        return result
    return KernelResult(result.reduced, result.removed, verdict, result.kept, result.twin_of)


def lift_solution(result: KernelResult, solution: ClusterSolution, touched: set[int]) -> ClusterSolution:
    """Map a reduced-graph solution back to the input graph.

    Each removed twin joins the side of a surviving member of its class that
    no edit touches (``touched`` holds reduced-graph ids incident to edits);
    such a member exists because at most 2k of the 2k+1 survivors are touched.
    """
    kept = result.kept
    clusters = [[set(kept[v] for v in side) for side in c] for c in solution.clusters]
    if not result.removed:
        return ClusterSolution.from_lists(clusters)
    where = {}
    for ci, c in enumerate(clusters):
        for si, side in enumerate(c):
            for v in side:
                where[v] = (ci, si)
    index = {old: i for i, old in enumerate(kept)}
    reduced = result.reduced
    members = {reduced.adj[c[0]]: c for c in twin_classes(reduced)}
    survivors: dict[int, int] = {}
    for anchor in set(result.twin_of.values()):
        cls = members[reduced.adj[index[anchor]]]
        free = [c for c in cls if c not in touched]
        if not free:
            raise ValueError("no untouched survivor in a truncated twin class")
        survivors[anchor] = kept[free[0]]
    for v in sorted(result.removed):
        ci, si = where[survivors[result.twin_of[v]]]
        clusters[ci][si].add(v)
    return ClusterSolution.from_lists(clusters)
