"""Command-line front end.

Exit codes: 0 yes/success, 1 no, 2 usage or IO error, 3 oracle size refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from typing import Optional, Sequence, TextIO

import numpy as np

from .bicluster import solve_p_bicluster, solve_t_partite
from .graph import (
    EditSet,
    Graph,
    GraphFormatError,
    InvalidEditError,
    ProblemSpec,
    SolveResult,
    Variant,
    apply_edits,
    find_obstruction,
    read_graph,
    recognize,
    write_graph,
)
from .instances import (
    ColoredRegularGraph,
    FormulaError,
    gen_planted,
    random_3sat,
    read_dimacs,
    reduce_3sat,
    reduce_mris,
    satisfying_edit,
)
from .kernel import kernelize
from .oracle import OracleLimitError, oracle_partition
from .starforest import solve_p_starforest

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_ORACLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def solve(g: Graph, spec: ProblemSpec, at_most: bool = False, oracle: bool = False) -> SolveResult:
    """Dispatch to the solver for ``spec.variant``.

    With ``at_most`` every cluster count 1..p is tried and the cheapest
    yes answer is returned.
    """
    if oracle:
        counts = range(1, spec.p + 1) if at_most else (spec.p,)
        best = SolveResult.no()
        for q in counts:
            res = oracle_partition(g, ProblemSpec(spec.variant, spec.k, q, spec.t))
            if res.yes and (not best.yes or res.cost < best.cost):
                best = res
        return best
    if spec.variant is Variant.STARFOREST:
        return solve_p_starforest(g, spec.p, spec.k, at_most=at_most)
    counts = range(1, spec.p + 1) if at_most else (spec.p,)
    best = SolveResult.no()
    for q in counts:
        if spec.variant is Variant.BICLUSTER:
            res = solve_p_bicluster(g, q, spec.k)
        else:
            res = solve_t_partite(g, spec.t, q, spec.k)
        if res.yes and (not best.yes or res.cost < best.cost):
            best = res
    return best


def emit_result(result: SolveResult, elapsed_ms: Optional[float] = None) -> str:
    """Stable JSON rendering of a solve result."""
    if result.yes:
        edits = result.edits.to_json()
        clusters = result.solution.canonical().to_lists() if result.solution is not None else []
        doc = {
            "status": "yes",
            "cost": result.cost,
            "additions": edits["additions"],
            "deletions": edits["deletions"],
            "clusters": clusters,
        }
    else:
        doc = {"status": "no", "cost": None, "additions": [], "deletions": [], "clusters": []}
    doc["elapsed_ms"] = None if elapsed_ms is None else round(elapsed_ms, 3)
    return json.dumps(doc, sort_keys=False)


def _spec(args) -> ProblemSpec:
    t = args.t if args.t is not None else (3 if args.variant == "tpartite" else 2)
    if args.variant != "tpartite" and t != 2:
        raise UsageError(f"--t {t} only applies to the tpartite variant")
    try:
        return ProblemSpec(Variant(args.variant), k=args.k, p=args.p, t=t)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cmd_solve(args, out: TextIO) -> int:
    g = read_graph(args.input)
    spec = _spec(args)
    start = time.perf_counter()
    res = solve(g, spec, at_most=args.at_most_p, oracle=args.oracle)
    elapsed = (time.perf_counter() - start) * 1000 if args.timing else None
    if args.json:
        out.write(emit_result(res, elapsed) + "\n")
    elif res.yes:
        out.write(f"yes cost={res.cost} additions={len(res.edits.additions)} deletions={len(res.edits.deletions)}\n")
    else:
        out.write("no\n")
    return EXIT_YES if res.yes else EXIT_NO


def _cmd_kernel(args, out: TextIO) -> int:
    g = read_graph(args.input)
    spec = _spec(args)
    kr = kernelize(g, spec)
    if args.output:
        write_graph(kr.reduced, args.output, [f"kernel of {args.input} with k={spec.k}"])
    meta = {
        "verdict": kr.verdict.value,
        "removed": sorted(kr.removed),
        "kept": list(kr.kept),
        "n": kr.reduced.n,
        "m": kr.reduced.m,
    }
    out.write(json.dumps(meta) + "\n")
    return EXIT_NO if kr.rejected else EXIT_YES


def _read_mris(path: str) -> ColoredRegularGraph:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    g = Graph(data["n"], [tuple(e) for e in data["edges"]])
    return ColoredRegularGraph(g, tuple(frozenset(c) for c in data["coloring"]), data["d"])


def _cmd_reduce(args, out: TextIO) -> int:
    if args.source == "3sat":
        phi = read_dimacs(args.input)
        g, k, gmap = reduce_3sat(phi)
        meta = {"k": k, "gadget_map": gmap.to_json(), "p": None}
        comment = f"starforest instance from {len(phi.clauses)} clauses, k={k}"
    else:
        inst = _read_mris(args.input)
        g, p, k = reduce_mris(inst)
        meta = {"k": k, "gadget_map": None, "p": p}
        comment = f"starforest instance with p={p}, k={k}"
    write_graph(g, args.output, [comment])
    with open(args.output + ".json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh)
        fh.write("\n")
    out.write(json.dumps({"n": g.n, "m": g.m, "k": meta["k"], "p": meta["p"]}) + "\n")
    return EXIT_YES


def _cmd_verify(args, out: TextIO) -> int:
    g = read_graph(args.input)
    spec = _spec(args)
    with open(args.edits, encoding="utf-8") as fh:
        edits = EditSet.from_json(json.load(fh))
    try:
        edits.validate(g)
    except InvalidEditError as exc:
        out.write(f"invalid: {exc}\n")
        return EXIT_NO
    h = apply_edits(g, edits)
    sol = recognize(h, spec.variant, spec.t)
    if sol is None:
        obs = find_obstruction(h, spec.variant, spec.t)
        out.write(f"invalid: result contains induced {obs.kind} on {list(obs.vertices)}\n")
        return EXIT_NO
    if spec.p is not None and sol.num_clusters != spec.p:
        out.write(f"invalid: result has {sol.num_clusters} clusters, expected {spec.p}\n")
        return EXIT_NO
    out.write(f"valid: {edits.size} edits, {sol.num_clusters} clusters\n")
    return EXIT_YES


BENCH_COLUMNS = ["instance-id", "n", "m", "p", "k", "variant", "cost", "elapsed_ms"]


def _bench_planted(seed: int):
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(6):
        p = int(rng.integers(1, 3))
        sizes = [int(x) for x in rng.integers(1, 4, size=2 * p)]
        noise = min(int(rng.integers(0, 3)), sum(sizes) * (sum(sizes) - 1) // 2)
        g, planted = gen_planted(p, 2, sizes, noise, seed * 100 + i)
        cases.append((f"planted-bicluster-{i}", g, ProblemSpec(Variant.BICLUSTER, planted.size, p)))
    for i in range(6):
        p = int(rng.integers(1, 4))
        sizes = []
        for _ in range(p):
            sizes += [1, int(rng.integers(1, 6))]
        noise = min(int(rng.integers(0, 3)), sum(sizes) * (sum(sizes) - 1) // 2)
        g, planted = gen_planted(p, 2, sizes, noise, seed * 100 + 50 + i)
        cases.append((f"planted-starforest-{i}", g, ProblemSpec(Variant.STARFOREST, planted.size, p)))
    return cases


def _bench_reduction(seed: int):
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(6):
        clauses = int(rng.integers(1, 6))
        num_vars = int(rng.integers(3, min(3 * clauses, 8) + 1))
        alpha = {x: bool(rng.integers(0, 2)) for x in range(1, num_vars + 1)}
        phi = random_3sat(num_vars, clauses, rng, plant=alpha)
        start = time.perf_counter()
        g, k, gmap = reduce_3sat(phi)
        edits = satisfying_edit(phi, alpha, gmap)
        ok = recognize(apply_edits(g, edits), Variant.STARFOREST) is not None
        elapsed = (time.perf_counter() - start) * 1000
        rows.append([f"reduction-3sat-{i}", g.n, g.m, "", k, "starforest", edits.size if ok else "", round(elapsed, 3)])
    return rows


def _cmd_bench(args, out: TextIO) -> int:
    rows = []
    if args.suite == "planted":
        for name, g, spec in _bench_planted(args.seed):
            start = time.perf_counter()
            res = solve(g, spec)
            elapsed = (time.perf_counter() - start) * 1000
            rows.append([name, g.n, g.m, spec.p, spec.k, spec.variant.value,
                         res.cost if res.yes else "", round(elapsed, 3)])
    else:
        rows = _bench_reduction(args.seed)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(BENCH_COLUMNS)
            writer.writerows(rows)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    writer.writerows(rows)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cek", description="Editing graphs into p stars, bicliques or t-partite cliques.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def problem_args(sp, variant_required=True):
        sp.add_argument("--variant", choices=[v.value for v in Variant], required=variant_required,
                        default=None if variant_required else "bicluster")
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--t", type=int, default=None)
        sp.add_argument("--input", required=True)

    sp = sub.add_parser("solve", help="decide an editing instance")
    problem_args(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--oracle", action="store_true", help="use the brute-force solver")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--at-most-p", dest="at_most_p", action="store_true")
    sp.add_argument("--timing", action="store_true", help="report elapsed_ms (breaks byte-stable output)")
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("kernel", help="apply the twin rule and prechecks")
    problem_args(sp, variant_required=False)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--output", default=None, help="write the reduced graph here")
    sp.set_defaults(func=_cmd_kernel)

    sp = sub.add_parser("reduce", help="build a hardness instance")
    sp.add_argument("--from", dest="source", choices=["3sat", "mris"], required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=_cmd_reduce)

    sp = sub.add_parser("verify", help="check an edit set")
    problem_args(sp)
    sp.add_argument("--edits", required=True)
    sp.add_argument("--k", type=int, default=0, help=argparse.SUPPRESS)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("bench", help="time seeded benchmark suites")
    sp.add_argument("--suite", choices=["planted", "reduction"], required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", default=None)
    sp.set_defaults(func=_cmd_bench)
    return parser


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except OracleLimitError as exc:
        err.write(f"oracle refused: {exc}\n")
        return EXIT_ORACLE
    except (OSError, GraphFormatError, FormulaError, InvalidEditError, ValueError, KeyError,
            json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
