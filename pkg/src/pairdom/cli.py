"""Command-line surface: solve, verify, oracle, gen, recognize, bench.

Exit codes are a stable contract:

* 0 -- success
* 1 -- malformed input or an exceeded cap
* 2 -- no solution (the graph has isolated vertices)
* 3 -- not a cograph (an induced-P4 witness is printed)
* 4 -- verification failure

Solution text format (diff-friendly): two header lines ``beta <matched>``
and ``kfs <k> <s> <f>``, then one ``pair <u> <v> <full|semi|free>`` line per
pair with ``u < v``, sorted ascending.  Bench output is CSV rows
``n,seed,solve_ns,pairs,beta`` followed by one
``ratio,<n1>:<n2>,<t2/t1>,,`` summary row per consecutive size pair.
"""

from __future__ import annotations

import argparse
import gc
import statistics
import sys
import time
from typing import Optional, Sequence

from .cotree import (
    Cotree,
    DEFAULT_EDGE_CAP,
    P4Witness,
    materialize,
    parse_cotree,
    random_cotree,
    random_restricted,
    recognize,
    serialize_cotree,
)
from .graphs import (
    Graph,
    GraphError,
    MPDSolution,
    NoSolutionError,
    RestrictedSet,
    parse_graph_text,
    parse_restricted_text,
    verify_solution,
)
from .oracle import OracleCapExceeded, oracle_canonical, oracle_paired_domination_number
from .solver import solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_SOLUTION = 2
EXIT_NOT_COGRAPH = 3
EXIT_VERIFY_FAILED = 4


def format_solution(solution: MPDSolution) -> str:
    lines = [f"beta {solution.matched_number}", f"kfs {solution.k} {solution.s} {solution.f}"]
    rows = sorted((min(p.u, p.v), max(p.u, p.v), p.cls.value) for p in solution.pairs)
    lines.extend(f"pair {u} {v} {cls}" for u, v, cls in rows)
    return "\n".join(lines) + "\n"


def parse_solution_text(text: str) -> tuple[int, tuple[int, int, int], list[tuple[int, int]]]:
    """Read the solution format back: (beta, (k, s, f), pairs)."""
    beta: Optional[int] = None
    kfs: Optional[tuple[int, int, int]] = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if fields[0] == "beta" and len(fields) == 2:
                beta = int(fields[1])
            elif fields[0] == "kfs" and len(fields) == 4:
                kfs = (int(fields[1]), int(fields[2]), int(fields[3]))
            elif fields[0] == "pair" and len(fields) == 4:
                pairs.append((int(fields[1]), int(fields[2])))
            else:
                raise ValueError
        except ValueError:
            raise GraphError(f"solution line {lineno}: cannot parse {line!r}") from None
    if beta is None or kfs is None:
        raise GraphError("solution file is missing the beta/kfs headers")
    return beta, kfs, pairs


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _parse_restricted_arg(spec: Optional[str], n: int) -> RestrictedSet:
    """Inline comma list (``0,3,5``) or a file path; absent means empty."""
    if spec is None:
        return RestrictedSet.empty(n)
    stripped = spec.strip()
    if stripped == "" or stripped.replace(",", "").isdigit():
        ids = [int(tok) for tok in stripped.split(",") if tok]
        return RestrictedSet(n, ids)
    return parse_restricted_text(_read(spec), n)


def _load_instance(args: argparse.Namespace) -> tuple[Optional[Cotree], Graph]:
    """Load (cotree, graph) from --cotree or --graph; graph inputs are
    recognized first and a P4 aborts with exit 3 via CliFailure."""
    if args.cotree is not None:
        tree = parse_cotree(_read(args.cotree))
        graph = materialize(tree, edge_cap=args.edge_cap)
        return tree, graph
    graph = parse_graph_text(_read(args.graph))
    result = recognize(graph)
    if isinstance(result, P4Witness):
        raise CliFailure(
            EXIT_NOT_COGRAPH, f"p4 {result.a} {result.b} {result.c} {result.d}"
        )
    return result, graph


class CliFailure(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _cmd_solve(args: argparse.Namespace) -> int:
    tree, graph = _load_instance(args)
    restricted = _parse_restricted_arg(args.restricted, graph.n)
    try:
        solution = solve(tree, restricted)
    except NoSolutionError as exc:
        print("no-solution isolated " + " ".join(str(v) for v in exc.isolated))
        return EXIT_NO_SOLUTION
    out = format_solution(solution)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.cotree is not None:
        tree = parse_cotree(_read(args.cotree))
        graph = materialize(tree, edge_cap=args.edge_cap)
    else:
        graph = parse_graph_text(_read(args.graph))
    restricted = _parse_restricted_arg(args.restricted, graph.n)
    beta, (k, s, f), pairs = parse_solution_text(_read(args.solution))
    report = verify_solution(graph, restricted, pairs)
    print(f"valid {str(report.valid).lower()}")
    print(f"kfs {report.k} {report.s} {report.f}")
    print(f"matched {report.matched_number}")
    print(f"certificate {report.certificate.value}")
    ok = report.valid
    for problem in report.problems:
        print(f"reason {problem}")
    if report.valid and (
        (k, s, f) != (report.k, report.s, report.f) or beta != report.matched_number
    ):
        print("reason stats-mismatch")
        ok = False
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _cmd_oracle(args: argparse.Namespace) -> int:
    if args.cotree is not None:
        graph = materialize(parse_cotree(_read(args.cotree)), edge_cap=args.edge_cap)
    else:
        graph = parse_graph_text(_read(args.graph))
    pruning = not args.reference_oracle
    try:
        if args.gamma_p:
            gamma = oracle_paired_domination_number(
                graph, max_vertices=args.max_n, pruning=pruning
            )
            print(f"gamma_p {gamma}")
            return EXIT_OK
        restricted = _parse_restricted_arg(args.restricted, graph.n)
        result = oracle_canonical(
            graph, restricted, max_vertices=args.max_n, pruning=pruning
        )
    except NoSolutionError as exc:
        print("no-solution isolated " + " ".join(str(v) for v in exc.isolated))
        return EXIT_NO_SOLUTION
    print(f"beta {result.beta} fmin {result.f_min}")
    sys.stdout.write(format_solution(result.witness))
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    tree = random_cotree(args.n, args.join_bias, args.seed)
    # Independent stream for the restricted choice (documented offset).
    restricted = random_restricted(args.n, args.density or 0.0, args.seed + 1)
    tree_text = serialize_cotree(tree) + "\n"
    members = restricted.members()
    restricted_text = (" ".join(str(v) for v in members) + "\n") if members else ""
    if args.out_cotree:
        with open(args.out_cotree, "w", encoding="utf-8") as fh:
            fh.write(tree_text)
    else:
        sys.stdout.write(tree_text)
    if args.out_restricted:
        with open(args.out_restricted, "w", encoding="utf-8") as fh:
            fh.write(restricted_text)
    elif args.density is not None:
        sys.stdout.write(restricted_text)
    return EXIT_OK


def _cmd_recognize(args: argparse.Namespace) -> int:
    graph = parse_graph_text(_read(args.graph))
    result = recognize(graph)
    if isinstance(result, P4Witness):
        print(f"p4 {result.a} {result.b} {result.c} {result.d}")
        return EXIT_NOT_COGRAPH
    print(serialize_cotree(result))
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(tok) for tok in args.sizes.split(",") if tok]
    rows = ["n,seed,solve_ns,pairs,beta"]
    medians: list[tuple[int, float]] = []
    for n in sizes:
        tree = random_cotree(n, args.join_bias, args.seed)
        restricted = random_restricted(n, args.density, args.seed + 1)
        times = []
        last = None
        for _ in range(args.repeats):
            gc_was_enabled = gc.isenabled()
            gc.disable()
            try:
                t0 = time.perf_counter_ns()
                solution = solve(tree, restricted)
                elapsed = time.perf_counter_ns() - t0
            finally:
                if gc_was_enabled:
                    gc.enable()
            times.append(elapsed)
            last = solution
            rows.append(
                f"{n},{args.seed},{elapsed},{len(last.pairs)},{last.matched_number}"
            )
        medians.append((n, statistics.median(times)))
    for (n1, t1), (n2, t2) in zip(medians, medians[1:]):
        rows.append(f"ratio,{n1}:{n2},{t2 / t1:.3f},,")
    out = "\n".join(rows) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairdom",
        description="Maximum matched-paired domination on cographs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance_args(p: argparse.ArgumentParser, graph_only: bool = False) -> None:
        if not graph_only:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--cotree", help="decomposition tree file (s-expression)")
            src.add_argument("--graph", help="graph file (p/e format); recognized first")
        else:
            p.add_argument("--graph", required=True, help="graph file (p/e format)")
        p.add_argument(
            "--edge-cap",
            type=int,
            default=DEFAULT_EDGE_CAP,
            help="materialization edge cap (guards dense joins)",
        )

    p = sub.add_parser("solve", help="solve one instance")
    add_instance_args(p)
    p.add_argument("--restricted", help="file path or inline comma list (default: empty)")
    p.add_argument("--output", help="write the solution here instead of stdout")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    add_instance_args(p)
    p.add_argument("--restricted", help="file path or inline comma list (default: empty)")
    p.add_argument("--solution", required=True, help="solution file to check")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    add_instance_args(p)
    p.add_argument("--restricted", help="file path or inline comma list (default: empty)")
    p.add_argument("--gamma-p", action="store_true", help="print the paired-domination number only")
    p.add_argument(
        "--reference-oracle",
        action="store_true",
        help="disable pruning (audit mode; same results, slower)",
    )
    p.add_argument("--max-n", type=int, default=16, help="exhaustive-search vertex cap")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("-n", type=int, required=True, help="number of vertices (leaves)")
    p.add_argument("--join-bias", type=float, default=0.5, help="P(join) per internal node")
    p.add_argument(
        "--density",
        type=float,
        default=None,
        help="restricted density; omit to skip the restricted line on stdout",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-cotree", help="write the tree here instead of stdout")
    p.add_argument("--out-restricted", help="write the restricted set here")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("recognize", help="decompose a graph or print a P4 witness")
    add_instance_args(p, graph_only=True)
    p.set_defaults(func=_cmd_recognize)

    p = sub.add_parser("bench", help="timing table over generated instances")
    p.add_argument("--sizes", required=True, help="comma-separated sizes, e.g. 10000,100000")
    p.add_argument("--join-bias", type=float, default=0.5)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--output", help="write the CSV here instead of stdout")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        print(str(exc))
        return exc.code
    except (GraphError, OracleCapExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def console_main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    console_main()
