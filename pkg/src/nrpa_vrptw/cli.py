"""Command line front end.

Four subcommands:

  solve      -- run one preset on one instance and print/write the solution
  bench      -- sweep instances x seeds, write artifacts and a summary table
  validate   -- check a solution JSON against its instance, exit nonzero on
                any violation or score mismatch
  summarize  -- aggregate a bench summary.csv into per-family means

Instances can be bundled names (c101) or paths to Solomon-format files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import (
    SOLOMON_ORDER,
    ExperimentSpec,
    class_summary,
    emit_trace,
    instance_class,
    run_experiment,
    solution_json,
    write_solution,
)
from .bias import BiasWeights
from .routing import SolutionError, validate_solution
from .search import ALGORITHMS, SearchConfig, run
from .solomon import build_geometry, list_bundled_instances, load_instance

__all__ = ["main"]


def _add_search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", choices=ALGORITHMS, default="gnrpa")
    p.add_argument("--level", type=int, default=3, help="nesting depth (default 3)")
    p.add_argument("--iterations", type=int, default=100, help="iterations per level (default 100)")
    p.add_argument("--alpha", type=float, default=1.0, help="adaptation step size (default 1)")
    p.add_argument("--w1", type=float, default=15.0, help="distance bias weight (default 15)")
    p.add_argument("--w2", type=float, default=75.0, help="waiting bias weight (default 75)")
    p.add_argument("--w3", type=float, default=10.0, help="lateness bias weight (default 10)")
    p.add_argument("--tau", type=float, default=1.0, help="sampling temperature (default 1)")
    p.add_argument(
        "--time-budget",
        type=float,
        default=1800.0,
        help="wall clock limit per run in seconds (default 1800)",
    )


def _parse_seeds(text: str) -> list[int]:
    try:
        if "-" in text and "," not in text:
            lo, hi = text.split("-", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse seed list {text!r}") from None


def _resolve_instances(tokens: list[str]) -> list[str]:
    out: list[str] = []
    for tok in tokens:
        low = tok.lower()
        if low == "all":
            out.extend(SOLOMON_ORDER)
        elif low in ("c1", "c2", "r1", "r2", "rc1", "rc2"):
            out.extend(name for name in SOLOMON_ORDER if instance_class(name) == low.upper())
        else:
            out.append(tok)
    return out


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    geom = build_geometry(inst)
    cfg = SearchConfig(
        algorithm=args.algorithm,
        level=args.level,
        iterations=args.iterations,
        alpha=args.alpha,
        bias=BiasWeights(args.w1, args.w2, args.w3),
        tau=args.tau,
        seed=args.seed,
        time_budget=args.time_budget,
    )
    result = run(cfg, inst, geom)
    payload = solution_json(inst, cfg, result)
    validate_solution(inst, geom, payload["tours"])
    sb = result.best_score
    print(
        f"{inst.name.lower()}  {args.algorithm}  seed={args.seed}  "
        f"unvisited={sb.unvisited}  nv={sb.n_vehicles}  km={sb.distance:.2f}  "
        f"playouts={result.playout_count}  elapsed={result.elapsed:.1f}s"
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{inst.name.lower()}_{args.algorithm}_s{args.seed}"
        write_solution(payload, out / f"{stem}.json")
        emit_trace(result, out / f"{stem}_trace.csv")
        print(f"wrote {out / (stem + '.json')}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    spec = ExperimentSpec(
        instances=_resolve_instances(args.instances),
        algorithm=args.algorithm,
        level=args.level,
        iterations=args.iterations,
        alpha=args.alpha,
        bias=BiasWeights(args.w1, args.w2, args.w3),
        tau=args.tau,
        seeds=args.seeds,
        time_budget=args.time_budget,
        jobs=args.jobs,
        out_dir=args.out,
    )
    rows = run_experiment(spec)
    width = max(len(r.instance) for r in rows)
    print(f"{'instance':<{width}}  {'nv':>3}  {'km':>9}  {'seed':>4}  {'elapsed':>8}")
    for row in rows:
        print(f"{row.instance:<{width}}  {row.nv:>3}  {row.km:>9.2f}  {row.seed:>4}  {row.elapsed:>7.1f}s")
    if args.out:
        print(f"wrote {Path(args.out) / 'summary.csv'}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.solution)
    if not path.is_file():
        print(f"not a solution file: {path}", file=sys.stderr)
        return 2
    payload = json.loads(path.read_text())
    source = args.instance or payload["instance"]
    inst = load_instance(source)
    geom = build_geometry(inst)
    try:
        check = validate_solution(inst, geom, payload["tours"])
    except SolutionError as exc:
        for violation in exc.violations:
            print(f"VIOLATION: {violation}", file=sys.stderr)
        return 1
    problems = []
    if check.n_vehicles != payload["nv"]:
        problems.append(f"nv mismatch: reported {payload['nv']}, recomputed {check.n_vehicles}")
    if check.unvisited != payload.get("unvisited", 0):
        problems.append(f"unvisited mismatch: reported {payload.get('unvisited')}, recomputed {check.unvisited}")
    if check.distance != payload["km"]:
        problems.append(f"km mismatch: reported {payload['km']!r}, recomputed {check.distance!r}")
    if problems:
        for p in problems:
            print(f"MISMATCH: {p}", file=sys.stderr)
        return 1
    print(
        f"{inst.name.lower()}: valid  unvisited={check.unvisited}  nv={check.n_vehicles}  km={check.distance:.2f}"
    )
    return 0


def _cmd_summarize(args: argparse.Namespace) -> int:
    import csv

    from .bench import ResultRow

    if not Path(args.summary).is_file():
        print(f"not a summary file: {args.summary}", file=sys.stderr)
        return 2
    rows = []
    with open(args.summary) as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                ResultRow(
                    instance=rec["instance"],
                    nv=int(rec["nv"]),
                    km=float(rec["km"]),
                    scalar=float(rec["scalar"]),
                    seed=int(rec["seed"]),
                    elapsed=float(rec["elapsed"]),
                )
            )
    tags = [args.family.upper()] if args.family else ["C1", "C2", "R1", "R2", "RC1", "RC2"]
    print(f"{'class':<5}  {'n':>2}  {'mean nv':>8}  {'mean km':>10}  {'mean scalar':>12}")
    failures = 0
    for tag in tags:
        try:
            cs = class_summary(rows, tag)
        except ValueError as exc:
            print(f"{tag:<5}  --  {exc}", file=sys.stderr)
            failures += 1
            continue
        print(f"{cs.tag:<5}  {cs.n_instances:>2}  {cs.mean_nv:>8.2f}  {cs.mean_km:>10.2f}  {cs.mean_scalar:>12.2f}")
    return 1 if failures else 0


def _cmd_instances(args: argparse.Namespace) -> int:
    for name in list_bundled_instances():
        print(name)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nrpa-vrptw",
        description="Nested rollout policy adaptation solvers for the CVRPTW benchmark set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a single instance")
    p_solve.add_argument("instance", help="bundled name (c101) or path to a Solomon file")
    _add_search_args(p_solve)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--out", help="directory for the solution JSON and trace CSV")
    p_solve.set_defaults(fn=_cmd_solve)

    p_bench = sub.add_parser("bench", help="run a benchmark sweep")
    p_bench.add_argument(
        "instances",
        nargs="+",
        help="instance names/paths, a family tag (c1, r2, ...), or 'all'",
    )
    _add_search_args(p_bench)
    p_bench.add_argument(
        "--seeds",
        type=_parse_seeds,
        default=list(range(10)),
        help="comma list or lo-hi range (default 0-9)",
    )
    p_bench.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    p_bench.add_argument("--out", help="directory for artifacts and summary.csv")
    p_bench.set_defaults(fn=_cmd_bench)

    p_val = sub.add_parser("validate", help="check a solution JSON")
    p_val.add_argument("solution", help="path to a solution JSON file")
    p_val.add_argument("--instance", help="override the instance named in the JSON")
    p_val.set_defaults(fn=_cmd_validate)

    p_sum = sub.add_parser("summarize", help="per-family means from a summary.csv")
    p_sum.add_argument("summary", help="path to a summary.csv written by bench")
    p_sum.add_argument("--family", help="restrict to one family (C1, C2, R1, R2, RC1, RC2)")
    p_sum.set_defaults(fn=_cmd_summarize)

    p_ls = sub.add_parser("instances", help="list bundled instances")
    p_ls.set_defaults(fn=_cmd_instances)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
