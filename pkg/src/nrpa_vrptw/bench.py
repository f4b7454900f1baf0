"""Benchmark harness: run presets over instance sets and tabulate results.

`run_experiment` drives one algorithm preset over a list of instances and
seeds, validates every solution against the reference checker before
trusting it, writes per-run artifacts (solution JSON and improvement trace
CSV), and reports the best run per instance under the lexicographic order
(unvisited, vehicles, distance).  `class_summary` averages those winners
over one of the six benchmark families.

Solution JSON layout:

    {"instance": ..., "seed": ..., "config": {...},
     "tours": [[customer ids], ...], "nv": ..., "km": ..., "unvisited": ...}
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .bias import BiasWeights
from .routing import ScoreBreakdown, lexicographic_key, tours_from_moves, validate_solution
from .search import SearchConfig, SearchResult, run
from .solomon import Instance, build_geometry, load_instance

__all__ = [
    "SOLOMON_ORDER",
    "ExperimentSpec",
    "ResultRow",
    "ClassSummary",
    "instance_class",
    "run_experiment",
    "class_summary",
    "emit_trace",
    "solution_json",
    "write_solution",
    "load_reference_table",
]

#: the 56 benchmark instances in canonical reporting order
SOLOMON_ORDER = (
    [f"c10{i}" for i in range(1, 10)]
    + [f"c20{i}" for i in range(1, 9)]
    + [f"r1{i:02d}" for i in range(1, 13)]
    + [f"r2{i:02d}" for i in range(1, 12)]
    + [f"rc1{i:02d}" for i in range(1, 9)]
    + [f"rc2{i:02d}" for i in range(1, 9)]
)

CLASSES = ("C1", "C2", "R1", "R2", "RC1", "RC2")


def instance_class(name: str) -> str:
    """Family tag (C1, C2, R1, R2, RC1, RC2) from an instance name."""
    stem = Path(name).stem.lower()
    for tag in ("rc1", "rc2", "c1", "c2", "r1", "r2"):
        if stem.startswith(tag):
            return tag.upper()
    raise ValueError(f"cannot classify instance name {name!r}")


@dataclass
class ExperimentSpec:
    """One benchmark sweep: a preset applied to instances x seeds."""

    instances: list[str]
    algorithm: str = "gnrpa"
    level: int = 3
    iterations: int = 100
    alpha: float = 1.0
    bias: BiasWeights = field(default_factory=BiasWeights)
    tau: float = 1.0
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    time_budget: float | None = 1800.0
    jobs: int = 1
    out_dir: str | Path | None = None

    def config_for(self, seed: int) -> SearchConfig:
        return SearchConfig(
            algorithm=self.algorithm,
            level=self.level,
            iterations=self.iterations,
            alpha=self.alpha,
            bias=self.bias,
            tau=self.tau,
            seed=seed,
            time_budget=self.time_budget,
        )


@dataclass
class ResultRow:
    """Best run for one instance."""

    instance: str
    nv: int
    km: float
    scalar: float
    seed: int
    elapsed: float


@dataclass
class ClassSummary:
    tag: str
    n_instances: int
    mean_nv: float
    mean_km: float
    mean_scalar: float


def _config_dict(cfg: SearchConfig) -> dict:
    return {
        "algorithm": cfg.algorithm,
        "level": cfg.level,
        "iterations": cfg.iterations,
        "alpha": cfg.alpha,
        "w1": cfg.bias.w1,
        "w2": cfg.bias.w2,
        "w3": cfg.bias.w3,
        "tau": cfg.tau,
        "time_budget": cfg.time_budget,
    }


def solution_json(inst: Instance, cfg: SearchConfig, result: SearchResult) -> dict:
    """Solution payload for one run, via the schema in the module docstring."""
    tours = tours_from_moves(result.best_record.sequence)
    sb = result.best_score
    return {
        "instance": inst.name.lower(),
        "seed": cfg.seed,
        "config": _config_dict(cfg),
        "tours": tours,
        "nv": sb.n_vehicles,
        "km": sb.distance,
        "unvisited": sb.unvisited,
    }


def write_solution(payload: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, indent=1) + "\n")


def emit_trace(result: SearchResult, path: str | Path) -> None:
    """Improvement events as CSV: elapsed seconds, best scalar so far."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["elapsed", "scalar"])
        for elapsed, scalar in result.trace:
            writer.writerow([f"{elapsed:.6f}", repr(scalar)])


def _run_one(task: dict) -> dict:
    """Worker: solve one (instance, seed) pair and write its artifacts."""
    inst = load_instance(task["source"])
    geom = build_geometry(inst)
    spec_kwargs = dict(task["config"])
    cfg = SearchConfig(
        algorithm=spec_kwargs["algorithm"],
        level=spec_kwargs["level"],
        iterations=spec_kwargs["iterations"],
        alpha=spec_kwargs["alpha"],
        bias=BiasWeights(spec_kwargs["w1"], spec_kwargs["w2"], spec_kwargs["w3"]),
        tau=spec_kwargs["tau"],
        seed=task["seed"],
        time_budget=spec_kwargs["time_budget"],
    )
    result = run(cfg, inst, geom)
    # Trust nothing the search engine reports until the reference checker
    # recomputes it from the tours alone.
    tours = tours_from_moves(result.best_record.sequence)
    sb = result.best_score
    check = validate_solution(inst, geom, tours)
    if (check.unvisited, check.n_vehicles, check.distance) != (sb.unvisited, sb.n_vehicles, sb.distance):
        raise AssertionError(
            f"{inst.name}: engine reported unvisited={sb.unvisited} nv={sb.n_vehicles} km={sb.distance!r}, "
            f"checker found unvisited={check.unvisited} nv={check.n_vehicles} km={check.distance!r}"
        )
    if task["out_dir"] is not None:
        out = Path(task["out_dir"])
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{Path(str(task['source'])).stem.lower()}_{cfg.algorithm}_s{cfg.seed}"
        write_solution(solution_json(inst, cfg, result), out / f"{stem}.json")
        emit_trace(result, out / f"{stem}_trace.csv")
    return {
        "instance": inst.name.lower(),
        "seed": cfg.seed,
        "unvisited": sb.unvisited,
        "nv": sb.n_vehicles,
        "km": sb.distance,
        "scalar": sb.scalar,
        "elapsed": result.elapsed,
    }


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """Run the sweep and return the best row per instance, in input order."""
    tasks = [
        {
            "source": str(source),
            "seed": seed,
            "out_dir": None if spec.out_dir is None else str(spec.out_dir),
            "config": {
                "algorithm": spec.algorithm,
                "level": spec.level,
                "iterations": spec.iterations,
                "alpha": spec.alpha,
                "w1": spec.bias.w1,
                "w2": spec.bias.w2,
                "w3": spec.bias.w3,
                "tau": spec.tau,
                "time_budget": spec.time_budget,
            },
        }
        for source in spec.instances
        for seed in spec.seeds
    ]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            outcomes = list(pool.map(_run_one, tasks))
    else:
        outcomes = [_run_one(t) for t in tasks]

    by_instance: dict[str, list[dict]] = {}
    order: list[str] = []
    for task, outcome in zip(tasks, outcomes):
        key = outcome["instance"]
        if key not in by_instance:
            by_instance[key] = []
            order.append(key)
        by_instance[key].append(outcome)

    rows: list[ResultRow] = []
    for key in order:
        runs = by_instance[key]
        best = min(runs, key=lambda r: (r["unvisited"], r["nv"], r["km"]))
        rows.append(
            ResultRow(
                instance=key,
                nv=best["nv"],
                km=best["km"],
                scalar=best["scalar"],
                seed=best["seed"],
                elapsed=best["elapsed"],
            )
        )
    if spec.out_dir is not None:
        out = Path(spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "summary.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["instance", "nv", "km", "scalar", "seed", "elapsed"])
            for row in rows:
                writer.writerow(
                    [row.instance, row.nv, f"{row.km:.2f}", f"{row.scalar:.2f}", row.seed, f"{row.elapsed:.2f}"]
                )
    return rows


def class_summary(rows: list[ResultRow], tag: str) -> ClassSummary:
    """Average the winners over one family.  The family must be complete."""
    tag = tag.upper()
    if tag not in CLASSES:
        raise ValueError(f"unknown class {tag!r}; expected one of {CLASSES}")
    wanted = [name for name in SOLOMON_ORDER if instance_class(name) == tag]
    have = {row.instance: row for row in rows}
    missing = [name for name in wanted if name not in have]
    if missing:
        raise ValueError(f"class {tag} is incomplete; missing {', '.join(missing)}")
    members = [have[name] for name in wanted]
    k = len(members)
    return ClassSummary(
        tag=tag,
        n_instances=k,
        mean_nv=sum(r.nv for r in members) / k,
        mean_km=sum(r.km for r in members) / k,
        mean_scalar=sum(r.scalar for r in members) / k,
    )


def load_reference_table() -> dict[str, dict[str, float]]:
    """Published route-count and distance references for the 56 instances.

    Keys: per instance, `best_nv`/`best_km` for the best known solution and
    `ortools_nv`/`ortools_km` for a strong constraint-programming baseline.
    """
    ref = resources.files("nrpa_vrptw").joinpath("data/reference_results.csv")
    table: dict[str, dict[str, float]] = {}
    with ref.open() as fh:
        for row in csv.DictReader(fh):
            table[row["instance"]] = {
                "best_nv": float(row["best_nv"]),
                "best_km": float(row["best_km"]),
                "ortools_nv": float(row["ortools_nv"]),
                "ortools_km": float(row["ortools_km"]),
            }
    return table
