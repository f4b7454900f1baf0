"""Multi-seed benchmark runs with on-disk artifacts.

The harness sweeps (instance, seed) pairs, validates every solution against
the independent checker, keeps the lexicographic best per instance, and
writes solution JSON, improvement traces, and a summary CSV. The same flow
is available from the command line:

  python3 -m nrpa_vrptw bench --instances c101,c102 --seeds 0,1 \
      --level 2 --iterations 100 --out runs/demo
  python3 -m nrpa_vrptw summarize runs/demo/summary.csv --class c1

Run:  python3 demos/benchmark_harness.py
"""

import tempfile
from pathlib import Path

from nrpa_vrptw import ExperimentSpec, load_reference_table, run_experiment


def main():
    out = Path(tempfile.mkdtemp(prefix="bench_demo_"))
    spec = ExperimentSpec(
        instances=["c101", "c106"],
        algorithm="gnrpa",
        level=2,
        iterations=100,
        seeds=[0, 1, 2],
        out_dir=out,
    )
    rows = run_experiment(spec)

    reference = load_reference_table()
    print(f"{'instance':10s} {'nv':>3} {'km':>9}   best known")
    for row in rows:
        ref = reference[row.instance]
        print(f"{row.instance:10s} {row.nv:3d} {row.km:9.2f}   "
              f"{ref['best_nv']:.0f} / {ref['best_km']:.2f}")

    print(f"\nartifacts in {out}:")
    for p in sorted(out.rglob("*")):
        if p.is_file():
            print(f"  {p.relative_to(out)}")


if __name__ == "__main__":
    main()
