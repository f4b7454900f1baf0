"""Compare the three nested searches at desk scale.

Level 2 with 100 iterations costs 10,000 playouts per run, a few seconds
each. The plain variant starts from zero weights, the distance variant
starts from normalized negative arc lengths, and the biased variant keeps
zero weights but steers every softmax with the dynamic penalties.

Run:  python3 demos/nested_search.py [instance]
"""

import sys
import time

from nrpa_vrptw import SearchConfig, build_geometry, load_instance, run


def main():
    name = sys.argv[1] if len(sys.argv) > 1 else "c101"
    inst = load_instance(name)
    geom = build_geometry(inst)
    print(f"{inst.name}: {inst.n - 1} customers, fleet {inst.fleet_size}, "
          f"capacity {inst.capacity}\n")

    for algo in ("nrpa", "nrpad", "gnrpa"):
        config = SearchConfig(algorithm=algo, level=2, iterations=100,
                              alpha=1.0, seed=0, time_budget=None)
        t0 = time.perf_counter()
        result = run(config, inst, geom)
        elapsed = time.perf_counter() - t0
        sb = result.best_score
        print(f"{algo:6s}  unvisited {sb.unvisited:3d}   "
              f"vehicles {sb.n_vehicles:2d}   km {sb.distance:8.2f}   "
              f"({result.playout_count} playouts, {elapsed:.1f}s)")

    # the trace records every improvement; print the biased run's path
    config = SearchConfig(algorithm="gnrpa", level=2, iterations=100, seed=0,
                          time_budget=None)
    result = run(config, inst, geom)
    print("\nbiased run improvement trace (seconds -> scalar):")
    for t, s in result.trace[:10]:
        print(f"  {t:7.3f}  {s:12.2f}")
    if len(result.trace) > 10:
        t, s = result.trace[-1]
        print(f"  ...\n  {t:7.3f}  {s:12.2f}")


if __name__ == "__main__":
    main()
