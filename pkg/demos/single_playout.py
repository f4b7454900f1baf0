"""Walk one stochastic tour construction step by step.

A playout starts every vehicle at the depot and keeps sampling arcs from the
softmax policy until all customers are served or the fleet is exhausted. The
only move offered when nothing is serviceable is the forced depot return.

Run:  python3 demos/single_playout.py
"""

from nrpa_vrptw import (
    SearchConfig,
    build_geometry,
    init_uniform,
    load_instance,
    playout,
    tours_from_moves,
    validate_solution,
)


def main():
    inst = load_instance("c101")
    geom = build_geometry(inst)

    # fresh zero weights; the biased config still steers every softmax
    policy = init_uniform(inst.n)
    config = SearchConfig(algorithm="gnrpa", level=1, iterations=1, seed=42)

    record = playout(policy, config, inst, geom, rng=42)
    print(f"playout finished after {record.n_steps} decisions")
    print(f"score: {record.score.unvisited} unvisited, "
          f"{record.score.n_vehicles} vehicles, "
          f"{record.score.distance:.2f} km "
          f"(scalar {record.score.scalar:.2f})")

    # first few decisions: how many arcs were on offer, which one was taken
    for s in range(5):
        move = record.sequence[s]
        k = len(record.codes[s])
        print(f"  step {s}: {k:3d} legal moves, took "
              f"{move.departure:>3} -> {move.arrival:<3} (code {move.code})")

    tours = tours_from_moves(record.sequence)
    print(f"\n{len(tours)} tours, lengths {[len(t) for t in tours]}")

    # the independent validator recomputes everything from the tours alone
    check = validate_solution(inst, geom, tours)
    assert check == record.score
    print("validator agrees with the engine score, bit for bit")


if __name__ == "__main__":
    main()
