"""How the dynamic bias reshapes move probabilities.

The biased softmax adds three penalties to each candidate arc, all computed
from the state at the moment of the decision:

  w1 * beta_distance   long arcs, relative to the longest arc anywhere
  w2 * beta_waiting    idle time if the vehicle arrives before the window
  w3 * beta_lateness   slack left before the window closes

Run:  python3 demos/bias_anatomy.py
"""

import numpy as np

from nrpa_vrptw import (
    BiasWeights,
    beta_distance,
    beta_lateness,
    beta_total,
    beta_waiting,
    build_geometry,
    init_uniform,
    initial_state,
    legal_moves,
    load_instance,
    move_distribution,
)


def main():
    inst = load_instance("c101")
    geom = build_geometry(inst)
    state = initial_state(inst)
    moves = legal_moves(state, inst, geom)
    print(f"at the depot, clock 0: {len(moves)} legal first moves")

    weights = BiasWeights()  # w1=15, w2=75, w3=10
    print(f"bias weights: w1={weights.w1:g} (distance), "
          f"w2={weights.w2:g} (waiting), w3={weights.w3:g} (lateness)\n")

    vt = state.clock  # departure-ready instant, 0 at the depot
    rows = []
    for mv in moves:
        i, j = mv.departure, mv.arrival
        bd = beta_distance(i, j, geom)
        bw = beta_waiting(i, j, vt, geom, inst)
        bl = beta_lateness(i, j, vt, geom, inst)
        rows.append((mv, bd, bw, bl, beta_total(mv, state, weights, geom, inst)))

    rows.sort(key=lambda r: -r[4])
    print("top five arcs by total bias (least penalized first):")
    print("  arc          beta_dist  beta_wait  beta_late      total")
    for mv, bd, bw, bl, bt in rows[:5]:
        print(f"  0 -> {mv.arrival:<3}    {bd:9.3f}  {bw:9.3f}  {bl:9.3f}  {bt:9.2f}")

    # under a uniform policy the bias alone decides the distribution
    policy = init_uniform(inst.n)
    betas = np.array([r[4] for r in rows])
    dist = move_distribution(policy, [r[0] for r in rows], betas)
    order = np.argsort(dist.probs)[::-1]
    print("\nresulting probabilities (uniform weights, bias only):")
    for i in order[:5]:
        print(f"  0 -> {rows[i][0].arrival:<3}  p = {dist.probs[i]:.3f}")
    print(f"  ... remaining {len(moves) - 5} moves share "
          f"p = {dist.probs[order[5:]].sum():.4f}")


if __name__ == "__main__":
    main()
