"""State-dependent sampling biases built from the route-quality heuristics.

Each candidate arc (i, j) taken at vehicle time vt gets a bias added to its
policy logit before sampling.  Three ingredients, each normalized into a
dimensionless penalty and each weighted separately:

  distance  -- how long the arc is, relative to the longest arc anywhere
  waiting   -- how long the vehicle would idle at j before its window opens
  lateness  -- how little slack remains between service start and j's due date

All three are zero or negative, so a bias can only make a move less likely
relative to the best candidate.  Forced returns to the depot are never
biased.  The weights default to the tuning that works well across the
clustered and random benchmark families.
"""

from __future__ import annotations

from dataclasses import dataclass

from .routing import Move, RouteState
from .solomon import Geometry, Instance

__all__ = [
    "BiasWeights",
    "beta_distance",
    "beta_waiting",
    "beta_lateness",
    "beta_total",
]


@dataclass(frozen=True)
class BiasWeights:
    """Multipliers for the three bias ingredients.

    Zero is allowed; an all-zero setting reduces the biased sampler to the
    plain policy sampler.
    """

    w1: float = 15.0  # distance
    w2: float = 75.0  # waiting
    w3: float = 10.0  # lateness

    def __post_init__(self):
        for name in ("w1", "w2", "w3"):
            v = getattr(self, name)
            if not v >= 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")


def beta_distance(i: int, j: int, geom: Geometry) -> float:
    """Arc length normalized by the longest arc: -d(i,j)/max(d)."""
    if geom.max_dist <= 0:
        return 0.0
    return -float(geom.dist[i, j]) / geom.max_dist


def beta_waiting(i: int, j: int, vt: float, geom: Geometry, inst: Instance) -> float:
    """Idle time at j if its window has not opened on arrival.

    Departures from the depot measure waiting against the earliest window
    opening among all customers rather than time zero, so the first arc of a
    tour is not punished for the unavoidable wait.
    """
    if geom.biggest_tw <= 0:
        return 0.0
    arrival = vt + float(geom.dist[i, j])
    ready = inst.nodes[j].ready
    if arrival > ready:
        return 0.0
    if i == 0:
        effective = max(geom.ftw, arrival)
        return -(ready - effective) / geom.biggest_tw
    return -(ready - arrival) / geom.biggest_tw


def beta_lateness(i: int, j: int, vt: float, geom: Geometry, inst: Instance) -> float:
    """Remaining slack before j's due date once service can start.

    Tighter arrivals lose less, so urgent customers bubble up.
    """
    if geom.biggest_tw <= 0:
        return 0.0
    node = inst.nodes[j]
    start = max(vt + float(geom.dist[i, j]), node.ready)
    return -(node.due - start) / geom.biggest_tw


def beta_total(move: Move, state: RouteState, weights: BiasWeights, geom: Geometry, inst: Instance) -> float:
    """Weighted sum of the three terms for one candidate move.

    Forced depot returns get zero bias: they are the only candidate when
    they appear, so biasing them would only perturb the weight updates.
    """
    if move.arrival == 0:
        return 0.0
    i, j, vt = move.departure, move.arrival, state.clock
    return (
        weights.w1 * beta_distance(i, j, geom)
        + weights.w2 * beta_waiting(i, j, vt, geom, inst)
        + weights.w3 * beta_lateness(i, j, vt, geom, inst)
    )
