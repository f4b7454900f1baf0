"""Route construction state for the CVRPTW and its feasibility rules.

A solution is built one move at a time.  From the current position a vehicle
may drive to any unvisited customer whose demand fits the remaining capacity,
whose due date it can meet, and from which it could still return to the depot
before the depot closes.  When no customer qualifies the vehicle returns to
the depot and, if customers remain and the fleet is not exhausted, the next
vehicle starts.  Service begins at max(arrival, ready); the vehicle waits out
early arrivals.

These functions are the plain reference implementation: explicit, unoptimized
and independent of the compiled playout kernel, so they double as an oracle
in tests and as the backing of `validate_solution`.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from .solomon import Geometry, Instance

__all__ = [
    "Move",
    "RouteState",
    "ScoreBreakdown",
    "SolutionError",
    "initial_state",
    "legal_moves",
    "play",
    "is_terminal",
    "score",
    "lexicographic_key",
    "tours_from_moves",
    "validate_solution",
]

#: scalar score layers: unvisited customers, then fleet size, then distance
UNVISITED_PENALTY = 1_000_000.0
VEHICLE_PENALTY = 1_000.0


@dataclass(frozen=True, slots=True)
class Move:
    """A single arc decision: drive from `departure` to `arrival`.

    `code` indexes the policy weight table: arrival * n + departure.
    """

    departure: int
    arrival: int
    code: int


@dataclass
class ScoreBreakdown:
    """Final solution quality, split into its lexicographic layers."""

    unvisited: int
    n_vehicles: int
    distance: float

    @property
    def scalar(self) -> float:
        return self.unvisited * UNVISITED_PENALTY + self.n_vehicles * VEHICLE_PENALTY + self.distance


def lexicographic_key(breakdown: ScoreBreakdown) -> tuple[int, int, float]:
    """Comparison key: unvisited first, then vehicles, then distance."""
    return (breakdown.unvisited, breakdown.n_vehicles, breakdown.distance)


@dataclass
class RouteState:
    """Mutable construction state.  `play` returns an updated copy."""

    visited: np.ndarray  # bool per node; index 0 unused
    vehicle_idx: int  # 0-based index of the active vehicle
    position: int  # node the active vehicle is at
    clock: float  # departure-ready time at `position`
    load: float  # demand served so far by the active vehicle
    total_distance: float
    tours: list[list[int]]  # completed tours, customers only
    current_tour: list[int]  # customers served by the active vehicle
    terminal: bool = False

    @property
    def n_unvisited(self) -> int:
        return int(self.visited.size - 1 - int(self.visited[1:].sum()))

    @property
    def vehicles_used(self) -> int:
        used = sum(1 for t in self.tours if t)
        if self.current_tour:
            used += 1
        return used

    def clone(self) -> "RouteState":
        return RouteState(
            visited=self.visited.copy(),
            vehicle_idx=self.vehicle_idx,
            position=self.position,
            clock=self.clock,
            load=self.load,
            total_distance=self.total_distance,
            tours=[list(t) for t in self.tours],
            current_tour=list(self.current_tour),
            terminal=self.terminal,
        )


def initial_state(inst: Instance) -> RouteState:
    """Fresh state: first vehicle at the depot at time zero."""
    return RouteState(
        visited=np.zeros(inst.n, dtype=bool),
        vehicle_idx=0,
        position=0,
        clock=0.0,
        load=0.0,
        total_distance=0.0,
        tours=[],
        current_tour=[],
    )


def _feasible_customer(state: RouteState, j: int, inst: Instance, geom: Geometry) -> bool:
    node = inst.nodes[j]
    if state.load + node.demand > inst.capacity:
        return False
    arrival = state.clock + geom.dist[state.position, j]
    if arrival > node.due:
        return False
    depart = max(arrival, node.ready) + node.service
    if depart + geom.dist[j, 0] > inst.nodes[0].due:
        return False
    return True


def legal_moves(state: RouteState, inst: Instance, geom: Geometry) -> list[Move]:
    """Moves available from `state`, in ascending arrival-node order.

    Customer moves that satisfy capacity, due date and depot return come
    first whenever any exist.  Otherwise the only move is the forced return
    to the depot, which also rolls over to the next vehicle when one is
    available and customers remain.
    """
    if state.terminal:
        raise ValueError("state is terminal; no moves exist")
    n = inst.n
    pos = state.position
    moves = [
        Move(pos, j, j * n + pos)
        for j in range(1, n)
        if not state.visited[j] and _feasible_customer(state, j, inst, geom)
    ]
    if moves:
        return moves
    # No serviceable customer: return to the depot (a depot-to-depot step
    # closes the current vehicle when it is stranded at the depot).
    return [Move(pos, 0, pos)]


def play(state: RouteState, move: Move, inst: Instance, geom: Geometry) -> RouteState:
    """Apply one move and return the successor state."""
    if state.terminal:
        raise ValueError("state is terminal; no moves can be played")
    if move.departure != state.position:
        raise ValueError(f"move departs from {move.departure} but vehicle is at {state.position}")
    nxt = state.clone()
    j = move.arrival
    nxt.total_distance += float(geom.dist[state.position, j])
    if j == 0:
        # Tour closes; next vehicle (if any) starts fresh at the depot.
        if nxt.current_tour:
            nxt.tours.append(nxt.current_tour)
        nxt.current_tour = []
        nxt.position = 0
        nxt.clock = 0.0
        nxt.load = 0.0
        nxt.vehicle_idx += 1
        all_done = bool(nxt.visited[1:].all())
        nxt.terminal = all_done or nxt.vehicle_idx >= inst.fleet_size
    else:
        node = inst.nodes[j]
        arrival = state.clock + float(geom.dist[state.position, j])
        nxt.clock = max(arrival, node.ready) + node.service
        nxt.load += node.demand
        nxt.visited[j] = True
        nxt.current_tour.append(j)
        nxt.position = j
        nxt.terminal = False
    return nxt


def is_terminal(state: RouteState, inst: Instance) -> bool:
    """True once every customer is served or the fleet is exhausted,
    with the last vehicle back at the depot."""
    return state.terminal


def score(state: RouteState, inst: Instance) -> ScoreBreakdown:
    """Score a terminal state.  Lower is better."""
    if not state.terminal:
        raise ValueError("score is only defined for terminal states")
    return ScoreBreakdown(
        unvisited=state.n_unvisited,
        n_vehicles=state.vehicles_used,
        distance=state.total_distance,
    )


def tours_from_moves(moves: list[Move]) -> list[list[int]]:
    """Group a move sequence into per-vehicle customer lists.

    Depot arrivals close tours; vehicles that served nobody are dropped.
    """
    tours: list[list[int]] = []
    current: list[int] = []
    for mv in moves:
        if mv.arrival == 0:
            if current:
                tours.append(current)
                current = []
        else:
            current.append(mv.arrival)
    if current:
        tours.append(current)
    return tours


class SolutionError(ValueError):
    """A tour set violates the problem constraints."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


def validate_solution(inst: Instance, geom: Geometry, tours: list[list[int]]) -> ScoreBreakdown:
    """Check a tour set against every constraint and recompute its score.

    Walks each tour depot-to-depot, accumulating distance in the same order
    as the construction engine so the recomputed value matches bit for bit.
    Raises SolutionError listing all violations found.
    """
    violations: list[str] = []
    seen: set[int] = set()
    nonempty = [t for t in tours if t]
    if len(nonempty) != len(tours):
        violations.append("empty tour in solution")
    if len(nonempty) > inst.fleet_size:
        violations.append(f"{len(nonempty)} tours exceed fleet size {inst.fleet_size}")
    depot_due = inst.nodes[0].due
    total = 0.0
    for t_idx, tour in enumerate(nonempty):
        load = 0.0
        clock = 0.0
        pos = 0
        for j in tour:
            if not 1 <= j < inst.n:
                violations.append(f"tour {t_idx}: invalid node id {j}")
                continue
            if j in seen:
                violations.append(f"tour {t_idx}: customer {j} served twice")
            seen.add(j)
            node = inst.nodes[j]
            load += node.demand
            arrival = clock + float(geom.dist[pos, j])
            total += float(geom.dist[pos, j])
            if arrival > node.due:
                violations.append(
                    f"tour {t_idx}: arrives at customer {j} at {arrival:.6f} after due date {node.due}"
                )
            clock = max(arrival, node.ready) + node.service
            pos = j
        if load > inst.capacity:
            violations.append(f"tour {t_idx}: load {load} exceeds capacity {inst.capacity}")
        back = clock + float(geom.dist[pos, 0])
        total += float(geom.dist[pos, 0])
        if back > depot_due:
            violations.append(f"tour {t_idx}: returns to depot at {back:.6f} after closing {depot_due}")
    if violations:
        raise SolutionError(violations)
    return ScoreBreakdown(
        unvisited=inst.n_customers - len(seen),
        n_vehicles=len(nonempty),
        distance=total,
    )
