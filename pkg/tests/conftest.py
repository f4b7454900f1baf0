"""Shared fixtures: tiny hand-built instances and a randomized corpus."""

import numpy as np
import pytest

from nrpa_vrptw import Instance, Node, build_geometry, load_instance


def make_instance(customers, *, capacity=200, fleet=25, depot_due=1000,
                  depot_xy=(0.0, 0.0), name="toy"):
    """Build an instance from (x, y, demand, ready, due, service) rows."""
    nodes = [Node(0, depot_xy[0], depot_xy[1], 0, 0, depot_due, 0)]
    for k, (x, y, d, a, b, s) in enumerate(customers, start=1):
        nodes.append(Node(k, x, y, d, a, b, s))
    return Instance(name=name, fleet_size=fleet, capacity=capacity, nodes=tuple(nodes))


@pytest.fixture(scope="session")
def toy_pair():
    """Two symmetric customers; both visit orders feasible."""
    inst = make_instance(
        [(1, 0, 1, 0, 900, 1), (-1, 0, 1, 0, 900, 1)],
        capacity=10, fleet=3, depot_due=1000,
    )
    return inst, build_geometry(inst)


@pytest.fixture(scope="session")
def toy_fleet():
    """Six customers, capacity forces at least two vehicles."""
    rows = [
        (4, 0, 3, 0, 300, 5),
        (8, 2, 4, 10, 350, 5),
        (3, 7, 5, 0, 400, 5),
        (-5, 1, 3, 20, 380, 5),
        (-2, -6, 4, 0, 360, 5),
        (6, -3, 2, 0, 390, 5),
    ]
    inst = make_instance(rows, capacity=11, fleet=4, depot_due=500)
    return inst, build_geometry(inst)


@pytest.fixture(scope="session")
def c101():
    inst = load_instance("c101")
    return inst, build_geometry(inst)


def random_instance(rng: np.random.Generator) -> Instance:
    """Small random instance; tightness varies so some playouts strand customers."""
    m = int(rng.integers(3, 10))
    rows = []
    for _ in range(m):
        x = float(rng.integers(-20, 21))
        y = float(rng.integers(-20, 21))
        demand = int(rng.integers(1, 11))
        ready = int(rng.integers(0, 150))
        width = int(rng.integers(30, 200))
        service = int(rng.integers(2, 15))
        rows.append((x, y, demand, ready, ready + width, service))
    return make_instance(
        rows,
        capacity=int(rng.integers(12, 31)),
        fleet=int(rng.integers(2, 5)),
        depot_due=400,
        name="rand",
    )
