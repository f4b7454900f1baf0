"""Solomon-format instance files and the geometry derived from them.

The classic 100-customer CVRPTW benchmark ships as plain text: an instance
name, a VEHICLE section giving fleet size and capacity, and a CUSTOMER table
with one row per node (the depot is row 0).  `parse_instance` turns that text
into an immutable `Instance`, `serialize_instance` writes it back out in
canonical form, and `build_geometry` precomputes the full Euclidean distance
matrix plus the few scalar statistics the bias terms need.

Distances are kept in full double precision; nothing is rounded or truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "Node",
    "Instance",
    "Geometry",
    "ParseError",
    "parse_instance",
    "serialize_instance",
    "build_geometry",
    "load_instance",
    "list_bundled_instances",
]


class ParseError(ValueError):
    """Raised when instance text violates the Solomon layout.

    Carries the 1-based source line number when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, slots=True)
class Node:
    """One row of the customer table.  Node 0 is the depot."""

    id: int
    x: float
    y: float
    demand: float
    ready: float
    due: float
    service: float


@dataclass(frozen=True)
class Instance:
    """A parsed instance: homogeneous fleet plus an ordered node list."""

    name: str
    fleet_size: int
    capacity: float
    nodes: tuple[Node, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("instance needs a depot and at least one customer")
        if self.fleet_size < 1:
            raise ValueError("fleet size must be at least 1")
        if self.capacity <= 0:
            raise ValueError("vehicle capacity must be positive")
        for idx, node in enumerate(self.nodes):
            if node.id != idx:
                raise ValueError(f"node ids must be contiguous from 0, got {node.id} at position {idx}")
            if node.ready > node.due:
                raise ValueError(f"node {node.id}: ready time {node.ready} exceeds due date {node.due}")
            if node.demand < 0:
                raise ValueError(f"node {node.id}: negative demand")
            if node.service < 0:
                raise ValueError(f"node {node.id}: negative service time")
        depot = self.nodes[0]
        if depot.demand != 0 or depot.service != 0:
            raise ValueError("depot must have zero demand and zero service time")
        worst = max(n.demand for n in self.nodes[1:])
        if worst > self.capacity:
            raise ValueError(f"customer demand {worst} exceeds vehicle capacity {self.capacity}")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def n_customers(self) -> int:
        return len(self.nodes) - 1

    @property
    def depot(self) -> Node:
        return self.nodes[0]


@dataclass(frozen=True, eq=False)
class Geometry:
    """Distance matrix and the scalar statistics shared by all bias terms.

    dist       -- (n, n) Euclidean distances, symmetric, zero diagonal
    max_dist   -- largest pairwise distance in the instance
    biggest_tw -- widest time window over all nodes, depot included
    ftw        -- earliest window opening over the customers
    """

    dist: np.ndarray
    max_dist: float
    biggest_tw: float
    ftw: float


def build_geometry(inst: Instance) -> Geometry:
    coords = np.array([(n.x, n.y) for n in inst.nodes], dtype=np.float64)
    delta = coords[:, None, :] - coords[None, :, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    dist.setflags(write=False)
    biggest_tw = max(n.due - n.ready for n in inst.nodes)
    ftw = min(n.ready for n in inst.nodes[1:])
    return Geometry(
        dist=dist,
        max_dist=float(dist.max()),
        biggest_tw=float(biggest_tw),
        ftw=float(ftw),
    )


def _tokens(line: str) -> list[str]:
    return line.split()


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_instance(text: str) -> Instance:
    """Parse Solomon plain text.  Raises ParseError with a line number."""
    lines = text.splitlines()
    name = None
    i = 0
    n_lines = len(lines)
    while i < n_lines and not lines[i].strip():
        i += 1
    if i == n_lines:
        raise ParseError("empty file")
    name = lines[i].strip()
    i += 1

    # VEHICLE section: a header word, a column header, then "count capacity".
    while i < n_lines and lines[i].strip().upper() != "VEHICLE":
        if lines[i].strip() and _tokens(lines[i])[0].upper() == "CUSTOMER":
            raise ParseError("CUSTOMER section before VEHICLE section", i + 1)
        i += 1
    if i == n_lines:
        raise ParseError("VEHICLE section not found")
    i += 1
    fleet_size = capacity = None
    while i < n_lines:
        toks = _tokens(lines[i])
        if len(toks) >= 2 and _is_number(toks[0]) and _is_number(toks[1]):
            fleet_size = int(float(toks[0]))
            capacity = float(toks[1])
            i += 1
            break
        if toks and toks[0].upper() == "CUSTOMER":
            raise ParseError("vehicle count and capacity not found before CUSTOMER section", i + 1)
        i += 1
    if fleet_size is None:
        raise ParseError("vehicle count and capacity not found")

    while i < n_lines and lines[i].strip().upper() != "CUSTOMER":
        i += 1
    if i == n_lines:
        raise ParseError("CUSTOMER section not found")
    i += 1

    rows: list[tuple[Node, int]] = []
    started = False
    for j in range(i, n_lines):
        line = lines[j]
        if not line.strip():
            continue
        toks = _tokens(line)
        numeric = len(toks) >= 7 and all(_is_number(t) for t in toks[:7])
        if not numeric:
            if started:
                raise ParseError(f"malformed customer row: {line.strip()!r}", j + 1)
            continue  # column headers
        started = True
        vals = [float(t) for t in toks[:7]]
        node = Node(
            id=int(vals[0]),
            x=vals[1],
            y=vals[2],
            demand=vals[3],
            ready=vals[4],
            due=vals[5],
            service=vals[6],
        )
        rows.append((node, j + 1))
    if not rows:
        raise ParseError("customer table is empty")

    seen: set[int] = set()
    for node, ln in rows:
        if node.id in seen:
            raise ParseError(f"duplicate node id {node.id}", ln)
        seen.add(node.id)
        if node.id != len(seen) - 1:
            raise ParseError(f"node ids must be contiguous from 0, got {node.id}", ln)
        if node.ready > node.due:
            raise ParseError(f"node {node.id}: ready time {_fmt(node.ready)} exceeds due date {_fmt(node.due)}", ln)

    try:
        return Instance(
            name=name,
            fleet_size=fleet_size,
            capacity=capacity,
            nodes=tuple(node for node, _ in rows),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _fmt(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return repr(v)


def serialize_instance(inst: Instance) -> str:
    """Write canonical Solomon text.  parse_instance round-trips it exactly."""
    out = [inst.name, "", "VEHICLE", "NUMBER     CAPACITY"]
    out.append(f"{inst.fleet_size:>4}       {_fmt(inst.capacity):>7}")
    out.append("")
    out.append("CUSTOMER")
    out.append(
        "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE TIME"
    )
    out.append("")
    for node in inst.nodes:
        out.append(
            f"{node.id:>5}{_fmt(node.x):>9}{_fmt(node.y):>10}"
            f"{_fmt(node.demand):>10}{_fmt(node.ready):>12}{_fmt(node.due):>10}{_fmt(node.service):>13}"
        )
    return "\n".join(out) + "\n"


def _data_dir():
    return resources.files("nrpa_vrptw").joinpath("data/solomon")


def list_bundled_instances() -> list[str]:
    """Names of the bundled benchmark instances, in benchmark order."""
    names = [p.name[:-4] for p in _data_dir().iterdir() if p.name.endswith(".txt")]

    def key(name: str):
        head = name.rstrip("0123456789")
        return (head, int(name[len(head):]))

    return sorted(names, key=key)


def load_instance(source: str | Path) -> Instance:
    """Load an instance from a file path or a bundled name like 'c101'."""
    path = Path(source)
    if path.is_file():
        return parse_instance(path.read_text())
    name = str(source).lower()
    if not name.endswith(".txt"):
        name += ".txt"
    ref = _data_dir().joinpath(name)
    if not ref.is_file():
        raise FileNotFoundError(f"no such file and no bundled instance named {source!r}")
    return parse_instance(ref.read_text())
