"""Move-indexed policy weights and the Gibbs sampling helpers.

A policy is a dense vector of weights over every (departure, arrival) node
pair; a move's weight lives at index arrival * n + departure.  Moves are
sampled with probability exp(w/tau + beta) normalized over the step's legal
moves, computed with the usual max-subtraction so large weights cannot
overflow.

Sampling uses an explicit splitmix64 generator.  The compiled playout kernel
carries an identical implementation, so sequences are reproducible from a
seed across both paths and independent of numpy's generator evolution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .routing import Move
from .solomon import Geometry

__all__ = [
    "Policy",
    "MoveDistribution",
    "SplitMix64",
    "code_move",
    "decode_move",
    "init_uniform",
    "init_distance",
    "move_distribution",
    "sample_move",
]


def code_move(departure: int, arrival: int, n: int) -> int:
    """Index of the (departure, arrival) pair in an n-node weight table."""
    if not 0 <= departure < n:
        raise ValueError(f"departure {departure} out of range for {n} nodes")
    if not 0 <= arrival < n:
        raise ValueError(f"arrival {arrival} out of range for {n} nodes")
    return arrival * n + departure


def decode_move(code: int, n: int) -> tuple[int, int]:
    """Inverse of code_move: (departure, arrival)."""
    if not 0 <= code < n * n:
        raise ValueError(f"code {code} out of range for {n} nodes")
    return code % n, code // n


@dataclass
class Policy:
    """Dense weight table over all n*n move codes."""

    n: int
    weights: np.ndarray
    tau: float = 1.0

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.shape != (self.n * self.n,):
            raise ValueError(f"weights must have shape ({self.n * self.n},)")
        if not np.isfinite(self.weights).all():
            raise ValueError("policy weights must be finite")
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    def copy(self) -> "Policy":
        return Policy(self.n, self.weights.copy(), self.tau)

    def save(self, path: str | Path) -> None:
        """Debugging snapshot; the JSON layout is not a stability contract."""
        payload = {"n": self.n, "tau": self.tau, "weights": self.weights.tolist()}
        Path(path).write_text(json.dumps(payload))

    @classmethod
    def load(cls, path: str | Path) -> "Policy":
        payload = json.loads(Path(path).read_text())
        return cls(payload["n"], np.array(payload["weights"], dtype=np.float64), payload["tau"])


def init_uniform(n: int) -> Policy:
    """All-zero weights: every legal move equally likely."""
    return Policy(n, np.zeros(n * n, dtype=np.float64))


def init_distance(n: int, geom: Geometry) -> Policy:
    """Weights seeded with normalized negative distance, -d(i,j)/max(d).

    Short arcs start more likely; the diagonal stays at zero.
    """
    if geom.dist.shape != (n, n):
        raise ValueError(f"geometry is for {geom.dist.shape[0]} nodes, policy wants {n}")
    scale = geom.max_dist if geom.max_dist > 0 else 1.0
    # weights[arrival * n + departure] = -d(departure, arrival) / max; the
    # matrix is symmetric so the row/column roles coincide.
    return Policy(n, np.ascontiguousarray(-(geom.dist / scale)).ravel())


@dataclass
class MoveDistribution:
    """Sampling probabilities for one step's legal moves."""

    moves: list[Move]
    odds: np.ndarray  # exp(w/tau + beta), after max-subtraction
    probs: np.ndarray
    z: float


def move_distribution(policy: Policy, moves: list[Move], betas: np.ndarray | None = None) -> MoveDistribution:
    """Gibbs distribution over `moves` under `policy` with optional biases."""
    if not moves:
        raise ValueError("no moves to build a distribution over")
    codes = np.fromiter((m.code for m in moves), dtype=np.int64, count=len(moves))
    logits = policy.weights[codes] / policy.tau
    if betas is not None:
        betas = np.asarray(betas, dtype=np.float64)
        if betas.shape != (len(moves),):
            raise ValueError("betas must align with moves")
        logits = logits + betas
    logits = logits - logits.max()
    odds = np.exp(logits)
    z = float(odds.sum())
    return MoveDistribution(moves=list(moves), odds=odds, probs=odds / z, z=z)


class SplitMix64:
    """splitmix64 sequence; uniform() yields doubles in [0, 1).

    Mirrors the generator compiled into the playout kernel bit for bit.
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self._MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self._MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return (z ^ (z >> 31)) & self._MASK

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53


def sample_move(dist: MoveDistribution, rng: SplitMix64) -> int:
    """Draw an index into dist.moves by cumulative odds."""
    r = rng.uniform() * dist.z
    acc = 0.0
    last = len(dist.moves) - 1
    for i, o in enumerate(dist.odds):
        acc += float(o)
        if r < acc:
            return i
    return last
