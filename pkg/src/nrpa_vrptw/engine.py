"""Compiled playout and adaptation kernels.

A search at level 3 with 100 iterations performs one million playouts, far
beyond what the interpreted state machine in `routing` can sustain, so the
inner loops are compiled with numba.  The kernels mirror the reference
semantics exactly: same candidate enumeration order, same feasibility rules,
same bias formulas, same max-subtracted Gibbs sampling, and a splitmix64
generator that matches `policy.SplitMix64` bit for bit.

Playouts write their full decision record (move sequence, the legal-move
codes and biases at every step, and which index was chosen) into caller
provided flat buffers, which is all the adaptation step needs; nothing is
recomputed from the state machine afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .solomon import Geometry, Instance

__all__ = ["CompiledInstance", "playout_kernel", "adapt_kernel", "rng_uniform"]

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 2.0 ** -53


@dataclass(frozen=True)
class CompiledInstance:
    """Instance and geometry flattened into kernel-ready arrays."""

    n: int
    dist: np.ndarray
    demand: np.ndarray
    ready: np.ndarray
    due: np.ndarray
    service: np.ndarray
    capacity: float
    fleet_size: int
    max_dist: float
    biggest_tw: float
    ftw: float

    @classmethod
    def from_instance(cls, inst: Instance, geom: Geometry) -> "CompiledInstance":
        return cls(
            n=inst.n,
            dist=np.ascontiguousarray(geom.dist, dtype=np.float64),
            demand=np.array([nd.demand for nd in inst.nodes], dtype=np.float64),
            ready=np.array([nd.ready for nd in inst.nodes], dtype=np.float64),
            due=np.array([nd.due for nd in inst.nodes], dtype=np.float64),
            service=np.array([nd.service for nd in inst.nodes], dtype=np.float64),
            capacity=float(inst.capacity),
            fleet_size=int(inst.fleet_size),
            max_dist=geom.max_dist,
            biggest_tw=geom.biggest_tw,
            ftw=geom.ftw,
        )

    @property
    def max_steps(self) -> int:
        # Every step either serves a customer or closes a vehicle.
        return (self.n - 1) + self.fleet_size + 1

    @property
    def max_flat(self) -> int:
        return self.max_steps * self.n


@njit(cache=True)
def _next_u64(state):
    state[0] = state[0] + _GAMMA
    z = state[0]
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def rng_uniform(state):
    """Next double in [0, 1) from a one-element uint64 state array."""
    return np.float64(_next_u64(state) >> _S11) * _INV53


@njit(cache=True)
def playout_kernel(
    dist,
    demand,
    ready,
    due,
    service,
    capacity,
    fleet_size,
    weights,
    tau,
    use_bias,
    w1,
    w2,
    w3,
    max_dist,
    biggest_tw,
    ftw,
    rng_state,
    seq_dep,
    seq_arr,
    chosen,
    codes,
    betas,
    offsets,
):
    """Build one complete solution, recording every sampling decision.

    Returns (n_steps, unvisited, n_vehicles, total_distance).  The record
    buffers are filled for steps 0..n_steps-1; codes and betas are flat with
    offsets[s]..offsets[s+1] delimiting step s.
    """
    n = dist.shape[0]
    visited = np.zeros(n, dtype=np.uint8)
    cand = np.empty(n, dtype=np.int64)
    logits = np.empty(n, dtype=np.float64)
    n_unvisited = n - 1
    vehicle = 0
    pos = 0
    clock = 0.0
    load = 0.0
    total = 0.0
    nv = 0
    served_by_current = 0
    step = 0
    flat = 0
    depot_due = due[0]
    offsets[0] = 0
    while True:
        k = 0
        for j in range(1, n):
            if visited[j] == 0 and load + demand[j] <= capacity:
                arrival = clock + dist[pos, j]
                if arrival <= due[j]:
                    start = arrival if arrival > ready[j] else ready[j]
                    if start + service[j] + dist[j, 0] <= depot_due:
                        cand[k] = j
                        k += 1
        if k == 0:
            cand[0] = 0  # forced return, possibly a depot-to-depot closure
            k = 1
        top = -np.inf
        for t in range(k):
            j = cand[t]
            codes[flat + t] = j * n + pos
            b = 0.0
            if use_bias and j != 0:
                if max_dist > 0.0:
                    b = w1 * (-dist[pos, j] / max_dist)
                if biggest_tw > 0.0:
                    arrival = clock + dist[pos, j]
                    if arrival <= ready[j]:
                        if pos == 0:
                            eff = ftw if ftw > arrival else arrival
                            b += w2 * (-(ready[j] - eff) / biggest_tw)
                        else:
                            b += w2 * (-(ready[j] - arrival) / biggest_tw)
                    start = arrival if arrival > ready[j] else ready[j]
                    b += w3 * (-(due[j] - start) / biggest_tw)
            betas[flat + t] = b
            lg = weights[codes[flat + t]] / tau + b
            logits[t] = lg
            if lg > top:
                top = lg
        if k == 1:
            sel = 0
        else:
            z = 0.0
            for t in range(k):
                e = np.exp(logits[t] - top)
                logits[t] = e
                z += e
            r = rng_uniform(rng_state) * z
            acc = 0.0
            sel = k - 1
            for t in range(k):
                acc += logits[t]
                if r < acc:
                    sel = t
                    break
        j = cand[sel]
        seq_dep[step] = pos
        seq_arr[step] = j
        chosen[step] = sel
        flat += k
        offsets[step + 1] = flat
        step += 1
        total += dist[pos, j]
        if j == 0:
            vehicle += 1
            if served_by_current > 0:
                nv += 1
            served_by_current = 0
            pos = 0
            clock = 0.0
            load = 0.0
            if n_unvisited == 0 or vehicle >= fleet_size:
                break
        else:
            arrival = clock + dist[pos, j]
            clock = (arrival if arrival > ready[j] else ready[j]) + service[j]
            load += demand[j]
            visited[j] = 1
            n_unvisited -= 1
            served_by_current += 1
            pos = j
    return step, n_unvisited, nv, total


@njit(cache=True)
def adapt_kernel(weights, tau, alpha, codes, betas, offsets, chosen, n_steps, scratch):
    """Shift `weights` toward the recorded sequence, in place.

    Two passes: first compute every step's sampling probabilities from the
    weights as they stand (the memoized codes and biases make replaying the
    state machine unnecessary), then apply all updates.  Repeated codes
    therefore see the pre-update weights, exactly like an adaptation that
    buffers its updates in a policy copy.
    """
    for s in range(n_steps):
        lo = offsets[s]
        hi = offsets[s + 1]
        top = -np.inf
        for t in range(lo, hi):
            lg = weights[codes[t]] / tau + betas[t]
            scratch[t] = lg
            if lg > top:
                top = lg
        z = 0.0
        for t in range(lo, hi):
            e = np.exp(scratch[t] - top)
            scratch[t] = e
            z += e
        for t in range(lo, hi):
            scratch[t] /= z
    for s in range(n_steps):
        lo = offsets[s]
        hi = offsets[s + 1]
        pick = lo + chosen[s]
        for t in range(lo, hi):
            delta = 1.0 if t == pick else 0.0
            weights[codes[t]] -= (alpha / tau) * (scratch[t] - delta)
