"""Nested rollout policy adaptation over the route construction machine.

Level 0 is a single randomized playout.  Level L runs `iterations` searches
of level L-1, keeps the best sequence seen (ties replace, so the most recent
best keeps getting reinforced), and after every iteration shifts its local
policy copy toward that sequence.  Three presets differ only in how the
policy starts and whether sampling is biased:

  nrpa   -- zero weights, no bias
  nrpad  -- weights preloaded with normalized negative arc length
  gnrpa  -- zero weights, state-dependent bias added to every logit

Scores are minimized.  The scalar blends unvisited customers, vehicles and
distance so strictly worse layers can never win; `routing.lexicographic_key`
orders final results the same way.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bias import BiasWeights
from .engine import CompiledInstance, adapt_kernel, playout_kernel
from .policy import Policy, SplitMix64, init_distance, init_uniform
from .routing import Move, ScoreBreakdown
from .solomon import Geometry, Instance, build_geometry

__all__ = [
    "ALGORITHMS",
    "SearchConfig",
    "SearchResult",
    "PlayoutRecord",
    "playout",
    "adapt_naive",
    "adapt_optimized",
    "gnrpa",
    "run",
]

ALGORITHMS = ("nrpa", "nrpad", "gnrpa")


@dataclass
class SearchConfig:
    """Everything a search run depends on, seed included."""

    algorithm: str = "gnrpa"
    level: int = 3
    iterations: int = 100
    alpha: float = 1.0
    bias: BiasWeights = field(default_factory=BiasWeights)
    tau: float = 1.0
    seed: int = 0
    time_budget: float | None = 1800.0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time budget must be positive")

    @property
    def use_bias(self) -> bool:
        return self.algorithm == "gnrpa"

    def initial_policy(self, n: int, geom: Geometry) -> Policy:
        if self.algorithm == "nrpad":
            pol = init_distance(n, geom)
        else:
            pol = init_uniform(n)
        pol.tau = self.tau
        return pol


@dataclass
class PlayoutRecord:
    """One complete playout: its score and every sampling decision.

    codes[s] and betas[s] cover the legal moves of step s in enumeration
    order; chosen[s] indexes into them, and sequence[s] is the move taken.
    """

    score: ScoreBreakdown
    sequence: list[Move]
    codes: list[np.ndarray]
    betas: list[np.ndarray]
    chosen: np.ndarray

    @property
    def n_steps(self) -> int:
        return len(self.sequence)


@dataclass
class SearchResult:
    best_score: ScoreBreakdown
    best_record: PlayoutRecord
    playout_count: int
    trace: list[tuple[float, float]]  # (elapsed seconds, best scalar) per improvement
    elapsed: float


class _Rec:
    """Internal playout record over flat buffers; ephemeral until copied."""

    __slots__ = (
        "scalar",
        "unvisited",
        "nv",
        "distance",
        "n_steps",
        "flat_len",
        "seq_dep",
        "seq_arr",
        "chosen",
        "codes",
        "betas",
        "offsets",
    )

    def materialize(self) -> "_Rec":
        out = _Rec()
        out.scalar = self.scalar
        out.unvisited = self.unvisited
        out.nv = self.nv
        out.distance = self.distance
        out.n_steps = self.n_steps
        out.flat_len = self.flat_len
        out.seq_dep = self.seq_dep[: self.n_steps].copy()
        out.seq_arr = self.seq_arr[: self.n_steps].copy()
        out.chosen = self.chosen[: self.n_steps].copy()
        out.codes = self.codes[: self.flat_len].copy()
        out.betas = self.betas[: self.flat_len].copy()
        out.offsets = self.offsets[: self.n_steps + 1].copy()
        return out


class _Buffers:
    def __init__(self, ci: CompiledInstance):
        steps = ci.max_steps
        flat = ci.max_flat
        self.seq_dep = np.empty(steps, dtype=np.int32)
        self.seq_arr = np.empty(steps, dtype=np.int32)
        self.chosen = np.empty(steps, dtype=np.int32)
        self.codes = np.empty(flat, dtype=np.int32)
        self.betas = np.empty(flat, dtype=np.float64)
        self.offsets = np.empty(steps + 1, dtype=np.int64)
        self.scratch = np.empty(flat, dtype=np.float64)


class _Search:
    """Owns the buffers, the RNG stream, the clock and the global best."""

    def __init__(self, config: SearchConfig, inst: Instance, geom: Geometry):
        self.cfg = config
        self.ci = CompiledInstance.from_instance(inst, geom)
        self.buf = _Buffers(self.ci)
        self.rng_state = np.array([np.uint64(config.seed)], dtype=np.uint64)
        self.playout_count = 0
        self.trace: list[tuple[float, float]] = []
        self.best_scalar = np.inf
        self.t0 = time.perf_counter()
        self.deadline = None if config.time_budget is None else self.t0 + config.time_budget

    def out_of_time(self) -> bool:
        return self.deadline is not None and time.perf_counter() >= self.deadline

    def playout_once(self, weights: np.ndarray) -> _Rec:
        cfg, ci, buf = self.cfg, self.ci, self.buf
        n_steps, unvisited, nv, total = playout_kernel(
            ci.dist,
            ci.demand,
            ci.ready,
            ci.due,
            ci.service,
            ci.capacity,
            ci.fleet_size,
            weights,
            cfg.tau,
            cfg.use_bias,
            cfg.bias.w1,
            cfg.bias.w2,
            cfg.bias.w3,
            ci.max_dist,
            ci.biggest_tw,
            ci.ftw,
            self.rng_state,
            buf.seq_dep,
            buf.seq_arr,
            buf.chosen,
            buf.codes,
            buf.betas,
            buf.offsets,
        )
        self.playout_count += 1
        rec = _Rec()
        rec.scalar = unvisited * 1_000_000.0 + nv * 1_000.0 + total
        rec.unvisited = unvisited
        rec.nv = nv
        rec.distance = total
        rec.n_steps = n_steps
        rec.flat_len = int(buf.offsets[n_steps])
        rec.seq_dep = buf.seq_dep
        rec.seq_arr = buf.seq_arr
        rec.chosen = buf.chosen
        rec.codes = buf.codes
        rec.betas = buf.betas
        rec.offsets = buf.offsets
        if rec.scalar < self.best_scalar:
            self.best_scalar = rec.scalar
            self.trace.append((time.perf_counter() - self.t0, rec.scalar))
        return rec

    def adapt(self, weights: np.ndarray, rec: _Rec) -> None:
        adapt_kernel(
            weights,
            self.cfg.tau,
            self.cfg.alpha,
            rec.codes,
            rec.betas,
            rec.offsets,
            rec.chosen,
            rec.n_steps,
            self.buf.scratch,
        )

    def nested(self, level: int, weights: np.ndarray) -> _Rec:
        if level == 0:
            return self.playout_once(weights)
        pol = weights.copy()
        best: _Rec | None = None
        for _ in range(self.cfg.iterations):
            if best is not None and self.out_of_time():
                break
            if level == 1:
                child = self.playout_once(pol)
                if best is None or child.scalar <= best.scalar:
                    best = child.materialize()
            else:
                child = self.nested(level - 1, pol)
                if best is None or child.scalar <= best.scalar:
                    best = child
            self.adapt(pol, best)
        return best


def _public_record(rec: _Rec, n: int) -> PlayoutRecord:
    sequence = []
    codes = []
    betas = []
    for s in range(rec.n_steps):
        dep = int(rec.seq_dep[s])
        arr = int(rec.seq_arr[s])
        sequence.append(Move(dep, arr, arr * n + dep))
        lo, hi = int(rec.offsets[s]), int(rec.offsets[s + 1])
        codes.append(rec.codes[lo:hi].copy())
        betas.append(rec.betas[lo:hi].copy())
    breakdown = ScoreBreakdown(unvisited=rec.unvisited, n_vehicles=rec.nv, distance=rec.distance)
    return PlayoutRecord(
        score=breakdown,
        sequence=sequence,
        codes=codes,
        betas=betas,
        chosen=rec.chosen[: rec.n_steps].copy(),
    )


def playout(
    policy: Policy,
    config: SearchConfig,
    inst: Instance,
    geom: Geometry,
    rng: SplitMix64 | int | None = None,
) -> PlayoutRecord:
    """One recorded playout under `policy`.

    `rng` may be a SplitMix64 (advanced in place, so successive calls
    continue one stream) or a seed; omitted, it seeds from config.seed.
    """
    search = _Search(config, inst, geom)
    if isinstance(rng, SplitMix64):
        search.rng_state[0] = np.uint64(rng.state)
    elif rng is not None:
        search.rng_state[0] = np.uint64(int(rng))
    rec = search.playout_once(policy.weights)
    if isinstance(rng, SplitMix64):
        rng.state = int(search.rng_state[0])
    return _public_record(rec, inst.n)


def _flatten(record: PlayoutRecord):
    n_steps = record.n_steps
    offsets = np.zeros(n_steps + 1, dtype=np.int64)
    for s, c in enumerate(record.codes):
        offsets[s + 1] = offsets[s] + len(c)
    codes = np.concatenate(record.codes).astype(np.int32) if n_steps else np.empty(0, np.int32)
    betas = np.concatenate(record.betas).astype(np.float64) if n_steps else np.empty(0, np.float64)
    chosen = np.asarray(record.chosen, dtype=np.int32)
    return codes, betas, offsets, chosen, n_steps


def adapt_naive(policy: Policy, record: PlayoutRecord, alpha: float) -> Policy:
    """Textbook adaptation: probabilities from the incoming policy, updates
    buffered in a copy so repeated codes cannot see their own changes."""
    new_w = policy.weights.copy()
    for s in range(record.n_steps):
        codes = record.codes[s]
        logits = policy.weights[codes] / policy.tau + record.betas[s]
        odds = np.exp(logits - logits.max())
        probs = odds / odds.sum()
        grad = probs.copy()
        grad[int(record.chosen[s])] -= 1.0
        new_w[codes] -= (alpha / policy.tau) * grad
    return Policy(policy.n, new_w, policy.tau)


def adapt_optimized(policy: Policy, record: PlayoutRecord, alpha: float) -> Policy:
    """Same update via the compiled two-pass kernel."""
    codes, betas, offsets, chosen, n_steps = _flatten(record)
    new_w = policy.weights.copy()
    scratch = np.empty(max(1, len(codes)), dtype=np.float64)
    adapt_kernel(new_w, policy.tau, alpha, codes, betas, offsets, chosen, n_steps, scratch)
    return Policy(policy.n, new_w, policy.tau)


def gnrpa(
    level: int,
    policy: Policy,
    config: SearchConfig,
    inst: Instance,
    geom: Geometry | None = None,
) -> SearchResult:
    """Run a nested search of the given level from an explicit policy."""
    if geom is None:
        geom = build_geometry(inst)
    cfg = config
    if level != config.level:
        cfg = SearchConfig(**{**config.__dict__, "level": level})
    search = _Search(cfg, inst, geom)
    best = search.nested(level, policy.weights.copy())
    elapsed = time.perf_counter() - search.t0
    record = _public_record(best, inst.n)
    return SearchResult(
        best_score=record.score,
        best_record=record,
        playout_count=search.playout_count,
        trace=search.trace,
        elapsed=elapsed,
    )


def run(config: SearchConfig, inst: Instance, geom: Geometry | None = None) -> SearchResult:
    """Solve one instance with the configured preset."""
    if geom is None:
        geom = build_geometry(inst)
    policy = config.initial_policy(inst.n, geom)
    return gnrpa(config.level, policy, config, inst, geom)
