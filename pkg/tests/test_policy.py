"""Move coding, policy initialization, softmax sampling, and the RNG."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrpa_vrptw import (
    Move,
    Policy,
    SplitMix64,
    build_geometry,
    code_move,
    decode_move,
    init_distance,
    init_uniform,
    load_instance,
    move_distribution,
    sample_move,
)
from nrpa_vrptw.engine import rng_uniform


def test_code_move_examples():
    assert code_move(0, 5, 101) == 505
    assert code_move(5, 0, 101) == 5
    assert code_move(0, 0, 101) == 0


def test_code_move_rejects_out_of_range():
    with pytest.raises(ValueError):
        code_move(101, 0, 101)
    with pytest.raises(ValueError):
        code_move(0, -1, 101)


@given(n=st.integers(2, 150), data=st.data())
@settings(max_examples=100, deadline=None)
def test_code_move_bijection(n, data):
    i = data.draw(st.integers(0, n - 1))
    j = data.draw(st.integers(0, n - 1))
    c = code_move(i, j, n)
    assert 0 <= c < n * n
    assert decode_move(c, n) == (i, j)


def test_init_uniform():
    pol = init_uniform(101)
    assert pol.weights.shape == (101 * 101,)
    assert not pol.weights.any()
    assert pol.tau == 1.0


def test_init_distance_range():
    inst = load_instance("c101")
    geom = build_geometry(inst)
    pol = init_distance(inst.n, geom)
    w = pol.weights
    assert w.min() >= -1.0 and w.max() <= 0.0
    # the farthest pair sits exactly at -1
    assert w.min() == -1.0
    i, j = divmod(int(np.argmax(geom.dist)), inst.n)
    assert w[code_move(i, j, inst.n)] == -1.0
    assert w[code_move(3, 3, inst.n)] == 0.0


def test_init_distance_matches_formula():
    inst = load_instance("c101")
    geom = build_geometry(inst)
    w = init_distance(inst.n, geom).weights
    for i, j in ((0, 5), (17, 80), (99, 1)):
        assert w[code_move(i, j, inst.n)] == pytest.approx(
            -geom.dist[i, j] / geom.max_dist, abs=0)


def two_moves(n=10):
    return [Move(0, 1, code_move(0, 1, n)), Move(0, 2, code_move(0, 2, n))]


def test_distribution_equal_logits():
    pol = init_uniform(10)
    dist = move_distribution(pol, two_moves())
    assert np.allclose(dist.probs, [0.5, 0.5])


def test_distribution_ln3():
    pol = init_uniform(10)
    moves = two_moves()
    pol.weights[moves[0].code] = math.log(3.0)
    dist = move_distribution(pol, moves)
    assert dist.probs[0] == pytest.approx(0.75, abs=1e-12)
    assert dist.probs[1] == pytest.approx(0.25, abs=1e-12)


def test_distribution_single_move():
    pol = init_uniform(10)
    pol.weights[:] = -40.0
    dist = move_distribution(pol, two_moves()[:1])
    assert dist.probs.tolist() == [1.0]


def test_distribution_rejects_empty():
    with pytest.raises(ValueError):
        move_distribution(init_uniform(10), [])


def test_distribution_survives_large_negative_bias():
    pol = init_uniform(10)
    betas = np.array([-750.0, -745.0])
    dist = move_distribution(pol, two_moves(), betas)
    assert np.isfinite(dist.probs).all()
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-9)


@given(
    w=st.lists(st.floats(-30, 30), min_size=2, max_size=8),
    shift=st.floats(-100, 100),
)
@settings(max_examples=150, deadline=None)
def test_softmax_shift_invariance(w, shift):
    n = 10
    moves = [Move(0, k + 1, code_move(0, k + 1, n)) for k in range(len(w))]
    pol = init_uniform(n)
    for mv, wk in zip(moves, w):
        pol.weights[mv.code] = wk
    base = move_distribution(pol, moves).probs
    shifted = move_distribution(pol, moves, np.full(len(w), shift)).probs
    assert np.abs(base - shifted).max() < 1e-12
    assert base.sum() == pytest.approx(1.0, abs=1e-9)


def test_splitmix_reproducible():
    a = SplitMix64(42)
    b = SplitMix64(42)
    assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]
    c = SplitMix64(43)
    assert a.next_u64() != c.next_u64()


def test_splitmix_uniform_range():
    rng = SplitMix64(7)
    xs = [rng.uniform() for _ in range(10000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert abs(sum(xs) / len(xs) - 0.5) < 0.01


def test_splitmix_matches_compiled_kernel():
    """The Python generator and the compiled one emit the same stream."""
    py = SplitMix64(123456789)
    state = np.array([123456789], dtype=np.uint64)
    for _ in range(1000):
        assert rng_uniform(state) == py.uniform()


def test_sample_single_move_always_index_zero():
    pol = init_uniform(10)
    dist = move_distribution(pol, two_moves()[:1])
    for seed in (5, 999, 123456):
        assert sample_move(dist, SplitMix64(seed)) == 0


def test_sample_frequencies_uniform():
    pol = init_uniform(10)
    dist = move_distribution(pol, two_moves())
    rng = SplitMix64(2024)
    n = 1_000_000
    hits = sum(sample_move(dist, rng) for _ in range(n))
    assert abs(hits / n - 0.5) < 0.005


def test_sample_frequencies_ln3():
    pol = init_uniform(10)
    moves = two_moves()
    pol.weights[moves[0].code] = math.log(3.0)
    dist = move_distribution(pol, moves)
    rng = SplitMix64(77)
    n = 1_000_000
    ones = sum(sample_move(dist, rng) for _ in range(n))
    assert abs(ones / n - 0.25) < 0.005


def test_policy_save_load_roundtrip(tmp_path):
    inst = load_instance("c101")
    geom = build_geometry(inst)
    pol = init_distance(inst.n, geom)
    path = tmp_path / "policy.json"
    pol.save(path)
    back = Policy.load(path)
    assert back.n == pol.n
    assert back.tau == pol.tau
    assert np.array_equal(back.weights, pol.weights)
