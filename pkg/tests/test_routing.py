"""Route-state transitions, scoring, and the independent validator."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrpa_vrptw import (
    Move,
    ScoreBreakdown,
    SearchConfig,
    SolutionError,
    initial_state,
    is_terminal,
    legal_moves,
    lexicographic_key,
    play,
    playout,
    score,
    tours_from_moves,
    validate_solution,
)
from nrpa_vrptw.policy import init_uniform

from conftest import make_instance


def test_initial_state(c101):
    inst, _geom = c101
    s = initial_state(inst)
    assert s.position == 0
    assert s.clock == 0
    assert s.load == 0
    assert s.vehicles_used == 0
    assert not s.visited.any()
    assert s.tours == []


def test_clock_waits_for_ready():
    # travel 10, window opens at 20, service 5: leave at 25
    inst = make_instance([(10, 0, 1, 20, 100, 5)], depot_due=200)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    s = initial_state(inst)
    mv = [m for m in legal_moves(s, inst, geom) if m.arrival == 1][0]
    s = play(s, mv, inst, geom)
    assert s.clock == 25


def test_clock_no_wait_when_late_enough():
    # travel 30 already beyond ready 20: leave at 35
    inst = make_instance([(30, 0, 1, 20, 100, 5)], depot_due=200)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    s = initial_state(inst)
    s = play(s, legal_moves(s, inst, geom)[0], inst, geom)
    assert s.clock == 35


def test_capacity_excludes_customer():
    inst = make_instance([(3, 0, 6, 0, 500, 1), (5, 0, 6, 0, 500, 1)],
                         capacity=10, fleet=2)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    s = initial_state(inst)
    assert {m.arrival for m in legal_moves(s, inst, geom)} == {1, 2}
    s = play(s, legal_moves(s, inst, geom)[0], inst, geom)
    # remaining customer would overflow the vehicle: forced return instead
    moves = legal_moves(s, inst, geom)
    assert [m.arrival for m in moves] == [0]


def test_forced_return_is_single_move():
    # lone customer whose window closed: only the depot return is offered
    inst = make_instance([(5, 0, 1, 0, 10, 1), (40, 0, 1, 0, 300, 1)],
                         fleet=2, depot_due=400)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    s = initial_state(inst)
    mv = [m for m in legal_moves(s, inst, geom) if m.arrival == 2][0]
    s = play(s, mv, inst, geom)  # now at x=40, clock 41; customer 1 due at 10
    moves = legal_moves(s, inst, geom)
    assert len(moves) == 1
    assert moves[0].arrival == 0
    assert moves[0].departure == 2


def test_depot_return_resets_vehicle():
    inst = make_instance([(5, 0, 1, 0, 10, 1), (40, 0, 1, 0, 300, 1)],
                         fleet=2, depot_due=400)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    s = initial_state(inst)
    mv = [m for m in legal_moves(s, inst, geom) if m.arrival == 2][0]
    s = play(s, mv, inst, geom)
    s = play(s, legal_moves(s, inst, geom)[0], inst, geom)
    assert s.position == 0
    assert s.load == 0
    assert s.vehicle_idx == 1
    assert s.tours == [[2]]


def test_playout_reaches_terminal(toy_fleet):
    inst, geom = toy_fleet
    cfg = SearchConfig(algorithm="nrpa", level=0, iterations=1, seed=7)
    rec = playout(init_uniform(inst.n), cfg, inst, geom)
    assert rec.n_steps <= inst.n_customers + inst.fleet_size
    tours = tours_from_moves(rec.sequence)
    sb = validate_solution(inst, geom, tours)
    assert sb.unvisited == rec.score.unvisited
    assert sb.distance == rec.score.distance


def test_score_examples():
    assert ScoreBreakdown(0, 10, 828.94).scalar == pytest.approx(10828.94, abs=1e-9)
    assert ScoreBreakdown(100, 0, 0.0).scalar == 100_000_000.0
    assert ScoreBreakdown(0, 3, 591.56).scalar == pytest.approx(3591.56, abs=1e-9)


def test_score_requires_terminal(toy_pair):
    inst, _ = toy_pair
    s = initial_state(inst)
    with pytest.raises(ValueError):
        score(s, inst)


def test_lexicographic_examples():
    a = lexicographic_key(ScoreBreakdown(0, 10, 828.94))
    b = lexicographic_key(ScoreBreakdown(0, 10, 830.0))
    assert a < b
    assert lexicographic_key(ScoreBreakdown(0, 9, 1000.0)) < lexicographic_key(
        ScoreBreakdown(0, 10, 800.0))
    assert lexicographic_key(ScoreBreakdown(0, 25, 5000.0)) < lexicographic_key(
        ScoreBreakdown(1, 5, 100.0))


@given(
    u1=st.integers(0, 3), v1=st.integers(0, 25), k1=st.integers(0, 3999),
    u2=st.integers(0, 3), v2=st.integers(0, 25), k2=st.integers(0, 3999),
)
@settings(max_examples=200, deadline=None)
def test_scalar_consistent_with_lexicographic(u1, v1, k1, u2, v2, k2):
    # quarter-unit distances are exact in binary, so ties are real ties
    a = ScoreBreakdown(u1, v1, k1 * 0.25)
    b = ScoreBreakdown(u2, v2, k2 * 0.25)
    ka, kb = lexicographic_key(a), lexicographic_key(b)
    if ka == kb:
        assert a.scalar == b.scalar
    else:
        assert (a.scalar < b.scalar) == (ka < kb)


def test_validator_rejects_revisit(toy_fleet):
    inst, geom = toy_fleet
    with pytest.raises(SolutionError):
        validate_solution(inst, geom, [[1, 2, 1]])


def test_validator_rejects_capacity_violation():
    inst = make_instance([(1, 0, 6, 0, 500, 1), (2, 0, 6, 0, 500, 1)], capacity=10)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    with pytest.raises(SolutionError):
        validate_solution(inst, geom, [[1, 2]])


def test_validator_rejects_late_arrival():
    inst = make_instance([(50, 0, 1, 0, 10, 1)], depot_due=400)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    with pytest.raises(SolutionError):
        validate_solution(inst, geom, [[1]])


def test_validator_rejects_missed_depot_return():
    # service ends fine but the ride home crosses the depot due date
    inst = make_instance([(100, 0, 1, 0, 150, 20)], depot_due=150)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    with pytest.raises(SolutionError):
        validate_solution(inst, geom, [[1]])


def test_validator_counts_unvisited(toy_fleet):
    inst, geom = toy_fleet
    sb = validate_solution(inst, geom, [[1, 6]])
    assert sb.unvisited == 4
    assert sb.n_vehicles == 1


def test_tours_from_moves():
    n = 7
    seq = [Move(0, 1, 1 * n), Move(1, 3, 3 * n + 1), Move(3, 0, 3),
           Move(0, 2, 2 * n), Move(2, 0, 2)]
    assert tours_from_moves(seq) == [[1, 3], [2]]


def test_is_terminal_after_fleet_exhausted():
    # one vehicle, one unreachable customer: junk depot loop ends the walk
    inst = make_instance([(5, 0, 1, 0, 10, 1), (400, 0, 1, 0, 500, 1)],
                         fleet=1, depot_due=600)
    from nrpa_vrptw import build_geometry

    geom = build_geometry(inst)
    s = initial_state(inst)
    mv = [m for m in legal_moves(s, inst, geom) if m.arrival == 1][0]
    s = play(s, mv, inst, geom)
    s = play(s, legal_moves(s, inst, geom)[0], inst, geom)
    assert is_terminal(s, inst)
    sb = score(s, inst)
    assert sb.unvisited == 1
    assert sb.n_vehicles == 1
