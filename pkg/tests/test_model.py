import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oraclesched.model import (
    ArrivalProcess,
    apply_service,
    code_to_schedule,
    enumerate_schedules,
    grid_topology,
    interference_topology,
    is_feasible,
    max_weight,
    max_weight_by_enumeration,
    sample_arrivals,
    schedule_code,
    schedule_from_queues,
    switch_topology,
)

from conftest import brute_force_schedules, graph_conflict, switch_conflict


def test_grid_3x3_shape_and_published_schedules():
    topo = grid_topology(3, 3)
    assert topo.n == 9
    assert len(topo.edges) == 12
    for queues in ([1, 3, 5, 7, 9], [1, 3, 8], [2, 4, 6, 8], [2, 4, 9], [2, 6, 7], [2, 7, 9]):
        assert is_feasible(topo, schedule_from_queues(topo, queues, one_based=True))
    assert not is_feasible(topo, schedule_from_queues(topo, [1, 2], one_based=True))


def test_single_cell_grid():
    topo = grid_topology(1, 1)
    assert topo.n == 1 and topo.edges == ()
    assert is_feasible(topo, np.array([0], np.int8))
    assert is_feasible(topo, np.array([1], np.int8))


def test_grid_2x2_max_independent_set_is_two():
    topo = grid_topology(2, 2)
    assert len(topo.edges) == 4
    sizes = [sum(b) for b in brute_force_schedules(4, graph_conflict(topo.edges))]
    assert max(sizes) == 2


def test_switch_3_published_schedules():
    topo = switch_topology(3)
    assert topo.n == 9
    for queues in ([1, 5, 9], [1, 6, 8], [2, 4, 9], [2, 6, 7], [3, 4, 8], [3, 5, 7]):
        assert is_feasible(topo, schedule_from_queues(topo, queues, one_based=True))
    assert not is_feasible(topo, schedule_from_queues(topo, [1, 2], one_based=True))
    assert not is_feasible(topo, schedule_from_queues(topo, [1, 4], one_based=True))


def test_switch_1_and_2():
    t1 = switch_topology(1)
    assert t1.n == 1 and len(enumerate_schedules(t1)) == 2
    t2 = switch_topology(2)
    # empty, four singletons, two perfect matchings
    assert len(brute_force_schedules(4, switch_conflict(2))) == 7
    assert len(enumerate_schedules(t2)) == 7


def test_enumerate_small_cases():
    assert enumerate_schedules(grid_topology(1, 2)).tolist() == [[0, 0], [1, 0], [0, 1]]
    rows = {tuple(r) for r in enumerate_schedules(grid_topology(3, 3))}
    assert tuple(schedule_from_queues(grid_topology(3, 3), [2, 4, 6, 8], True)) in rows
    assert tuple(schedule_from_queues(grid_topology(3, 3), [1, 3, 5, 7, 9], True)) in rows


@pytest.mark.parametrize(
    "topo",
    [grid_topology(2, 3), grid_topology(3, 3), grid_topology(1, 5), switch_topology(2), switch_topology(3),
     interference_topology(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]), interference_topology(4, [])],
    ids=["grid2x3", "grid3x3", "path5", "sw2", "sw3", "cycle5", "edgeless4"],
)
def test_enumeration_matches_brute_force(topo):
    conflict = switch_conflict(topo.ports) if topo.is_switch else graph_conflict(topo.edges)
    expected = sorted(brute_force_schedules(topo.n, conflict), key=lambda b: schedule_code(b))
    table = enumerate_schedules(topo)
    assert [tuple(r) for r in table] == expected
    assert all(is_feasible(topo, r) for r in table)
    codes = [schedule_code(r) for r in table]
    assert codes == sorted(codes)


def test_enumeration_size_guard():
    with pytest.raises(ValueError):
        enumerate_schedules(grid_topology(5, 5))


def test_schedule_codes_round_trip():
    for code in (0, 1, 5, 1023):
        assert schedule_code(code_to_schedule(code, 10)) == code


def test_feasible_rejects_wrong_length():
    with pytest.raises(ValueError):
        is_feasible(grid_topology(2, 2), np.zeros(3, np.int8))


def test_interference_topology_rejects_self_loop():
    with pytest.raises(ValueError):
        interference_topology(3, [(1, 1)])


def test_zero_schedule_always_feasible():
    for topo in (grid_topology(3, 4), switch_topology(4), interference_topology(3, [(0, 1)])):
        assert is_feasible(topo, np.zeros(topo.n, np.int8))


def test_arrivals_extreme_rates(rng):
    zero = ArrivalProcess(np.zeros(5), rng)
    one = ArrivalProcess(np.ones(5), rng)
    for _ in range(200):
        assert not sample_arrivals(zero).any()
        assert sample_arrivals(one).all()


def test_arrivals_half_rate_mean(rng):
    proc = ArrivalProcess(np.array([0.5]), rng)
    draws = np.array([proc.sample()[0] for _ in range(100_000)])
    assert 0.49 <= draws.mean() <= 0.51


def test_arrivals_reproducible():
    a = ArrivalProcess(np.full(4, 0.3), np.random.default_rng(7))
    b = ArrivalProcess(np.full(4, 0.3), np.random.default_rng(7))
    assert all(np.array_equal(a.sample(), b.sample()) for _ in range(100))


def test_arrival_rates_validated(rng):
    with pytest.raises(ValueError):
        ArrivalProcess(np.array([1.5]), rng)


@pytest.mark.parametrize(
    "q, s, a, expected",
    [((0,), (1,), (1,), (1,)), ((5,), (1,), (0,), (4,)), ((5,), (1,), (1,), (5,)), ((3,), (0,), (1,), (4,))],
)
def test_apply_service(q, s, a, expected):
    assert apply_service(np.array(q), np.array(s), np.array(a)).tolist() == list(expected)


@given(
    st.lists(st.integers(0, 50), min_size=1, max_size=12).flatmap(
        lambda q: st.tuples(
            st.just(q),
            st.lists(st.integers(0, 1), min_size=len(q), max_size=len(q)),
            st.lists(st.integers(0, 1), min_size=len(q), max_size=len(q)),
        )
    )
)
def test_apply_service_bounded_and_nonnegative(args):
    q, s, a = (np.array(x) for x in args)
    new = apply_service(q, s, a)
    assert (new >= 0).all()
    assert (np.abs(new - q) <= 1).all()


def test_max_weight_examples():
    g = grid_topology(3, 3)
    sched, val = max_weight(g, np.ones(9))
    assert val == 5
    assert sched.tolist() == schedule_from_queues(g, [1, 3, 5, 7, 9], True).tolist()
    for topo in (g, switch_topology(3)):
        sched, val = max_weight(topo, np.zeros(topo.n))
        assert val == 0 and not sched.any()
    sched, val = max_weight(switch_topology(2), np.array([3, 1, 1, 3]))
    assert val == 6 and sched.tolist() == [1, 0, 0, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.tuples(st.just(m), st.lists(st.integers(0, 20), min_size=m * m, max_size=m * m))))
def test_switch_assignment_matches_enumeration(args):
    m, w = args
    topo = switch_topology(m)
    w = np.array(w)
    sched, val = max_weight(topo, w)
    assert is_feasible(topo, sched)
    assert val == max_weight_by_enumeration(topo, w)[1]
    assert val == max(sum(b * x for b, x in zip(bits, w)) for bits in brute_force_schedules(m * m, switch_conflict(m)))
