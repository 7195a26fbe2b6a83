import itertools
from fractions import Fraction

import numpy as np
import pytest

from controlsets import (
    Graph,
    all_ones,
    build_transition_matrix,
    check_detailed_balance,
    check_minority_nash_validity,
    enumerate_minimal_sets,
    enumerate_reachable,
    exhaustive_optimum,
    from_support,
    gen_clique,
    gen_double_star,
    gen_erdos_renyi,
    gen_path,
    gen_star,
    is_absorbing_state,
    is_minimal,
    is_valid,
    oracle_report,
    stationary_distribution,
)
from controlsets.oracle import (
    ENUMERATION_MAX_N,
    OPTIMUM_MAX_N,
    CardinalityBoundExceeded,
)

from conftest import FIXTURES


@pytest.mark.parametrize(
    "k,expected",
    [(3, 1), (4, 2), (5, 2), (6, 3), (7, 3), (8, 4), (9, 4)],
)
def test_clique_optimum(k, expected):
    # a 0-node outside a pinned s-set sees s ones against k-1-s zeros, so
    # it rises only once s >= (k-1)/2; the optimum is ceil((k-1)/2)
    size, witness = exhaustive_optimum(gen_clique(k))
    assert size == expected == -((1 - k) // 2)
    assert len(witness) == size
    assert is_valid(gen_clique(k), witness)


def test_optimum_examples():
    assert exhaustive_optimum(gen_path(5)) == (1, (0,))
    edgeless = Graph.from_edge_list(3, [])
    assert exhaustive_optimum(edgeless) == (0, ())
    ds = gen_double_star()
    size, witness = exhaustive_optimum(ds)
    assert size == 1 and witness == (0,)
    twopath = FIXTURES["twopath6"]
    assert exhaustive_optimum(twopath)[0] == 2


def test_optimum_cardinality_bound():
    with pytest.raises(CardinalityBoundExceeded) as info:
        exhaustive_optimum(gen_clique(6), max_k=2)
    assert info.value.bound == 2
    # a permissive bound behaves like no bound
    assert exhaustive_optimum(gen_clique(6), max_k=3)[0] == 3


def test_optimum_size_guard():
    big = gen_path(OPTIMUM_MAX_N + 1)
    with pytest.raises(ValueError):
        exhaustive_optimum(big)


def test_reachable_p2_layout():
    rs = enumerate_reachable(gen_path(2))
    assert [x.to_string() for x in rs.states] == ["11", "01", "10"]
    assert rs.absorbing == (False, True, True)
    assert len(rs) == 3
    assert rs.ordinal_of(from_support(2, [1])) == 1
    assert {x.to_string() for x in rs.absorbing_states()} == {"01", "10"}


# exact state-space sizes, frozen after cross-checking against the
# subset-validity characterization below
_STATE_COUNTS = {
    "k3": (7, 3),
    "k5": (26, 10),
    "p2": (3, 2),
    "p3": (7, 4),
    "p4": (15, 7),
    "p5": (31, 12),
    "c5": (31, 10),
    "star3": (12, 5),
    "twopath6": (49, 16),
    "doublestar": (245, 62),
}


@pytest.mark.parametrize("name", sorted(_STATE_COUNTS))
def test_reachable_fixture_counts(name):
    g = FIXTURES[name]
    rs = enumerate_reachable(g)
    n_states, n_absorbing = _STATE_COUNTS[name]
    assert len(rs) == n_states
    assert sum(rs.absorbing) == n_absorbing
    assert rs.states[0] == all_ones(g.n)


def test_reachable_equals_valid_supports():
    for seed in range(6):
        g = gen_erdos_renyi(7, 0.5, seed=seed)
        rs = enumerate_reachable(g)
        reachable_supports = {frozenset(x.support()) for x in rs.states}
        valid_supports = set()
        for r in range(8):
            for combo in itertools.combinations(range(7), r):
                if is_valid(g, combo):
                    valid_supports.add(frozenset(combo))
        assert reachable_supports == valid_supports


def test_reachable_guard():
    with pytest.raises(ValueError):
        enumerate_reachable(gen_path(ENUMERATION_MAX_N + 1))


def test_absorbing_agrees_with_state_predicate():
    g = FIXTURES["doublestar"]
    rs = enumerate_reachable(g)
    for x, flag in zip(rs.states, rs.absorbing):
        assert is_absorbing_state(g, x) == flag


def test_transition_matrix_rows():
    g = gen_path(2)
    rs = enumerate_reachable(g)
    tm = build_transition_matrix(g, rs, 0.2)
    P = np.asarray(tm.matrix)
    assert P.shape == (3, 3)
    assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)
    top = rs.ordinal_of(all_ones(2))
    a = rs.ordinal_of(from_support(2, [1]))
    b = rs.ordinal_of(from_support(2, [0]))
    # from the top both drops fire with probability 1/2 each
    assert P[top, a] == pytest.approx(0.5)
    assert P[top, b] == pytest.approx(0.5)
    assert P[top, top] == pytest.approx(0.0)
    # from a single-one state the only move is the 0.2-rate climb back
    assert P[a, top] == pytest.approx(0.1)
    assert P[a, a] == pytest.approx(0.9)


def test_transition_matrix_clique_top_row():
    g = gen_clique(3)
    rs = enumerate_reachable(g)
    tm = build_transition_matrix(g, rs, 0.5)
    P = np.asarray(tm.matrix)
    top = rs.ordinal_of(all_ones(3))
    off = [P[top, rs.ordinal_of(all_ones(3).flip(i))] for i in range(3)]
    assert off == [pytest.approx(1 / 3)] * 3


def test_stationary_p2_exact():
    g = gen_path(2)
    rs = enumerate_reachable(g)
    tm = build_transition_matrix(g, rs, 0.2)
    pi = stationary_distribution(tm)
    expected = {"11": 1 / 11, "01": 5 / 11, "10": 5 / 11}
    for x, p in zip(rs.states, pi):
        assert p == pytest.approx(expected[x.to_string()], rel=1e-12)


def test_stationary_uniform_at_epsilon_one():
    g = gen_star(3)
    rs = enumerate_reachable(g)
    tm = build_transition_matrix(g, rs, 1.0)
    pi = stationary_distribution(tm)
    assert np.allclose(pi, 1.0 / len(rs), atol=1e-12)


def test_stationary_power_matches_solve():
    g = FIXTURES["c5"]
    rs = enumerate_reachable(g)
    tm = build_transition_matrix(g, rs, 0.3)
    direct = stationary_distribution(tm, method="solve")
    iterated = stationary_distribution(tm, method="power")
    assert np.max(np.abs(np.asarray(direct) - np.asarray(iterated))) < 1e-6
    with pytest.raises(ValueError):
        stationary_distribution(tm, method="magic")


def test_detailed_balance_exact_zero():
    for name in ("p3", "star3", "k5"):
        g = FIXTURES[name]
        rs = enumerate_reachable(g)
        eps = Fraction(1, 5)
        tm = build_transition_matrix(g, rs, eps)
        assert check_detailed_balance(tm, eps) == 0.0


def test_detailed_balance_detects_corruption():
    g = gen_path(3)
    rs = enumerate_reachable(g)
    tm = build_transition_matrix(g, rs, 0.2)
    violation = check_detailed_balance(tm, 0.2)
    assert violation < 1e-12
    # bend one off-diagonal entry and the float audit must notice; the
    # reported violation is the bend scaled by the source state's weight
    bent = [row[:] for row in tm.matrix]
    s, t = next((s, t) for (s, t, kind) in tm.moves if kind == "down")
    bent[s][t] += 1e-3
    from controlsets.oracle import TransitionMatrix

    corrupted = TransitionMatrix(
        matrix=bent, epsilon=tm.epsilon, n=tm.n, states=tm.states, moves=tm.moves
    )
    expected = (0.2 ** tm.states.states[s].weight()) * 1e-3
    assert check_detailed_balance(corrupted, 0.2) == pytest.approx(expected, rel=1e-6)


def test_minimal_sets_k5():
    sets = enumerate_minimal_sets(gen_clique(5))
    assert sets == [tuple(c) for c in itertools.combinations(range(5), 2)]


def test_minimal_sets_star():
    sets = enumerate_minimal_sets(gen_star(3))
    assert sets == [(0,), (1, 2), (1, 3), (2, 3)]


def test_minimal_sets_double_star():
    ds = gen_double_star()
    sets = enumerate_minimal_sets(ds)
    assert (0,) in sets
    assert (1,) in sets
    assert (0, 1) not in sets
    for s in sets:
        assert is_minimal(ds, s)


def test_minimal_implies_absorbing_but_not_conversely():
    ds = gen_double_star()
    for s in enumerate_minimal_sets(ds):
        assert is_absorbing_state(ds, from_support(8, s))
    # both hubs together stall the walk yet are one deletion from minimal
    both = from_support(8, [0, 1])
    assert is_absorbing_state(ds, both)
    assert not is_minimal(ds, [0, 1])


def test_minority_nash_validity_small_graphs():
    assert check_minority_nash_validity(gen_path(2))
    assert check_minority_nash_validity(gen_clique(4))
    for seed in range(10):
        g = gen_erdos_renyi(6, 0.5, seed=4000 + seed)
        assert check_minority_nash_validity(g)


def test_oracle_report_p2():
    rep = oracle_report(gen_path(2))
    assert rep["optimum"] == 1
    assert rep["witness"] == [0]
    assert rep["reachable_states"] == 3
    assert rep["absorbing_states"] == 2
    assert rep["minimal_count"] == 2
    assert rep["detailed_balance_violation"] == 0.0
    assert rep["stationary_max_rel_err"] <= 1e-9
