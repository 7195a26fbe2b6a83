import itertools

import numpy as np
import pytest

from controlsets import (
    BestResponse,
    Configuration,
    all_ones,
    all_zeros,
    best_response,
    enumerate_nash_minority,
    from_support,
    gen_clique,
    gen_erdos_renyi,
    gen_path,
    gen_star,
    is_nash_majority,
    is_nash_minority,
    neighbor_counts,
    potential_delta_check,
    potential_majority,
    potential_minority,
    utility_majority,
    utility_minority,
)
from controlsets.game import NASH_ENUMERATION_MAX_N

from conftest import FIXTURES


def test_configuration_round_trips():
    x = from_support(5, [0, 3])
    assert x.to_string() == "10010"
    assert Configuration.from_string("10010") == x
    assert Configuration.from_mask(x.to_mask(), 5) == x
    assert x.weight() == 2
    assert x.support() == frozenset({0, 3})
    assert x.flip(1).to_string() == "11010"
    assert x.flip(0).to_string() == "00010"
    assert x.with_bit(0, 1) == x


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration.from_string("10x")
    with pytest.raises(ValueError):
        Configuration((0, 2))
    with pytest.raises(IndexError):
        all_zeros(3).flip(3)


def test_neighbor_counts_examples():
    star = gen_star(3)
    x = from_support(4, [1, 2])
    counts = neighbor_counts(star, x, 0)
    assert (counts.n0, counts.n1) == (1, 2)
    # isolated node in an edgeless graph sees nobody
    from controlsets import Graph

    lone = Graph.from_edge_list(2, [])
    c = neighbor_counts(lone, all_zeros(2), 0)
    assert (c.n0, c.n1) == (0, 0)
    with pytest.raises(IndexError):
        neighbor_counts(star, x, 4)
    with pytest.raises(ValueError):
        neighbor_counts(star, all_zeros(3), 0)


def test_utilities_agree_with_counts():
    g = gen_clique(4)
    x = from_support(4, [0, 1])
    # node 0 plays 1 and has one agreeing neighbor
    assert utility_majority(g, x, 0) == 1
    assert utility_minority(g, x, 0) == 2
    assert utility_majority(g, x, 3) == 1
    assert utility_minority(g, x, 3) == 2


def test_potential_examples():
    k5 = gen_clique(5)
    assert potential_majority(k5, from_support(5, [0, 1])) == 4
    assert potential_majority(k5, all_ones(5)) == 10
    assert potential_majority(k5, all_zeros(5)) == 10
    p2 = gen_path(2)
    assert potential_majority(p2, from_support(2, [0])) == 0
    assert potential_minority(p2, from_support(2, [0])) == 0
    assert potential_minority(k5, all_ones(5)) == -10


def test_potential_symmetry_under_complement():
    rng = np.random.default_rng(5)
    for trial in range(200):
        n = int(rng.integers(2, 9))
        g = gen_erdos_renyi(n, 0.5, seed=100 + trial)
        bits = tuple(int(b) for b in rng.integers(0, 2, size=n))
        x = Configuration(bits)
        flipped = Configuration(tuple(1 - b for b in bits))
        assert potential_majority(g, x) == potential_majority(g, flipped)


def test_potential_counts_monochromatic_edges_directly():
    rng = np.random.default_rng(6)
    for trial in range(100):
        n = int(rng.integers(2, 9))
        g = gen_erdos_renyi(n, 0.6, seed=300 + trial)
        x = Configuration(tuple(int(b) for b in rng.integers(0, 2, size=n)))
        direct = sum(1 for (u, v) in g.edges() if x.bits[u] == x.bits[v])
        assert potential_majority(g, x) == direct
        assert potential_minority(g, x) == -direct


def test_best_response_cases():
    p3 = gen_path(3)
    # middle node with one neighbor on each side is indifferent
    x = from_support(3, [0])
    assert best_response(p3, x, 1) is BestResponse.BOTH
    assert best_response(p3, x, 1).actions() == (0, 1)
    assert BestResponse.BOTH.allows(0) and BestResponse.BOTH.allows(1)
    x2 = from_support(3, [0, 2])
    assert best_response(p3, x2, 1) is BestResponse.ONLY1
    assert best_response(p3, all_zeros(3), 1) is BestResponse.ONLY0
    assert not BestResponse.ONLY0.allows(1)


def test_nash_majority_consensus_states():
    for name, g in FIXTURES.items():
        assert is_nash_majority(g, all_ones(g.n)), name
        assert is_nash_majority(g, all_zeros(g.n)), name
    # a split path is not at rest
    assert not is_nash_majority(gen_path(2), from_support(2, [0]))
    # both halves of a disconnected graph can settle differently
    from controlsets import Graph

    two = Graph.from_edge_list(4, [(0, 1), (2, 3)])
    assert is_nash_majority(two, from_support(4, [0, 1]))


def test_minority_nash_examples():
    p2 = gen_path(2)
    assert is_nash_minority(p2, from_support(2, [0]))
    assert not is_nash_minority(p2, all_ones(2))
    found = enumerate_nash_minority(p2)
    assert [c.to_string() for c in found] == ["01", "10"]


def test_minority_nash_closed_under_complement_and_sorted():
    for seed in range(8):
        g = gen_erdos_renyi(6, 0.5, seed=seed)
        found = enumerate_nash_minority(g)
        strings = [c.to_string() for c in found]
        assert strings == sorted(strings)
        as_set = set(strings)
        for s in strings:
            flipped = "".join("1" if ch == "0" else "0" for ch in s)
            assert flipped in as_set


def test_minority_nash_enumeration_guard():
    big = gen_path(NASH_ENUMERATION_MAX_N + 1)
    with pytest.raises(ValueError):
        enumerate_nash_minority(big)


def test_potential_delta_matches_flip_everywhere():
    rng = np.random.default_rng(7)
    for trial in range(300):
        n = int(rng.integers(2, 9))
        g = gen_erdos_renyi(n, 0.5, seed=700 + trial)
        x = Configuration(tuple(int(b) for b in rng.integers(0, 2, size=n)))
        i = int(rng.integers(0, n))
        assert potential_delta_check(g, x, i, 1 - x.bits[i])


def test_potential_delta_check_brute():
    # spot check the identity the checker certifies
    g = gen_star(3)
    for bits in itertools.product((0, 1), repeat=4):
        x = Configuration(bits)
        for i in range(4):
            assert potential_delta_check(g, x, i, 1 - bits[i])
