import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stopstare.coverage import RRCollection, cov, estimate_influence, max_coverage_greedy
from stopstare.errors import NodeRangeError
from stopstare.rng import RngStream
from stopstare.rr_sampling import IC, RRSampler, RRSet


def collection(n, sets):
    coll = RRCollection(n)
    for s in sets:
        coll.append(s)
    return coll


def brute_cov(sets, seeds):
    return sum(bool(set(s) & set(seeds)) for s in sets)


def brute_opt(n, sets, k):
    return max(brute_cov(sets, c) for c in itertools.combinations(range(n), k))


def test_cov_basic():
    coll = collection(4, [[0, 1], [2], [3, 1]])
    assert cov(coll, [1]) == 2
    assert cov(coll, [0, 2]) == 2
    assert cov(coll, [0, 1, 2, 3]) == 3
    assert coll.cov([1], 1, 3) == 1


def test_estimate_scales_by_n():
    coll = collection(4, [[0, 1], [2], [3, 1], [1]])
    assert estimate_influence(coll, [1]) == 3.0


def test_estimate_empty_range_rejected():
    coll = collection(3, [[0]])
    with pytest.raises(ValueError):
        coll.estimate([0], 1, 1)


def test_empty_seed_set_rejected():
    with pytest.raises(ValueError):
        collection(3, [[0]]).cov([])


def test_append_rejects_bad_node():
    with pytest.raises(NodeRangeError):
        collection(3, [[0, 3]])


def test_append_rejects_empty():
    with pytest.raises(ValueError):
        collection(3, [[]])


def test_rrset_append_round_trip():
    coll = RRCollection(5)
    coll.append(RRSet(2, (2, 4, 0)))
    assert coll.rr(0) == RRSet(2, (2, 4, 0))
    assert coll.total_items == 3


def test_inverted_index():
    coll = collection(4, [[0, 1], [2], [3, 1], [1]])
    assert coll.index(1).tolist() == [0, 2, 3]
    assert coll.index(2).tolist() == [1]
    coll.append([2, 0])
    assert coll.index(2).tolist() == [1, 4]


def test_greedy_simple():
    # node 1 covers three sets; after that node 2 adds the remaining one
    coll = collection(4, [[0, 1], [2], [3, 1], [1]])
    assert max_coverage_greedy(coll, 2) == ([1, 2], 4)


def test_greedy_ties_prefer_smallest_id():
    coll = collection(4, [[3], [2], [1]])
    assert max_coverage_greedy(coll, 1) == ([1], 1)


def test_greedy_pads_to_k():
    coll = collection(5, [[4], [4, 2]])
    seeds, c = max_coverage_greedy(coll, 3)
    assert c == 2 and len(seeds) == 3 and len(set(seeds)) == 3 and seeds[0] == 4


def test_greedy_on_range():
    coll = collection(3, [[0], [0], [1], [1], [1], [2]])
    assert max_coverage_greedy(coll, 1, 0, 2) == ([0], 2)
    assert max_coverage_greedy(coll, 1, 2, 6) == ([1], 3)


def test_greedy_bad_k():
    coll = collection(3, [[0]])
    with pytest.raises(ValueError):
        max_coverage_greedy(coll, 0)
    with pytest.raises(ValueError):
        max_coverage_greedy(coll, 4)


def test_extend_matches_append(g2):
    batch = RRSampler(g2, IC).draw(RngStream(0), 300)
    a = RRCollection(3)
    a.extend(batch)
    b = collection(3, [batch.rr(i) for i in range(len(batch))])
    assert [a.rr(i) for i in range(300)] == [b.rr(i) for i in range(300)]
    assert np.array_equal(a.covered([0]), b.covered([0]))


small_pools = st.integers(min_value=1, max_value=8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True),
                 min_size=1, max_size=12),
    )
)


@settings(max_examples=150, deadline=None)
@given(small_pools, st.integers(1, 3))
def test_greedy_approximation(data, k):
    n, sets = data
    k = min(k, n)
    seeds, c = max_coverage_greedy(collection(n, sets), k)
    assert len(seeds) == k and len(set(seeds)) == k
    assert c == brute_cov(sets, seeds)
    assert c >= (1 - 1 / math.e) * brute_opt(n, sets, k) - 1e-12


@settings(max_examples=150, deadline=None)
@given(small_pools, st.data())
def test_coverage_monotone_submodular(data, draw):
    n, sets = data
    coll = collection(n, sets)
    a = draw.draw(st.sets(st.integers(0, n - 1)))
    b = a | draw.draw(st.sets(st.integers(0, n - 1)))
    v = draw.draw(st.integers(0, n - 1))

    def f(s):
        return coll.cov(s) if s else 0

    assert f(a) <= f(b)
    assert f(a | {v}) - f(a) >= f(b | {v}) - f(b)


@settings(max_examples=100, deadline=None)
@given(small_pools, st.data())
def test_cov_matches_brute_force_on_ranges(data, draw):
    n, sets = data
    coll = collection(n, sets)
    lo = draw.draw(st.integers(0, len(sets)))
    hi = draw.draw(st.integers(lo, len(sets)))
    seeds = draw.draw(st.sets(st.integers(0, n - 1), min_size=1))
    assert coll.cov(seeds, lo, hi) == brute_cov(sets[lo:hi], seeds)
