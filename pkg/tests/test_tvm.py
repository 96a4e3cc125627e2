import io
import math

import numpy as np
import pytest

from stopstare.dssa import dssa
from stopstare.errors import GraphParseError, NodeRangeError
from stopstare.harness import SyntheticSpec, generate
from stopstare.oracle import exact_influence
from stopstare.rng import RngStream
from stopstare.rr_sampling import IC, LT, RRSampler
from stopstare.ssa import ssa
from stopstare.tvm import TargetWeights, load_weights, tvm_run


@pytest.fixture(scope="module")
def er100():
    return generate(SyntheticSpec("erdos_renyi", 100, p=0.05, weight_rule="auto", seed=2))


def test_load_weights_missing_nodes_zero():
    w = load_weights(io.BytesIO(b"# targets\n0 1.5\n3 2\n"), 5)
    assert w.weights.tolist() == [1.5, 0, 0, 2.0, 0]
    assert w.gamma == 3.5


def test_load_weights_errors():
    with pytest.raises(NodeRangeError):
        load_weights(io.BytesIO(b"7 1\n"), 5)
    with pytest.raises(GraphParseError):
        load_weights(io.BytesIO(b"1 -1\n"), 5)
    with pytest.raises(GraphParseError):
        load_weights(io.BytesIO(b"1\n"), 5)
    with pytest.raises(ValueError):
        load_weights(io.BytesIO(b"1 0\n"), 5)


def test_target_weights_validation():
    with pytest.raises(ValueError):
        TargetWeights(np.array([1.0, np.nan]))
    with pytest.raises(ValueError):
        TargetWeights(np.zeros(3))


def test_length_mismatch(g2):
    with pytest.raises(ValueError):
        tvm_run(g2, np.ones(4), 1, 0.3, 0.2)


@pytest.mark.parametrize("algo, model", [("ssa", IC), ("dssa", IC), ("ssa", LT), ("dssa", LT)])
def test_uniform_weights_reduce_to_plain_run(er100, algo, model):
    plain = (ssa(er100, 4, 0.2, 0.05, None, 9, model=model) if algo == "ssa"
             else dssa(er100, 4, 0.2, 0.05, 9, model=model))
    tv = tvm_run(er100, np.ones(er100.n), 4, 0.2, 0.05, algo, 9, model=model)
    assert tv.seeds == plain.seeds
    assert tv.est_influence == plain.est_influence
    assert (tv.rr_count_main, tv.rr_count_verify, tv.iterations) == \
        (plain.rr_count_main, plain.rr_count_verify, plain.iterations)


def test_zero_weight_nodes_never_roots(er100):
    w = np.zeros(er100.n)
    w[[3, 50, 99]] = [1.0, 2.0, 0.5]
    batch = RRSampler(er100, IC, target_weights=w).draw(RngStream(1), 3000)
    assert set(batch.roots.tolist()) == {3, 50, 99}


def test_weighted_estimate_scale(g2):
    w = np.array([1.0, 0.0, 2.0])
    res = tvm_run(g2, w, 1, 0.3, 0.2, "dssa", 4, keep_pool=True)
    assert res.pool.scale == 3.0


@pytest.mark.parametrize("name", ["G1", "G2"])
def test_weighted_coverage_matches_weighted_influence(tiny, name):
    g = tiny[name]
    w = np.arange(1, g.n + 1, dtype=float)
    T = 50000
    batch = RRSampler(g, IC, target_weights=w).draw(RngStream(31), T)
    hits = sum(0 in batch.rr(i) for i in range(T))
    gamma = w.sum()
    p = exact_influence(g, [0], IC, w).influence / gamma
    assert abs(hits / T - p) <= 4 * math.sqrt(p * (1 - p) / T)


def test_targeted_seed_prefers_target_region():
    # two disjoint stars; only the leaves of the second star matter
    src = [0, 0, 0, 4, 4, 4]
    dst = [1, 2, 3, 5, 6, 7]
    from stopstare.graph import from_edges

    g = from_edges(8, src, dst, [1.0] * 6)
    w = np.zeros(8)
    w[[5, 6, 7]] = 1.0
    res = tvm_run(g, w, 1, 0.2, 0.1, "dssa", 0)
    assert res.seeds == [4]
