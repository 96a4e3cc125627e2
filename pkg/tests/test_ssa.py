import math

import numpy as np
import pytest

from stopstare.bounds import Caps, EpsilonSplit, caps_for, default_epsilon_split, estimate_threshold
from stopstare.harness import SyntheticSpec, generate
from stopstare.rng import RngStream
from stopstare.rr_sampling import IC, LT, RRSampler
from stopstare.ssa import StopReason, estimate_inf, ssa


@pytest.fixture(scope="module")
def er200():
    return generate(SyntheticSpec("erdos_renyi", 200, p=0.03, weight_rule="auto", seed=4))


def test_star_picks_center(g3):
    res = ssa(g3, 1, 0.2, 0.1, rng=1)
    assert res.seeds == [0]
    assert res.est_influence == 5.0
    assert res.stop_reason == StopReason.CONDITIONS_MET


def test_single_node_graph():
    g = generate(SyntheticSpec("path", 1))
    res = ssa(g, 1, 0.3, 0.2, rng=0)
    assert res.seeds == [0]


def test_k_equals_n(g2):
    assert sorted(ssa(g2, 3, 0.3, 0.2, rng=0).seeds) == [0, 1, 2]


@pytest.mark.parametrize("k, eps, delta", [(0, 0.1, 0.1), (4, 0.1, 0.1), (1, 0, 0.1), (1, 0.1, 1.0)])
def test_bad_arguments(g2, k, eps, delta):
    with pytest.raises(ValueError):
        ssa(g2, k, eps, delta)


def test_bad_split(g2):
    with pytest.raises(ValueError):
        ssa(g2, 1, 0.1, 0.1, split=EpsilonSplit(1.0, 0.5, 0.5))


def test_pool_doubles_each_iteration(er200):
    res = ssa(er200, 5, 0.1, 0.01, rng=3, model=LT)
    base = math.ceil(res.caps.lam)
    assert [s.pool_size for s in res.trace] == [base * 2**t for t in range(1, res.iterations + 1)]
    assert res.rr_count_main == base * 2**res.iterations


def test_estimate_only_after_c1(er200):
    res = ssa(er200, 5, 0.1, 0.01, rng=3, model=LT)
    for step in res.trace:
        assert (step.verify_samples > 0) == step.passed_c1
    assert res.rr_count_verify == sum(s.verify_samples for s in res.trace)


def test_reproducible(er200):
    a = ssa(er200, 5, 0.1, 0.01, rng=8, model=IC)
    b = ssa(er200, 5, 0.1, 0.01, rng=8, model=IC, threads=3)
    assert (a.seeds, a.est_influence, a.rr_count_main, a.rr_count_verify) == \
        (b.seeds, b.est_influence, b.rr_count_main, b.rr_count_verify)


def test_cap_reached_returns_last_greedy(er200):
    caps = caps_for(er200.n, 5, 0.1, 0.01)
    tiny = Caps(n_max=1.0, i_max=caps.i_max, lam=caps.lam, lam1=caps.lam1)
    res = ssa(er200, 5, 0.1, 0.01, rng=0, caps=tiny, keep_pool=True)
    assert res.iterations == 1
    assert len(res.seeds) == 5
    assert res.pool.cov(res.seeds) == res.trace[-1].coverage


def test_iteration_cap(er200):
    caps = caps_for(er200.n, 5, 0.1, 0.01)
    res = ssa(er200, 5, 0.1, 0.01, rng=0, caps=Caps(caps.n_max, 2, caps.lam, 1e12))
    assert res.iterations == 2 and res.stop_reason == StopReason.CAP_REACHED


def test_estimate_matches_pool_coverage(er200):
    res = ssa(er200, 5, 0.1, 0.01, rng=2, keep_pool=True)
    assert res.est_influence == pytest.approx(er200.n * res.pool.cov(res.seeds) / len(res.pool))


def test_peak_memory_counts_items(er200):
    res = ssa(er200, 3, 0.2, 0.05, rng=1, keep_pool=True)
    assert res.peak_items >= res.pool.total_items
    assert res.peak_memory_bytes == 4 * res.peak_items


# Estimate-Inf -------------------------------------------------------------

def test_estimate_inf_star_is_exact_scale(g3):
    # every RR set hits the center, so T equals the rounded-up threshold
    out = estimate_inf(g3, [0], 0.3, 0.05, 10**6, rng=1)
    lam2 = estimate_threshold(0.3, 0.05)
    assert out.samples == math.ceil(lam2)
    assert out.value == pytest.approx(5 * lam2 / math.ceil(lam2))


def test_estimate_inf_exceeded(g3):
    out = estimate_inf(g3, [1], 0.3, 0.05, 50, rng=1)
    assert out.exceeded and out.value is None and out.samples == 50


def test_estimate_inf_finds_first_crossing(g2):
    rng = RngStream(17)
    out = estimate_inf(g2, [0], 0.3, 0.05, 10**6, rng=rng)
    need = math.ceil(estimate_threshold(0.3, 0.05))
    replay = RRSampler(g2, IC).draw(RngStream(17), out.samples)
    hits = [0 in replay.rr(i) for i in range(out.samples)]
    assert sum(hits) == need and hits[-1]


def test_estimate_inf_bad_args(g2):
    with pytest.raises(ValueError):
        estimate_inf(g2, [], 0.3, 0.05, 100)
    with pytest.raises(ValueError):
        estimate_inf(g2, [0], 0.3, 1.5, 100)


def test_default_split_used(g3):
    res = ssa(g3, 1, 0.1, 0.1, rng=0)
    res2 = ssa(g3, 1, 0.1, 0.1, split=default_epsilon_split(0.1), rng=0)
    assert res.rr_count_total == res2.rr_count_total
