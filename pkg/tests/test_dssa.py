import math

import numpy as np
import pytest

from stopstare.bounds import Caps, caps_for
from stopstare.dssa import dssa, dynamic_errors, epsilon_t
from stopstare.harness import SyntheticSpec, generate
from stopstare.rng import RngStream
from stopstare.rr_sampling import IC, LT, RRSampler
from stopstare.ssa import StopReason


@pytest.fixture(scope="module")
def er200():
    return generate(SyntheticSpec("erdos_renyi", 200, p=0.03, weight_rule="auto", seed=4))


def test_epsilon_t_frozen():
    assert epsilon_t(0.01, 0.05, 0.05, 0.1) == pytest.approx(0.06379932175055562, rel=1e-13)
    assert epsilon_t(-0.02, 0.05, 0.05, 0.1) == pytest.approx(0.04703752414745606, rel=1e-13)


def test_dynamic_errors_formulae():
    e1, e2, e3 = dynamic_errors(est=120.0, est_check=100.0, scale=1000.0, t=3, eps=0.1)
    c = 1 - 1 / math.e
    assert e1 == pytest.approx(0.2)
    assert e2 == pytest.approx(0.1 * math.sqrt(1000 * 1.1 / (4 * 100)))
    assert e3 == pytest.approx(0.1 * math.sqrt(1000 * 1.1 * (c - 0.1) / ((1 + 0.1 / 3) * 4 * 100)))


def test_negative_eps1_kept():
    e1, *_ = dynamic_errors(90.0, 100.0, 1000.0, 1, 0.1)
    assert e1 == pytest.approx(-0.1)


def test_star_picks_center(g3):
    res = dssa(g3, 1, 0.2, 0.1, rng=5)
    assert res.seeds == [0] and res.stop_reason == StopReason.CONDITIONS_MET
    assert res.rr_count_verify == 0


def test_eps_domain(g2):
    with pytest.raises(ValueError):
        dssa(g2, 1, 0.7, 0.1)


def test_stream_doubles(er200):
    res = dssa(er200, 5, 0.1, 0.01, rng=3, model=LT)
    base = math.ceil(res.caps.lam)
    assert [s.pool_half_size for s in res.trace] == [base * 2 ** (t - 1) for t in range(1, res.iterations + 1)]
    assert res.rr_count_main == 2 * res.trace[-1].pool_half_size


def test_stream_is_one_prefix(er200):
    res = dssa(er200, 5, 0.1, 0.01, rng=3, model=IC, keep_pool=True)
    fresh = RRSampler(er200, IC).draw(RngStream(3).spawn(0), len(res.pool))
    assert np.array_equal(res.pool.nodes, fresh.nodes)
    half = res.trace[-1].pool_half_size
    assert res.trace[-1].cov_check == res.pool.cov(res.seeds, half, 2 * half)


def test_d2_evaluated_only_after_d1(er200):
    res = dssa(er200, 5, 0.1, 0.01, rng=3)
    for step in res.trace:
        assert (step.eps_t is not None) == step.passed_d1
        assert step.passed_d1 == (step.cov_check >= res.caps.lam1)
        if step.passed_d2:
            assert step.eps_t <= 0.1


def test_reproducible_across_threads(er200):
    a = dssa(er200, 5, 0.1, 0.01, rng=8, model=LT)
    b = dssa(er200, 5, 0.1, 0.01, rng=8, model=LT, threads=4)
    assert (a.seeds, a.est_influence, a.rr_count_main) == (b.seeds, b.est_influence, b.rr_count_main)


def test_cap_stop(er200):
    caps = caps_for(er200.n, 5, 0.1, 0.01)
    res = dssa(er200, 5, 0.1, 0.01, rng=0, caps=Caps(caps.n_max, 1, caps.lam, 1e12))
    assert res.iterations == 1 and res.stop_reason == StopReason.CAP_REACHED
    assert len(res.seeds) == 5
