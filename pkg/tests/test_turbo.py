"""Alternating two-side search: budgets, warm starts, dominance, accounting."""

import math

import numpy as np
import pytest

from beamform.codebook import CodebookSpec
from beamform.full_search import full_search
from beamform.metric import EvalCounter, LinkBudget
from beamform.tabu import TsParams
from beamform.turbo import TurboParams, ts_complexity, turbo_search
from helpers import pair_cost, random_channel

SPEC_T = CodebookSpec(16, 2, 3)
SPEC_R = CodebookSpec(8, 2, 3)


def _channel(seed):
    return random_channel(np.random.default_rng(seed), 16, 8)


class TestParams:
    def test_shared_builder(self):
        p = TurboParams.shared(500, 100)
        assert p.tx == p.rx == TsParams(max_iter=500, max_len=100, m_restarts=1)
        assert p.k_iterations == 4
        assert p.warm_start

    def test_bad_round_count(self):
        with pytest.raises(ValueError):
            TurboParams.shared(10, 5, k_iterations=0)


class TestComplexityBudget:
    def test_reference_budgets(self):
        # per-round cost is 2 * n_rf * max_iter * restarts per side, K rounds
        cases = [
            ((500, 100, 1), 16_000),
            ((1000, 200, 2), 64_000),
            ((3000, 600, 5), 480_000),
        ]
        st = CodebookSpec(64, 2, 4)
        sr = CodebookSpec(16, 2, 4)
        for (mi, ml, m), want in cases:
            params = TurboParams.shared(mi, ml, m_restarts=m, k_iterations=4)
            assert ts_complexity(params, st, sr) == want

    def test_asymmetric_sides(self):
        params = TurboParams(
            tx=TsParams(max_iter=10, max_len=2, m_restarts=1),
            rx=TsParams(max_iter=20, max_len=5, m_restarts=3),
            k_iterations=2,
        )
        assert ts_complexity(params, SPEC_T, SPEC_R) == 2 * (2 * 2 * 10 * 1 + 2 * 2 * 20 * 3)

    def test_search_evals_within_budget(self):
        params = TurboParams.shared(20, 6, m_restarts=2, k_iterations=3)
        for seed in range(5):
            res = turbo_search(_channel(seed), SPEC_T, SPEC_R, LinkBudget(rho=2.0), params)
            assert res.search_evals <= ts_complexity(params, SPEC_T, SPEC_R)
            # one start evaluation per restart per side per round
            assert res.init_evals == 3 * (2 + 2)
            assert res.evals_total == res.search_evals + res.init_evals


class TestRoundBehavior:
    def test_warm_rounds_never_regress(self):
        params = TurboParams.shared(30, 10, m_restarts=2, k_iterations=4)
        for seed in range(10):
            res = turbo_search(_channel(seed), SPEC_T, SPEC_R, LinkBudget(rho=5.0), params)
            assert len(res.per_round_rates) == 4
            for a, b in zip(res.per_round_rates, res.per_round_rates[1:]):
                assert b >= a - 1e-12

    def test_first_round_independent_of_k(self):
        h = _channel(3)
        budget = LinkBudget(rho=1.0)
        short = turbo_search(h, SPEC_T, SPEC_R, budget, TurboParams.shared(25, 8, k_iterations=1))
        long = turbo_search(h, SPEC_T, SPEC_R, budget, TurboParams.shared(25, 8, k_iterations=4))
        assert short.rate == long.per_round_rates[0]
        assert long.rate >= short.rate - 1e-12

    def test_single_round_ignores_warm_flag(self):
        h = _channel(4)
        budget = LinkBudget(rho=1.0)
        warm = turbo_search(h, SPEC_T, SPEC_R, budget, TurboParams.shared(25, 8, k_iterations=1))
        cold = turbo_search(
            h, SPEC_T, SPEC_R, budget, TurboParams.shared(25, 8, k_iterations=1, warm_start=False)
        )
        assert warm == cold

    def test_cold_variant_runs(self):
        params = TurboParams.shared(25, 8, m_restarts=2, k_iterations=3, warm_start=False)
        res = turbo_search(_channel(5), SPEC_T, SPEC_R, LinkBudget(rho=1.0), params)
        assert res.message_rounds == 3
        assert res.cost >= 1.0


class TestResultContract:
    def test_reported_pair_matches_scalar_recompute(self):
        params = TurboParams.shared(30, 10, k_iterations=2)
        for seed in range(6):
            h = _channel(seed + 100)
            res = turbo_search(h, SPEC_T, SPEC_R, LinkBudget(rho=3.0), params)
            want = pair_cost(h, res.precoder_indices, res.combiner_indices, SPEC_T, SPEC_R, 3.0)
            assert res.cost == pytest.approx(want, rel=1e-12)
            assert res.rate == pytest.approx(math.log2(res.cost), rel=1e-12)
            assert res.rate == res.per_round_rates[-1]

    def test_indices_are_valid_tuples(self):
        params = TurboParams.shared(20, 5)
        res = turbo_search(_channel(8), SPEC_T, SPEC_R, LinkBudget(rho=1.0), params)
        assert len(set(res.precoder_indices)) == SPEC_T.n_rf
        assert len(set(res.combiner_indices)) == SPEC_R.n_rf
        assert all(1 <= q <= SPEC_T.n_angles for q in res.precoder_indices)
        assert all(1 <= q <= SPEC_R.n_angles for q in res.combiner_indices)

    def test_counter_totals(self):
        counter = EvalCounter()
        params = TurboParams.shared(15, 4, m_restarts=2, k_iterations=2)
        res = turbo_search(_channel(9), SPEC_T, SPEC_R, LinkBudget(rho=1.0), params, counter=counter)
        assert counter.count == res.evals_total

    def test_deterministic(self):
        params = TurboParams.shared(25, 8, m_restarts=2, k_iterations=3)
        budget = LinkBudget(rho=2.0)
        h = _channel(11)
        assert turbo_search(h, SPEC_T, SPEC_R, budget, params) == turbo_search(
            h, SPEC_T, SPEC_R, budget, params
        )

    def test_wrong_channel_shape(self):
        params = TurboParams.shared(10, 3)
        with pytest.raises(ValueError):
            turbo_search(np.zeros((16, 8)), SPEC_T, SPEC_R, LinkBudget(rho=1.0), params)


class TestAgainstExhaustive:
    def test_never_beats_joint_optimum(self):
        params = TurboParams.shared(40, 12, m_restarts=2, k_iterations=4)
        budget = LinkBudget(rho=10.0)
        for seed in range(8):
            h = _channel(seed + 200)
            ts = turbo_search(h, SPEC_T, SPEC_R, budget, params)
            fs = full_search(h, SPEC_T, SPEC_R, budget)
            assert ts.cost <= fs.cost * (1 + 1e-12) + 1e-12
