import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpplab.analysis import (
    KS_C,
    SampleSet,
    abel_summation_gap,
    bootstrap_variance_growth,
    chi_square_two_sample,
    clt_conditional_check,
    conditional_moments,
    estimate_growth_constant,
    estimate_time_constant,
    exponential_cdf,
    first_hit_index,
    fit_scaling,
    ks_one_sample,
    ks_two_sample,
    lemma1_ratio,
    lemma2_check,
    normal_cdf,
    q_sequence,
    rearrange_decreasing,
    tightness_scan,
)
from fpplab.engines import GrowthTrace, SimConfig, farm_replicates, run_eden
from fpplab.lattice import Vertex
from fpplab.rng import derive_stream

# independently recomputed with fsum over exact q_j = 1/(sqrt(j)+sqrt(j-1))
SUM_Q_SQ_100 = 2.1489479735368557


def _trace_from_y(y_counts):
    """Synthetic trace wrapper for analysis functions that only read
    boundary counts (vertices and times are placeholders)."""
    m = len(y_counts)
    return GrowthTrace(
        vx=np.arange(m + 1, dtype=np.int64),
        vy=np.zeros(m + 1, dtype=np.int64),
        times=np.arange(m + 1, dtype=np.float64),
        y_counts=np.asarray(y_counts, dtype=np.int64),
    )


@pytest.fixture(scope="module")
def eden_trace():
    cfg = SimConfig(n=2000, mode="grow", master_seed=9, replicates=1)
    return run_eden(cfg, derive_stream(9, 0), retain_trace=True).trace


class TestQSequence:
    def test_hand_values(self):
        q = q_sequence(4)
        assert q[0] == 1.0
        assert q[3] == pytest.approx(2.0 - math.sqrt(3.0), abs=1e-15)

    def test_telescopes_to_sqrt(self):
        n = 10**6
        total = math.fsum(q_sequence(n).tolist())
        assert abs(total - 1000.0) <= 1e-9

    def test_decreasing_and_dominates_half_inverse_sqrt(self):
        q = q_sequence(10**4)
        assert np.all(np.diff(q) < 0)
        j = np.arange(1, q.size + 1, dtype=np.float64)
        assert np.all(q >= 1.0 / (2.0 * np.sqrt(j)))

    def test_square_sum_oracle(self):
        q = q_sequence(100)
        s = math.fsum((q * q).tolist())
        assert s == pytest.approx(SUM_Q_SQ_100, rel=1e-13)
        assert s >= math.log(100.0) / 4.0

    def test_validation(self):
        with pytest.raises(ValueError):
            q_sequence(0)


class TestConditionalMoments:
    def test_hand_values(self):
        cm = conditional_moments(_trace_from_y([4, 6]))
        assert cm.mu[0] == pytest.approx(0.25, abs=0)
        assert cm.mu[1] == pytest.approx(0.25 + 1.0 / 6.0, rel=1e-15)
        assert cm.sigma_sq[0] == pytest.approx(1.0 / 16.0, abs=0)
        assert cm.sigma_sq[1] == pytest.approx(1.0 / 16.0 + 1.0 / 36.0, rel=1e-15)

    def test_monotone_and_ordered(self, eden_trace):
        cm = conditional_moments(eden_trace)
        assert np.all(np.diff(cm.mu) > 0)
        assert np.all(np.diff(cm.sigma_sq) > 0)
        # entries 1/y^2 <= 1/y termwise, so sigma_sq never exceeds mu
        assert np.all(cm.sigma_sq <= cm.mu)

    def test_cauchy_schwarz_floor(self, eden_trace):
        cm = conditional_moments(eden_trace)
        n = np.arange(1, cm.mu.size + 1, dtype=np.float64)
        assert np.all(cm.sigma_sq * n >= cm.mu**2 * (1.0 - 1e-12))

    def test_validation(self):
        with pytest.raises(ValueError):
            conditional_moments(_trace_from_y([]))
        with pytest.raises(ValueError):
            conditional_moments(_trace_from_y([4, 0]))


class TestLemma1Ratio:
    def test_hand_value(self):
        r = lemma1_ratio(_trace_from_y([4, 6]), 2)
        assert r == pytest.approx((1.0 / 16.0 + 1.0 / 36.0) / math.log(2.0), rel=1e-15)

    def test_matches_conditional_moments(self, eden_trace):
        cm = conditional_moments(eden_trace)
        for n in (2, 17, 500, eden_trace.steps):
            assert lemma1_ratio(eden_trace, n) == cm.sigma_sq[n - 1] / math.log(n)

    def test_positive_on_real_trace(self, eden_trace):
        assert lemma1_ratio(eden_trace, eden_trace.steps) > 0.0

    def test_validation(self, eden_trace):
        with pytest.raises(ValueError):
            lemma1_ratio(eden_trace, 1)
        with pytest.raises(ValueError):
            lemma1_ratio(eden_trace, eden_trace.steps + 1)


class TestLemma2:
    def test_equality_case_margin_is_roundoff(self):
        for n in (1, 10, 1000):
            res = lemma2_check(2.5 * q_sequence(n), 2.5)
            assert res.holds
            assert abs(res.margin) <= 1e-12 * res.sum_squares

    def test_all_ones(self):
        res = lemma2_check(np.ones(100), 1.0)
        assert res.holds
        assert res.sum_squares == pytest.approx(100.0)
        assert res.strong_bound == pytest.approx(SUM_Q_SQ_100, rel=1e-13)
        assert res.weak_bound == pytest.approx(math.log(100.0) / 4.0, rel=1e-15)
        assert res.strong_bound >= res.weak_bound
        assert res.margin > 0

    def test_random_sequences_never_violate(self):
        rng = np.random.default_rng(2024)
        for _ in range(300):
            n = int(rng.integers(2, 201))
            xs = rng.uniform(0.05, 3.0, n)
            prefix = np.cumsum(xs)
            a = float(np.min(prefix / np.sqrt(np.arange(1, n + 1))))
            res = lemma2_check(xs, a)
            assert res.holds
            assert res.sum_squares >= res.strong_bound - 1e-12 * res.sum_squares
            assert res.strong_bound >= res.weak_bound

    def test_upward_perturbation_of_extremal_sequence(self):
        rng = np.random.default_rng(7)
        n = 500
        eps = rng.uniform(0.0, 1e-6, n)
        res = lemma2_check(1.7 * q_sequence(n) * (1.0 + eps), 1.7)
        assert res.holds

    def test_precondition_failure_names_index(self):
        xs = (3.0 * q_sequence(50)).copy()
        xs[4] *= 0.9  # deficit first appears at the fifth prefix
        with pytest.raises(ValueError, match="index 5"):
            lemma2_check(xs, 3.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            lemma2_check([], 1.0)
        with pytest.raises(ValueError):
            lemma2_check([1.0, -2.0], 1.0)
        with pytest.raises(ValueError):
            lemma2_check([1.0, math.nan], 1.0)
        with pytest.raises(ValueError):
            lemma2_check([1.0, 2.0], 0.0)
        with pytest.raises(ValueError):
            lemma2_check([1.0, 2.0], -1.0)


class TestRearrange:
    def test_sorts_decreasing(self):
        out = rearrange_decreasing([1.0, 3.0, 2.0])
        assert out.tolist() == [3.0, 2.0, 1.0]

    def test_idempotent_and_preserves_values(self):
        rng = np.random.default_rng(11)
        xs = rng.exponential(1.0, 200)
        out = rearrange_decreasing(xs)
        assert np.array_equal(rearrange_decreasing(out), out)
        assert sorted(out.tolist()) == sorted(xs.tolist())
        assert math.fsum((out * out).tolist()) == math.fsum((xs * xs).tolist())

    @given(st.lists(st.floats(min_value=0.001, max_value=100.0), min_size=1,
                    max_size=60))
    def test_prefix_sums_dominate(self, xs):
        out = rearrange_decreasing(xs)  # internal domination assert must hold
        assert np.all(np.diff(out) <= 0)


class TestAbelSummation:
    def test_exact_small_case(self):
        assert abel_summation_gap([2.0, 1.0], [3.0, 4.0]) == 0.0

    def test_random_sequences_tiny_gap(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(2, 400))
            a = rearrange_decreasing(rng.uniform(0.0, 5.0, n))
            b = rng.normal(0.0, 2.0, n)
            assert abel_summation_gap(a, b) <= 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            abel_summation_gap([1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            abel_summation_gap([], [])


class TestFirstHitIndex:
    def test_finds_join_step(self, eden_trace):
        for j in (0, 3, 100):
            assert first_hit_index(eden_trace, eden_trace.vertex(j)) == j

    def test_missing_vertex(self, eden_trace):
        far = Vertex(10**6, 10**6)
        with pytest.raises(LookupError):
            first_hit_index(eden_trace, far)


class TestSampleSet:
    def test_summary(self):
        s = SampleSet(values=np.array([1.0, 2.0, 3.0, 10.0]), n_label=7)
        assert s.summary["mean"] == 4.0
        assert s.summary["median"] == 2.5
        assert s.summary["count"] == 4
        assert s.summary["variance"] == pytest.approx(np.var([1, 2, 3, 10], ddof=1))

    def test_single_value_variance_nan(self):
        assert math.isnan(SampleSet(values=[5.0], n_label=1).summary["variance"])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            SampleSet(values=[], n_label=1)


@pytest.fixture(scope="module")
def hit_samples():
    """Passage-time samples at four scales, for the constant estimators."""
    out = {}
    for n, reps in ((30, 300), (60, 300), (120, 200), (240, 150)):
        cfg = SimConfig(n=n, master_seed=2718, replicates=reps)
        out[n] = farm_replicates(cfg)[:, 0]
    return out


class TestTimeConstant:
    def test_synthetic_affine_recovery(self):
        # mean(T)/n = c + b/n exactly, so the 1/n fit recovers both pieces
        c, b = 0.42, 7.0
        sets = [SampleSet(values=np.full(50, c * n + b), n_label=n)
                for n in (100, 200, 400)]
        est = estimate_time_constant(sets)
        assert est.c1 == pytest.approx(c + b / 400, rel=1e-12)
        assert est.c1_extrapolated == pytest.approx(c, rel=1e-9)
        assert est.stderr == 0.0
        assert sorted(est.by_scale) == [100, 200, 400]

    def test_real_samples(self, hit_samples):
        sets = [SampleSet(values=hit_samples[n], n_label=n) for n in (30, 60, 120)]
        est = estimate_time_constant(sets)
        assert est.c1 > 0
        assert est.stderr > 0
        assert 0.3 < est.c1_extrapolated < 0.6

    def test_scale_drift_is_small(self, hit_samples):
        # per-distance time at one scale stays near the next scale's value
        ests = {}
        for top in (120, 240):
            sets = [SampleSet(values=hit_samples[n], n_label=n)
                    for n in (30, 60, top)]
            ests[top] = estimate_time_constant(sets)
        budget = 5.0 * (ests[120].stderr + ests[240].stderr + 0.01)
        assert abs(ests[120].c1 - ests[240].c1) <= budget

    def test_validation(self):
        good = [SampleSet(values=np.ones(5) * n, n_label=n) for n in (10, 20, 40)]
        with pytest.raises(ValueError):
            estimate_time_constant(good[:2])
        with pytest.raises(ValueError):
            estimate_time_constant(good, clock="deterministic")


class TestGrowthConstant:
    def test_synthetic_exact(self):
        traces = [_trace_from_y(np.full(400, 4)) for _ in range(2)]
        for tr, t in zip(traces, (5.0, 8.0)):
            tr.times = np.linspace(0.0, t, 401)
        est = estimate_growth_constant(traces)
        expect = (400 / 25.0 + 400 / 64.0) / 2.0
        assert est.c2 == pytest.approx(expect, rel=1e-12)
        assert est.ci99[0] < est.c2 < est.ci99[1]
        assert est.ci99[1] - est.c2 == pytest.approx(2.576 * est.stderr, rel=1e-12)

    def test_real_growth_runs(self):
        traces = []
        for i in range(16):
            cfg = SimConfig(n=3000, mode="grow", master_seed=41, replicates=16)
            traces.append(run_eden(cfg, derive_stream(41, i),
                                   retain_trace=True).trace)
        est = estimate_growth_constant(traces)
        assert 8.0 < est.c2 < 25.0

    def test_validation(self):
        tr = _trace_from_y([4, 6])
        with pytest.raises(ValueError):
            estimate_growth_constant([tr])
        bad = _trace_from_y([4, 6])
        bad.times = np.array([0.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            estimate_growth_constant([bad, tr])


class TestTightnessScan:
    def test_infinite_window(self):
        assert tightness_scan(np.arange(100.0), math.inf) == 1.0

    def test_linspace_half_window(self):
        v = np.linspace(0.0, 1.0, 101)
        assert tightness_scan(v, 0.5) == pytest.approx(51.0 / 101.0)

    def test_zero_window_counts_ties(self):
        assert tightness_scan(np.zeros(100), 0.0) == 1.0
        assert tightness_scan(np.arange(200.0), 0.0) == pytest.approx(1.0 / 200.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            tightness_scan(np.arange(99.0), 0.5)
        with pytest.raises(ValueError):
            tightness_scan(np.arange(100.0), -1.0)


class TestKsTests:
    def test_two_sample_identical_is_zero(self):
        x = np.random.default_rng(1).exponential(1.0, 500)
        res = ks_two_sample(x, x.copy())
        assert res.statistic == 0.0
        assert res.passed

    def test_two_sample_disjoint_is_one(self):
        a = np.arange(100.0)
        res = ks_two_sample(a, a + 1000.0)
        assert res.statistic == 1.0
        assert not res.passed

    def test_two_sample_threshold_formula(self):
        res = ks_two_sample(np.arange(200.0), np.arange(300.0))
        assert res.threshold == pytest.approx(KS_C * math.sqrt(500.0 / 60000.0))

    def test_one_sample_midpoint_grid(self):
        n = 50
        grid = (np.arange(n) + 0.5) / n
        res = ks_one_sample(grid, lambda x: np.asarray(x))
        assert res.statistic == pytest.approx(0.5 / n)
        assert res.threshold == pytest.approx(KS_C / math.sqrt(n))

    def test_calibration_at_nominal_level(self):
        # same-law pairs at 10^4 points should essentially never trip a
        # significance-0.001 threshold across 100 trials
        gen = np.random.default_rng(99)
        passes = sum(
            ks_two_sample(gen.exponential(1.0, 10**4),
                          gen.exponential(1.0, 10**4)).passed
            for _ in range(100))
        assert passes >= 99

    def test_validation(self):
        with pytest.raises(ValueError):
            ks_two_sample([], [1.0])
        with pytest.raises(ValueError):
            ks_one_sample([], exponential_cdf)


class TestReferenceCdfs:
    def test_normal(self):
        assert normal_cdf([0.0])[0] == 0.5
        x = np.array([0.31, 1.3, 2.7])
        assert np.allclose(normal_cdf(-x), 1.0 - normal_cdf(x), atol=1e-15)
        assert normal_cdf([1.96])[0] == pytest.approx(0.9750021048517795, rel=1e-12)

    def test_exponential(self):
        assert exponential_cdf([0.0])[0] == 0.0
        assert exponential_cdf([1.0])[0] == pytest.approx(1.0 - math.exp(-1.0))


class TestChiSquare:
    def test_hand_value(self):
        stat, df = chi_square_two_sample([10, 20], [20, 10])
        assert stat == pytest.approx(20.0 / 3.0, rel=1e-12)
        assert df == 1

    def test_identical_counts(self):
        stat, df = chi_square_two_sample([5, 0, 5], [5, 0, 5])
        assert stat == 0.0
        assert df == 1  # the both-empty cell is dropped

    def test_validation(self):
        with pytest.raises(ValueError):
            chi_square_two_sample([1, 2], [1, 2, 3])


class TestCltConditional:
    def test_iid_case(self):
        res = clt_conditional_check(np.full(10**4, 4), 10**4, derive_stream(5, 0))
        assert res.passed, f"KS {res.statistic} >= {res.threshold}"

    def test_growing_counts(self):
        j = np.arange(1, 1501, dtype=np.float64)
        y = np.floor(2.0 * np.sqrt(j)) + 4.0
        res = clt_conditional_check(y, 2000, derive_stream(6, 0))
        assert res.passed

    def test_deterministic_in_stream(self):
        a = clt_conditional_check([4, 6, 8], 200, derive_stream(7, 1))
        b = clt_conditional_check([4, 6, 8], 200, derive_stream(7, 1))
        assert a.statistic == b.statistic

    def test_validation(self):
        s = derive_stream(1, 0)
        with pytest.raises(ValueError):
            clt_conditional_check([4.0], 200, s)
        with pytest.raises(ValueError):
            clt_conditional_check([4.0, 0.5], 200, s)
        with pytest.raises(ValueError):
            clt_conditional_check([4.0, 6.0], 99, s)


class TestScalingFit:
    def test_log_exact(self):
        pts = [(n, 3.0 * math.log(n) + 2.0) for n in (10, 100, 1000, 10000)]
        fit = fit_scaling(pts, "log")
        assert fit.slope == pytest.approx(3.0, abs=1e-9)
        assert fit.intercept == pytest.approx(2.0, abs=1e-9)
        assert fit.residual_rms <= 1e-12
        assert fit.predict([50.0])[0] == pytest.approx(3.0 * math.log(50.0) + 2.0)

    def test_power_exact(self):
        pts = [(n, 5.0 * n**0.66) for n in (8, 16, 32, 64, 128)]
        fit = fit_scaling(pts, "power")
        assert fit.slope == pytest.approx(0.66, abs=1e-9)
        assert fit.intercept == pytest.approx(math.log(5.0), abs=1e-9)
        assert fit.predict([100.0])[0] == pytest.approx(5.0 * 100.0**0.66)
        assert fit.npoints == 5

    def test_least_squares_optimality(self):
        rng = np.random.default_rng(17)
        xs = np.array([16.0, 64.0, 256.0, 1024.0, 4096.0])
        ys = 1.5 * np.log(xs) + 0.3 + rng.normal(0.0, 0.2, xs.size)
        fit = fit_scaling(list(zip(xs, ys)), "log")
        lx = np.log(xs)
        for factor in (0.99, 1.01):
            s = fit.slope * factor
            icpt = float(np.mean(ys - s * lx))  # best intercept for this slope
            rms = float(np.sqrt(np.mean((ys - (s * lx + icpt)) ** 2)))
            assert rms >= fit.residual_rms

    def test_validation(self):
        with pytest.raises(ValueError):
            fit_scaling([(1, 1), (2, 2), (3, 3)], "log")
        with pytest.raises(ValueError):
            fit_scaling([(0, 1), (2, 2), (3, 3), (4, 4)], "log")
        with pytest.raises(ValueError):
            fit_scaling([(1, -1), (2, 2), (3, 3), (4, 4)], "power")
        with pytest.raises(ValueError):
            fit_scaling([(1, 1), (2, 2), (3, 3), (4, 4)], "loglog")


class TestBootstrapVarianceGrowth:
    def test_recovers_synthetic_slope(self):
        gen = np.random.default_rng(23)
        samples = {n: gen.normal(0.0, math.sqrt(2.0 * math.log(n) + 1.0), 400)
                   for n in (16, 64, 256, 1024)}
        fit, lcb = bootstrap_variance_growth(samples, derive_stream(23, 0))
        assert abs(fit.slope - 2.0) < 1.0
        assert 0.0 < lcb < fit.slope + 1.0

    def test_deterministic_in_stream(self):
        gen = np.random.default_rng(29)
        samples = {n: gen.normal(0.0, 1.0 + math.log(n), 100)
                   for n in (4, 16, 64, 256)}
        r1 = bootstrap_variance_growth(samples, derive_stream(29, 0), n_boot=200)
        r2 = bootstrap_variance_growth(samples, derive_stream(29, 0), n_boot=200)
        assert r1[1] == r2[1]

    def test_validation(self):
        with pytest.raises(ValueError):
            bootstrap_variance_growth({4: np.ones(10), 8: np.ones(10),
                                       16: np.ones(10)}, derive_stream(1, 0))
