import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fpplab.analysis import exponential_cdf, ks_one_sample
from fpplab.rng import (
    RngStream,
    derive_stream,
    exponential_batch,
    sample_exponential,
    sample_uniform01,
)


class TestLineage:
    def test_equal_lineage_equal_draws(self):
        a = derive_stream(42, 0)
        b = derive_stream(42, 0)
        assert a.generator.random(1000).tolist() == b.generator.random(1000).tolist()

    def test_distinct_ids_differ(self):
        a = derive_stream(42, 0).generator.random(1000)
        b = derive_stream(42, 1).generator.random(1000)
        assert not np.array_equal(a, b)

    def test_clone_rewinds(self):
        s = derive_stream(9, 3)
        first = s.generator.random(10).tolist()
        s.generator.random(12345)  # wind the state forward
        assert s.clone().generator.random(10).tolist() == first

    def test_separate_process_replays(self):
        code = ("from fpplab.rng import derive_stream;"
                "print(repr(derive_stream(42, 7).generator.random(5).tolist()))")
        out = subprocess.run([sys.executable, "-c", code],
                             capture_output=True, text=True, check=True)
        assert eval(out.stdout) == derive_stream(42, 7).generator.random(5).tolist()

    def test_id_bounds(self):
        derive_stream(2**64 - 1, 2**64 - 1)  # extreme but valid
        with pytest.raises(ValueError):
            derive_stream(-1, 0)
        with pytest.raises(ValueError):
            derive_stream(0, 2**64)

    @given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1))
    def test_derivation_is_pure(self, seed, sid):
        a = derive_stream(seed, sid)
        b = derive_stream(seed, sid)
        assert isinstance(a, RngStream)
        assert a.generator.random(16).tolist() == b.generator.random(16).tolist()


class TestUniform01:
    def test_open_interval(self):
        s = derive_stream(1, 0)
        draws = [sample_uniform01(s) for _ in range(10**5)]
        assert 0.0 < min(draws) and max(draws) < 1.0

    def test_mean(self):
        s = derive_stream(2, 0)
        draws = np.array([sample_uniform01(s) for _ in range(10**6)])
        assert abs(draws.mean() - 0.5) < 0.002

    def test_ks_uniform(self):
        s = derive_stream(3, 0)
        draws = np.array([sample_uniform01(s) for _ in range(10**6)])
        res = ks_one_sample(draws, lambda x: x)
        assert res.statistic < 0.002


class TestExponential:
    def test_mean_one(self):
        s = derive_stream(4, 0)
        draws = exponential_batch(s, 1.0, 10**6)
        assert abs(draws.mean() - 1.0) < 0.004

    def test_scalar_matches_law(self):
        s = derive_stream(5, 0)
        draws = np.array([sample_exponential(s, 2.0) for _ in range(10**5)])
        assert draws.min() > 0.0
        res = ks_one_sample(draws / 2.0, exponential_cdf)
        assert res.passed

    def test_mean_validation(self):
        s = derive_stream(1, 0)
        with pytest.raises(ValueError):
            sample_exponential(s, 0.0)
        with pytest.raises(ValueError):
            exponential_batch(s, -1.0, 5)

    def test_min_stability(self):
        # the minimum of n mean-1 exponentials is exponential with mean 1/n
        for i, n in enumerate((2, 4, 16, 64)):
            s = derive_stream(6, i)
            draws = exponential_batch(s, 1.0, (10**5, n)).min(axis=1)
            if n == 16:
                assert abs(draws.mean() - 1.0 / 16) < 4.0 * (1.0 / 16) / math.sqrt(10**5)
            res = ks_one_sample(draws * n, exponential_cdf)
            assert res.passed, f"min of {n} failed KS: {res.statistic}"

    def test_memorylessness(self):
        s = derive_stream(7, 0)
        draws = exponential_batch(s, 1.0, 3 * 10**5)
        excess = draws[draws > 0.5] - 0.5
        assert excess.size > 10**5
        res = ks_one_sample(excess[:10**5], exponential_cdf)
        assert res.passed
