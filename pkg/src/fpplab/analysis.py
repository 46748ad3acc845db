"""Statistics over growth traces: conditional moments, variance lower-bound
machinery, scaling-constant estimators, and distribution-shape tests.

All hypothesis-style checks in this module run at fixed significance 0.001;
the two-sample Kolmogorov-Smirnov threshold uses the asymptotic critical
coefficient c(0.001) = 1.9495.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from ._kernels import kahan_cumsum
from .engines import GrowthTrace
from .lattice import Vertex
from .rng import RngStream

KS_SIGNIFICANCE = 0.001
KS_C = 1.9495  # asymptotic Kolmogorov coefficient at significance 0.001


# ---------------------------------------------------------------------------
# conditional moments of the embedded exponential increments
# ---------------------------------------------------------------------------

@dataclass
class ConditionalMoments:
    """Prefix conditional mean and variance of a growth trace.

    Given the reach order, increment j is exponential with mean
    1/y_counts[j-1]; so the conditional mean of times[n] is the prefix sum of
    reciprocals (``mu``) and the conditional variance is the prefix sum of
    squared reciprocals (``sigma_sq``).  Sums are compensated.
    """
    mu: np.ndarray
    sigma_sq: np.ndarray


def conditional_moments(trace: GrowthTrace) -> ConditionalMoments:
    y = np.asarray(trace.y_counts, np.float64)
    if y.size == 0:
        raise ValueError("trace has no steps")
    if y.min() < 1:
        raise ValueError("corrupt trace: boundary counts must be >= 1")
    inv = 1.0 / y
    return ConditionalMoments(mu=kahan_cumsum(inv), sigma_sq=kahan_cumsum(inv * inv))


def lemma1_ratio(trace: GrowthTrace, n: int) -> float:
    """Conditional variance at step n over log n; the quantity whose liminf
    is bounded below by a positive constant."""
    if n < 2:
        raise ValueError(f"ratio needs n >= 2 (log n must be positive), got {n}")
    if n > trace.steps:
        raise ValueError(f"trace has only {trace.steps} steps, requested n={n}")
    y = np.asarray(trace.y_counts[:n], np.float64)
    if y.min() < 1:
        raise ValueError("corrupt trace: boundary counts must be >= 1")
    sigma_sq = float(kahan_cumsum((1.0 / y) ** 2)[-1])
    return sigma_sq / math.log(n)


# ---------------------------------------------------------------------------
# the square-root gap sequence and the prefix-sum inequality
# ---------------------------------------------------------------------------

def q_sequence(n: int) -> np.ndarray:
    """q_j = sqrt(j) - sqrt(j-1) for j = 1..n, in the cancellation-free form
    1/(sqrt(j) + sqrt(j-1)).  Satisfies q_j >= 1/(2 sqrt(j)) and telescopes:
    the prefix sums are exactly sqrt(n)."""
    if n < 1:
        raise ValueError(f"sequence length must be >= 1, got {n}")
    j = np.arange(1, n + 1, dtype=np.float64)
    return 1.0 / (np.sqrt(j) + np.sqrt(j - 1.0))


@dataclass
class Lemma2Result:
    """Outcome of the prefix-sum square inequality check."""
    holds: bool
    margin: float          # sum x^2 - a^2 sum q^2
    strong_bound: float    # a^2 * sum q^2
    weak_bound: float      # a^2 * log(n) / 4
    sum_squares: float


_PRECONDITION_SLACK = 1e-9


def lemma2_check(xs: Sequence[float], a: float) -> Lemma2Result:
    """Check that positive reals whose prefix sums dominate a*sqrt(n)
    satisfy sum(x_j^2) >= a^2 * sum(q_j^2) (which is >= a^2 log(n)/4).

    The prefix-sum precondition is re-verified internally; a violation
    raises ValueError naming the first offending index (1-based).
    """
    x = np.asarray(xs, np.float64)
    if x.size == 0:
        raise ValueError("sequence must be nonempty")
    if not np.all(np.isfinite(x)) or x.min() <= 0.0:
        raise ValueError("sequence entries must be positive finite reals")
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"constant a must be positive, got {a!r}")
    n = x.size
    prefix = kahan_cumsum(x)
    need = a * np.sqrt(np.arange(1, n + 1, dtype=np.float64))
    bad = prefix < need * (1.0 - _PRECONDITION_SLACK)
    if np.any(bad):
        k = int(np.argmax(bad)) + 1
        raise ValueError(
            f"precondition failed: prefix sum at index {k} is {prefix[k-1]:.12g}"
            f" < a*sqrt({k}) = {need[k-1]:.12g}")
    sum_sq = math.fsum((x * x).tolist())
    q = q_sequence(n)
    strong = a * a * math.fsum((q * q).tolist())
    weak = a * a * math.log(n) / 4.0
    margin = sum_sq - strong
    return Lemma2Result(
        holds=margin >= -1e-12 * sum_sq,
        margin=margin,
        strong_bound=strong,
        weak_bound=weak,
        sum_squares=sum_sq,
    )


def rearrange_decreasing(xs: Sequence[float]) -> np.ndarray:
    """Sort into nonincreasing order.  Every prefix sum of the result
    dominates the corresponding prefix sum of the input (checked)."""
    x = np.asarray(xs, np.float64)
    out = np.sort(x)[::-1].copy()
    before = kahan_cumsum(x)
    after = kahan_cumsum(out)
    slack = 1e-9 * (np.abs(before) + 1.0)
    assert np.all(after >= before - slack), "rearrangement lost prefix domination"
    return out


def abel_summation_gap(a: Sequence[float], b: Sequence[float]) -> float:
    """Relative discrepancy of the summation-by-parts identity

        sum_k a_k b_k = a_n B_n + sum_{k<n} (a_k - a_{k+1}) B_k,

    where B_k is the k-th prefix sum of b.  Exact algebraically; the return
    value measures floating-point drift only."""
    av = np.asarray(a, np.float64)
    bv = np.asarray(b, np.float64)
    if av.size != bv.size or av.size == 0:
        raise ValueError("sequences must be nonempty and equally long")
    prefix = kahan_cumsum(bv)
    lhs = math.fsum((av * bv).tolist())
    rhs_terms = ((av[:-1] - av[1:]) * prefix[:-1]).tolist()
    rhs_terms.append(av[-1] * prefix[-1])
    rhs = math.fsum(rhs_terms)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


def first_hit_index(trace: GrowthTrace, target: Vertex) -> int:
    """Index at which the target joined the cluster (0 is the origin)."""
    tx, ty = target
    matches = np.flatnonzero((trace.vx == tx) & (trace.vy == ty))
    if matches.size == 0:
        raise LookupError(f"target {tuple(target)!r} never joined this trace")
    return int(matches[0])


# ---------------------------------------------------------------------------
# sample containers and scaling-constant estimators
# ---------------------------------------------------------------------------

@dataclass
class SampleSet:
    """Replicate values collected at one scale label."""
    values: np.ndarray
    n_label: int

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, np.float64)
        if self.values.size == 0:
            raise ValueError("sample set may not be empty")

    @property
    def summary(self) -> dict:
        v = self.values
        return {
            "mean": float(v.mean()),
            "variance": float(v.var(ddof=1)) if v.size > 1 else math.nan,
            "median": float(np.median(v)),
            "count": int(v.size),
        }


@dataclass
class TimeConstantEstimate:
    c1: float
    stderr: float
    c1_extrapolated: float
    by_scale: dict


def estimate_time_constant(sample_sets: Iterable[SampleSet],
                           clock: str = "exponential") -> TimeConstantEstimate:
    """Linear-growth constant: passage time per unit distance at the largest
    scale, with an affine-in-1/n extrapolation across scales.

    Only exponential-clock passage times have the linear-growth normalization
    this estimator assumes, so other sample models are rejected.
    """
    if clock != "exponential":
        raise ValueError(
            f"time-constant estimation assumes exponential passage times, got {clock!r}")
    sets = sorted(sample_sets, key=lambda s: s.n_label)
    if len({s.n_label for s in sets}) < 3:
        raise ValueError("need samples at >= 3 distinct scales")
    by_scale = {s.n_label: s.summary for s in sets}
    top = sets[-1]
    n = top.n_label
    c1 = float(top.values.mean()) / n
    stderr = float(top.values.std(ddof=1)) / (math.sqrt(top.values.size) * n)
    ns = np.array([s.n_label for s in sets], np.float64)
    ratios = np.array([s.values.mean() / s.n_label for s in sets])
    coeffs = np.polyfit(1.0 / ns, ratios, 1)
    return TimeConstantEstimate(c1=c1, stderr=stderr,
                                c1_extrapolated=float(coeffs[1]), by_scale=by_scale)


@dataclass
class GrowthConstantEstimate:
    c2: float
    stderr: float
    ci99: tuple[float, float]


def estimate_growth_constant(traces: Sequence[GrowthTrace]) -> GrowthConstantEstimate:
    """Quadratic-volume constant from final times: steps / time^2 per trace,
    averaged over replicates, with a 99% normal confidence interval."""
    if len(traces) < 2:
        raise ValueError("need at least 2 traces")
    vals = []
    for tr in traces:
        t = tr.final_time
        if not (t > 0.0):
            raise ValueError("trace final time must be positive")
        vals.append(tr.steps / (t * t))
    v = np.asarray(vals, np.float64)
    c2 = float(v.mean())
    se = float(v.std(ddof=1)) / math.sqrt(v.size)
    return GrowthConstantEstimate(c2=c2, stderr=se,
                                  ci99=(c2 - 2.576 * se, c2 + 2.576 * se))


# ---------------------------------------------------------------------------
# distribution shape diagnostics
# ---------------------------------------------------------------------------

def tightness_scan(values, window: float) -> float:
    """Largest empirical mass carried by any closed interval of the given
    width: max_a P_hat(T in [a, a+window])."""
    v = np.sort(np.asarray(getattr(values, "values", values), np.float64))
    if v.size < 100:
        raise ValueError(f"tightness scan needs >= 100 samples, got {v.size}")
    if not (window >= 0.0):
        raise ValueError(f"window must be nonnegative, got {window!r}")
    if math.isinf(window):
        return 1.0
    hi = np.searchsorted(v, v + window, side="right")
    counts = hi - np.arange(v.size)
    return float(counts.max()) / v.size


@dataclass(frozen=True)
class KsResult:
    statistic: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.statistic < self.threshold


def ks_two_sample(a, b) -> KsResult:
    """Two-sample Kolmogorov-Smirnov statistic with the asymptotic
    significance-0.001 threshold c * sqrt((m+n)/(m n))."""
    xa = np.sort(np.asarray(getattr(a, "values", a), np.float64))
    xb = np.sort(np.asarray(getattr(b, "values", b), np.float64))
    if xa.size == 0 or xb.size == 0:
        raise ValueError("both samples must be nonempty")
    pooled = np.concatenate([xa, xb])
    fa = np.searchsorted(xa, pooled, side="right") / xa.size
    fb = np.searchsorted(xb, pooled, side="right") / xb.size
    stat = float(np.abs(fa - fb).max())
    thr = KS_C * math.sqrt((xa.size + xb.size) / (xa.size * xb.size))
    return KsResult(statistic=stat, threshold=thr)


def ks_one_sample(values, cdf: Callable[[np.ndarray], np.ndarray]) -> KsResult:
    """One-sample Kolmogorov-Smirnov against a continuous CDF, with the
    asymptotic significance-0.001 threshold c / sqrt(n)."""
    x = np.sort(np.asarray(getattr(values, "values", values), np.float64))
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    f = np.asarray(cdf(x), np.float64)
    n = x.size
    grid = np.arange(n, dtype=np.float64)
    stat = float(max((f - grid / n).max(), ((grid + 1.0) / n - f).max()))
    return KsResult(statistic=stat, threshold=KS_C / math.sqrt(n))


def normal_cdf(x) -> np.ndarray:
    xs = np.asarray(x, np.float64)
    return np.array([0.5 * (1.0 + math.erf(v / math.sqrt(2.0))) for v in xs.ravel()],
                    np.float64).reshape(xs.shape)


def exponential_cdf(x) -> np.ndarray:
    return -np.expm1(-np.asarray(x, np.float64))


def chi_square_two_sample(counts_a, counts_b) -> tuple[float, int]:
    """Homogeneity chi-square for two frequency vectors over one support.
    Returns (statistic, degrees of freedom); cells empty in both are dropped."""
    oa = np.asarray(counts_a, np.float64)
    ob = np.asarray(counts_b, np.float64)
    if oa.shape != ob.shape:
        raise ValueError("count vectors must share a support")
    keep = (oa + ob) > 0
    oa = oa[keep]
    ob = ob[keep]
    na = oa.sum()
    nb = ob.sum()
    col = oa + ob
    ea = col * (na / (na + nb))
    eb = col * (nb / (na + nb))
    stat = float((((oa - ea) ** 2) / ea).sum() + (((ob - eb) ** 2) / eb).sum())
    return stat, int(oa.size - 1)


def clt_conditional_check(y_counts, replicates: int, stream: RngStream) -> KsResult:
    """Resample the conditional passage-time law for a frozen boundary-count
    sequence and test the standardized sums against the standard normal.

    Each resample draws independent exponentials with means 1/y_j, sums them,
    and standardizes by the conditional moments.  Needs at least two terms
    (no limit law at one term); intended use is y_counts from real traces
    with thousands of steps.
    """
    y = np.asarray(y_counts, np.float64)
    if y.size < 2:
        raise ValueError(f"need at least 2 boundary counts, got {y.size}")
    if y.min() < 1:
        raise ValueError("boundary counts must be >= 1")
    if replicates < 100:
        raise ValueError(f"need >= 100 resamples for a meaningful test, got {replicates}")
    inv = 1.0 / y
    mu = math.fsum(inv.tolist())
    sigma = math.sqrt(math.fsum((inv * inv).tolist()))
    gen = stream.generator
    sums = np.empty(replicates, np.float64)
    chunk = max(1, min(replicates, 8_000_000 // y.size))
    done = 0
    while done < replicates:
        k = min(chunk, replicates - done)
        draws = -np.log1p(-gen.random((k, y.size)))
        sums[done:done + k] = draws @ inv
        done += k
    z = (sums - mu) / sigma
    return ks_one_sample(z, normal_cdf)


# ---------------------------------------------------------------------------
# scaling-law fits
# ---------------------------------------------------------------------------

@dataclass
class ScalingFit:
    """Least-squares fit in transformed coordinates.

    model "log":   y = slope * ln(x) + intercept
    model "power": ln(y) = slope * ln(x) + intercept
    ``residual_rms`` is measured in the transformed (fit) space.
    """
    model: str
    slope: float
    intercept: float
    residual_rms: float
    npoints: int

    def predict(self, x) -> np.ndarray:
        lx = np.log(np.asarray(x, np.float64))
        if self.model == "log":
            return self.slope * lx + self.intercept
        return np.exp(self.slope * lx + self.intercept)


def fit_scaling(points: Sequence[tuple[float, float]], model: str) -> ScalingFit:
    """Fit a semi-log or power scaling law through (scale, statistic) points."""
    if model not in ("log", "power"):
        raise ValueError(f"model must be 'log' or 'power', got {model!r}")
    pts = [(float(x), float(y)) for x, y in points]
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if np.unique(xs).size < 4:
        raise ValueError("need at least 4 distinct scales to fit")
    if xs.min() <= 0.0:
        raise ValueError("scales must be positive")
    lx = np.log(xs)
    if model == "power":
        if ys.min() <= 0.0:
            raise ValueError("power-law fit requires positive statistics")
        ty = np.log(ys)
    else:
        ty = ys
    slope, intercept = np.polyfit(lx, ty, 1)
    resid = ty - (slope * lx + intercept)
    return ScalingFit(model=model, slope=float(slope), intercept=float(intercept),
                      residual_rms=float(np.sqrt(np.mean(resid ** 2))), npoints=xs.size)


def bootstrap_variance_growth(samples_by_scale: Mapping[int, np.ndarray],
                              stream: RngStream,
                              n_boot: int = 1000,
                              quantile: float = 0.05) -> tuple[ScalingFit, float]:
    """Fit variance = slope * ln(scale) + intercept and bootstrap a lower
    confidence bound for the slope by resampling replicates within scales."""
    scales = sorted(samples_by_scale)
    if len(scales) < 4:
        raise ValueError("need at least 4 scales")
    arrays = {n: np.asarray(samples_by_scale[n], np.float64) for n in scales}
    fit = fit_scaling([(n, arrays[n].var(ddof=1)) for n in scales], "log")
    gen = stream.generator
    lx = np.log(np.asarray(scales, np.float64))
    slopes = np.empty(n_boot, np.float64)
    for b in range(n_boot):
        vars_b = np.empty(len(scales))
        for i, n in enumerate(scales):
            v = arrays[n]
            idx = gen.integers(0, v.size, v.size)
            vars_b[i] = v[idx].var(ddof=1)
        slopes[b] = np.polyfit(lx, vars_b, 1)[0]
    return fit, float(np.quantile(slopes, quantile))
