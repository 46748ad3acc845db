"""Growth engines: Eden dynamics, lazy-weight shortest paths, and
restart-clock (Richardson) dynamics, plus strip-restricted variants.

All engines expose the same run contract: ``run(config, stream)`` is a pure
function of the configuration and the stream lineage.  The caller's generator
object is never advanced; each attempt re-derives the stream so results do
not depend on internal sizing policies.

The default implementation is a grid-backed numba kernel.  A pure-Python
reference implementation (``impl="reference"``) consumes the identical draw
sequence and produces bit-identical traces, which the test suite exploits.
"""
from __future__ import annotations

import heapq
import math
import multiprocessing
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .lattice import Cluster, StripRegion, Vertex, integer_part_vector, neighbors
from .rng import REPLICATE_BAND, RngStream, derive_stream, sample_uniform01

ENGINES = ("eden", "dijkstra", "richardson")
CLOCKS = ("exponential", "uniform", "deterministic")
MODES = ("hit", "grow")


class ResourceLimitError(RuntimeError):
    """A run exceeded an explicit resource cap (step budget or grid retries)."""


@dataclass
class SimConfig:
    """Configuration for a single growth experiment.

    ``n`` is the target scale: the lattice distance for ``mode="hit"`` (the
    target vertex is the integer part of ``n * direction``) or the number of
    growth steps for ``mode="grow"``.  ``max_steps`` defaults to
    ``8*n**2 + 10_000`` for hit runs.  Strip restriction is enabled by setting
    ``strip_alpha``; the strip half-width is ``strip_constant * n**alpha / 2``.
    """
    n: int
    direction: tuple[float, float] = (1.0, 0.0)
    engine: str = "eden"
    clock: str = "exponential"
    mode: str = "hit"
    strip_alpha: Optional[float] = None
    strip_constant: float = 2.0
    max_steps: Optional[int] = None
    master_seed: int = 1
    replicates: int = 1000

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}, expected one of {ENGINES}")
        if self.clock not in CLOCKS:
            raise ValueError(f"unknown clock {self.clock!r}, expected one of {CLOCKS}")
        if self.engine != "richardson" and self.clock != "exponential":
            raise ValueError(
                f"clock {self.clock!r} is only selectable for the richardson engine")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        self.n = int(self.n)
        dx, dy = float(self.direction[0]), float(self.direction[1])
        norm = math.hypot(dx, dy)
        if not math.isfinite(norm) or norm == 0.0:
            raise ValueError(f"direction {self.direction!r} cannot be normalized")
        self.direction = (dx / norm, dy / norm)
        if self.strip_alpha is not None:
            if not (0.0 < self.strip_alpha < 1.0):
                raise ValueError(f"strip_alpha must be inside (0, 1), got {self.strip_alpha}")
            if self.strip_constant <= 0.0:
                raise ValueError(f"strip_constant must be positive, got {self.strip_constant}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError(f"max_steps must be positive, got {self.max_steps}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not (0 <= int(self.master_seed) < 2**64):
            raise ValueError(f"master_seed must be an unsigned 64-bit integer")

    def target(self) -> Vertex:
        t = integer_part_vector(self.direction, self.n)
        if t == (0, 0):
            raise ValueError(
                f"n={self.n} along direction {self.direction} floors to the origin; "
                f"increase n")
        return t

    def resolved_max_steps(self) -> int:
        if self.max_steps is not None:
            return int(self.max_steps)
        if self.mode == "grow":
            return self.n
        return 8 * self.n * self.n + 10_000

    def half_width(self) -> float:
        if self.strip_alpha is None:
            raise ValueError("config has no strip parameters")
        return self.strip_constant * self.n ** self.strip_alpha / 2.0

    def strip_region(self) -> StripRegion:
        hw = self.half_width()
        if hw < 1.0:
            raise ValueError(
                f"strip half-width {hw:.4g} < 1 cannot contain the origin's neighbors")
        return StripRegion(Vertex(0, 0), self.target(), hw)


@dataclass
class GrowthTrace:
    """Reach-ordered record of a growth run.

    ``times`` has one more entry than ``y_counts``: vertex j joins at
    ``times[j]`` and ``y_counts[j-1]`` is the boundary edge count of the
    cluster just before that step (so ``y_counts[0] == 4`` for unrestricted
    growth from the origin).
    """
    vx: np.ndarray
    vy: np.ndarray
    times: np.ndarray
    y_counts: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.y_counts)

    def vertex(self, j: int) -> Vertex:
        return Vertex(int(self.vx[j]), int(self.vy[j]))

    def vertices(self) -> list[Vertex]:
        return [Vertex(int(x), int(y)) for x, y in zip(self.vx, self.vy)]

    @property
    def final_time(self) -> float:
        return float(self.times[-1])

    def validate(self, check_first_y: bool = True) -> None:
        m = self.steps
        if not (len(self.vx) == len(self.vy) == len(self.times) == m + 1):
            raise ValueError("trace length mismatch between vertices, times, y_counts")
        if self.times[0] != 0.0:
            raise ValueError("trace must start at time zero")
        if np.any(np.diff(self.times) < 0):
            raise ValueError("trace times must be nondecreasing")
        if m and self.y_counts.min() < 1:
            raise ValueError("boundary counts must be positive")
        if check_first_y and m and self.y_counts[0] != 4:
            raise ValueError(f"first boundary count must be 4, got {self.y_counts[0]}")


@dataclass
class HitResult:
    """Outcome of one run: passage time, number of growth steps until the
    stop condition, final conditional moments, and the optional trace."""
    passage_time: float
    hit_index: int
    mu_final: float
    sigma_sq_final: float
    trace: Optional[GrowthTrace] = None


class TraceBuilder:
    """Accumulates a trace incrementally for the pure-Python engines."""

    def __init__(self, origin: Vertex = Vertex(0, 0)):
        self.vx = [int(origin.x)]
        self.vy = [int(origin.y)]
        self.times = [0.0]
        self.y_counts: list[int] = []
        # compensated accumulators for time and conditional moments
        self._t = 0.0
        self._tc = 0.0
        self._mu = 0.0
        self._muc = 0.0
        self._sg = 0.0
        self._sgc = 0.0

    def record(self, w: Vertex, y: int, dt: float) -> None:
        inv = 1.0 / y
        for attr_s, attr_c, val in (("_t", "_tc", dt), ("_mu", "_muc", inv),
                                    ("_sg", "_sgc", inv * inv)):
            s = getattr(self, attr_s)
            c = getattr(self, attr_c)
            yk = val - c
            t = s + yk
            setattr(self, attr_c, (t - s) - yk)
            setattr(self, attr_s, t)
        self.vx.append(int(w.x))
        self.vy.append(int(w.y))
        self.times.append(self._t)
        self.y_counts.append(int(y))

    @property
    def time(self) -> float:
        return self._t

    @property
    def steps(self) -> int:
        return len(self.y_counts)

    def snapshot(self) -> GrowthTrace:
        return GrowthTrace(
            vx=np.asarray(self.vx, np.int64),
            vy=np.asarray(self.vy, np.int64),
            times=np.asarray(self.times, np.float64),
            y_counts=np.asarray(self.y_counts, np.int64),
        )

    def result(self, retain: bool) -> HitResult:
        return HitResult(
            passage_time=self._t,
            hit_index=self.steps,
            mu_final=self._mu,
            sigma_sq_final=self._sg,
            trace=self.snapshot() if retain else None,
        )


def eden_step(builder: TraceBuilder, cluster: Cluster, stream: RngStream) -> Vertex:
    """Advance Eden growth one step: sample a uniform boundary edge, add its
    head, and advance time by an exponential of mean 1/boundary_count.

    The added vertex joins with probability proportional to the number of
    boundary edges pointing at it, which is the uniform-edge law.
    """
    y = cluster.boundary_count
    if y == 0:
        raise ValueError("cluster boundary is empty; nothing can be added")
    u1 = sample_uniform01(stream)
    _, head = cluster.sample_boundary_edge(u1)
    u2 = sample_uniform01(stream)
    dt = -math.log(u2) / y
    cluster.add_vertex(head)
    builder.record(head, y, dt)
    return head


# ---------------------------------------------------------------------------
# grid geometry and buffer reuse
# ---------------------------------------------------------------------------

_GRID_RETRY_LIMIT = 3
_buffer_cache: dict = {}


def _get_buffers(kind: str, sx: int, sy: int):
    """Per-process single-slot buffer cache, reset cheaply between runs."""
    key = (kind, sx, sy)
    cached = _buffer_cache.get(kind)
    if cached is None or cached[0] != key:
        cells = sx * sy
        if kind == "eden":
            bufs = (np.zeros(cells, np.uint8), np.full(4 * cells, -1, np.int32))
        else:
            bufs = (np.full(cells, np.inf, np.float64), np.zeros(cells, np.uint8),
                    np.full(cells, np.nan, np.float64), np.full(cells, np.nan, np.float64))
        _buffer_cache[kind] = (key, bufs)
        return bufs
    bufs = cached[1]
    if kind == "eden":
        bufs[0].fill(0)
        bufs[1].fill(-1)
    else:
        bufs[0].fill(np.inf)
        bufs[1].fill(0)
        bufs[2].fill(np.nan)
        bufs[3].fill(np.nan)
    return bufs


def _unrestricted_box(config: SimConfig, attempt: int):
    if config.mode == "hit":
        tx, ty = config.target()
        base = 1.45 * (math.hypot(tx, ty) + 4.0) + 48.0
    else:
        base = 0.75 * math.sqrt(config.n) + 48.0
    r = int(math.ceil(base * 1.6 ** attempt))
    side = 2 * r + 3
    return side, side, r + 1, r + 1, np.zeros(1, np.uint8), False


def _strip_box(config: SimConfig):
    region = config.strip_region()
    hw = region.half_width
    tx, ty = region.target
    xmin = math.floor(min(0, tx) - hw) - 2
    xmax = math.ceil(max(0, tx) + hw) + 2
    ymin = math.floor(min(0, ty) - hw) - 2
    ymax = math.ceil(max(0, ty) + hw) + 2
    sx = xmax - xmin + 1
    sy = ymax - ymin + 1
    xs = np.arange(xmin, xmax + 1, dtype=np.float64)
    ys = np.arange(ymin, ymax + 1, dtype=np.float64)
    px, py = np.meshgrid(xs, ys)  # shape (sy, sx)
    ux = float(tx)
    uy = float(ty)
    len_sq = ux * ux + uy * uy
    tpar = np.clip((px * ux + py * uy) / len_sq, 0.0, 1.0)
    dsq = (px - tpar * ux) ** 2 + (py - tpar * uy) ** 2
    mask = (dsq <= hw * hw).astype(np.uint8).ravel()
    return region, sx, sy, -xmin, -ymin, mask


def _build_trace(vx, vy, yc, tm, m, ox, oy) -> GrowthTrace:
    return GrowthTrace(
        vx=vx[:m + 1].astype(np.int64) - ox,
        vy=vy[:m + 1].astype(np.int64) - oy,
        times=tm[:m + 1].copy(),
        y_counts=yc[:m].astype(np.int64),
    )


_DUMMY_I32 = np.zeros(1, np.int32)
_DUMMY_F64 = np.zeros(1, np.float64)


def _grid_targets(config: SimConfig, ox: int, oy: int, sx: int):
    if config.mode == "hit":
        tx, ty = config.target()
        return (tx + ox) + (ty + oy) * sx, -1
    return -1, config.n


def _run_eden_grid(config: SimConfig, stream: RngStream, retain: bool) -> HitResult:
    max_steps = config.resolved_max_steps()
    strip = config.strip_alpha is not None
    attempts = 1 if strip else _GRID_RETRY_LIMIT
    for attempt in range(attempts):
        if strip:
            _, sx, sy, ox, oy, mask = _strip_box(config)
            use_mask = True
        else:
            sx, sy, ox, oy, mask, use_mask = _unrestricted_box(config, attempt)
        member, inpos = _get_buffers("eden", sx, sy)
        edges = np.empty(1 << 12, np.int32)
        if retain:
            vx = np.empty(max_steps + 1, np.int32)
            vy = np.empty(max_steps + 1, np.int32)
            yc = np.empty(max_steps, np.int32)
            tm = np.empty(max_steps + 1, np.float64)
        else:
            vx = vy = yc = _DUMMY_I32
            tm = _DUMMY_F64
        target_cell, step_target = _grid_targets(config, ox, oy, sx)
        gen = stream.clone().generator
        status, m, t, mu, sg, _ = _kernels.eden_kernel(
            gen, sx, sy, ox, oy, use_mask, mask, member, inpos, edges,
            target_cell, step_target, max_steps, retain, vx, vy, yc, tm)
        if status == _kernels.ESCAPE:
            continue
        if status == _kernels.STEP_CAP:
            raise ResourceLimitError(
                f"growth exceeded max_steps={max_steps} before reaching the stop condition")
        trace = _build_trace(vx, vy, yc, tm, m, ox, oy) if retain else None
        return HitResult(t, m, mu, sg, trace)
    raise ResourceLimitError(
        f"growth escaped the bounding box {_GRID_RETRY_LIMIT} times (n={config.n})")


def _run_dijkstra_grid(config: SimConfig, stream: RngStream, retain: bool) -> HitResult:
    max_steps = config.resolved_max_steps()
    strip = config.strip_alpha is not None
    attempts = 1 if strip else _GRID_RETRY_LIMIT
    for attempt in range(attempts):
        if strip:
            _, sx, sy, ox, oy, mask = _strip_box(config)
            use_mask = True
        else:
            sx, sy, ox, oy, mask, use_mask = _unrestricted_box(config, attempt)
        dist, settled, wr, wu = _get_buffers("dijkstra", sx, sy)
        if retain:
            vx = np.empty(max_steps + 2, np.int32)
            vy = np.empty(max_steps + 2, np.int32)
            yc = np.empty(max_steps + 1, np.int32)
            tm = np.empty(max_steps + 2, np.float64)
        else:
            vx = vy = yc = _DUMMY_I32
            tm = _DUMMY_F64
        target_cell, step_target = _grid_targets(config, ox, oy, sx)
        gen = stream.clone().generator
        status, m, t, mu, sg = _kernels.dijkstra_kernel(
            gen, sx, sy, ox, oy, use_mask, mask, dist, settled, wr, wu,
            target_cell, step_target, max_steps, retain, vx, vy, yc, tm)
        if status == _kernels.ESCAPE:
            continue
        if status == _kernels.STEP_CAP:
            raise ResourceLimitError(
                f"settling exceeded max_steps={max_steps} before reaching the stop condition")
        trace = _build_trace(vx, vy, yc, tm, m, ox, oy) if retain else None
        return HitResult(t, m, mu, sg, trace)
    raise ResourceLimitError(
        f"exploration escaped the bounding box {_GRID_RETRY_LIMIT} times (n={config.n})")


# ---------------------------------------------------------------------------
# pure-Python reference engines
# ---------------------------------------------------------------------------

def _stop_params(config: SimConfig):
    if config.mode == "hit":
        return config.target(), -1
    return None, config.n


def _allowed_predicate(config: SimConfig):
    if config.strip_alpha is None:
        return None
    return config.strip_region().contains


def _run_eden_reference(config: SimConfig, stream: RngStream, retain: bool) -> HitResult:
    target, step_target = _stop_params(config)
    max_steps = config.resolved_max_steps()
    work = stream.clone()
    cluster = Cluster(Vertex(0, 0), allowed=_allowed_predicate(config))
    builder = TraceBuilder(Vertex(0, 0))
    while True:
        if builder.steps >= max_steps:
            raise ResourceLimitError(
                f"growth exceeded max_steps={max_steps} before reaching the stop condition")
        w = eden_step(builder, cluster, work)
        if (target is not None and w == target) or builder.steps == step_target:
            return builder.result(retain)


def _run_dijkstra_reference(config: SimConfig, stream: RngStream, retain: bool) -> HitResult:
    target, step_target = _stop_params(config)
    max_steps = config.resolved_max_steps()
    allowed = _allowed_predicate(config)
    work = stream.clone()
    origin = Vertex(0, 0)
    dist: dict[Vertex, float] = {origin: 0.0}
    settled: set[Vertex] = set()
    weights: dict[tuple, float] = {}
    heap: list[tuple[float, int, Vertex]] = [(0.0, 0, origin)]
    counter = 1
    builder = TraceBuilder(origin)
    ybound = 0
    settles = 0
    while heap:
        t, _, v = heapq.heappop(heap)
        if v in settled:
            continue
        if settles > 0:
            builder.record(v, ybound, t - builder.time)
            # store the heap key itself so recorded times are exact, not a
            # compensated re-accumulation that can drift by an ulp
            builder._t = t
            builder._tc = 0.0
            builder.times[-1] = t
        settled.add(v)
        k_in = 0
        k_out = 0
        for d, head in enumerate(neighbors(v)):
            if allowed is not None and not allowed(head):
                continue
            if head in settled:
                k_in += 1
                continue
            k_out += 1
            axis = d & 1  # 0 horizontal, 1 vertical
            lower = v if d < 2 else head  # canonical undirected key: lower endpoint
            key = (lower, axis)
            w = weights.get(key)
            if w is None:
                w = -math.log(sample_uniform01(work))
                weights[key] = w
            nd = t + w
            if nd < dist.get(head, math.inf):
                dist[head] = nd
                heapq.heappush(heap, (nd, counter, head))
                counter += 1
        ybound += k_out - k_in
        if v == target or settles == step_target:
            return builder.result(retain)
        settles += 1
        if settles > max_steps:
            raise ResourceLimitError(
                f"settling exceeded max_steps={max_steps} before reaching the stop condition")
    raise ResourceLimitError("exploration exhausted the reachable region")


# ---------------------------------------------------------------------------
# restart-clock (Richardson) dynamics
# ---------------------------------------------------------------------------

def _clock_batch(gen: np.random.Generator, clock: str, m: int) -> np.ndarray:
    if clock == "exponential":
        return -np.log1p(-gen.random(m))
    if clock == "uniform":
        return 2.0 * gen.random(m)
    return np.ones(m)


def run_richardson(config: SimConfig, stream: RngStream, retain_trace: bool = False) -> HitResult:
    """Growth where every boundary edge redraws a fresh clock each step and
    the minimum clock decides the crossing and the time increment.

    With exponential clocks this is the Eden law exactly; with other clocks
    it is a different process sharing the same interface.  Ties (systematic
    for deterministic clocks) are broken uniformly at random.
    """
    if config.engine != "richardson":
        raise ValueError(f"config.engine is {config.engine!r}, expected 'richardson'")
    target, step_target = _stop_params(config)
    max_steps = config.resolved_max_steps()
    work = stream.clone()
    gen = work.generator
    cluster = Cluster(Vertex(0, 0), allowed=_allowed_predicate(config))
    builder = TraceBuilder(Vertex(0, 0))
    while True:
        if builder.steps >= max_steps:
            raise ResourceLimitError(
                f"growth exceeded max_steps={max_steps} before reaching the stop condition")
        m = cluster.boundary_count
        if m == 0:
            raise ResourceLimitError("boundary is empty; region fully grown")
        clocks = _clock_batch(gen, config.clock, m)
        k = int(np.argmin(clocks))
        cmin = clocks[k]
        ties = np.flatnonzero(clocks == cmin)
        if len(ties) > 1:
            u = sample_uniform01(work)
            pick = int(u * len(ties))
            if pick >= len(ties):
                pick = len(ties) - 1
            k = int(ties[pick])
        head = cluster.edges[k][1]
        cluster.add_vertex(head)
        builder.record(head, m, float(cmin))
        if (target is not None and head == target) or builder.steps == step_target:
            return builder.result(retain_trace)


# ---------------------------------------------------------------------------
# public run interface
# ---------------------------------------------------------------------------

def run_eden(config: SimConfig, stream: RngStream, retain_trace: bool = False,
             impl: str = "grid") -> HitResult:
    """Run Eden growth to the configured stop condition.

    ``impl="grid"`` uses the numba kernel; ``impl="reference"`` is the
    pure-Python implementation with the identical draw discipline.
    """
    if config.engine != "eden":
        raise ValueError(f"config.engine is {config.engine!r}, expected 'eden'")
    if impl == "grid":
        return _run_eden_grid(config, stream, retain_trace)
    if impl == "reference":
        return _run_eden_reference(config, stream, retain_trace)
    raise ValueError(f"unknown impl {impl!r}")


def run_dijkstra(config: SimConfig, stream: RngStream, retain_trace: bool = False,
                 impl: str = "grid") -> HitResult:
    """Run shortest-time exploration with lazily drawn exponential weights."""
    if config.engine != "dijkstra":
        raise ValueError(f"config.engine is {config.engine!r}, expected 'dijkstra'")
    if impl == "grid":
        return _run_dijkstra_grid(config, stream, retain_trace)
    if impl == "reference":
        return _run_dijkstra_reference(config, stream, retain_trace)
    raise ValueError(f"unknown impl {impl!r}")


def run_strip(config: SimConfig, stream: RngStream, retain_trace: bool = False) -> HitResult:
    """Run the configured engine restricted to the stadium strip region."""
    if config.strip_alpha is None:
        raise ValueError("run_strip requires strip_alpha to be set")
    config.strip_region()  # validates half_width >= 1
    return run(config, stream, retain_trace=retain_trace)


def run(config: SimConfig, stream: RngStream, retain_trace: bool = False) -> HitResult:
    """Dispatch on ``config.engine`` (strip restriction applies if configured)."""
    if config.engine == "eden":
        return run_eden(config, stream, retain_trace)
    if config.engine == "dijkstra":
        return run_dijkstra(config, stream, retain_trace)
    return run_richardson(config, stream, retain_trace)


# ---------------------------------------------------------------------------
# deterministic replicate farming
# ---------------------------------------------------------------------------

def extract_hit_scalars(result: HitResult) -> tuple:
    """Default per-replicate extraction: (T, M, mu_M, sigma_sq_M)."""
    return (result.passage_time, float(result.hit_index),
            result.mu_final, result.sigma_sq_final)


def _replicate_worker(task) -> tuple:
    config, stream_id, extract, retain = task
    stream = derive_stream(config.master_seed, stream_id)
    return extract(run(config, stream, retain_trace=retain))


def farm_replicates(config: SimConfig,
                    extract: Callable[[HitResult], tuple] = extract_hit_scalars,
                    workers: int = 1,
                    band: int = REPLICATE_BAND,
                    retain_trace: bool = False,
                    progress: Optional[Callable[[int], None]] = None) -> np.ndarray:
    """Run ``config.replicates`` independent replicates and stack the
    extracted per-replicate tuples into a float array (replicate-major).

    Replicate r draws from stream ``band + r``.  Results are aggregated in
    replicate order, so the output is byte-identical for any worker count.
    """
    tasks = [(config, band + r, extract, retain_trace)
             for r in range(config.replicates)]
    rows = []
    if workers <= 1:
        for i, task in enumerate(tasks):
            rows.append(_replicate_worker(task))
            if progress is not None:
                progress(i + 1)
    else:
        ctx = multiprocessing.get_context("fork")
        chunk = max(1, len(tasks) // (workers * 8))
        with ctx.Pool(workers) as pool:
            for i, row in enumerate(pool.imap(_replicate_worker, tasks, chunksize=chunk)):
                rows.append(row)
                if progress is not None:
                    progress(i + 1)
    return np.asarray(rows, np.float64)
