"""Deterministic splittable random streams.

Streams are identified by ``(master_seed, stream_id)``.  Equal lineage gives
an identical draw sequence; distinct stream ids give statistically
independent streams without any coordination, via the counter-based Philox
bit generator keyed through ``numpy.random.SeedSequence`` spawn keys.

Uniform draws are strictly inside the open interval (0, 1) so inverse
transforms never see log(0).  Exponential sampling is by inverse transform
(not ziggurat) so a sample costs exactly one uniform and replays bit-for-bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_U64_MAX = 2**64 - 1

# Reserved stream-id bands.  Replicate r of an experiment draws from stream r;
# auxiliary randomness (baseline comparison runs, bootstrap resampling, fuzz
# sequences, CLT resampling, per-engine comparison runs) lives in disjoint
# high bands so it can never collide with replicate streams.
REPLICATE_BAND = 0
BASELINE_BAND = 1 << 60
BOOTSTRAP_BAND = 2 << 60
FUZZ_BAND = 3 << 60
RESAMPLE_BAND = 4 << 60
COMPARE_BANDS = {"eden": 5 << 60, "dijkstra": 6 << 60, "richardson": 7 << 60}


@dataclass
class RngStream:
    """A named, replayable random stream.

    ``generator`` wraps 256-bit Philox state; the lineage fields identify the
    stream so any consumer can re-derive an identical copy.
    """
    master_seed: int
    stream_id: int
    generator: np.random.Generator = field(repr=False)

    def clone(self) -> "RngStream":
        """Fresh stream with the same lineage, rewound to the start."""
        return derive_stream(self.master_seed, self.stream_id)


def derive_stream(master_seed: int, stream_id: int = 0) -> RngStream:
    """Derive the stream with lineage ``(master_seed, stream_id)``.

    Pure function of its arguments: calling it twice yields generators that
    produce identical draw sequences.
    """
    if not (0 <= int(master_seed) <= _U64_MAX):
        raise ValueError(f"master_seed must be an unsigned 64-bit integer, got {master_seed!r}")
    if not (0 <= int(stream_id) <= _U64_MAX):
        raise ValueError(f"stream_id must be an unsigned 64-bit integer, got {stream_id!r}")
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(stream_id),))
    return RngStream(master_seed=int(master_seed), stream_id=int(stream_id),
                     generator=np.random.Generator(np.random.Philox(seq)))


def sample_uniform01(stream: RngStream) -> float:
    """One uniform variate strictly inside (0, 1)."""
    u = stream.generator.random()
    while u == 0.0:
        u = stream.generator.random()
    return u


def sample_exponential(stream: RngStream, mean: float) -> float:
    """One exponential variate with the given positive mean, via -mean*log(u)."""
    if not (mean > 0.0):
        raise ValueError(f"exponential mean must be positive, got {mean!r}")
    return -mean * math.log(sample_uniform01(stream))


def exponential_batch(stream: RngStream, mean: float, size) -> np.ndarray:
    """Vector of exponential variates by the same inverse transform.

    Uses -mean*log1p(-U) with U uniform on [0,1), which is the open-interval
    transform evaluated at 1-U (identical law, no log(0) corner).
    """
    if not (mean > 0.0):
        raise ValueError(f"exponential mean must be positive, got {mean!r}")
    u = stream.generator.random(size)
    return -mean * np.log1p(-u)
