"""Counter-based random streams.

Every random object the package draws (one RR set, one cascade) is assigned a
sequence number inside a stream and gets its own SplitMix64 sequence derived
from ``(seed, stream, sequence number)``.  The content of draw ``j`` therefore
does not depend on batch boundaries or on how many threads produced it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_STREAM_SALT = 0xD1B54A32D192ED03


def mix64(z: int) -> int:
    """SplitMix64 finalizer on Python ints."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, stream: int) -> int:
    return mix64(mix64(seed & MASK64) ^ mix64((stream ^ _STREAM_SALT) & MASK64))


@dataclass
class RngStream:
    """A reproducible stream of per-object random sequences.

    ``counter`` is the next unused sequence number; drawing ``c`` objects
    reserves the numbers ``counter .. counter + c - 1``.
    """

    seed: int
    stream: int = 0
    counter: int = field(default=0, compare=False)

    @property
    def key(self) -> int:
        return stream_key(self.seed, self.stream)

    def reserve(self, count: int) -> int:
        start = self.counter
        self.counter += count
        return start

    def spawn(self, index: int) -> "RngStream":
        """Independent child stream, identified by ``index``."""
        return RngStream(self.seed, mix64(self.stream ^ mix64(index + 1)))


def as_stream(rng) -> RngStream:
    if rng is None:
        return RngStream(0)
    if isinstance(rng, RngStream):
        return rng
    return RngStream(int(rng))


class SequenceRng:
    """Pure-Python twin of the kernel generator, used by reference samplers."""

    def __init__(self, key: int, index: int):
        self.state = mix64(key ^ mix64(index))

    def uniform(self) -> float:
        self.state = (self.state + GOLDEN) & MASK64
        return (mix64(self.state) >> 11) * (1.0 / 9007199254740992.0)


# numba twins -------------------------------------------------------------

_U_GOLDEN = np.uint64(GOLDEN)
_U_M1 = np.uint64(_M1)
_U_M2 = np.uint64(_M2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


@numba.njit(inline="always")
def nb_mix64(z):
    z = (z ^ (z >> _S30)) * _U_M1
    z = (z ^ (z >> _S27)) * _U_M2
    return z ^ (z >> _S31)


@numba.njit(inline="always")
def nb_seq_state(key, index):
    return nb_mix64(key ^ nb_mix64(np.uint64(index)))


@numba.njit(inline="always")
def nb_next(state):
    """Advance ``state``; returns (new_state, uniform in [0, 1))."""
    state = state + _U_GOLDEN
    u = np.float64(nb_mix64(state) >> _S11) * (1.0 / 9007199254740992.0)
    return state, u
