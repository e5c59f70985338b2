"""Counter-addressable SplitMix64 streams.

Every random word used anywhere in the package comes from here.  A stream is
identified by a ``Seed(master, stream)`` pair; word ``k`` of a stream is the
``k``-th output of SplitMix64 started from a state derived from the pair, so any
slice of a stream can be produced independently (and vectorised) without
running the generator sequentially.  This is what makes graph generation
independent of chunking and worker count.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter

ALGORITHM = "splitmix64-ctr/v1"

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

# purpose tags, xor-ed into the stream key
PURPOSE_GRAPH = 0
PURPOSE_COLORING = 0x636F6C6F72696E67  # b"coloring"

_GAMMA = np.uint64(GAMMA)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)
_S30, _S27, _S31 = np.uint64(30), np.uint64(27), np.uint64(31)


def mix64(z):
    """SplitMix64 finaliser on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z):
    # uint64 arithmetic wraps modulo 2**64, which is exactly what we want
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@dataclass(frozen=True)
class Seed:
    master: int
    stream: int = 0

    def __post_init__(self):
        for name in ("master", "stream"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) <= MASK64:
                raise InvalidParameter(f"Seed.{name} must be an unsigned 64-bit integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def key(self, purpose=PURPOSE_GRAPH):
        """Initial SplitMix64 state for this (master, stream, purpose)."""
        k = (mix64(self.master) + GAMMA * (self.stream + 1)) & MASK64
        return mix64(k ^ purpose)


def words(seed, start, count, purpose=PURPOSE_GRAPH):
    """Words ``start .. start+count-1`` of the stream as a uint64 array."""
    if start < 0 or count < 0:
        raise InvalidParameter("start and count must be non-negative")
    key = np.uint64(seed.key(purpose))
    ctr = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return _mix64_array(key + ctr * _GAMMA)


def word_at(seed, index, purpose=PURPOSE_GRAPH):
    """Single word of the stream, computed with Python ints."""
    return mix64(seed.key(purpose) + GAMMA * (index + 1))
