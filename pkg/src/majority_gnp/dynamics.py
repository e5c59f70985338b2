"""Synchronous majority dynamics and the bad-set / universal-reduction tools."""

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from . import bits, rng
from .errors import BudgetExceeded, InvalidParameter
from .graph import red_neighbor_counts

RED = "red"
BLUE = "blue"

UNANIMOUS = "unanimous"
CYCLE = "cycle-detected"
DAY_CAP = "day-cap"

DEFAULT_MAX_DAYS = 64
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True, eq=False)
class Coloring:
    """Two-colouring of ``n`` vertices; bit set means Red."""

    n: int
    red: np.ndarray

    def __post_init__(self):
        red = np.ascontiguousarray(self.red, dtype=np.uint64)
        if red.shape != (bits.n_words(self.n),):
            raise InvalidParameter(f"red bit-vector must have {bits.n_words(self.n)} words for n={self.n}")
        if red.size and red[-1] & ~bits.tail_mask(self.n):
            raise InvalidParameter("bits beyond n must be clear")
        red.flags.writeable = False
        object.__setattr__(self, "red", red)

    @classmethod
    def from_flags(cls, flags):
        flags = np.asarray(flags, dtype=bool)
        return cls(flags.size, bits.pack(flags))

    @classmethod
    def from_red(cls, n, red_vertices):
        return cls(n, bits.from_indices(n, red_vertices))

    @classmethod
    def first_red(cls, n, k):
        """Vertices ``0 .. k-1`` Red, the rest Blue."""
        if not 0 <= k <= n:
            raise InvalidParameter(f"red count {k} outside [0, {n}]")
        return cls.from_flags(np.arange(n) < k)

    @classmethod
    def all_red(cls, n):
        return cls.first_red(n, n)

    @classmethod
    def all_blue(cls, n):
        return cls.first_red(n, 0)

    @classmethod
    def iid_uniform(cls, n, seed):
        """Each vertex Red independently with probability 1/2."""
        w = rng.words(seed, 0, bits.n_words(n), purpose=rng.PURPOSE_COLORING)
        w[-1] &= bits.tail_mask(n)
        return cls(n, w)

    @cached_property
    def flags(self):
        f = bits.unpack(self.red, self.n)
        f.flags.writeable = False
        return f

    @property
    def blue(self):
        return bits.complement(self.red, self.n)

    @cached_property
    def red_count(self):
        return int(bits.popcount(self.red))

    @property
    def blue_count(self):
        return self.n - self.red_count

    def is_red(self, v):
        return bool(self.flags[v])

    def swapped(self):
        return Coloring(self.n, self.blue)

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.red, other.red)

    def __hash__(self):
        return hash((self.n, self.red.tobytes()))


@dataclass(frozen=True)
class Trajectory:
    blue_sizes: tuple
    winner: str | None
    last_day: int | None
    termination: str
    # 1 or 2 when the run stopped on a repeated state
    period: int | None = None

    @property
    def n_days(self):
        return len(self.blue_sizes) - 1

    def blue_at(self, t):
        """|B_t|, extrapolated past the end of the run when the tail is known.

        Unanimous states are fixed points and a detected cycle repeats, so
        only a day-capped run has an unknown future (``None``).
        """
        end = self.n_days
        if t <= end:
            return self.blue_sizes[t]
        if self.termination == UNANIMOUS or self.period == 1:
            return self.blue_sizes[-1]
        if self.period == 2:
            return self.blue_sizes[-1] if (t - end) % 2 == 0 else self.blue_sizes[-2]
        return None


def _check_lengths(g, c):
    if c.n != g.n:
        raise InvalidParameter(f"coloring has {c.n} vertices, graph has {g.n}")


def majority_step(g, c):
    """One synchronous day: ``v`` is Red next iff red - blue + I(v) > 0.

    The self-indicator term ``I(v)`` implements the tie rule (a tied vertex
    keeps its colour).
    """
    _check_lengths(g, c)
    red_nbrs = red_neighbor_counts(g, c.red)
    margin = 2 * red_nbrs - g.degrees + c.flags
    return Coloring(g.n, bits.pack(margin > 0))


def run(g, c0, max_days=DEFAULT_MAX_DAYS):
    if max_days < 1:
        raise InvalidParameter("max_days must be at least 1")
    _check_lengths(g, c0)
    n = g.n
    sizes = [c0.blue_count]
    if sizes[0] == 0:
        return Trajectory(tuple(sizes), RED, 0, UNANIMOUS)
    if sizes[0] == n:
        return Trajectory(tuple(sizes), BLUE, 0, UNANIMOUS)

    before, prev = None, c0
    for t in range(1, max_days + 1):
        cur = majority_step(g, prev)
        sizes.append(cur.blue_count)
        if sizes[-1] == 0:
            return Trajectory(tuple(sizes), RED, t, UNANIMOUS)
        if sizes[-1] == n:
            return Trajectory(tuple(sizes), BLUE, t, UNANIMOUS)
        if cur == prev:
            return Trajectory(tuple(sizes), None, None, CYCLE, period=1)
        if before is not None and cur == before:
            return Trajectory(tuple(sizes), None, None, CYCLE, period=2)
        before, prev = prev, cur
    return Trajectory(tuple(sizes), None, None, DAY_CAP)


def _subset(n, S):
    if isinstance(S, np.ndarray) and S.dtype == np.uint64:
        return S
    return bits.from_indices(n, list(S))


def dif_sum(g, c, S):
    """Sum over ``v`` in ``S`` of (Red neighbours - Blue neighbours).

    Evaluated through the edge decomposition rather than per vertex: twice the
    edges inside S∩R, minus twice the edges inside S∩B, plus edges from S to
    R∖S, minus edges from S to B∖S.
    """
    _check_lengths(g, c)
    s = _subset(g.n, S)
    red, blue = c.red, c.blue
    s_red, s_blue = s & red, s & blue
    red_out, blue_out = red & ~s, blue & ~s

    rows = g.rows
    sr_idx = bits.indices(s_red, g.n)
    sb_idx = bits.indices(s_blue, g.n)
    s_idx = bits.indices(s, g.n)
    inside_red = int(bits.popcount(rows[sr_idx] & s_red).sum())  # 2 * e(S∩R)
    inside_blue = int(bits.popcount(rows[sb_idx] & s_blue).sum())  # 2 * e(S∩B)
    to_red = int(bits.popcount(rows[s_idx] & red_out).sum())
    to_blue = int(bits.popcount(rows[s_idx] & blue_out).sum())
    return inside_red - inside_blue + to_red - to_blue


def is_bad_set(g, c, S):
    """True iff every vertex of ``S`` is Blue after one step from ``c``."""
    s = _subset(g.n, S)
    nxt = majority_step(g, c)
    return not (s & nxt.red).any()


def _colex_masks(n, k):
    """All ``k``-subsets of ``range(n)`` as int bitmasks, in colex order."""
    if k == 0:
        yield 0
        return
    if k > n:
        return
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        # Gosper's hack: next integer with the same popcount
        low = x & -x
        ripple = x + low
        x = (((ripple ^ x) >> 2) // low) | ripple


def _next_blue_counts(g, blue_masks):
    """Next-day Blue counts for a batch of Blue sets given as int masks."""
    n, w = g.n, bits.n_words(g.n)
    blue = np.frombuffer(
        b"".join(m.to_bytes(8 * w, "little") for m in blue_masks), dtype="<u8"
    ).reshape(-1, w).astype(np.uint64)
    red = bits.complement(blue, n)
    red_nbrs = bits.popcount(g.rows[None, :, :] & red[:, None, :])
    red_self = bits.unpack(red, n)
    margin = 2 * red_nbrs - g.degrees[None, :] + red_self
    return n - (margin > 0).sum(axis=1)


def check_universal_reduction(g, m1, m2, budget=DEFAULT_BUDGET, batch=2048):
    """Exhaustively decide whether ``g`` universally reduces ``m1`` to ``m2``.

    Every Blue set of size ``0 .. m1`` is tried (colex order within each
    size) and the check stops at the first colouring whose next-day Blue set
    exceeds ``m2``.
    """
    if not (m1 >= m2 >= 0):
        raise InvalidParameter(f"need m1 >= m2 >= 0, got m1={m1}, m2={m2}")
    n = g.n
    top = min(m1, n)
    total = sum(comb(n, k) for k in range(top + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} colourings to check exceeds budget {budget}")

    pending = []
    for k in range(top + 1):
        for mask in _colex_masks(n, k):
            pending.append(mask)
            if len(pending) == batch:
                if (_next_blue_counts(g, pending) > m2).any():
                    return False
                pending = []
    if pending and (_next_blue_counts(g, pending) > m2).any():
        return False
    return True
