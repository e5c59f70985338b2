"""Packed bit-vector helpers.

Layout: vertex ``j`` lives in word ``j // 64`` at bit ``j % 64`` (LSB first).
Bits past ``n`` in the last word are always zero.
"""

import numpy as np

WORD = 64


def n_words(n):
    return (n + WORD - 1) // WORD


def tail_mask(n):
    """Mask for the last word of an ``n``-bit vector."""
    r = n % WORD
    return np.uint64(0xFFFFFFFFFFFFFFFF) if r == 0 else np.uint64((1 << r) - 1)


def pack(flags):
    """Pack a boolean array along its last axis into uint64 words."""
    flags = np.asarray(flags, dtype=bool)
    n = flags.shape[-1]
    w = n_words(n)
    by = np.packbits(flags, axis=-1, bitorder="little")
    out = np.zeros(flags.shape[:-1] + (w * 8,), dtype=np.uint8)
    out[..., : by.shape[-1]] = by
    return out.view("<u8").astype(np.uint64, copy=False)


def unpack(words, n):
    """Inverse of :func:`pack`."""
    by = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(by, axis=-1, count=n, bitorder="little").view(bool)


def from_indices(n, idx):
    flags = np.zeros(n, dtype=bool)
    idx = np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise IndexError(f"vertex id out of range for n={n}")
    flags[idx] = True
    return pack(flags)


def indices(words, n):
    return np.flatnonzero(unpack(words, n))


def popcount(words):
    """Total number of set bits along the last axis."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def complement(words, n):
    out = ~np.asarray(words, dtype=np.uint64)
    if out.shape[-1]:
        out[..., -1] &= tail_mask(n)
    return out
