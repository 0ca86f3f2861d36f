"""Segmented sieve of Eratosthenes."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, SizeError

SEGMENT = 2**20
MAX_PRIMES = 6 * 10**7
MAX_LIMIT = 10**10


def small_primes(n):
    """Primes <= n with a plain (unsegmented) sieve; meant for n up to ~1e7."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def segments(limit, segment=SEGMENT):
    """Yield arrays of the primes <= limit, one segment of ``segment`` integers at a time."""
    if limit > MAX_LIMIT:
        raise SizeError(f"sieve limit {limit:g} exceeds the guard {MAX_LIMIT:g}")
    limit = int(limit)
    base = small_primes(math.isqrt(limit) + 1)
    for lo in range(0, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        flags = np.ones(hi - lo, dtype=bool)
        if lo < 2:
            flags[: 2 - lo] = False
        for p in base.tolist():
            pp = p * p
            if pp >= hi:
                break
            start = max(pp, -(-lo // p) * p)
            flags[start - lo :: p] = False
        yield np.flatnonzero(flags).astype(np.int64) + lo


def primes_upto(limit, segment=SEGMENT, max_primes=MAX_PRIMES):
    """All primes <= limit as an int64 array (memory guarded)."""
    if limit < 0:
        raise DomainError("limit must be non-negative")
    if limit >= 17 and 1.25506 * limit / math.log(limit) > max_primes:
        raise SizeError(f"about {1.25506 * limit / math.log(limit):.3g} primes below {limit:g}; "
                        f"guard is {max_primes}")
    if limit <= segment:
        return small_primes(int(limit))
    return np.concatenate(list(segments(limit, segment)))


def primes_at_indices(limit, indices, segment=SEGMENT):
    """The primes p_i (1-based) for the requested indices, streaming the sieve to ``limit``.

    Indices whose prime exceeds ``limit`` are omitted.  Returns ``(values, count)``
    where ``count`` is pi(limit).
    """
    want = sorted({int(i) for i in indices})
    out, seen, k = [], 0, 0
    for seg in segments(limit, segment):
        while k < len(want) and want[k] <= seen + seg.size:
            out.append(int(seg[want[k] - seen - 1]))
            k += 1
        seen += seg.size
    return np.array(out, dtype=np.int64), seen
