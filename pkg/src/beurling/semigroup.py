"""Generalized primes and the multiplicative semigroup they generate."""

from __future__ import annotations

import heapq
import math

import numpy as np

from .errors import DomainError, ParameterError, RangeError, SizeError
from .measures import TIE_RTOL, HalfLineMeasure, merge_ties

MAX_ATOMS = 10**8

# Rosser-Schoenfeld: pi(x) < 1.25506 x / log x for x > 1
_ROSSER_C = 1.25506


class PrimeSequence:
    """Non-decreasing sequence of reals > 1, materialized up to ``bound``.

    Parameters
    ----------
    values : array_like
        The materialized primes (repetitions allowed).
    bound : float
        Every prime of the full sequence that is ``<= bound`` is in ``values``.
        ``inf`` marks a finite sequence.
    kind : str
        Family descriptor used for tail bounds: ``finite``, ``powers``
        (``base**k``), ``rational`` (ordinary primes), ``sparse2k``
        (ordinary primes with index 2**k) or ``custom`` (no tail model).
    params : dict, optional
        Family parameters, e.g. ``{"base": 2}``.
    """

    def __init__(self, values, bound=math.inf, kind="finite", params=None):
        v = np.asarray(values, dtype=float).ravel()
        if v.size and np.min(v) <= 1.0:
            raise DomainError("generalized primes must exceed 1")
        if v.size > 1 and np.any(np.diff(v) < 0):
            v = np.sort(v)
        v.setflags(write=False)
        self.values = v
        self.bound = float(bound)
        self.kind = kind
        self.params = dict(params or {})

    def __repr__(self):
        return f"PrimeSequence(kind={self.kind!r}, count={self.values.size}, bound={self.bound:g})"

    def __len__(self):
        return self.values.size

    @property
    def p1(self):
        if not self.values.size:
            raise RangeError("empty prime sequence")
        return float(self.values[0])

    @property
    def is_finite(self):
        return math.isinf(self.bound)

    def upto(self, x):
        """Primes ``<= x``; raises :class:`RangeError` beyond the materialized bound."""
        if x > self.bound * (1 + 1e-12):
            raise RangeError(f"primes requested to {x:g}, materialized only to {self.bound:g}")
        return self.values[: np.searchsorted(self.values, x, side="right")]

    def count(self, x):
        """pi(x): number of primes ``<= x`` (vectorized)."""
        xa = np.asarray(x, dtype=float)
        if np.any(xa > self.bound * (1 + 1e-12)):
            raise RangeError(f"pi requested beyond materialized bound {self.bound:g}")
        out = np.searchsorted(self.values, xa, side="right").astype(float)
        return float(out) if out.ndim == 0 else out

    def unmaterialized_sum_bound(self, sigma):
        """Bound for the sum of ``p**-sigma`` over primes above ``bound``."""
        if self.is_finite:
            return 0.0
        if not sigma > 1:
            return math.inf
        X = self.bound
        if self.kind == "powers":
            b = self.params.get("base", 2.0)
            k = math.floor(math.log(X) / math.log(b) + 1e-12) + 1
            return b ** (-k * sigma) / (1 - b ** (-sigma))
        if self.kind == "rational":
            # partial summation against pi(x) < C x / log x
            return _ROSSER_C * sigma * X ** (1 - sigma) / ((sigma - 1) * math.log(X))
        if self.kind == "sparse2k":
            # p_n > n log n, so p_{2^k} > 2^k k log 2 for the unmaterialized k >= K
            K = max(self.values.size, 1)
            first = (2.0**K * K * math.log(2)) ** (-sigma)
            return first / (1 - 2.0 ** (-sigma))
        return math.inf

    def tail_sum_bound(self, sigma, X):
        """Bound for the sum of ``p**-sigma`` over all primes ``p > X``."""
        above = self.values[self.values > X]
        return float(np.sum(above ** (-sigma))) + self.unmaterialized_sum_bound(sigma)


def load_primes_csv(path, bound=math.inf):
    """Read one real per line; ``#`` starts a comment.  Returns a finite sequence."""
    vals = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                vals.append(float(line.split(",")[0]))
    return PrimeSequence(vals, bound=bound)


def enumerate_integers(primes, x_max, max_atoms=MAX_ATOMS):
    """dN for the semigroup generated by ``primes`` on [1, x_max].

    Each distinct product value becomes an atom whose mass is the number of
    prime multisets producing it.  Products are generated in increasing order
    from a min-heap whose entries ``(v, j, w)`` satisfy ``v = w * p[j]`` with
    ``p[j]`` the largest prime used; popping ``v`` pushes its child
    ``v * p[j]`` and its sibling ``w * p[j+1]``.  Every multiset therefore
    enters the heap exactly once and the heap stays small.

    Raises
    ------
    DomainError
        ``x_max < 1``.
    SizeError
        More than ``max_atoms`` products below ``x_max``.
    """
    if not x_max >= 1:
        raise DomainError("x_max must be >= 1")
    if isinstance(primes, PrimeSequence):
        P = primes.upto(x_max).tolist()
    else:
        P = sorted(float(p) for p in primes if p <= x_max)
        if P and P[0] <= 1:
            raise DomainError("generalized primes must exceed 1")
    out = [1.0]
    n = len(P)
    if n:
        heap = [(P[0], 0, 1.0)]
        pop, push = heapq.heappop, heapq.heappush
        append = out.append
        last = 1.0
        while heap:
            v, j, w = pop(heap)
            if v < last:
                raise AssertionError("heap emitted values out of order")
            last = v
            append(v)
            if len(out) > max_atoms:
                raise SizeError(f"more than {max_atoms} generalized integers below {x_max:g}")
            c = v * P[j]
            if c <= x_max:
                push(heap, (c, j, v))
            if j + 1 < n:
                c = w * P[j + 1]
                if c <= x_max:
                    push(heap, (c, j + 1, w))
    x, m = merge_ties(np.array(out), np.ones(len(out)))
    return HalfLineMeasure._trusted(x, m, x_max=x_max, meta={"method": "heap", "generators": n,
                                                                 "tie_rtol": TIE_RTOL})


def _check_range(measure, x):
    top = np.max(np.asarray(x, dtype=float))
    if top > measure.x_max * (1 + 1e-12):
        raise RangeError(f"x={top:g} beyond materialized range {measure.x_max:g}")


def count_N(system, x):
    """N(x) for a built system; raises :class:`RangeError` outside the stored range."""
    _check_range(system.dN, x)
    return system.dN.cumulative(x)


def count_pi(system, x):
    """pi(x) over the system's prime list."""
    if system.primes is None:
        raise ParameterError(f"system {system.label!r} has no discrete prime list")
    return system.primes.count(x)
