"""Conversions between the prime count pi and the Riemann prime distribution Pi."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeError
from .measures import TIE_RTOL, HalfLineMeasure, merge_ties
from .semigroup import MAX_ATOMS


def mobius(j):
    """Moebius function by trial division (j is always small here)."""
    if j < 1:
        raise DomainError("mobius needs j >= 1")
    sign, d = 1, 2
    while d * d <= j:
        if j % d == 0:
            j //= d
            if j % d == 0:
                return 0
            sign = -sign
        d += 1
    return -sign if j > 1 else sign


def _root(x, j):
    # j-th root nudged up by the tie tolerance so exact prime powers are not lost
    if j == 1:
        return x
    lx = math.log(x)
    return math.exp(lx / j + TIE_RTOL * max(1.0, abs(lx)) / j)


def _max_order(x, p1):
    lx = math.log(x)
    return math.floor(lx / math.log(p1) + TIE_RTOL * max(1.0, lx))


def riemann_pi_from_pi(primes, x):
    """Pi(x) = sum_j pi(x**(1/j)) / j, stopping once x**(1/j) < p_1.

    >>> from beurling.semigroup import PrimeSequence
    >>> round(riemann_pi_from_pi(PrimeSequence([2.0]), 16), 5)
    2.08333
    """
    if x < 1:
        raise DomainError("x must be >= 1")
    if not len(primes) or x < primes.p1:
        return 0.0
    total = 0.0
    for j in range(1, _max_order(x, primes.p1) + 1):
        total += primes.count(_root(x, j)) / j
    return total


def riemann_pi_measure(primes, x_max, max_atoms=MAX_ATOMS):
    """Atoms ``(p**j, 1/j)`` for every prime power ``p**j <= x_max``."""
    if not len(primes) or x_max < primes.p1:
        return HalfLineMeasure(x_max=x_max)
    P = primes.upto(x_max)
    lx = math.log(x_max)
    tol = TIE_RTOL * max(1.0, lx)
    lp = np.log(P)
    xs, ms = [], []
    total = 0
    for j in range(1, _max_order(x_max, primes.p1) + 1):
        sel = P[j * lp <= lx + tol]
        if not sel.size:
            break
        total += sel.size
        if total > max_atoms:
            raise SizeError(f"more than {max_atoms} prime powers below {x_max:g}")
        xs.append(sel**j)
        ms.append(np.full(sel.size, 1.0 / j))
    x, m = merge_ties(np.concatenate(xs), np.concatenate(ms))
    return HalfLineMeasure._trusted(x, m, x_max=x_max, meta={"method": "prime-powers"})


def pi_from_riemann_pi(PiFn, p1, x):
    """Invert Pi -> pi with the Moebius function: pi(x) = sum_j mu(j)/j Pi(x**(1/j))."""
    if x < p1:
        return 0.0
    total = 0.0
    for j in range(1, _max_order(x, p1) + 1):
        mu = mobius(j)
        if mu:
            total += mu * PiFn(_root(x, j)) / j
    return total


@dataclass
class GapReport:
    """Rows ``x, pi, Pi, gap, bound`` for the inequality 0 <= Pi - pi <= bound."""

    rows: np.ndarray
    worst_slack: float
    violations: list

    @property
    def ok(self):
        return not self.violations

    def to_csv(self):
        buf = io.StringIO()
        buf.write("x,pi,Pi,gap,bound\n")
        for r in self.rows:
            buf.write(",".join(repr(float(v)) for v in r) + "\n")
        return buf.getvalue()


def chebyshev_gap_check(primes, grid, tol=1e-12):
    """Evaluate ``0 <= Pi(x) - pi(x) <= pi(x^1/2) + pi(x^1/3) log x / log p_1`` on a grid.

    Violations are reported, not raised.
    """
    rows, viol = [], []
    slack = math.inf
    for x in np.asarray(grid, dtype=float):
        if not len(primes) or x < primes.p1:
            rows.append((x, 0.0, 0.0, 0.0, 0.0))
            slack = min(slack, 0.0)
            continue
        pi = primes.count(x)
        Pi = riemann_pi_from_pi(primes, x)
        gap = Pi - pi
        bound = primes.count(_root(x, 2)) + primes.count(_root(x, 3)) * math.log(x) / math.log(primes.p1)
        rows.append((x, pi, Pi, gap, bound))
        slack = min(slack, gap, bound - gap)
        if gap < -tol or gap > bound + tol:
            viol.append(float(x))
    return GapReport(np.array(rows, dtype=float).reshape(-1, 5), float(slack), viol)
