"""Logarithmic integral by its convergent power series in log x."""

from __future__ import annotations

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061


def li_power_part(u):
    """Return sum_{k>=1} u**k / (k k!) for u >= 0 (vectorized).

    This is ``li(e^u) - gamma - log u``; it vanishes at u = 0 and is the main
    term used for Pi on the boundary line.  Summation stops once every term is
    below 1e-16 of its partial sum.
    """
    u = np.asarray(u, dtype=float)
    term = u.copy()  # u^k / k! at k = 1
    total = term.copy()
    k = 1
    while True:
        k += 1
        term = term * u / k
        inc = term / k
        total = total + inc
        if np.all(inc <= 1e-16 * np.abs(total)) and k > np.max(u, initial=0.0):
            break
    return float(total) if total.ndim == 0 else total


def li(x):
    """Principal-value integral of 1/log t over (0, x], for x > 1.

    >>> round(li(2.0), 12)
    1.045163780117
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 1):
        raise DomainError("li is implemented for x > 1 only")
    u = np.log(xa)
    out = EULER_GAMMA + np.log(u) + li_power_part(u)
    return float(out) if np.ndim(out) == 0 else out


LI2 = li(2.0)


def Li(x):
    """Offset logarithmic integral li(x) - li(2); zero for x <= 2 by convention."""
    xa = np.asarray(x, dtype=float)
    safe = np.where(xa > 2.0, xa, 2.0)
    out = np.where(xa > 2.0, li(safe) - LI2, 0.0)
    return float(out) if out.ndim == 0 else out


def T1(x):
    """li(x) - gamma - log log x for x > 1 and 0 at x <= 1 (vectorized)."""
    xa = np.asarray(x, dtype=float)
    u = np.log(np.maximum(xa, 1.0))
    return li_power_part(u)
