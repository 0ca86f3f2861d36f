"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy import integrate


def brute_semigroup(primes, x_max):
    """Sorted list of (value, multiplicity) for all prime multisets with product <= x_max.

    Exponent vectors are enumerated directly; products of the float primes are
    formed in order of the exponent vector, so it shares no code path with the
    heap enumeration.
    """
    primes = list(primes)
    bounds = [math.floor(math.log(x_max) / math.log(p) + 1e-9) for p in primes]
    counts = {}
    for exps in itertools.product(*(range(b + 1) for b in bounds)):
        logv = sum(e * math.log(p) for e, p in zip(exps, primes))
        if logv > math.log(x_max) + 1e-12:
            continue
        v = math.prod(p**e for p, e in zip(primes, exps))
        key = round(v, 9)
        counts[key] = counts.get(key, 0) + 1
    return sorted(counts.items())


def brute_N(primes, x_max, xs):
    table = brute_semigroup(primes, x_max)
    vals = np.array([v for v, _ in table])
    cum = np.cumsum([c for _, c in table])
    idx = np.searchsorted(vals, np.asarray(xs) * (1 + 1e-12), side="right")
    return np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0)


def partitions_dp(n_max):
    """p(0..n_max) by the coin-change table over part sizes 1..n_max."""
    p = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for total in range(part, n_max + 1):
            p[total] += p[total - part]
    return p


def li_pv(x):
    """Principal value of int_0^x dt/log t by subtracting the pole at t = 1.

    1/log t - 1/(t - 1) is smooth at t = 1 (limit 1/2) and the principal value
    of int_0^x dt/(t - 1) is log(x - 1).
    """

    def f(t):
        if t == 0.0:
            return 1.0
        if abs(t - 1.0) < 1e-6:
            d = t - 1.0
            return 0.5 - d / 12 + d * d / 24
        return 1.0 / math.log(t) - 1.0 / (t - 1.0)

    pts = [0.0, 0.5, 1.0, 2.0]
    while pts[-1] < x:
        pts.append(min(pts[-1] * 4, x))
    pts = [p for p in pts if p <= x]
    if pts[-1] != x:
        pts.append(x)
    total = 0.0
    for a, b in itertools.pairwise(pts):
        v, _ = integrate.quad(f, a, b, epsabs=1e-15, epsrel=1e-13, limit=200)
        total += v
    return total + math.log(x - 1.0)


def riemann_pi_exact(primes, x):
    """Sum over prime powers p^j <= x of 1/j as a Fraction (integer exponents only)."""
    total = Fraction(0)
    for p in primes:
        j, v = 1, p
        while v <= x:
            total += Fraction(1, j)
            j += 1
            v *= p
    return total


def g1_alpha2(s, n=0, dps=30):
    """n-th derivative of G1 for the alpha = 2 example, by mpmath.

    In u coordinates d(Pi - T1) = (1 - e^u cos u^2)/u du, so
    G1^(n)(s) = int_0^oo (-v)^n e^{-(s-1)v} (e^{-v} - cos v^2)/v dv.  The
    oscillatory part is split into e^{+-iv^2} and integrated along the rays
    c + r e^{+-i pi/4}, with c past the stationary point of the phase.
    """
    import mpmath as mp

    with mp.workdps(dps):
        s = mp.mpc(s)
        w = s - 1
        t = abs(mp.im(s))

        def h(v):
            if v == 0:
                return -1 if n == 0 else 0
            return mp.exp(-w * v) * (mp.exp(-v) - mp.cos(v**2)) / v * (-v) ** n

        c = max(mp.mpf(1), t / 2 + 1)
        head = mp.quad(h, mp.linspace(0, c, int(4 * c * c) + 4))
        smooth = mp.quad(lambda v: mp.exp(-w * v) * mp.exp(-v) / v * (-v) ** n, [c, mp.inf])
        rays = 0
        for sign in (1, -1):
            e = mp.exp(sign * 1j * mp.pi / 4)
            rays += mp.quad(lambda r: mp.exp(-w * (c + r * e)) * mp.exp(sign * 1j * (c + r * e) ** 2)
                            / (c + r * e) * (-(c + r * e)) ** n * e, [0, mp.inf])
        return complex(head + smooth - rays / 2)
