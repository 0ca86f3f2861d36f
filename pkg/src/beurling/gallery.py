"""Named example systems and their closed-form comparators.

Available names: ``ordinary``, ``powers2``, ``sparse2k`` and
``continuous-alpha:<alpha>``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from ._quad import panel_quadrature, power_log_tail
from .errors import DomainError, ParameterError, SizeError
from .logint import T1
from .measures import (
    DEFAULT_BINS,
    GeneralizedNumberSystem,
    TailModel,
    binned_density_measure,
    exp_star,
)
from .primedist import riemann_pi_measure
from .semigroup import MAX_ATOMS, PrimeSequence, enumerate_integers
from .sieve import primes_at_indices, primes_upto

DEFAULT_XMAX = {"ordinary": 1e6, "powers2": 2.0**40, "sparse2k": 1e8, "continuous-alpha": 1e6}
HR_A = math.sqrt(math.log(2)) / (2 * math.pi * math.sqrt(2))


# ----------------------------------------------------------- partitions
def partition_numbers(n_max):
    """Exact p(0), ..., p(n_max) from Euler's pentagonal-number recurrence.

    Python integers never overflow, so no fixed-width mode is offered.

    >>> partition_numbers(10)[-1]
    42
    """
    if n_max < 0:
        raise ParameterError("n_max must be >= 0")
    if n_max > 10**5:
        raise ParameterError("n_max is limited to 1e5")
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            g2 = g1 + k  # k(3k+1)/2
            term = p[n - g1] + (p[n - g2] if g2 <= n else 0)
            total += term if k % 2 else -term
            k += 1
        p[n] = total
    return p


def hardy_ramanujan(n):
    """Leading asymptotic exp(pi sqrt(2n/3)) / (4 n sqrt 3) for p(n)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return math.exp(math.pi * math.sqrt(2 * n / 3)) / (4 * n * math.sqrt(3))


def asymptote_example1(x):
    """Asymptotic A exp(pi sqrt(2 log x / (3 log 2))) / sqrt(log x) of N for p_k = 2^k."""
    if x < 2:
        raise DomainError("x must be >= 2")
    L = math.log(x)
    return HR_A * math.exp(math.pi * math.sqrt(2 * L / (3 * math.log(2)))) / math.sqrt(L)


# ------------------------------------------------------------- systems
def comparators_for(name, x_max):
    """Closed-form comparators attached to the gallery system ``name``."""
    base = name.partition(":")[0]
    if base == "ordinary":
        return {"N": np.floor}
    if base == "powers2":
        M = math.floor(math.log2(x_max) + 1e-12)
        sums = _partition_prefix(M)
        return {
            "pi": lambda x: np.floor(np.log2(np.maximum(x, 1.0)) + 1e-12),
            "N_at_powers": {2.0**m: float(v) for m, v in enumerate(sums)},
            "asymptote": asymptote_example1,
        }
    if base == "sparse2k":
        return {"pi": lambda x: np.log2(x) - np.log2(np.log(x))}
    return {}


def _fitted_pi_tail(dPi, primes, X):
    xs = np.geomspace(max(X / 100, 3.0), X, 200)
    E = np.abs(dPi.cumulative(xs) - T1(xs))
    C = float(np.max(E * np.log(xs) ** 2 / xs)) * 1.5
    return TailModel(C=C, gamma=2.0, power=1.0, main="li", density=1.0,
                     note="fitted on the top two decades of the stored range")


def system_ordinary(x_max=DEFAULT_XMAX["ordinary"], with_pi_tail=True):
    """Rational primes; N(x) = floor(x) is attached as comparator."""
    x_max = float(x_max)
    P = primes_upto(int(x_max))
    primes = PrimeSequence(P.astype(float), bound=x_max, kind="rational")
    dN = enumerate_integers(primes, x_max)
    dPi = riemann_pi_measure(primes, x_max)
    n_tail = TailModel(C=1.0, gamma=0.0, power=0.0, density=1.0, note="|floor(x) - x| < 1")
    pi_tail = _fitted_pi_tail(dPi, primes, x_max) if with_pi_tail and x_max >= 1e3 else None
    return GeneralizedNumberSystem(
        dN, dPi, primes, density_a=1.0, label="ordinary", n_tail=n_tail, pi_tail=pi_tail,
        pi_main="li", comparators=comparators_for("ordinary", x_max),
        meta={"scan_window": (2.0, 200.0), "x_max": x_max, "gallery": "ordinary"})


def _partition_prefix(m):
    p = partition_numbers(m)
    out, acc = [], 0
    for v in p:
        acc += v
        out.append(acc)
    return out


def system_powers_of_two(x_max=DEFAULT_XMAX["powers2"], max_atoms=MAX_ATOMS):
    """Primes p_k = 2^k; N(2^m) is the partition sum p(0) + ... + p(m)."""
    x_max = float(x_max)
    M = math.floor(math.log2(x_max) + 1e-12)
    if M > 10**5 or _partition_prefix(min(M, 2000))[-1] > max_atoms:
        raise SizeError(f"powers2 to {x_max:g} has more than {max_atoms} prime multisets")
    primes = PrimeSequence([2.0**k for k in range(1, M + 1)], bound=x_max, kind="powers",
                           params={"base": 2.0})
    dN = enumerate_integers(primes, x_max, max_atoms=max_atoms)
    dPi = riemann_pi_measure(primes, x_max)
    from .zeta import envelope_tail

    return GeneralizedNumberSystem(
        dN, dPi, primes, density_a=None, label="powers2", n_tail=envelope_tail(dN),
        comparators=comparators_for("powers2", x_max),
        meta={"scan_window": (1.0, 50.0), "x_max": x_max, "gallery": "powers2"})


def system_sparse_rational_primes(x_max=DEFAULT_XMAX["sparse2k"]):
    """The ordinary primes with index 1, 2, 4, 8, ...; each integer atom has mass 1."""
    x_max = float(x_max)
    if x_max > 1e9:
        raise SizeError("sparse2k is limited to x_max <= 1e9")
    vals, _ = primes_at_indices(int(x_max), [2**k for k in range(64)])
    primes = PrimeSequence(vals.astype(float), bound=x_max, kind="sparse2k")
    dN = enumerate_integers(primes, x_max)
    dPi = riemann_pi_measure(primes, x_max)
    from .zeta import envelope_tail

    return GeneralizedNumberSystem(
        dN, dPi, primes, density_a=None, label="sparse2k", n_tail=envelope_tail(dN),
        comparators=comparators_for("sparse2k", x_max),
        meta={"scan_window": (1.0, 50.0), "x_max": x_max, "gallery": "sparse2k"})


def alpha_density_u(alpha):
    """Density of Pi_alpha in u = log x: e^u (1 - cos u^alpha) / u, with value 0 at u = 0."""

    def f(u):
        u = np.asarray(u, dtype=float)
        safe = np.where(u > 0, u, 1.0)
        # 1 - cos v = 2 sin^2(v/2) avoids cancellation for small u
        return np.where(u > 0, np.exp(u) * 2 * np.sin(safe**alpha / 2) ** 2 / safe, 0.0)

    return f


def alpha_pi_tail(alpha):
    """Exact tail ``int_V^oo (-u)^n e^{-su} d(Pi_alpha - T1)(u)`` as a callable.

    In u coordinates ``d(Pi_alpha - T1) = (1 - e^u cos u^alpha)/u du``.  The
    ``cos`` part is split into ``e^{+-i u^alpha}`` and each is integrated along a
    ray leaving the real axis at angle ``+-pi/(2 alpha)``, past any stationary
    point of the phase, where the integrand decays exponentially.
    """
    theta = math.pi / (2 * alpha)

    def ray(s, n, c, sign):
        d = complex(math.cos(theta), sign * math.sin(theta))
        w = s - 1

        def g(r):
            z = c + r * d
            return (-z) ** n * np.exp(-w * z + sign * 1j * z**alpha) / z * d

        val, err = integrate.quad(g, 0, np.inf, complex_func=True, limit=400, epsabs=1e-13, epsrel=1e-12)
        return val, err

    def exact(s, n, X):
        s = complex(s)
        V = math.log(X)
        w = s - 1
        p1 = complex(special.exp1(s * V)) if n == 0 else -power_log_tail(s, n - 1, V)
        t = s.imag
        saddle = (abs(t) / alpha) ** (1 / (alpha - 1)) if t else 0.0
        c = max(V, 1.25 * saddle + 1.0)
        total, err = 0j, 0.0
        if c > V:
            cycles = (c**alpha - V**alpha + abs(t) * (c - V)) / (2 * math.pi)
            panels = int(8 * cycles) + 16

            def h(u):
                return (-u) ** n * np.exp(-w * u) * np.cos(u**alpha) / u

            total += panel_quadrature(h, V, c, panels, order=10)
            err += 1e-12 * (1 + abs(total))
        for sign in (1, -1):
            v, e = ray(s, n, c, sign)
            total += 0.5 * v
            err += 0.5 * abs(e)
        return p1 - total, err

    return exact


def system_continuous_alpha(alpha=2.0, x_max=DEFAULT_XMAX["continuous-alpha"], bins=DEFAULT_BINS):
    """Pi_alpha(x) = int_1^x (1 - cos(log^alpha u)) / log u du, binned in u; dN = exp*(dPi)."""
    alpha = float(alpha)
    if not alpha > 1:
        raise DomainError("alpha must exceed 1")
    x_max = float(x_max)
    V = math.log(x_max)
    dPi = binned_density_measure(alpha_density_u(alpha), V, int(bins))
    dN = exp_star(dPi, dPi.x_max)
    pi_tail = TailModel(C=1.0 / alpha, gamma=alpha, power=1.0, main="li", density=1.0,
                        note="exact tail of the explicit density", exact=alpha_pi_tail(alpha))
    probe = GeneralizedNumberSystem(dN, dPi, None, label=f"continuous-alpha:{alpha:g}",
                                    pi_tail=pi_tail, pi_main="li")
    from .zeta import g1_function

    g1 = g1_function(probe, 1.0)
    a = math.exp(g1.value.real)
    a_err = a * math.expm1(g1.error)
    xs = np.geomspace(x_max / 10, dN.x_max, 64)
    C = float(np.max(np.abs(dN.cumulative(xs) - a * xs) * np.log(xs) ** alpha / xs)) * 1.5
    n_tail = TailModel(C=C, gamma=alpha, power=1.0, density=a, note="fitted on the top decade")
    return GeneralizedNumberSystem(
        dN, dPi, None, density_a=a, label=f"continuous-alpha:{alpha:g}", n_tail=n_tail,
        pi_tail=pi_tail, pi_main="li",
        meta={"scan_window": (0.2, 20.0), "alpha": alpha, "x_max": x_max, "bins": int(bins),
              "gallery": f"continuous-alpha:{alpha:g}",
              "density_a_error": a_err})


def pi_alpha_at(alpha, x):
    """Pi_alpha(x) by adaptive quadrature in u (reference for the binned measure)."""
    V = math.log(x)
    f = alpha_density_u(alpha)
    val, _ = integrate.quad(lambda u: float(f(u)), 0, V, limit=500, epsabs=1e-13, epsrel=1e-12)
    return val


# ------------------------------------------------------------- registry
def gallery_names():
    return ["ordinary", "powers2", "sparse2k", "continuous-alpha:<alpha>"]


def build_system(name, x_max=None, bins=None):
    """Build a gallery system by name (``continuous-alpha:2`` etc.)."""
    base, _, arg = name.partition(":")
    x = DEFAULT_XMAX.get(base) if x_max is None else float(x_max)
    if base == "ordinary":
        return system_ordinary(x)
    if base == "powers2":
        return system_powers_of_two(x)
    if base == "sparse2k":
        return system_sparse_rational_primes(x)
    if base == "continuous-alpha":
        alpha = float(arg) if arg else 2.0
        return system_continuous_alpha(alpha, x, DEFAULT_BINS if bins is None else bins)
    raise ParameterError(f"unknown system {name!r}; known: {', '.join(gallery_names())}")


__all__ = [
    "DEFAULT_XMAX",
    "HR_A",
    "alpha_density_u",
    "alpha_pi_tail",
    "asymptote_example1",
    "build_system",
    "comparators_for",
    "gallery_names",
    "hardy_ramanujan",
    "partition_numbers",
    "pi_alpha_at",
    "system_continuous_alpha",
    "system_ordinary",
    "system_powers_of_two",
    "system_sparse_rational_primes",
]
