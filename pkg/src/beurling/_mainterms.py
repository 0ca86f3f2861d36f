"""Laplace-type integrals of the two main terms against (-u)^n e^{-su}.

In u = log x the main terms are ``dM = e^u du`` (``M(x) = x``) and
``dM = (e^u - 1)/u du`` (``M = T1 = li - gamma - log log``).
"""

from __future__ import annotations

import cmath
import math

from scipy import special

from ._quad import power_exp_integral, power_log_tail
from .logint import EULER_GAMMA, T1

MAINS = ("linear", "li")


def exp_poly_head(w, n, L):
    """int_0^L (-u)^n e^{-w u} du; closed form when |w| L is not small."""
    w = complex(w)
    if L <= 0:
        return 0j
    if abs(w) * L >= 1.0:
        return power_log_tail(w, n, 0.0) - power_log_tail(w, n, L)
    return power_exp_integral(w, n, L)


def _ein(z):
    # entire function int_0^z (1 - e^{-t})/t dt
    z = complex(z)
    if abs(z) <= 1.0:
        total, term, k = 0j, 1 + 0j, 0
        while True:
            k += 1
            term *= -z / k
            inc = -term / k
            total += inc
            if abs(inc) < 1e-17 * max(abs(total), 1e-300) or k > 60:
                return total
    return complex(special.exp1(z)) + cmath.log(z) + EULER_GAMMA


def main_value(main, x):
    return x if main == "linear" else T1(x)


def main_head(main, s, n, L):
    """int_0^L (-u)^n e^{-s u} dM(u)."""
    s = complex(s)
    w = s - 1
    if main == "linear":
        return exp_poly_head(w, n, L)
    if n == 0:
        # Log(1+w) + gamma + log L - Ein(wL) + E1((w+1)L), smooth through w = 0
        return (cmath.log(1 + w) + EULER_GAMMA + math.log(L) - _ein(w * L)
                + complex(special.exp1(s * L)))
    return -(exp_poly_head(w, n - 1, L) - exp_poly_head(s, n - 1, L))


def main_tail(main, s, n, L):
    """int_L^oo (-u)^n e^{-s u} dM(u) for Re s > 1."""
    s = complex(s)
    w = s - 1
    if main == "linear":
        return power_log_tail(w, n, L)
    if n == 0:
        return complex(special.exp1(w * L)) - complex(special.exp1(s * L))
    return -(power_log_tail(w, n - 1, L) - power_log_tail(s, n - 1, L))


def main_full(main, s, n):
    """int_0^oo (-u)^n e^{-s u} dM(u) for Re s > 1."""
    s = complex(s)
    w = s - 1
    if main == "linear":
        return (-1) ** n * math.factorial(n) / w ** (n + 1)
    if n == 0:
        return cmath.log(s / w)
    return -(power_log_tail(w, n - 1, 0.0) - power_log_tail(s, n - 1, 0.0))
