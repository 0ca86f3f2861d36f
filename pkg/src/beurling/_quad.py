"""Small Gauss-Legendre helpers used by several modules."""

from functools import cache

import numpy as np


@cache
def gauss_legendre(order):
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def panel_quadrature(f, a, b, panels, order=8):
    """Composite Gauss-Legendre rule of ``f`` over [a, b] with equal panels.

    ``f`` must accept and return numpy arrays.
    """
    edges = np.linspace(a, b, panels + 1)
    x, w = gauss_legendre(order)
    h = np.diff(edges)
    nodes = edges[:-1, None] + h[:, None] * x[None, :]
    vals = f(nodes)
    return np.sum(vals * (h[:, None] * w[None, :]))


def power_exp_integral(w, n, length):
    """Return int_0^length (-u)^n exp(-w u) du for complex ``w``.

    Uses panels fine enough to resolve the oscillation of exp(-i Im(w) u).
    """
    if length <= 0:
        return 0j
    panels = int(max(4, abs(w) * length / 2.0, length)) + 1
    return complex(panel_quadrature(lambda u: (-u) ** n * np.exp(-w * u), 0.0, length, panels, 10))


def power_log_tail(w, n, L):
    """Closed form of int_L^oo (-v)^n exp(-w v) dv for Re w > 0 and integer n >= 0."""
    w = complex(w)
    total = 0j
    # e^{-wL} sum_{k=0}^{n} n!/k! L^k / w^{n-k+1}
    coef = 1.0
    for k in range(n, -1, -1):
        total += coef * L**k / w ** (n - k + 1)
        coef *= k
    return complex((-1) ** n * np.exp(-w * L) * total)
