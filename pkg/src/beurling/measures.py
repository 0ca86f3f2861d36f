"""Measures on [1, oo): atoms plus an optional binned density in u = log x.

A :class:`HalfLineMeasure` is the common carrier for dN, dPi and signed
remainders.  Point masses are stored as sorted arrays; the density part
lives on a uniform grid in ``u = log x`` where each bin spreads its mass
uniformly *in x* over ``[exp(u_i), exp(u_{i+1}))``.  That choice makes
``a dx`` representable exactly, which keeps cancellation tests honest.
"""

from __future__ import annotations

import io
import math
import types
from dataclasses import dataclass, field
from math import lgamma, log

import numpy as np
from scipy import signal, special

from ._mainterms import MAINS, main_full, main_head, main_tail, main_value
from ._quad import gauss_legendre
from .errors import (
    DivergenceError,
    DomainError,
    ParameterError,
    PreconditionError,
    RangeError,
    SignError,
    TailTooWeakError,
)

TIE_RTOL = 1e-12
ROUND = float(np.finfo(float).eps)
DEFAULT_BINS = 2**14
CSV_MAGIC = "# halfline-measure v1"


def merge_ties(x, m):
    """Sort atoms and merge abscissas equal under the log-space tie rule.

    Two atoms merge when ``|log x1 - log x2| <= 1e-12 * max(1, |log x1|)``.
    Zero-mass atoms are dropped.  Returns new ``(x, m)`` arrays.
    """
    x = np.asarray(x, dtype=float)
    m = np.asarray(m, dtype=float)
    if x.size == 0:
        return x, m
    order = np.argsort(x, kind="stable")
    x, m = x[order], m[order]
    lx = np.log(x)
    tol = TIE_RTOL * np.maximum(1.0, np.abs(lx[:-1]))
    new_group = np.concatenate(([True], np.diff(lx) > tol))
    starts = np.flatnonzero(new_group)
    xs = x[starts]
    ms = np.add.reduceat(m, starts)
    keep = ms != 0.0
    return xs[keep], ms[keep]


@dataclass(frozen=True)
class DensityBins:
    """Uniform u-grid: bin i is ``[u0 + i du, u0 + (i+1) du)`` carrying ``masses[i]``."""

    u0: float
    du: float
    masses: np.ndarray

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=float)
        masses.setflags(write=False)
        object.__setattr__(self, "masses", masses)
        if self.u0 < 0:
            raise DomainError("density bins must start at u >= 0 (x >= 1)")
        if not self.du > 0:
            raise ParameterError("bin width du must be positive")

    @property
    def count(self):
        return self.masses.size

    @property
    def edges_u(self):
        return self.u0 + self.du * np.arange(self.count + 1)

    @property
    def edges_x(self):
        return np.exp(self.edges_u)

    @property
    def u_max(self):
        return self.u0 + self.du * self.count


class HalfLineMeasure:
    """Immutable measure on [1, oo) made of atoms and optional density bins.

    Parameters
    ----------
    x, m : array_like
        Atom abscissas (>= 1) and masses.  Ties are merged and the result sorted.
    bins : DensityBins, optional
        Binned density part.
    signed : bool
        Whether negative masses are allowed.
    x_max : float
        Upper end of the range on which the measure is known.  ``inf`` means the
        atoms/bins given are the whole measure.
    meta : dict, optional
        Free-form provenance (truncation order, method, ...).
    """

    __slots__ = ("_bin_cum", "_bin_x", "_cum", "bins", "m", "meta", "signed", "x", "x_max")

    def __init__(self, x=(), m=(), *, bins=None, signed=False, x_max=math.inf, meta=None):
        x = np.asarray(x, dtype=float).ravel()
        m = np.asarray(m, dtype=float).ravel()
        if x.shape != m.shape:
            raise ValueError("abscissas and masses must have the same length")
        if x.size and np.min(x) < 1.0:
            raise DomainError(f"atom abscissa {np.min(x)!r} < 1")
        if not signed:
            if m.size and np.min(m) < 0:
                raise SignError("negative atom mass in an unsigned measure")
            if bins is not None and np.min(bins.masses, initial=0.0) < 0:
                raise SignError("negative bin mass in an unsigned measure")
        x, m = merge_ties(x, m)
        self._init(x, m, bins, signed, x_max, meta)

    def _init(self, x, m, bins, signed, x_max, meta):
        x.setflags(write=False)
        m.setflags(write=False)
        self.x = x
        self.m = m
        self.bins = bins
        self.signed = bool(signed)
        self.x_max = float(x_max)
        self.meta = types.MappingProxyType(dict(meta or {}))
        self._cum = np.concatenate(([0.0], np.cumsum(m)))
        if bins is not None:
            self._bin_cum = np.concatenate(([0.0], np.cumsum(bins.masses)))
            self._bin_x = bins.edges_x
        else:
            self._bin_cum = self._bin_x = None

    @classmethod
    def _trusted(cls, x, m, *, bins=None, signed=False, x_max=math.inf, meta=None):
        # Skips validation and tie merging: callers guarantee sorted, merged atoms.
        obj = cls.__new__(cls)
        obj._init(np.asarray(x, dtype=float), np.asarray(m, dtype=float), bins, signed, x_max, meta)
        return obj

    def __repr__(self):
        nb = 0 if self.bins is None else self.bins.count
        return (f"HalfLineMeasure(atoms={self.x.size}, bins={nb}, signed={self.signed}, "
                f"x_max={self.x_max:g})")

    @property
    def atoms(self):
        """Atoms as a list of ``(abscissa, mass)`` tuples."""
        return list(zip(self.x.tolist(), self.m.tolist()))

    @property
    def is_atomic(self):
        return self.bins is None

    def cumulative(self, x):
        """Right-continuous distribution function: mass of [1, x].

        Vectorized over ``x``; returns 0 for ``x < 1``.
        """
        xa = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.x, xa, side="right")
        out = self._cum[idx]
        if self.bins is not None:
            edges = self._bin_x
            k = np.searchsorted(edges, xa, side="right") - 1
            inside = (k >= 0) & (k < self.bins.count)
            kc = np.clip(k, 0, self.bins.count - 1)
            full = np.where(k >= self.bins.count, self._bin_cum[-1], 0.0)
            frac = (xa - edges[kc]) / (edges[kc + 1] - edges[kc])
            part = self._bin_cum[kc] + self.bins.masses[kc] * frac
            out = out + np.where(inside, part, full)
        return float(out) if np.ndim(out) == 0 else out

    def __call__(self, x):
        return self.cumulative(x)

    def total_mass(self):
        tot = self._cum[-1]
        if self.bins is not None:
            tot += self._bin_cum[-1]
        return float(tot)

    def scaled(self, factor):
        bins = None
        if self.bins is not None:
            bins = DensityBins(self.bins.u0, self.bins.du, self.bins.masses * factor)
        signed = self.signed or factor < 0
        return HalfLineMeasure._trusted(self.x, self.m * factor, bins=bins, signed=signed,
                                        x_max=self.x_max, meta=dict(self.meta))

    def with_range(self, x_max):
        """Same measure with a different declared range (no data is changed)."""
        return HalfLineMeasure._trusted(self.x, self.m, bins=self.bins, signed=self.signed,
                                        x_max=x_max, meta=dict(self.meta))

    def breakpoints(self, upper):
        """Piecewise-linear description of the cumulative on [1, upper].

        Returns ``(b, c0, c1)``: on ``[b[j], b[j+1])`` the cumulative equals
        ``c0[j] + c1[j] * x``.  The last breakpoint is ``upper``.
        """
        pts = [np.array([1.0]), self.x[self.x <= upper]]
        if self.bins is not None:
            pts.append(self._bin_x[self._bin_x <= upper])
        b = np.unique(np.concatenate(pts + [np.array([upper])]))
        left = b[:-1]
        value = np.asarray(self.cumulative(left), dtype=float)
        slope = np.zeros_like(left)
        if self.bins is not None:
            edges = self._bin_x
            k = np.searchsorted(edges, left, side="right") - 1
            inside = (k >= 0) & (k < self.bins.count)
            kc = np.clip(k, 0, self.bins.count - 1)
            dens = self.bins.masses[kc] / (edges[kc + 1] - edges[kc])
            slope = np.where(inside, dens, 0.0)
        return b, value - slope * left, slope

    # ------------------------------------------------------------------ CSV
    def dump_csv(self, target):
        """Write the measure in the ``halfline-measure v1`` CSV format."""
        lines = [f"{CSV_MAGIC} signed={int(self.signed)} x_max={self.x_max!r}"]
        lines += [f"{a!r},{b!r}" for a, b in zip(self.x.tolist(), self.m.tolist())]
        if self.bins is not None:
            lines.append(f"# bins u0={self.bins.u0!r} du={self.bins.du!r}")
            lines += [repr(v) for v in self.bins.masses.tolist()]
        text = "\n".join(lines) + "\n"
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", encoding="ascii", newline="\n") as fh:
                fh.write(text)

    @classmethod
    def load_csv(cls, source):
        """Read a measure written by :meth:`dump_csv`."""
        if hasattr(source, "read"):
            text = source.read()
        else:
            with open(source, encoding="ascii") as fh:
                text = fh.read()
        lines = [ln.strip() for ln in io.StringIO(text) if ln.strip()]
        if not lines or not lines[0].startswith(CSV_MAGIC):
            raise ValueError("not a halfline-measure v1 file")
        header = dict(tok.split("=", 1) for tok in lines[0][len(CSV_MAGIC):].split())
        signed = header.get("signed", "0") == "1"
        x_max = float(header.get("x_max", "inf"))
        xs, ms, bin_masses, bin_hdr = [], [], [], None
        for ln in lines[1:]:
            if ln.startswith("# bins"):
                bin_hdr = dict(tok.split("=", 1) for tok in ln[len("# bins"):].split())
                continue
            if ln.startswith("#"):
                continue
            if bin_hdr is None:
                a, b = ln.split(",")
                xs.append(float(a))
                ms.append(float(b))
            else:
                bin_masses.append(float(ln))
        bins = None
        if bin_hdr is not None:
            bins = DensityBins(float(bin_hdr["u0"]), float(bin_hdr["du"]), np.array(bin_masses))
        return cls(xs, ms, bins=bins, signed=signed, x_max=x_max)


def step_measure_from_points(points, signed=False, x_max=math.inf):
    """Build an atomic measure from ``(abscissa, mass)`` pairs.

    >>> step_measure_from_points([(1, 1), (2, 1), (2, 1)]).atoms
    [(1.0, 1.0), (2.0, 2.0)]
    """
    pts = list(points)
    if not pts:
        return HalfLineMeasure(signed=signed, x_max=x_max)
    x, m = zip(*pts)
    return HalfLineMeasure(x, m, signed=signed, x_max=x_max)


def binned_density_measure(density_u, u_max, bins=DEFAULT_BINS, atoms=(), order=8):
    """Bin a density given in u = log x coordinates onto a uniform grid over [0, u_max].

    ``density_u(u)`` is the density of the measure with respect to du (so a
    density f(x) dx corresponds to ``f(exp(u)) * exp(u)``).  Bin masses are
    computed with a Gauss-Legendre rule on each bin.
    """
    du = u_max / bins
    x, w = gauss_legendre(order)
    left = du * np.arange(bins)
    nodes = left[:, None] + du * x[None, :]
    masses = (density_u(nodes) * w[None, :]).sum(axis=1) * du
    ax, am = zip(*atoms) if atoms else ((), ())
    return HalfLineMeasure(ax, am, bins=DensityBins(0.0, du, masses), x_max=math.exp(u_max))


def cumulative(mu, x):
    """Mass of [1, x] under ``mu`` (right-continuous; 0 for x < 1)."""
    return mu.cumulative(x)


# ---------------------------------------------------------------------- tails
@dataclass(frozen=True)
class TailModel:
    """Declared bound on the remainder of a cumulative beyond the stored range.

    The remainder is ``E(x) = mu(x) - offset - density * M(x)`` where the main
    term ``M`` is ``x`` (``main='linear'``) or ``li(x) - gamma - log log x``
    (``main='li'``).  The model asserts ``|E(x)| <= C x**power / log(x)**gamma``
    past the stored range.  Main-term parts of tail integrals are evaluated in
    closed form; only the remainder part is bounded.

    ``cesaro_order > 0`` declares the bound only in the Cesaro-Riesz sense of
    that order.  Tail estimates then pick up one extra factor ``|s| + n`` per
    order (from the additional integrations by parts) and are estimates rather
    than rigorous bounds.

    ``exact``, when given, is a callable ``exact(s, n, X) -> (value, error)``
    returning ``int_X^oo (-log x)^n x^-s dE(x)`` itself; systems with an
    explicit density use it in place of the bound.
    """

    C: float
    gamma: float = 0.0
    power: float = 1.0
    cesaro_order: int = 0
    density: float = 0.0
    offset: float = 0.0
    main: str = "linear"
    note: str = ""
    exact: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.C < 0 or self.gamma < 0:
            raise ParameterError("TailModel requires C >= 0 and gamma >= 0")
        if self.main not in MAINS:
            raise ParameterError(f"main must be one of {MAINS}")
        if self.cesaro_order < 0:
            raise ParameterError("cesaro_order must be >= 0")

    def require(self, n, sigma):
        """Raise unless the tail of the order-``n`` kernel integral converges at ``sigma``."""
        delta = sigma - self.power
        if delta < -1e-14:
            raise DivergenceError(
                f"tail diverges: sigma={sigma} below declared growth power {self.power}",
                bound=math.inf)
        if abs(delta) <= 1e-14 and not self.gamma > n + 1:
            raise TailTooWeakError(
                f"tail model gamma={self.gamma} must exceed n+1={n + 1} on sigma={sigma}")

    def integral_bound(self, s, n, X):
        """Bound for ``int_X^oo E(x) d[(-log x)^n x^-s]`` (the part left after the
        boundary term ``-k(X) E(X)`` has been taken out exactly)."""
        sigma = s.real
        self.require(n, sigma)
        L = log(max(X, math.e))
        k = n - self.gamma
        delta = sigma - self.power
        factor = (abs(s) + n) ** (1 + self.cesaro_order) * self.C
        if abs(delta) <= 1e-14:
            integral = L ** (k + 1) / (-k - 1)
        elif k <= 0:
            integral = math.exp(-delta * L) * L**k / delta
        else:
            # int_L^oo e^{-delta v} v^k dv = Gamma(k+1, delta L) / delta^(k+1)
            integral = math.exp(
                math.log(special.gammaincc(k + 1, delta * L)) + lgamma(k + 1) - (k + 1) * math.log(delta))
        return factor * integral


# ------------------------------------------------------------------ integrals
@dataclass(frozen=True)
class PowerKernel:
    """Integrand ``x -> (-log x)^n x^(-s)``."""

    s: complex
    n: int = 0

    def __call__(self, x):
        lx = np.log(np.asarray(x, dtype=float))
        return (-lx) ** self.n * np.exp(-complex(self.s) * lx)


@dataclass(frozen=True)
class StieltjesResult:
    """Value of a Stieltjes integral with its recorded error budget."""

    value: complex
    quad_error: float = 0.0
    tail_bound: float = 0.0
    upper: float = math.inf

    @property
    def error(self):
        return self.quad_error + self.tail_bound


def _bin_integral(kernel, bins, upper):
    """Integrate ``kernel`` against the binned density up to ``upper``.

    Returns ``(value, error_estimate)``.  The estimate adds the 8- versus
    4-point Gauss-Legendre difference and the bin-model spread: the sum over
    bins of ``|model - m_i k(midpoint)|``, i.e. how much the answer moves if the
    bin mass is lumped at its centre instead of spread uniformly in x.  For a
    smooth underlying density both models are second-order accurate in ``du``,
    so their gap measures the discretization error of the binning itself.
    """
    lu = log(upper)
    edges = bins.edges_u
    nfull = int(np.searchsorted(edges, lu, side="right")) - 1
    nfull = min(max(nfull, 0), bins.count)
    a = edges[:-1]
    s = complex(kernel.s)
    n = kernel.n
    # weight m/dx per bin; int over bin of (-u)^n e^{(1-s)u} du
    dx_scale = np.expm1(bins.du)  # (x_{i+1} - x_i) / x_i

    def rule(order, left, width, masses):
        xg, wg = gauss_legendre(order)
        nodes = left[:, None] + width[:, None] * xg[None, :]
        # e^{(1-s)u} / x_i = e^{(1-s)(u - u_i)} e^{-s u_i}
        f = (-nodes) ** n * np.exp((1 - s) * (nodes - left[:, None]) - s * left[:, None])
        return masses * (f * wg[None, :]).sum(axis=1) * width / dx_scale

    left = a[:nfull]
    width = np.full(nfull, bins.du)
    masses = bins.masses[:nfull]
    if nfull < bins.count and lu > edges[nfull]:
        left = np.append(left, edges[nfull])
        width = np.append(width, lu - edges[nfull])
        masses = np.append(masses, bins.masses[nfull])
    if left.size == 0:
        return 0j, 0.0
    hi = rule(8, left, width, masses)
    lo = rule(4, left, width, masses)
    full = width >= bins.du * (1 - 1e-12)
    mid = left[full] + 0.5 * bins.du
    lumped = masses[full] * (-mid) ** n * np.exp(-s * mid)
    spread = float(np.sum(np.abs(hi[full] - lumped)))
    # midpoint-rule curvature term, which stays honest where both models agree
    um = -mid
    k2 = s * s * um**n
    if n >= 1:
        k2 = k2 + 2 * s * n * um ** (n - 1)
    if n >= 2:
        k2 = k2 + n * (n - 1) * um ** (n - 2)
    spread += float(np.sum(np.abs(masses[full] * k2 * np.exp(-s * mid)))) * bins.du**2 / 24
    value = complex(np.sum(hi))
    return value, float(abs(value - np.sum(lo))) + spread


def stieltjes_integral(kernel, mu, upper=None, tail=None):
    """Integrate ``kernel`` against ``mu`` over [1-, upper].

    Atoms are summed exactly; the density part uses composite Gauss-Legendre
    with an error estimate.  With ``upper = inf`` and a measure known only up
    to ``mu.x_max``, a :class:`TailModel` bounding ``mu.cumulative`` must be
    supplied; the boundary term of the integration by parts is then included
    in the value and the remaining tail goes to ``tail_bound``.
    """
    if upper is None:
        upper = mu.x_max
    if math.isinf(upper) and not math.isinf(mu.x_max):
        if tail is None:
            raise PreconditionError("integral to infinity over a finite stored range needs a TailModel")
        return remainder_transform(mu, kernel.s, kernel.n, 0.0, main=tail.main, tail=tail)
    if upper > mu.x_max * (1 + 1e-12):
        raise RangeError(f"upper={upper:g} beyond stored range x_max={mu.x_max:g}")
    if math.isinf(upper) and mu.bins is not None:
        raise DivergenceError("density part has no declared range", bound=math.inf)
    sel = mu.x <= upper
    xa = mu.x[sel]
    terms = mu.m[sel] * kernel(xa) if xa.size else np.zeros(0)
    value = complex(np.sum(terms)) if xa.size else 0j
    # floating-point rounding of the atom sum, a crude but safe floor
    quad_err = ROUND * (xa.size + 1) * float(np.sum(np.abs(terms)))
    if mu.bins is not None:
        v, e = _bin_integral(kernel, mu.bins, min(upper, mu.bins.edges_x[-1]))
        value += v
        quad_err += e
    return StieltjesResult(complex(value), quad_err, 0.0, upper=upper)


def remainder_transform(mu, s, n, a, main="linear", tail=None, X=None):
    """``int_{1-}^oo (-log x)^n x^-s d(mu - a M)(x)`` with ``M`` the chosen main term.

    The stored part of ``mu`` is integrated up to ``X`` (default: its range);
    ``a M`` is integrated exactly on [1, X].  Beyond ``X`` the boundary term of
    the integration by parts uses the tail model's remainder at ``X``; the main
    part of the tail is added in closed form when ``tail.density != a`` and the
    rest is reported as ``tail_bound``.  With ``tail.density == a`` nothing in
    the tail needs ``Re s > 1``, which is what makes evaluation on the line
    ``Re s = 1`` possible.
    """
    s = complex(s)
    kernel = PowerKernel(s, n)
    if X is None:
        X = mu.x_max
    if math.isinf(X):
        if not s.real > 1:
            raise DivergenceError("complete measure transform needs Re s > 1", bound=math.inf)
        head = stieltjes_integral(kernel, mu, math.inf)
        return StieltjesResult(head.value - a * main_full(main, s, n), head.quad_error, 0.0)
    if tail is None:
        raise PreconditionError("a TailModel is needed beyond the stored range")
    if tail.main != main:
        raise ParameterError(f"tail model main term {tail.main!r} does not match {main!r}")
    L = log(X)
    head = stieltjes_integral(kernel, mu, X)
    value = head.value - a * main_head(main, s, n, L)
    if tail.exact is None:
        E_X = mu.cumulative(X) - tail.offset - tail.density * main_value(main, X)
        value -= complex(kernel(X)) * E_X
    if tail.density != a:
        if not s.real > 1:
            raise DivergenceError(
                f"main term density {tail.density} differs from a={a}; tail diverges on Re s <= 1",
                bound=math.inf)
        value += (tail.density - a) * main_tail(main, s, n, L)
    if tail.exact is None:
        bound = tail.integral_bound(s, n, X)
    else:
        ev, bound = tail.exact(s, n, X)
        value += ev
    return StieltjesResult(complex(value), head.quad_error, float(bound), upper=math.inf)


# --------------------------------------------------------------------- exp*
def _convolve_atomic(ax, am, bx, bm, x_max):
    """Multiplicative convolution of two atomic measures restricted to [1, x_max]."""
    if ax.size == 0 or bx.size == 0:
        return np.empty(0), np.empty(0)
    if bx.size > ax.size:
        ax, am, bx, bm = bx, bm, ax, am
    xs, ms = [], []
    for b, w in zip(bx.tolist(), bm.tolist()):
        k = np.searchsorted(ax, x_max / b * (1 + 4e-16), side="right")
        if k == 0:
            break
        prod = ax[:k] * b
        keep = prod <= x_max * (1 + 1e-15)
        xs.append(prod[keep])
        ms.append(am[:k][keep] * w)
    if not xs:
        return np.empty(0), np.empty(0)
    return merge_ties(np.concatenate(xs), np.concatenate(ms))


def _exp_lattice(q, length):
    """Solve ``j n_j = sum_{i=1}^j q_i n_{j-i}``, ``n_0 = 1`` by divide and conquer.

    This is the power-series exponential on a lattice, written through the
    logarithmic derivative (``q_i = i * pi_i``).  FFT convolutions merge each
    solved left half into the right half, so the cost is O(L log^2 L).
    """
    n = np.zeros(length)
    acc = np.zeros(length)
    n[0] = 1.0
    qz = np.zeros(length)
    qz[: min(length, q.size)] = q[:length]

    def solve(lo, hi):
        if hi - lo <= 48:
            for j in range(max(lo, 1), hi):
                tot = acc[j]
                if j > lo:
                    tot += np.dot(n[lo:j], qz[j - lo:0:-1])
                n[j] = tot / j
            return
        mid = (lo + hi) // 2
        solve(lo, mid)
        conv = signal.fftconvolve(n[lo:mid], qz[: hi - lo])
        acc[mid:hi] += conv[mid - lo: hi - lo]
        solve(mid, hi)

    solve(0, length)
    return n


def exp_star(dPi, x_max=None, tol=1e-15):
    """Multiplicative-convolution exponential ``delta_1 + sum_k dPi^{*k}/k!`` on [1, x_max].

    Atomic input gives an atomic result built from exact products of atoms,
    truncated at the first order K with ``Pi(x_max)^K / K! < tol`` or once the
    convolution powers leave [1, x_max].  Input with density bins (grid
    starting at u = 0) is exponentiated on the half-bin lattice in u via the
    logarithmic-derivative recursion and re-binned onto the same grid; atoms
    in such input are snapped to that lattice.
    """
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if dPi.signed and (np.any(dPi.m < 0) or (dPi.bins is not None and np.any(dPi.bins.masses < 0))):
        raise SignError("exp_star needs an unsigned measure")
    if dPi.signed:
        raise SignError("exp_star needs an unsigned measure")
    if x_max is None:
        x_max = dPi.x_max
    if math.isinf(x_max):
        raise ParameterError("exp_star needs a finite x_max")
    if x_max > dPi.x_max:
        raise RangeError(f"x_max={x_max:g} beyond the stored range of dPi ({dPi.x_max:g})")
    if dPi.x.size and dPi.x[0] <= 1.0:
        raise DomainError("dPi must not charge x = 1 (Pi(1) = 0)")
    if dPi.bins is None:
        return _exp_star_atomic(dPi, x_max, tol)
    return _exp_star_binned(dPi, x_max)


def _exp_star_atomic(dPi, x_max, tol):
    sel = dPi.x <= x_max
    px, pm = dPi.x[sel], dPi.m[sel]
    total = float(pm.sum())
    xs, ms = [np.array([1.0])], [np.array([1.0])]
    tx, tm = xs[0], ms[0]
    order = 0
    truncated = False
    log_total = math.log(total) if total > 0 else -math.inf
    while True:
        k = order + 1
        tx, tm = _convolve_atomic(tx, tm, px, pm, x_max)
        if tx.size == 0:
            break
        tm = tm / k
        order = k
        xs.append(tx)
        ms.append(tm)
        if k * log_total - lgamma(k + 1) < math.log(tol):
            truncated = True
            break
    x, m = merge_ties(np.concatenate(xs), np.concatenate(ms))
    meta = {"method": "atomic", "truncation_order": order, "taylor_truncated": truncated}
    return HalfLineMeasure._trusted(x, m, x_max=x_max, meta=meta)


def _exp_star_binned(dPi, x_max):
    bins = dPi.bins
    if abs(bins.u0) > 1e-15:
        raise ParameterError("exp_star needs density bins starting at u = 0")
    du = bins.du
    nb = min(bins.count, math.floor(math.log(x_max) / du + 1e-9))
    h = du / 2.0
    length = 2 * nb + 1
    lattice = np.zeros(length)
    lattice[1: 2 * nb: 2] = bins.masses[:nb]
    sel = dPi.x <= x_max
    if np.any(sel):
        idx = np.rint(np.log(dPi.x[sel]) / h).astype(int)
        if np.any(idx < 1):
            raise DomainError("atom too close to 1 for the lattice spacing")
        np.add.at(lattice, idx[idx < length], dPi.m[sel][idx < length])
    j = np.arange(length)
    tilt = np.exp(-h * j)
    q = j * lattice * tilt
    n_tilted = _exp_lattice(q, length)
    n_lat = n_tilted / tilt
    out = np.zeros(nb)
    out += n_lat[1::2][:nb]
    even = n_lat[2::2]  # lattice points at bin boundaries i*du, i = 1..nb
    out[: nb - 1] += 0.5 * even[: nb - 1]
    out[1:nb] += 0.5 * even[: nb - 1]
    out[nb - 1] += 0.5 * even[nb - 1]
    meta = {"method": "lattice-recursion", "truncation_order": None, "lattice_step": h}
    new_bins = DensityBins(0.0, du, out)
    x_top = math.exp(du * nb)
    return HalfLineMeasure._trusted(np.array([1.0]), np.array([n_lat[0]]), bins=new_bins,
                                    x_max=min(x_max, x_top), meta=meta)


# ------------------------------------------------------------------ systems
@dataclass(frozen=True)
class GeneralizedNumberSystem:
    """A pair (dN, dPi) with optional prime list, density and declared tails.

    ``n_tail`` bounds ``|N(x) - a x|`` beyond the stored range (``a = 0`` when
    no density is known); ``pi_tail`` bounds ``|Pi(x) - T1(log x)|`` where
    ``T1`` is the logarithmic-integral main term when ``pi_main == 'li'`` and
    zero when ``pi_main == 'none'``.
    """

    dN: HalfLineMeasure
    dPi: HalfLineMeasure
    primes: object = None
    density_a: float | None = None
    label: str = ""
    n_tail: TailModel | None = None
    pi_tail: TailModel | None = None
    pi_main: str = "none"
    comparators: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dN.cumulative(1.0) != 1.0 and abs(self.dN.cumulative(1.0) - 1.0) > 1e-12:
            raise DomainError(f"N(1) must equal 1, got {self.dN.cumulative(1.0)!r}")
        if self.dPi.cumulative(1.0) != 0.0:
            raise DomainError("Pi(1) must equal 0")
        if self.density_a is not None and not self.density_a > 0:
            raise DomainError("density a must be positive")
        if self.pi_main not in ("none", "li"):
            raise ParameterError("pi_main must be 'none' or 'li'")

    @property
    def x_max(self):
        return min(self.dN.x_max, self.dPi.x_max)

    def N(self, x):
        return self.dN.cumulative(x)

    def Pi(self, x):
        return self.dPi.cumulative(x)
