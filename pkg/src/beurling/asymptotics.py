"""Remainder profiles, Cesaro-Riesz means, density estimation and transform checks."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy import integrate

from .errors import NoDensityError, ParameterError, ProfileError, RangeError
from .logint import EULER_GAMMA, LI2, Li, li, li_power_part  # noqa: F401  (re-exported)
from .zeta import g1_function, g_function

TARGETS = ("N_minus_ax", "Pi_minus_Li")
PER_DECADE = 200
DEFAULT_M = 2
M_SEARCH = (0, 1, 2, 4, 8)
SUP_RATIO = 1.1
TREND_SLOPE = 0.05


@dataclass(frozen=True)
class CesaroConfig:
    """Riesz order ``m``, target log power ``alpha`` and quadrature resolution for callables."""

    m: int = DEFAULT_M
    alpha: float | None = None
    resolution: int = 200

    def __post_init__(self):
        if self.m < 0:
            raise ParameterError("Riesz order m must be >= 0")


# ------------------------------------------------------------ piecewise
class PiecewiseLinear:
    """A function equal to ``c0[j] + c1[j] u`` on ``[b[j], b[j+1])`` and 0 outside [b[0], b[-1]).

    Step functions are the case ``c1 = 0``.  Cesaro means of such functions
    are evaluated exactly from prefix sums of the moments
    ``int (c0 + c1 u) u^(k-1) du``.
    """

    def __init__(self, b, c0, c1=None):
        b = np.asarray(b, dtype=float)
        c0 = np.asarray(c0, dtype=float)
        c1 = np.zeros_like(c0) if c1 is None else np.asarray(c1, dtype=float)
        if b.size != c0.size + 1 or c0.shape != c1.shape:
            raise ValueError("need len(b) == len(c0) + 1 == len(c1) + 1")
        if b.size and (b[0] <= 0 or np.any(np.diff(b) <= 0)):
            raise ValueError("breakpoints must be positive and strictly increasing")
        self.b, self.c0, self.c1 = b, c0, c1

    @classmethod
    def from_steps(cls, b, values):
        """Step function with ``values[j]`` on ``[b[j], b[j+1])``."""
        return cls(b, values)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        j = np.searchsorted(self.b, u, side="right") - 1
        inside = (j >= 0) & (j < self.c0.size)
        jc = np.clip(j, 0, max(self.c0.size - 1, 0))
        out = np.where(inside, self.c0[jc] + self.c1[jc] * u, 0.0) if self.c0.size else np.zeros_like(u)
        return float(out) if out.ndim == 0 else out

    def _refine(self, b):
        mid = 0.5 * (b[:-1] + b[1:])
        j = np.searchsorted(self.b, mid, side="right") - 1
        inside = (j >= 0) & (j < self.c0.size)
        jc = np.clip(j, 0, max(self.c0.size - 1, 0))
        return np.where(inside, self.c0[jc], 0.0), np.where(inside, self.c1[jc], 0.0)

    def __add__(self, other):
        b = np.union1d(self.b, other.b)
        a0, a1 = self._refine(b)
        b0, b1 = other._refine(b)
        return PiecewiseLinear(b, a0 + b0, a1 + b1)

    def __mul__(self, k):
        return PiecewiseLinear(self.b, self.c0 * k, self.c1 * k)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def abs(self):
        """|f|, splitting pieces at sign changes."""
        b, c0, c1 = self.b, self.c0, self.c1
        with np.errstate(divide="ignore", invalid="ignore"):
            root = np.where(c1 != 0, -c0 / c1, np.nan)
        cut = (root > b[:-1]) & (root < b[1:])
        nb = np.sort(np.concatenate([b, root[cut]]))
        r0, r1 = self._refine(nb)
        mid = 0.5 * (nb[:-1] + nb[1:])
        sgn = np.sign(r0 + r1 * mid)
        return PiecewiseLinear(nb, r0 * sgn, r1 * sgn)

    def moments(self, m):
        """Prefix sums ``P[k][j] = int_{b0}^{b_j} f(u) u^(k-1) du`` for k = 0..m."""
        b1, b2 = self.b[:-1], self.b[1:]
        out = []
        for k in range(m + 1):
            out.append(np.concatenate(([0.0], np.cumsum(_piece_moment(self.c0, self.c1, b1, b2, k)))))
        return out

    def cesaro_means(self, xs, m):
        """Exact ``int_0^x f(u)/u (1 - u/x)^m du`` at every x in ``xs``."""
        return _cesaro_from_moments(self, np.asarray(xs, dtype=float), m)


def _pow_diff(b1, b2, k):
    # b2^k - b1^k; the expm1 form avoids cancellation for neighbouring breakpoints
    b1, b2 = np.broadcast_arrays(np.asarray(b1, dtype=float), np.asarray(b2, dtype=float))
    near = b2 <= 2 * b1
    with np.errstate(over="ignore", invalid="ignore"):
        close = b1**k * np.expm1(k * np.log1p((b2 - b1) / np.where(near, b1, 1.0)))
    return np.where(near, close, b2**k - b1**k)


def _piece_moment(c0, c1, b1, b2, k):
    if k == 0:
        return c0 * np.log1p((b2 - b1) / b1) + c1 * (b2 - b1)
    return c0 * _pow_diff(b1, b2, k) / k + c1 * _pow_diff(b1, b2, k + 1) / (k + 1)


def _cesaro_from_moments(f, xs, m):
    if m < 0:
        raise ParameterError("Riesz order m must be >= 0")
    out = np.zeros_like(xs)
    if f.c0.size == 0:
        return out
    P = f.moments(m)
    j = np.searchsorted(f.b, xs, side="right") - 1
    inside = (j >= 0) & (j < f.c0.size)
    past = j >= f.c0.size
    jc = np.clip(j, 0, f.c0.size - 1)
    left = f.b[jc]
    for k in range(m + 1):
        Mk = np.where(past, P[k][-1], 0.0)
        part = _piece_moment(f.c0[jc], f.c1[jc], left, np.maximum(xs, left), k)
        Mk = Mk + np.where(inside, P[k][jc] + part, 0.0)
        out += comb(m, k) * (-1) ** k * Mk / xs**k
    return out


# --------------------------------------------------------- main terms
def _li_moment(x, k):
    # int_2^x Li(u) u^(k-1) du, closed form via integration by parts
    x = np.asarray(x, dtype=float)
    xx = np.maximum(x, 2.0)
    if k == 0:
        val = Li(xx) * np.log(xx) - (xx - 2.0)
    else:
        val = Li(xx) * xx**k / k - (li(xx ** (k + 1)) - li(2.0 ** (k + 1))) / k
    return np.where(x > 2.0, val, 0.0)


def _cesaro_li(xs, m):
    xs = np.asarray(xs, dtype=float)
    out = np.zeros_like(xs)
    for k in range(m + 1):
        out += comb(m, k) * (-1) ** k * _li_moment(xs, k) / xs**k
    return out


class Remainder:
    """``E(u) = mu(u) - a M(u)`` for u >= 1 (0 below), with ``M(u) = u`` or ``Li(u)``.

    Parameters
    ----------
    mu : HalfLineMeasure
    main : {'linear', 'Li'}
    a : float
    """

    def __init__(self, mu, main="linear", a=1.0):
        if main not in ("linear", "Li"):
            raise ParameterError("main must be 'linear' or 'Li'")
        self.mu, self.main, self.a = mu, main, float(a)
        self._pl = None

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        base = self.mu.cumulative(u)
        sub = self.a * (np.where(u >= 1, u, 0.0) if self.main == "linear" else Li(np.maximum(u, 1.0)))
        out = np.where(u >= 1, base - sub, 0.0)
        return float(out) if out.ndim == 0 else out

    def piecewise(self):
        """The measure part (minus a linear main term) as a :class:`PiecewiseLinear`."""
        if self._pl is None:
            upper = self.mu.x_max if math.isfinite(self.mu.x_max) else max(float(self.mu.x[-1]) * 2, 2.0)
            b, c0, c1 = self.mu.breakpoints(upper)
            if self.main == "linear":
                c1 = c1 - self.a
            self._pl = PiecewiseLinear(b, c0, c1)
        return self._pl

    def cesaro_means(self, xs, m):
        xs = np.asarray(xs, dtype=float)
        if np.any(xs > self.mu.x_max * (1 + 1e-12)):
            raise RangeError("Cesaro mean requested beyond the stored range")
        out = self.piecewise().cesaro_means(xs, m)
        if self.main == "Li":
            out = out - self.a * _cesaro_li(xs, m)
        return out


def cesaro_mean(E, m, x, resolution=200):
    """Riesz mean ``int_0^x (E(u)/u) (1 - u/x)^m du``.

    ``E`` may be a :class:`Remainder` or :class:`PiecewiseLinear` (exact
    interval summation) or a vectorized callable (adaptive quadrature in
    ``v = u/x``; ``resolution`` sets the number of initial panels).
    """
    if m < 0:
        raise ParameterError("Riesz order m must be >= 0")
    if hasattr(E, "cesaro_means"):
        return float(E.cesaro_means(np.array([float(x)]), m)[0])
    x = float(x)

    def integrand(v):
        return float(E(x * v)) / v * (1 - v) ** m if v > 0 else 0.0

    pts = np.linspace(0, 1, resolution + 1)[1:-1]
    pts = pts[: min(pts.size, 100)]
    val, _ = integrate.quad(integrand, 0.0, 1.0, points=pts if pts.size else None,
                            limit=max(200, 4 * resolution), epsabs=1e-13, epsrel=1e-12)
    return val


# ------------------------------------------------------------- profiles
@dataclass
class RemainderProfile:
    """Rows ``(x, raw, normalized)`` with ``normalized = raw log^n x / x`` and a verdict."""

    target: str
    n: int
    rows: np.ndarray
    sup_norm: float
    slope: float
    trend_slope: float
    verdict: str
    m: int | None = None
    a: float | None = None
    note: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def x(self):
        return self.rows[:, 0]

    @property
    def raw(self):
        return self.rows[:, 1]

    @property
    def normalized(self):
        return self.rows[:, 2]

    def to_csv(self):
        buf = io.StringIO()
        buf.write("x,raw,normalized\n")
        for x, r, z in self.rows:
            buf.write(f"{x!r},{r!r},{z!r}\n")
        return buf.getvalue()

    def verdict_dict(self):
        return {"target": self.target, "n": self.n, "m": self.m, "sup": self.sup_norm,
                "slope": self.trend_slope, "verdict": self.verdict}

    def verdict_json(self):
        return json.dumps(self.verdict_dict(), sort_keys=True)


def default_grid(x_max, x_min=10.0, per_decade=PER_DECADE):
    """Geometric grid from x_min to x_max with ``per_decade`` points per decade."""
    count = max(round(per_decade * math.log10(x_max / x_min)) + 1, 8)
    return np.geomspace(x_min, x_max, count)


def _block_envelope(x, v, blocks=20):
    # maxima of |v| over equal blocks in log x, located at the block centres
    lx = np.log(x)
    edges = np.linspace(lx[0], lx[-1], blocks + 1)
    idx = np.clip(np.searchsorted(edges, lx, side="right") - 1, 0, blocks - 1)
    cx, cv = [], []
    for k in range(blocks):
        sel = idx == k
        if np.any(sel):
            cx.append(np.exp(0.5 * (edges[k] + edges[k + 1])))
            cv.append(np.max(np.abs(v[sel])))
    return np.array(cx), np.array(cv)


def bounded_verdict(x, normalized):
    """Operational boundedness test on a grid.

    Bounded when the supremum of |normalized| over the top half of the grid is
    at most 1.1 times that over the bottom half, or when the fitted slope of
    log|normalized| against log log x is at most 0.05.  The slope is fitted to
    block maxima (20 blocks in log x) so zeros of an oscillating remainder do
    not dominate the fit.  Returns ``(verdict, trend_slope)``.
    """
    x = np.asarray(x, dtype=float)
    v = np.abs(np.asarray(normalized, dtype=float))
    half = x.size // 2
    top, bottom = np.max(v[half:]), np.max(v[:half])
    cx, cv = _block_envelope(x, v)
    pos = cv > 0
    if pos.sum() >= 2:
        slope = float(np.polyfit(np.log(np.log(cx[pos])), np.log(cv[pos]), 1)[0])
    else:
        slope = -math.inf
    ok = top <= SUP_RATIO * bottom or slope <= TREND_SLOPE
    return ("bounded" if ok else "unbounded-trend"), slope


def _check_grid(system, grid):
    grid = np.asarray(grid, dtype=float)
    if grid.size < 8:
        raise ProfileError("profile grid needs at least 8 points")
    if np.any(np.diff(grid) <= 0):
        raise ProfileError("profile grid must be strictly increasing")
    if grid[0] < 2:
        raise ProfileError("profile grid must start at x >= 2")
    if grid[-1] > system.x_max * (1 + 1e-12):
        raise ProfileError(f"grid reaches {grid[-1]:g} beyond the stored range {system.x_max:g}")
    return grid


def _remainder(system, target, a):
    if target == "N_minus_ax":
        return Remainder(system.dN, "linear", a)
    if target == "Pi_minus_Li":
        return Remainder(system.dPi, "Li", 1.0)
    raise ParameterError(f"target must be one of {TARGETS}")


def _finish(target, n, grid, raw, m, a, note="", force=None):
    norm = raw * np.log(grid) ** n / grid
    verdict, trend = bounded_verdict(grid, norm)
    nz = np.abs(raw) > 0
    slope = float(np.polyfit(np.log(grid[nz]), np.log(np.abs(raw[nz])), 1)[0]) if nz.sum() >= 2 else 0.0
    rows = np.column_stack([grid, raw, norm])
    return RemainderProfile(target, int(n), rows, float(np.max(np.abs(norm))), slope, trend,
                            force or verdict, m=m, a=a, note=note)


def _resolve_a(system, target, a):
    if target != "N_minus_ax" or a is not None:
        return a, ""
    if system.density_a is not None:
        return system.density_a, ""
    try:
        return estimate_density_a(system, "ratio_fit").a, ""
    except NoDensityError as exc:
        return None, str(exc)


def remainder_profile(system, target, n, a=None, grid=None):
    """Profile of ``N - a x`` or ``Pi - Li`` normalized by ``x / log^n x``.

    For ``N_minus_ax`` without a known or estimable density the profile is
    computed with ``a = N(X)/X`` and its verdict is ``no-density``.
    """
    grid = _check_grid(system, default_grid(system.x_max) if grid is None else grid)
    a, note = _resolve_a(system, target, a)
    force = None
    if target == "N_minus_ax" and a is None:
        a = float(system.dN.cumulative(system.x_max) / system.x_max)
        force = "no-density"
    raw = np.asarray(_remainder(system, target, a)(grid), dtype=float)
    return _finish(target, n, grid, raw, None, a, note, force)


def cesaro_remainder_profile(system, target, n, cfg=None, grid=None):
    """As :func:`remainder_profile` with each raw value replaced by its Riesz mean of order ``cfg.m``."""
    cfg = CesaroConfig() if cfg is None else cfg
    grid = _check_grid(system, default_grid(system.x_max) if grid is None else grid)
    a, note = _resolve_a(system, target, None)
    force = None
    if target == "N_minus_ax" and a is None:
        a = float(system.dN.cumulative(system.x_max) / system.x_max)
        force = "no-density"
    raw = _remainder(system, target, a).cesaro_means(grid, cfg.m)
    return _finish(target, n, grid, raw, cfg.m, a, note, force)


# -------------------------------------------------------------- density
@dataclass(frozen=True)
class DensityEstimate:
    a: float
    error: float
    method: str
    slope: float | None = None
    other: float | None = None

    @property
    def discrepancy(self):
        return None if self.other is None else abs(self.a - self.other)


def _ratio_fit(system, X):
    xs = np.geomspace(X / 10, X, 200)
    N = system.dN.cumulative(xs)
    r = N / xs
    if np.any(r <= 0):
        raise NoDensityError("N(x)/x vanishes on the top decade", slope=-math.inf)
    slope = float(np.polyfit(np.log(xs), np.log(r), 1)[0])
    if abs(slope) > TREND_SLOPE:
        raise NoDensityError(f"N(x)/x drifts with log-log slope {slope:.3g} on the top decade",
                             slope=slope)
    # N/x = a + b/x by least squares, so a constant offset in N does not bias a
    A = np.column_stack([np.ones_like(xs), 1 / xs])
    coef, *_ = np.linalg.lstsq(A, r, rcond=None)
    resid = r - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid**2))), slope


def estimate_density_a(system, method="ratio_fit", X=None):
    """Estimate the density a of N, with the other method's value as a discrepancy diagnostic.

    ``ratio_fit`` fits N(x)/x = a + b/x over the top decade of [1, X] and raises
    :class:`NoDensityError` when the ratio drifts (log-log slope above 0.05).
    ``g1_exp`` returns exp(G1(1)) from the Pi remainder path.
    """
    X = system.x_max if X is None else min(float(X), system.x_max)

    def g1():
        g = g1_function(system, 1.0, X=None if X == system.x_max else X)
        a = math.exp(g.value.real)
        return a, a * math.expm1(g.error)

    if method == "ratio_fit":
        a, err, slope = _ratio_fit(system, X)
        other = None
        if system.pi_tail is not None:
            other = g1()[0]
        return DensityEstimate(a, err, method, slope, other)
    if method == "g1_exp":
        a, err = g1()
        try:
            other = _ratio_fit(system, X)[0]
        except NoDensityError:
            other = None
        return DensityEstimate(a, err, method, None, other)
    raise ParameterError("method must be 'ratio_fit' or 'g1_exp'")


# ------------------------------------------------------------ transforms
@dataclass(frozen=True)
class LaplaceReport:
    s: complex
    left: complex
    right: complex
    left_error: float
    right_error: float
    u_used: float

    @property
    def gap(self):
        return abs(self.left - self.right)

    @property
    def ok(self):
        return self.gap <= self.left_error + self.right_error + 1e-12

    def as_dict(self):
        return {"s": [self.s.real, self.s.imag], "left": [self.left.real, self.left.imag],
                "right": [self.right.real, self.right.imag], "gap": self.gap,
                "error": self.left_error + self.right_error, "u_used": self.u_used}


def laplace_delta_check(system, a=None, s=1.0, u_max=20.0, tail=None):
    """Compare ``int_0^oo e^{-su} Delta(u) du`` with ``(zeta(s+1) - a - a/s)/(s+1)``.

    ``Delta(u) = e^{-u}(N(e^u) - a e^u)``.  The left side is integrated in
    closed form on every piece of the stored range up to ``min(u_max, log x_max)``
    (reported as ``u_used``), with the tail model bounding the rest.  The right
    side is ``(G(s+1) - a)/(s+1)``: the transform of ``dS - dT`` with
    ``T = a e^u`` differs from ``G`` by the constant ``a`` (the jump of T at 0).
    """
    s = complex(s)
    if not s.real > 0:
        raise ParameterError("laplace_delta_check needs Re s > 0")
    a = system.density_a if a is None else a
    tail = tail or system.n_tail
    X = min(math.exp(u_max), system.dN.x_max)
    b, c0, c1 = system.dN.breakpoints(X)
    w = s + 1
    lo, hi = b[:-1], b[1:]

    def pw(e):
        # int_lo^hi x^{e} dx for complex e != -1, computed stably
        return (hi ** (e + 1) - lo ** (e + 1)) / (e + 1)

    # integrand (c0 + (c1 - a) x) x^{-w-1}
    left = complex(np.sum(c0 * pw(-w - 1) + (c1 - a) * pw(-w)))
    left_err = 1e-15 * float(np.sum(np.abs(c0 * pw(-s.real - 2)) + np.abs((c1 - a) * pw(-s.real - 1))))
    u_used = math.log(X)
    if X < math.exp(u_max) or math.isfinite(u_max):
        if tail is None:
            raise ParameterError("a tail model is needed beyond the stored range")
        if abs(tail.density - a) > 0:
            raise ParameterError("tail model density must equal a")
        p = tail.power
        if not s.real + 1 > p:
            raise ParameterError("tail of the Laplace integral diverges")
        # |N - a x - offset| <= C x^p beyond X (log factor dropped: log x >= 1 there)
        left_err += tail.C * X ** (p - s.real - 1) / (s.real + 1 - p)
        left_err += abs(tail.offset) * X ** (-s.real - 1) / (s.real + 1)
    g = g_function(system, a, w)
    right = (g.value - a) / w
    return LaplaceReport(s, left, right, left_err, g.error / abs(w), u_used)


@dataclass
class VariationReport:
    rows: np.ndarray  # x, V, normalized
    verdict: str
    trend_slope: float

    def as_dict(self):
        return {"verdict": self.verdict, "slope": self.trend_slope,
                "sup": float(np.max(np.abs(self.rows[:, 2]))) if self.rows.size else 0.0}


def variation_bound_check(system, grid, a=None):
    """Total variation of d(N - a x) on [1, x], normalized by x / log x.

    The main term ``a x 1[x >= 1]`` jumps by a at x = 1, so the atom of N at 1
    contributes ``|m_1 - a|``; other atoms contribute ``|m|`` and the
    absolutely continuous part ``int |n(x) - a| dx``.
    """
    a = system.density_a if a is None else a
    if a is None:
        raise ParameterError("variation check needs a density a")
    grid = np.asarray(grid, dtype=float)
    dN = system.dN
    if grid.size and grid[-1] > dN.x_max * (1 + 1e-12):
        raise RangeError("variation requested beyond the stored range")
    upper = float(grid[-1]) if grid.size else 1.0
    jumps = dN.m[dN.x <= upper].astype(float)
    ax = dN.x[dN.x <= upper]
    if ax.size and ax[0] == 1.0:
        jumps[0] -= a
    else:
        ax, jumps = np.concatenate(([1.0], ax)), np.concatenate(([-a], jumps))
    cj = np.cumsum(np.abs(jumps))
    b, _, c1 = dN.breakpoints(max(upper, 1.0 + 1e-12))
    drift = PiecewiseLinear(b, np.abs(c1 - a))
    V = np.where(grid >= 1, cj[np.clip(np.searchsorted(ax, grid, side="right") - 1, 0, None)], 0.0)
    V = V + np.where(grid >= 1, _integral_upto(drift, grid), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        norm = np.where(grid > 1, V * np.log(grid) / grid, 0.0)
    rows = np.column_stack([grid, V, norm])
    if grid.size >= 8 and np.all(grid > 1):
        verdict, slope = bounded_verdict(grid, norm)
    else:
        verdict, slope = "insufficient-grid", math.nan
    return VariationReport(rows, verdict, slope)


def _integral_upto(f, xs):
    # int_{b0}^x f(u) du for a PiecewiseLinear f
    b1, b2 = f.b[:-1], f.b[1:]
    piece = f.c0 * (b2 - b1) + f.c1 * (b2**2 - b1**2) / 2
    P = np.concatenate(([0.0], np.cumsum(piece)))
    j = np.clip(np.searchsorted(f.b, xs, side="right") - 1, 0, f.c0.size - 1)
    lo = f.b[j]
    hi = np.clip(xs, lo, f.b[j + 1])
    part = f.c0[j] * (hi - lo) + f.c1[j] * (hi**2 - lo**2) / 2
    return np.where(xs >= f.b[0], P[j] + part, 0.0)
