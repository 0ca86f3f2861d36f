"""Zeta functions of generalized number systems and boundary-line diagnostics.

Three independent routes to zeta are provided for Re s > 1 (Dirichlet
integral against dN, Euler product, exponential of the integral against dPi).
On Re s = 1 everything goes through remainder integrals, either of
``d(N - a x)`` (giving ``G = zeta - a/(s-1)``) or of ``d(Pi - T1)`` (giving
``G1 = log zeta - log s + log(s-1)``).
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .errors import DivergenceError, FitError, ParameterError, PreconditionError
from .measures import (
    ROUND,
    GeneralizedNumberSystem,
    PowerKernel,
    TailModel,
    remainder_transform,
    stieltjes_integral,
)
from .semigroup import PrimeSequence

__all__ = [
    "BoundaryScan",
    "Report341",
    "TailModel",
    "ZetaValue",
    "boundary_scan",
    "classify_scans",
    "envelope_tail",
    "fit_growth_exponent",
    "g1_function",
    "g_derivative",
    "g_function",
    "inequality_341",
    "inverse_zeta_scan",
    "zeta_dirichlet",
    "zeta_euler",
    "zeta_exp_pi",
]

DEFAULT_SIGMAS = (1.0, 1.01, 1.1, 1.5, 2.0)
CLASS_THRESHOLD = 0.25


@dataclass(frozen=True)
class ZetaValue:
    """A complex value with an absolute error bound (estimate when a tail was fitted)."""

    value: complex
    error: float = 0.0

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)

    @property
    def rel_error(self):
        return self.error / abs(self.value) if self.value else math.inf


def envelope_tail(dN, density=0.0, top=10.0):
    """Fitted growth envelope ``|N(x) - density x| <= C x**p`` for use beyond the stored range.

    ``p`` is the local log-log slope over the top ``top``-fold range plus 0.25,
    capped at 1, and ``C`` the largest ratio seen there.  This is an estimate,
    flagged in the model note.
    """
    X = dN.x_max
    xs = np.geomspace(max(X / top, 1.0 + 1e-9), X, 64)
    E = np.abs(dN.cumulative(xs) - density * xs) + 1.0
    slope = np.polyfit(np.log(xs), np.log(E), 1)[0] if X > 2 else 0.0
    p = float(min(1.0, max(0.0, slope) + 0.25))
    C = float(np.max(E / xs**p))
    return TailModel(C=C, gamma=0.0, power=p, density=density, note="fitted envelope")


def _as_system_tail(system, tail, attr):
    if tail is not None:
        return tail
    tail = getattr(system, attr)
    if tail is None and attr == "n_tail":
        tail = envelope_tail(system.dN)
    return tail


def zeta_dirichlet(system, s, X=None, tail=None):
    """zeta(s) = int x^-s dN over [1-, X] plus the declared tail.

    For ``Re s > 1`` the tail model of ``N - a x`` (or a fitted envelope) closes
    the integral.  For ``Re s <= 1`` only the remainder path is allowed:
    ``zeta = G(s) + a/(s-1)`` with ``G`` from :func:`g_function`.
    """
    s = complex(s)
    tail = _as_system_tail(system, tail, "n_tail")
    if s.real > 1:
        r = remainder_transform(system.dN, s, 0, 0.0, main="linear", tail=tail, X=X)
        return ZetaValue(r.value, r.error)
    if s == 1:
        raise DivergenceError("zeta has a pole at s = 1", bound=math.inf)
    if tail is None or not tail.density:
        raise DivergenceError("Re s <= 1 needs the remainder path (a tail model with a density)",
                              bound=math.inf)
    a = tail.density
    g = g_derivative(system, a, 0, s, X=X, tail=tail)
    return ZetaValue(g.value + a / (s - 1), g.error)


def zeta_euler(primes, s, X=None):
    """Euler product over primes <= X, accumulated in log space.

    The error bound uses ``|log zeta - log zeta_X| <= T / (1 - p1**-sigma)`` with
    ``T`` a bound for the sum of ``p**-sigma`` over the omitted primes.
    """
    if isinstance(primes, GeneralizedNumberSystem):
        primes = primes.primes
    if not isinstance(primes, PrimeSequence):
        primes = PrimeSequence(primes)
    s = complex(s)
    sigma = s.real
    if not sigma > 1:
        raise DivergenceError("Euler product needs Re s > 1", bound=math.inf)
    top = primes.bound if X is None else min(X, primes.bound)
    P = primes.upto(top) if not math.isinf(top) else primes.values
    terms = np.log1p(-np.exp(-s * np.log(P))) if P.size else np.zeros(0)
    logz = -np.sum(terms) if P.size else 0j
    z = cmath.exp(complex(logz))
    rounding = ROUND * (P.size + 2) * (float(np.sum(np.abs(terms))) + 1.0)
    if not len(primes):
        return ZetaValue(z, abs(z) * rounding)
    T = primes.tail_sum_bound(sigma, top if not math.isinf(top) else np.inf)
    delta = T / (1 - primes.p1 ** (-sigma)) + rounding
    return ZetaValue(z, abs(z) * math.expm1(delta) if math.isfinite(delta) else math.inf)


def _prime_power_tail(primes, sigma, X):
    # bound for the sum over p^j > X of p^{-j sigma}/j, every p <= X contributing its powers
    P = primes.upto(X)
    lp = np.log(P)
    j = np.floor(math.log(X) / lp + 1e-12) + 1
    small = np.sum(np.exp(-j * sigma * lp) / (j * (1 - np.exp(-sigma * lp))))
    big = primes.tail_sum_bound(sigma, X) / (1 - primes.p1 ** (-sigma))
    return float(small + big)


def zeta_exp_pi(system, s, X=None, tail=None):
    """zeta(s) = exp(int x^-s dPi), the integral truncated at X.

    Discrete systems get a rigorous bound from the omitted prime powers; other
    systems use the tail model of ``Pi`` (``system.pi_tail`` by default).
    """
    s = complex(s)
    if not s.real > 1:
        raise DivergenceError("zeta_exp_pi needs Re s > 1", bound=math.inf)
    dPi = system.dPi
    if X is None:
        X = dPi.x_max
    if system.primes is not None and dPi.is_atomic and tail is None:
        r = stieltjes_integral(PowerKernel(s), dPi, X)
        if not len(system.primes):
            return ZetaValue(cmath.exp(r.value), 0.0)
        bound = _prime_power_tail(system.primes, s.real, X) if math.isfinite(X) else 0.0
        bound += r.quad_error
        z = cmath.exp(r.value)
        return ZetaValue(z, abs(z) * math.expm1(bound))
    tail = tail or system.pi_tail
    if tail is None and math.isfinite(X):
        raise PreconditionError(f"system {system.label!r} has no tail model for Pi")
    r = remainder_transform(dPi, s, 0, 0.0, main=tail.main if tail else "linear", tail=tail, X=X)
    z = cmath.exp(r.value)
    return ZetaValue(z, abs(z) * math.expm1(r.error))


def g1_function(system, s, X=None, tail=None, n=0):
    """n-th derivative of G1(s) = log zeta(s) - Log s + Log(s - 1).

    Computed as ``int (-u)^n e^{-su} d(S1 - T1)(u)`` with ``S1(u) = Pi(e^u)`` and
    ``T1(u) = li(e^u) - gamma - log u``; this is the remainder path and works on
    Re s = 1 when the Pi tail model allows it.  For discrete systems off the
    line, without a Pi tail model, the rigorous prime-power route is used.
    The value is the branch continuous in s from the real axis, which equals
    the principal one wherever |Im log zeta| < pi.
    """
    s = complex(s)
    tail = tail or system.pi_tail
    if tail is None:
        if not (system.primes is not None and s.real > 1):
            raise PreconditionError(f"system {system.label!r} has no Pi tail model for G1")
        if X is None:
            X = system.dPi.x_max
        r = stieltjes_integral(PowerKernel(s, n), system.dPi, X)
        err = _prime_power_tail(system.primes, s.real, X) * math.log(max(X, math.e)) ** n
        if n == 0:
            corr = cmath.log(s / (s - 1))
        else:
            corr = (-1) ** (n - 1) * factorial(n - 1) * (s ** -n - (s - 1) ** -n)
        return ZetaValue(r.value - corr, err + r.quad_error)
    if tail.main != "li":
        raise ParameterError("G1 needs a Pi tail model with main='li'")
    r = remainder_transform(system.dPi, s, n, 1.0, main="li", tail=tail, X=X)
    return ZetaValue(r.value, r.error)


def _g_from_g1(system, a, a_err, n, s, X, tail):
    # G = (s e^{G1} - a)/(s - 1) differentiated by Leibniz; near s = 1 use the Taylor limit
    near = abs(s - 1) < 1e-6
    top = n + 1 if near else n
    g = [g1_function(system, s, X=X, tail=tail, n=k) for k in range(top + 1)]
    gv = [x.value for x in g]
    ge = [x.error for x in g]
    E = [cmath.exp(gv[0])]
    dE = [abs(E[0]) * ge[0]]
    for k in range(1, top + 1):
        E.append(sum(comb(k - 1, j) * gv[j + 1] * E[k - 1 - j] for j in range(k)))
        dE.append(sum(comb(k - 1, j) * (ge[j + 1] * abs(E[k - 1 - j]) + abs(gv[j + 1]) * dE[k - 1 - j])
                      for j in range(k)))
    H = [s * E[k] + (k * E[k - 1] if k else 0) for k in range(top + 1)]
    dH = [abs(s) * dE[k] + (k * dE[k - 1] if k else 0) for k in range(top + 1)]
    H[0] -= a
    dH[0] += a_err
    if near:
        return ZetaValue(H[n + 1] / (n + 1), dH[n + 1] / (n + 1) + abs(s - 1) * abs(H[n + 1]))
    val, err = 0j, 0.0
    for k in range(n + 1):
        w = comb(n, k) * factorial(n - k) / (s - 1) ** (n - k + 1)
        val += w * H[k] * (-1) ** (n - k)
        err += abs(w) * dH[k]
    return ZetaValue(val, err)


def g_derivative(system, a=None, n=0, s=2.0, X=None, tail=None, route="auto"):
    """n-th derivative of G(s) = zeta(s) - a/(s-1).

    ``route='N'`` integrates ``(-log x)^n x^-s`` against ``d(N - a x)`` (exact
    kernel differentiation, the main term handled in closed form).
    ``route='Pi'`` differentiates ``(s e^{G1(s)} - a)/(s-1)`` with the G1
    derivatives from the Pi remainder path; it is preferred automatically
    when the Pi tail of the system is given exactly.

    Raises
    ------
    PreconditionError
        No tail model on Re s <= 1.
    TailTooWeakError
        The tail model decays too slowly for order n on Re s = 1.
    """
    s = complex(s)
    if n < 0:
        raise ParameterError("derivative order must be >= 0")
    if a is None:
        a = system.density_a
    if a is None:
        raise PreconditionError(f"system {system.label!r} has no density a")
    if route == "auto":
        pt = system.pi_tail
        route = "Pi" if pt is not None and pt.exact is not None else "N"
    if route == "Pi":
        a_err = system.meta.get("density_a_error", 0.0) if a == system.density_a else 0.0
        return _g_from_g1(system, a, a_err, n, s, X, tail)
    tail = tail or system.n_tail
    if tail is None:
        if not s.real > 1:
            raise PreconditionError(f"system {system.label!r}: Re s <= 1 needs a tail model for N - a x")
        tail = envelope_tail(system.dN)
    r = remainder_transform(system.dN, s, n, a, main="linear", tail=tail, X=X)
    return ZetaValue(r.value, r.error)


def g_function(system, a=None, s=2.0, X=None, tail=None, route="auto"):
    """G(s) = zeta(s) - a/(s-1); the n = 0 case of :func:`g_derivative`."""
    return g_derivative(system, a, 0, s, X=X, tail=tail, route=route)


# ------------------------------------------------------------------ 3-4-1
@dataclass(frozen=True)
class Report341:
    eta: float
    t: float
    value: float
    error: float

    @property
    def margin(self):
        return self.value - 1.0

    @property
    def ok(self):
        return self.value >= 1.0 - self.error


def inequality_341(system, eta, t, X=None, route="dirichlet"):
    """|zeta(eta)^3 zeta(eta+it)^4 zeta(eta+2it)| against 1, with a propagated error bound."""
    if not eta > 1:
        raise ParameterError("eta must exceed 1")
    fn = {"dirichlet": zeta_dirichlet, "exp_pi": zeta_exp_pi, "euler": zeta_euler}[route]
    zs = [fn(system, complex(eta, k * t), X) for k in (0, 1, 2)]
    logp = 3 * math.log(abs(zs[0])) + 4 * math.log(abs(zs[1])) + math.log(abs(zs[2]))
    rel = 3 * zs[0].rel_error + 4 * zs[1].rel_error + zs[2].rel_error
    val = math.exp(logp)
    return Report341(float(eta), float(t), val, val * math.expm1(rel) if rel < 50 else math.inf)


def P341(theta):
    """3 + 4 cos(theta) + cos(2 theta) = 2 (1 + cos theta)^2."""
    return 3 + 4 * np.cos(theta) + np.cos(2 * theta)


# ------------------------------------------------------------------ scans
@dataclass
class BoundaryScan:
    """Samples of a function on the line sigma + it with a log-log growth fit."""

    sigma: float
    n: int
    t_grid: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    beta_hat: float = math.nan
    residual: float = math.nan
    label: str = ""
    flags: list = field(default_factory=list)

    @property
    def moduli(self):
        return np.abs(self.values)

    @property
    def samples(self):
        return list(zip(self.t_grid.tolist(), self.moduli.tolist()))

    def to_csv(self):
        lines = ["t,re,im,modulus,error_bound"]
        for t, v, e in zip(self.t_grid, self.values, self.errors):
            lines.append(f"{t!r},{v.real!r},{v.imag!r},{abs(v)!r},{e!r}")
        return "\n".join(lines) + "\n"

    def summary(self):
        return {"n": self.n, "sigma": self.sigma, "beta_hat": self.beta_hat,
                "residual": self.residual,
                "grid": {"tmin": float(self.t_grid[0]), "tmax": float(self.t_grid[-1]),
                         "count": int(self.t_grid.size)}}

    def summary_json(self):
        return json.dumps(self.summary(), sort_keys=True)


def fit_growth_exponent(scan, min_span=100.0):
    """Least-squares slope of log|value| against log t.

    Returns ``(beta_hat, residual)`` with the RMS residual of the fit.  Needs at
    least 8 samples with positive t and ``max t / min t >= min_span`` (two
    decades by default).
    """
    if isinstance(scan, BoundaryScan):
        t, mod = scan.t_grid, scan.moduli
    else:
        t, mod = (np.asarray(v, dtype=float) for v in zip(*scan))
    t = np.abs(np.asarray(t, dtype=float))
    mod = np.asarray(mod, dtype=float)
    if t.size < 8:
        raise FitError("growth fit needs at least 8 samples")
    if np.any(t <= 0) or np.any(mod <= 0) or not np.all(np.isfinite(mod)):
        raise FitError("growth fit needs positive t and positive finite moduli")
    if t.max() / t.min() < min_span * (1 - 1e-9):
        raise FitError(f"t grid must span a factor of at least {min_span:g}")
    lt, lm = np.log(t), np.log(mod)
    A = np.vstack([lt, np.ones_like(lt)]).T
    coef, *_ = np.linalg.lstsq(A, lm, rcond=None)
    resid = lm - A @ coef
    beta = float(coef[0])
    if abs(beta) < 1e-13:
        beta = 0.0
    return beta, float(np.sqrt(np.mean(resid**2)))


def default_t_grid(system, count=40):
    lo, hi = system.meta.get("scan_window", (2.0, 200.0))
    return np.geomspace(lo, hi, count)


def boundary_scan(system, n, sigma=1.0, t_grid=None, X=None, a=None, route="auto"):
    """Sample G^(n)(sigma + it) on a t grid and fit its growth exponent."""
    t_grid = default_t_grid(system) if t_grid is None else np.asarray(t_grid, dtype=float)
    vals, errs = [], []
    for t in t_grid:
        v = g_derivative(system, a, n, complex(sigma, t), X=X, route=route)
        vals.append(v.value)
        errs.append(v.error)
    scan = BoundaryScan(float(sigma), int(n), t_grid, np.array(vals), np.array(errs), label=system.label)
    scan.beta_hat, scan.residual = fit_growth_exponent(scan)
    return scan


def classify_scans(scans, threshold=CLASS_THRESHOLD):
    """'O_C-like' if every beta_hat <= threshold, 'O_M-like' if instead they
    increase strictly with n, else 'neither'."""
    scans = sorted(scans, key=lambda sc: sc.n)
    betas = [sc.beta_hat for sc in scans]
    if all(b <= threshold for b in betas):
        return "O_C-like"
    if all(b2 > b1 for b1, b2 in itertools.pairwise(betas)):
        return "O_M-like"
    return "neither"


def inverse_zeta_scan(system, t_grid, X=None, sigma=1.0, slope_tol=0.2):
    """Sample |1/zeta(sigma + it)|, fit its growth, and flag potential zeros.

    A sample whose |zeta| does not exceed its own error bound is flagged.  The
    scan's ``bounded`` verdict (stored in ``flags`` as ``'bounded'``) needs no
    flags and either a fitted slope within ``slope_tol`` or a top-half
    supremum at most 1.1 times the bottom-half supremum.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    vals, errs, flags = [], [], []
    for t in t_grid:
        z = zeta_dirichlet(system, complex(sigma, t), X)
        if abs(z.value) <= z.error:
            flags.append(f"potential-zero t={t!r}")
            vals.append(math.inf)
            errs.append(math.inf)
            continue
        vals.append(1.0 / z.value)
        errs.append(z.error / (abs(z.value) * (abs(z.value) - z.error)))
    scan = BoundaryScan(float(sigma), 0, t_grid, np.array(vals, dtype=complex), np.array(errs),
                        label=system.label, flags=flags)
    if not flags:
        # boundedness rests on the sup test as much as the slope, so short windows are allowed
        scan.beta_hat, scan.residual = fit_growth_exponent(scan, min_span=2.0)
        mod = scan.moduli
        half = mod.size // 2
        if abs(scan.beta_hat) <= slope_tol or mod[half:].max() <= 1.1 * mod[:half].max():
            scan.flags.append("bounded")
    return scan
