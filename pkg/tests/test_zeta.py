import cmath
import math

import mpmath
import numpy as np
import pytest
from helpers import linear_system
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import g1_alpha2

from beurling.errors import DivergenceError, FitError, PreconditionError
from beurling.measures import (
    GeneralizedNumberSystem,
    TailModel,
    binned_density_measure,
)
from beurling.primedist import riemann_pi_measure
from beurling.semigroup import PrimeSequence, enumerate_integers
from beurling.zeta import (
    P341,
    BoundaryScan,
    boundary_scan,
    classify_scans,
    fit_growth_exponent,
    g1_function,
    g_derivative,
    g_function,
    inequality_341,
    inverse_zeta_scan,
    zeta_dirichlet,
    zeta_euler,
    zeta_exp_pi,
)


def finite_system(primes, x_max):
    pr = PrimeSequence(primes)
    return GeneralizedNumberSystem(enumerate_integers(pr, x_max), riemann_pi_measure(pr, x_max), pr)


def scan_of(n, beta):
    t = np.geomspace(1, 1000, 20)
    return BoundaryScan(1.0, n, t, t**beta + 0j, np.zeros_like(t), beta_hat=beta)


@pytest.mark.parametrize("s", [2, 3, 2 + 5j])
def test_ordinary_matches_mpmath(ordinary, s):
    want = complex(mpmath.zeta(s))
    for fn in (zeta_dirichlet, zeta_exp_pi, zeta_euler):
        z = fn(ordinary, s)
        assert abs(z.value - want) <= z.error + 1e-13
        assert z.rel_error <= 1e-6


def test_finite_products():
    two = finite_system([2.0], 2.0**40)
    assert zeta_euler(PrimeSequence([2.0]), 2).value == pytest.approx(4 / 3, abs=1e-15)
    assert zeta_euler(PrimeSequence([2.0, 3.0]), 2).value == pytest.approx(3 / 2, abs=1e-15)
    assert zeta_exp_pi(two, 2).value == pytest.approx(4 / 3, abs=1e-12)
    z = zeta_dirichlet(finite_system([2.0, 3.0], 1e6), 2)
    assert abs(z.value - 1.5) <= z.error
    empty = finite_system([], 100.0)
    assert zeta_exp_pi(empty, 2).value == 1
    assert zeta_euler(PrimeSequence([]), 2 + 1j).value == 1


def test_divergence_guards(ordinary):
    with pytest.raises(DivergenceError):
        zeta_euler(ordinary, 1.0)
    with pytest.raises(DivergenceError):
        zeta_exp_pi(ordinary, 0.5 + 1j)
    with pytest.raises(DivergenceError):
        zeta_dirichlet(ordinary, 1.0)


def test_linear_system_closed_forms():
    S = linear_system(1.0)
    assert abs(zeta_dirichlet(S, 2).value - 2) <= 1e-9
    for s in (2.0, 1 + 1j, 1 + 20j, 1.3 - 4j):
        g = g_function(S, s=s)
        assert abs(g.value - 1) <= g.error + 1e-9
        d = g_derivative(S, n=1, s=s)
        assert abs(d.value) <= d.error + 1e-9
    # on the line the remainder path gives zeta = G + a/(s - 1)
    z = zeta_dirichlet(S, 1 + 3j)
    assert abs(z.value - (1 + 3j) / 3j) <= z.error + 1e-9


def test_ordinary_g_values(ordinary):
    g = g_function(ordinary, s=2.0)
    assert abs(g.value - (math.pi**2 / 6 - 1)) <= g.error + 1e-12
    d = g_derivative(ordinary, n=1, s=2.0)
    assert abs(d.value - (float(mpmath.zeta(2, derivative=1)) + 1)) <= d.error + 1e-12
    z = zeta_dirichlet(ordinary, 2.5 + 1j)
    g = g_derivative(ordinary, 1.0, 0, 2.5 + 1j)
    assert abs(g.value + 1 / (1.5 + 1j) - z.value) <= 1e-12


def test_g1_vanishes_for_linear_system():
    U = 10.0
    dN = linear_system(1.0, U=U).dN
    dPi = binned_density_measure(lambda u: np.where(u > 0, np.expm1(u) / np.maximum(u, 1e-300), 1.0), U, 4096)
    tail = TailModel(C=0.0, gamma=0.0, power=0.0, main="li", density=1.0, note="exact")
    S = GeneralizedNumberSystem(dN, dPi, None, density_a=1.0, pi_tail=tail, pi_main="li")
    for s in (2.0, 1.5 + 2j):
        g = g1_function(S, s)
        assert abs(g.value) <= g.error + 1e-9


def test_ordinary_g1(ordinary):
    want = math.log(math.pi**2 / 6) - math.log(2)
    g = g1_function(ordinary, 2.0)
    assert abs(g.value - want) <= g.error + 1e-12
    # (s - 1) zeta(s) / s -> 1 as s -> 1
    g = g1_function(ordinary, 1.0)
    assert abs(cmath.exp(g.value) - 1) <= 1e-3


@pytest.mark.parametrize("s", [1.5, 2.0, 1.5 + 3j, 2 - 7j])
def test_three_routes_agree(ordinary, s):
    a = zeta_dirichlet(ordinary, s)
    b = zeta_exp_pi(ordinary, s)
    c = zeta_euler(ordinary, s)
    assert abs(a.value - b.value) <= a.error + b.error
    assert abs(a.value - c.value) <= a.error + c.error


@settings(max_examples=20, deadline=None)
@given(st.floats(1.2, 4.0), st.floats(-60, 60))
def test_conjugate_symmetry(sigma, t):
    S = finite_system([2.0, 3.0, 5.0], 1e5)
    for fn in (zeta_dirichlet, zeta_exp_pi):
        z = fn(S, complex(sigma, t)).value
        zb = fn(S, complex(sigma, -t)).value
        assert abs(z - zb.conjugate()) <= 1e-12 * max(1.0, abs(z))


def test_p341():
    assert P341(math.pi) == pytest.approx(0, abs=1e-15)
    th = np.linspace(0, 2 * math.pi, 101)
    assert np.allclose(P341(th), 2 * (1 + np.cos(th)) ** 2)
    assert np.all(P341(th) >= -1e-15)


def test_341_examples(ordinary):
    r = inequality_341(ordinary, 1.5, 1.0)
    assert r.ok and r.value > 1
    r = inequality_341(ordinary, 1.5, 0.0)
    assert r.value == pytest.approx(abs(zeta_dirichlet(ordinary, 1.5).value) ** 8, rel=1e-12)


def test_fit_examples():
    t = np.geomspace(1, 1000, 30)
    assert fit_growth_exponent(list(zip(t, t**0.5)))[0] == pytest.approx(0.5, abs=1e-12)
    beta, res = fit_growth_exponent(list(zip(t, 3 + 0 * t)))
    assert beta == 0.0 and res < 1e-12
    with pytest.raises(FitError):
        fit_growth_exponent(list(zip(t[:5], t[:5])))
    with pytest.raises(FitError):
        fit_growth_exponent(list(zip(np.linspace(1, 10, 20), np.ones(20))))


def test_classify_rules():
    assert classify_scans([scan_of(n, 0.1) for n in range(4)]) == "O_C-like"
    assert classify_scans([scan_of(n, 0.3 * n) for n in range(4)]) == "O_M-like"
    assert classify_scans([scan_of(0, 0.5), scan_of(1, 0.4)]) == "neither"


def test_ordinary_scan_order_zero(ordinary):
    sc = boundary_scan(ordinary, 0, t_grid=np.geomspace(2, 200, 16))
    assert abs(sc.beta_hat) <= 0.15
    assert sc.to_csv().startswith("t,re,im,modulus,error_bound\n")
    assert set(sc.summary()) == {"n", "sigma", "beta_hat", "residual", "grid"}


def test_inverse_scan_linear_system():
    S = linear_system(1.0)
    t = np.linspace(1, 50, 20)
    sc = inverse_zeta_scan(S, t)
    # 1/zeta(1+it) = it/(1+it)
    assert np.allclose(sc.moduli, t / np.sqrt(1 + t**2), rtol=1e-7)
    assert "bounded" in sc.flags


def test_inverse_scan_ordinary(ordinary):
    t = np.geomspace(2, 50, 16)
    sc = inverse_zeta_scan(ordinary, t)
    assert np.all((sc.moduli > 0) & (sc.moduli < 10))
    assert abs(sc.beta_hat) <= 0.2
    small = inverse_zeta_scan(ordinary, np.geomspace(1e-3, 1e-2, 10))
    assert np.allclose(small.moduli, small.t_grid, rtol=0.05)


def test_no_density_on_the_line(powers2):
    with pytest.raises(PreconditionError):
        g_derivative(powers2, None, 0, 2.0)
    with pytest.raises(DivergenceError):
        g_derivative(powers2, 1.0, 0, 1 + 1j)


@pytest.mark.parametrize("s", [1 + 0.5j, 1 + 3j, 1 + 9j])
def test_alpha2_g1_on_the_line(alpha2, s):
    want = g1_alpha2(s)
    g = g1_function(alpha2, s)
    assert abs(g.value - want) <= g.error + 1e-9


def test_alpha2_g1_derivative(alpha2):
    want = g1_alpha2(1 + 2j, n=2)
    g = g1_function(alpha2, 1 + 2j, n=2)
    assert abs(g.value - want) <= g.error + 1e-9


@pytest.mark.parametrize("s", [2, 2 + 5j])
def test_alpha2_two_routes(alpha2, s):
    a = zeta_dirichlet(alpha2, s)
    b = zeta_exp_pi(alpha2, s)
    assert abs(a.value - b.value) <= a.error + b.error
