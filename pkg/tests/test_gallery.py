import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import partitions_dp
from scipy import integrate

from beurling.errors import DomainError, ParameterError, SizeError
from beurling.gallery import (
    HR_A,
    alpha_density_u,
    asymptote_example1,
    build_system,
    gallery_names,
    hardy_ramanujan,
    partition_numbers,
    pi_alpha_at,
    system_continuous_alpha,
    system_ordinary,
)
from beurling.zeta import zeta_dirichlet, zeta_exp_pi


def test_partitions_match_dp():
    p = partition_numbers(400)
    assert p == partitions_dp(400)
    assert p[10] == 42 and p[100] == 190569292
    assert p[400] == 6727090051741041926
    assert partition_numbers(1000)[-1] == 24061467864032622473692149727991  # beyond 64 bits


def test_hardy_ramanujan():
    p = partition_numbers(400)
    r = {n: p[n] / hardy_ramanujan(n) for n in (50, 100, 400)}
    assert 0.9 < r[100] < 1.0
    assert abs(r[400] - 1) < abs(r[50] - 1)
    vals = [hardy_ramanujan(n) for n in range(1, 200)]
    assert all(b > a for a, b in itertools.pairwise(vals))
    with pytest.raises(DomainError):
        hardy_ramanujan(0)


def test_asymptote_constant():
    assert HR_A == math.sqrt(math.log(2)) / (2 * math.pi * math.sqrt(2))
    assert HR_A == pytest.approx(0.09369531, abs=1e-8)
    vals = [asymptote_example1(2.0**m) for m in range(2, 200)]
    assert all(b > a for a, b in itertools.pairwise(vals))


def test_powers2_comparators(powers2):
    c = powers2.comparators
    assert c["pi"](100.0) == 6
    for x, v in c["N_at_powers"].items():
        assert powers2.N(x) == v


def test_sparse2k(sparse2k):
    assert sparse2k.primes.values[:5].tolist() == [2, 3, 7, 19, 53]
    assert sparse2k.primes.count(100) == 5


def test_ordinary_examples(ordinary):
    assert ordinary.primes.count(100) == 25
    assert ordinary.N(1e4) == 1e4
    assert ordinary.primes.p1 == 2


def test_pi_alpha_two_quadratures():
    direct = integrate.quad(lambda x: (1 - math.cos(math.log(x) ** 2)) / math.log(x) if x > 1 else 0.0,
                            1, math.e, epsabs=1e-14, epsrel=1e-13)[0]
    sub = integrate.quad(lambda u: (1 - math.cos(u * u)) / u * math.exp(u) if u else 0.0,
                         0, 1, epsabs=1e-14, epsrel=1e-13)[0]
    assert abs(direct - sub) <= 1e-8
    assert pi_alpha_at(2.0, math.e) == pytest.approx(sub, abs=1e-10)
    assert pi_alpha_at(2.0, 1.0) == 0


@given(st.floats(0, 30), st.floats(1.01, 4))
def test_alpha_density_nonnegative(u, alpha):
    assert alpha_density_u(alpha)(u) >= 0


def test_alpha_system(alpha2):
    xs = np.geomspace(1, alpha2.x_max, 300)
    assert np.all(np.diff(alpha2.dN.cumulative(xs)) >= -1e-9)
    for x in (math.e, 100.0, 1e5):
        assert alpha2.Pi(x) == pytest.approx(pi_alpha_at(2.0, x), rel=1e-6)
    for s in (2, 2 + 5j):
        a, b = zeta_dirichlet(alpha2, s), zeta_exp_pi(alpha2, s)
        assert abs(a.value - b.value) <= a.error + b.error
    with pytest.raises(DomainError):
        system_continuous_alpha(1.0, 1e3)


def test_registry():
    assert gallery_names() == ["ordinary", "powers2", "sparse2k", "continuous-alpha:<alpha>"]
    S = build_system("continuous-alpha:1.5", 1e3, 512)
    assert S.meta["gallery"] == "continuous-alpha:1.5"
    assert build_system("ordinary", 1e3).N(1e3) == 1000
    with pytest.raises(ParameterError):
        build_system("nope")
    with pytest.raises(SizeError):
        build_system("powers2", 1e40)


def test_ordinary_without_pi_tail():
    assert system_ordinary(500.0).pi_tail is None
