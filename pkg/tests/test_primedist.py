from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import riemann_pi_exact

from beurling.primedist import (
    chebyshev_gap_check,
    mobius,
    pi_from_riemann_pi,
    riemann_pi_from_pi,
    riemann_pi_measure,
)
from beurling.semigroup import PrimeSequence
from beurling.sieve import primes_upto

RATIONAL = PrimeSequence(primes_upto(10**4).astype(float), bound=1e4, kind="rational")


def test_mobius_matches_sympy():
    for j in range(1, 200):
        assert mobius(j) == int(sympy.mobius(j))


def test_riemann_pi_examples():
    two = PrimeSequence([2.0])
    assert riemann_pi_from_pi(two, 16) == pytest.approx(25 / 12, abs=1e-15)
    assert riemann_pi_from_pi(two, 1.5) == 0
    assert riemann_pi_from_pi(RATIONAL, 30) == pytest.approx(10 + 3 / 2 + 2 / 3 + 1 / 4, abs=1e-14)


def test_riemann_pi_measure_atoms():
    assert riemann_pi_measure(PrimeSequence([2.0]), 10).atoms == pytest.approx([(2, 1), (4, 0.5), (8, 1 / 3)])
    m = riemann_pi_measure(PrimeSequence([2.0, 3.0]), 9)
    assert m.atoms == pytest.approx([(2, 1), (3, 1), (4, 0.5), (8, 1 / 3), (9, 0.5)])
    assert m.cumulative(8.5) == pytest.approx(1 + 1 + 1 / 2 + 1 / 3, abs=1e-15)


def test_roundtrip_examples():
    Pi = riemann_pi_measure(RATIONAL, 1e4)
    assert pi_from_riemann_pi(Pi.cumulative, 2.0, 30) == pytest.approx(10, abs=1e-12)
    two = riemann_pi_measure(PrimeSequence([2.0]), 100)
    assert pi_from_riemann_pi(two.cumulative, 2.0, 16) == pytest.approx(1, abs=1e-12)
    assert pi_from_riemann_pi(two.cumulative, 2.0, 1.9) == 0


def test_measure_matches_pointwise_sum():
    Pi = riemann_pi_measure(RATIONAL, 1e4)
    for x in (2, 10, 97.5, 1000, 9999):
        assert Pi.cumulative(x) == pytest.approx(riemann_pi_from_pi(RATIONAL, x), abs=1e-11)
        assert Pi.cumulative(x) == pytest.approx(float(riemann_pi_exact(primes_upto(int(x)).tolist(), x)),
                                                 rel=1e-13)


def test_chebyshev_gap_examples():
    assert chebyshev_gap_check(RATIONAL, [10, 100, 1000]).ok
    rep = chebyshev_gap_check(PrimeSequence([2.0]), [16.0])
    _x, _pi, _Pi, gap, bound = rep.rows[0]
    assert gap == pytest.approx(13 / 12) and bound == pytest.approx(5)
    rep = chebyshev_gap_check(PrimeSequence([2.0]), [1.5])
    assert rep.ok and tuple(rep.rows[0][1:]) == (0, 0, 0, 0)
    assert rep.to_csv().startswith("x,pi,Pi,gap,bound\n")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]), min_size=1, max_size=6, unique=True),
       st.floats(1, 5000))
def test_mobius_roundtrip_property(primes, x):
    pr = PrimeSequence(sorted(map(float, primes)))
    Pi = riemann_pi_measure(pr, 5000)
    assert pi_from_riemann_pi(Pi.cumulative, pr.p1, x) == pytest.approx(pr.count(x), abs=1e-12)
    exact = riemann_pi_exact(sorted(primes), x)
    assert Pi.cumulative(x) == pytest.approx(float(exact), abs=1e-12)
    assert Fraction(pr.count(x)) <= exact


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(1.01, 50.0), min_size=1, max_size=6), st.lists(st.floats(1, 1e5), min_size=1, max_size=10))
def test_chebyshev_gap_property(primes, grid):
    assert chebyshev_gap_check(PrimeSequence(sorted(primes)), sorted(grid)).ok


def test_gap_inequality_on_gallery(ordinary, powers2, sparse2k):
    for S in (ordinary, powers2, sparse2k):
        grid = np.geomspace(S.primes.p1, S.x_max, 80)
        assert chebyshev_gap_check(S.primes, grid).ok
