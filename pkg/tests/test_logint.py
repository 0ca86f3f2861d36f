import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import li_pv

from beurling.errors import DomainError
from beurling.logint import LI2, T1, Li, li


@pytest.mark.parametrize("x", [2.0, 10.0, 1e3, 1e6])
def test_li_against_pv_quadrature(x):
    assert abs(li(x) / li_pv(x) - 1) <= 1e-10


def test_li_examples():
    assert f"{li(2):.14f}" == "1.04516378011749"
    assert li(10) == pytest.approx(6.165599504787, abs=1e-11)
    assert Li(2) == 0
    assert LI2 == li(2)


def test_domain():
    with pytest.raises(DomainError):
        li(1.0)
    with pytest.raises(DomainError):
        li(0.5)


@given(st.floats(1.0001, 1e15))
def test_li_matches_mpmath(x):
    assert li(x) == pytest.approx(float(mpmath.li(x)), rel=1e-12, abs=1e-12)


def test_t1_is_li_minus_gamma_minus_loglog():
    xs = np.array([1.5, 3.0, 100.0, 1e8])
    want = [float(mpmath.li(x) - mpmath.euler - mpmath.log(mpmath.log(x))) for x in xs]
    assert np.allclose(T1(xs), want, rtol=1e-13)
    assert T1(1.0) == 0.0


def test_vectorized():
    xs = np.geomspace(2, 1e9, 17)
    assert np.allclose(li(xs), [li(float(x)) for x in xs], rtol=0, atol=0)
    assert Li(np.array([1.5, 2.0]))[0] == 0.0
    assert math.isfinite(li(1e15))
