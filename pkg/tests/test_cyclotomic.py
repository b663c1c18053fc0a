from __future__ import annotations

import cmath
import math
from fractions import Fraction

import sympy as sp
from hypothesis import given, strategies as st

from idforms.cyclotomic import Cyclotomic, cyclotomic_poly


def _sympy_cyclotomic(n):
    x = sp.Symbol("x")
    return tuple(int(c) for c in reversed(sp.Poly(sp.cyclotomic_poly(n, x), x).all_coeffs()))


def test_cyclotomic_polynomials_match_sympy():
    for n in range(1, 61):
        assert cyclotomic_poly(n) == _sympy_cyclotomic(n), n


def test_sum_of_all_roots_vanishes():
    for n in range(2, 25):
        total = Cyclotomic.from_exponents(n, {k: 1 for k in range(n)})
        assert total.is_zero(), n


terms = st.lists(st.tuples(st.integers(0, 59), st.fractions(min_value=-3, max_value=3, max_denominator=12)),
                 max_size=6)


@given(st.sampled_from([3, 4, 5, 6, 8, 12, 15]), terms, terms)
def test_arithmetic_agrees_with_complex_evaluation(n, t1, t2):
    a = Cyclotomic.from_exponents(n, [(k % n, w) for k, w in t1])
    b = Cyclotomic.from_exponents(n, [(k % n, w) for k, w in t2])

    def value(ts):
        return sum(float(w) * cmath.exp(2j * math.pi * (k % n) / n) for k, w in ts)
    assert abs(complex(a * b) - value(t1) * value(t2)) < 1e-9
    assert abs(complex(a + b) - (value(t1) + value(t2))) < 1e-9
    assert abs(complex(a.conjugate()) - value(t1).conjugate()) < 1e-9
    # exact zero test agrees with a loose float test on these small inputs
    assert (a - a).is_zero()


def test_levels_compare_equal():
    a = Cyclotomic.from_exponents(3, {1: 1})
    assert a == a.lift(6)
    assert Cyclotomic.one(4) == 1
    assert Cyclotomic.from_exponents(4, {2: 1}) == -1
    assert Cyclotomic.from_exponents(6, {0: Fraction(1, 2), 3: Fraction(1, 2)}) == 0
