from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idforms.elimination import (_value, compose, delta, Case2Reduction, Factor, ReducedSystem, ShiftExpr, SymbolicEquation, apply_derivation,
                                 cascade_apply, cascade_order, cascade_step, eliminate, expected_operator,
                                 reduce_coefficients, residual_table)
from idforms.errors import PreconditionError
from idforms.forms import FormSystem, condition_indices
from idforms.groups import Group, admissible

from .fde import random_solution, random_tuple

Z, Z5, Z7 = Group.parse("Z"), Group.cyclic(5), Group.cyclic(7)


def _as_counter(factors):
    return Counter((f.shift, f.power) for f in factors)


# -- symbolic cascade -------------------------------------------------------

def test_shift_expr_algebra():
    e = ShiftExpr.of(k3=2) - ShiftExpr.of(l1=1)
    assert str(e) == "-l1 + 2*k3"
    assert (e - e).is_zero()
    assert (3 * e).coefficient("k3") == 6
    assert ShiftExpr.of(k1=5).vanishes_on(Z5)
    assert not ShiftExpr.of(k1=5).vanishes_on(Z7)


def test_single_variable_example():
    # phi(a u + b v) = psi(c u + d v): one step, shift (a d - b c) k1
    s = FormSystem((2,), (3,), (1,), (4,))
    d = eliminate(s)
    assert d.removal_steps == 1
    (f,) = d.operators[1]
    assert f.shift == ShiftExpr.of(k1=2 * 4 - 3 * 1)
    assert d.steps[0].substitution() == {"u": "u + 4*k1", "v": "v - k1"}


def test_first_step_factor_on_the_right():
    s = FormSystem((1, 2, 1), (1, 1, 3), (2, 1, 1), (1, 3, 2))
    eq = cascade_step(SymbolicEquation.initial(s), ("psi", 3))
    c, d = s.c, s.d
    for t in (1, 2):
        (f,) = eq.term(("psi", t)).factors
        assert f.shift == ShiftExpr.of(k3=c[t - 1] * d[2] - d[t - 1] * c[2])
    assert ("psi", 3) not in eq.functions


def test_proportional_columns_give_zero_step():
    s = FormSystem((1, 2), (1, 2), (1, 1), (2, 3))
    d = eliminate(s)
    assert [f for f in d.operators[1] if f.is_zero] == [Factor(ShiftExpr(), 1)]
    assert d.flagged(1)


def test_heyde_specialisation_shifts():
    # c = a, d = -b: the k_t shift on phi_j is -(a_j b_t + b_j a_t)
    a, b = (1, 2, 3), (2, -1, 1)
    s = FormSystem(a, b, a, tuple(-x for x in b))
    d = eliminate(s)
    for j in range(1, 4):
        ks = {f.shift.symbols[0]: f.shift for f in d.operators[j] if f.shift.symbols[0].startswith("k")}
        for t in range(1, 4):
            assert ks[f"k{t}"].coefficient(f"k{t}") == -(a[j - 1] * b[t - 1] + b[j - 1] * a[t - 1])


@pytest.mark.parametrize("n,m,q", [(1, 1, None), (2, 2, None), (3, 2, 1), (3, 3, 2)])
def test_degree_bound(n, m, q):
    s = FormSystem(*[tuple(range(1 + r, n + 1 + r)) for r in range(4)])
    d = eliminate(s, m, q)
    assert d.degree_bound == n + m - 1 + (q + 1 if q is not None else 0)
    assert d.removal_steps == n + m - 1
    assert len(d.steps) == n + m - 1 + (q is not None)


def test_cascade_order():
    assert cascade_order(3, 2, 1) == [("psi", 3), ("psi", 2), ("psi", 1), ("phi", 2)]


systems = st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, n), *[st.tuples(*[st.integers(-3, 3)] * n)] * 4))


@given(systems, st.sampled_from([None, 1, 2]))
def test_operator_matches_closed_form(data, q):
    n, m, a, b, c, d = data
    s = FormSystem(a, b, c, d) if any(a + b + c + d) else FormSystem((1,) * n, b, c, d)
    der = eliminate(s, m, q)
    for j in range(1, m + 1):
        assert _as_counter(der.operators[j]) == _as_counter(expected_operator(s, j, m, q))


@settings(max_examples=25)
@given(systems, st.booleans(), st.integers(0, 2**31))
def test_cascade_equals_composed_operator(data, with_q, seed):
    n, m, a, b, c, d = data
    s = FormSystem((1,) * n if not any(a) else a, b, c, d)
    rng = np.random.default_rng(seed)
    der = eliminate(s, m, 1 if with_q else None)
    funcs = random_tuple(s, m, rng, q=with_q)
    shifts = {sym: rng.integers(0, 7, 2) for sym in ["h", "k"] + [f"l{i}" for i in range(1, 4)]
              + [f"k{i}" for i in range(1, 4)]}
    res = residual_table(s, funcs, m)
    for j in range(1, m + 1):
        assert np.array_equal(cascade_apply(res, der, shifts, funcs.shape, j),
                              apply_derivation(funcs, der, shifts, j))


@pytest.mark.parametrize("q", [None, 1])
def test_solutions_are_annihilated(q):
    rng = np.random.default_rng(3)
    s = FormSystem((1, 2), (3, 1), (2, 1), (1, 4))
    funcs = random_solution(s, 2, rng, q_degree=q)
    assert not (residual_table(s, funcs, 2) % 7).any()
    der = eliminate(s, 2, q)
    for _ in range(5):
        shifts = {sym: rng.integers(0, 7, 2) for sym in ("h", "k", "l1", "l2", "k1", "k2")}
        for j in (1, 2):
            assert not (apply_derivation(funcs, der, shifts, j) % 7).any()


def test_factor_order_is_irrelevant():
    rng = np.random.default_rng(0)
    s = FormSystem((1, 2, 1), (2, 1, 3), (1, 3, 2), (2, 2, 1))
    der = eliminate(s)
    funcs = random_tuple(s, 3, rng)
    shifts = {sym: rng.integers(0, 7, 2) for sym in ("l1", "l2", "l3", "k1", "k2", "k3")}
    base = apply_derivation(funcs, der, shifts, 1)
    for perm in itertools.islice(itertools.permutations(der.operators[1]), 6):
        table = funcs.phi[0]
        for f in perm:
            table = delta(table, _value(f.shift, shifts, (7, 7)), [0, 1], f.power)
        assert np.array_equal(compose(table, 1, 2), base)


def test_eliminate_json_and_trace():
    der = eliminate(FormSystem((1, 1), (1, -1), (1, 1), (-1, 1)), q_degree=1)
    doc = der.to_json()
    assert doc["degree_bound"] == 5
    assert doc["steps"][-1]["removed_function"] == "q"
    assert doc["steps"][-1]["power"] == 2
    assert der.trace(1)[0].startswith("start:")


def test_m_out_of_range():
    with pytest.raises(PreconditionError):
        eliminate(FormSystem((1,), (1,), (1,), (1,)), m=2)


# -- coefficient reduction ----------------------------------------------------

def test_reduction_example():
    s = FormSystem((1, 2), (1, 1), (1, 0), (0, 1))
    r = reduce_coefficients(s, Z)
    assert isinstance(r, ReducedSystem)
    assert (r.A, r.B) == (1, 2)
    assert [(row.A, row.B) for row in r.rows] == [(1, 2), (1, 1)]
    assert r.ok


def test_case2_routing():
    # equal ratios for every pair in the condition set
    s = FormSystem((1, 2), (1, 2), (1, 1), (0, 3))
    r = reduce_coefficients(s, Z)
    assert isinstance(r, Case2Reduction)
    assert r.coefficients == tuple(s.b[0] * c - s.a[0] * d for c, d in zip(s.c, s.d))
    assert r.lhs_collapses


def test_reduction_preconditions():
    with pytest.raises(PreconditionError):
        reduce_coefficients(FormSystem((1, 2), (1, 1), (1, 0), (0, 1)), Group.cyclic(4))
    with pytest.raises(PreconditionError):
        reduce_coefficients(FormSystem((1,), (1,), (1,), (1,)), Z5)


def _check_reduced(r: ReducedSystem, G):
    nz = lambda x: admissible(G, x)
    for row in r.rows:
        for j in range(len(r.C)):
            assert nz(row.A * r.D[j] - row.B * r.C[j])
        for other in r.rows + r.residual_rows:
            if other is not row:
                assert nz(row.A * other.B - row.B * other.A)


def _random_case1(rng, G, n=4):
    while True:
        s = FormSystem(*[tuple(int(x) for x in rng.integers(-4, 5, n)) for _ in range(4)])
        if not condition_indices(s, G):
            continue
        try:
            r = reduce_coefficients(s, G)
        except PreconditionError:
            continue
        if isinstance(r, ReducedSystem):
            return s, r


@pytest.mark.parametrize("G", [Z5, Z])
def test_reduction_postconditions(G):
    rng = np.random.default_rng(11)
    for _ in range(100):
        _, r = _random_case1(rng, G)
        _check_reduced(r, G)
