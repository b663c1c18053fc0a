from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from idforms.errors import GroupMismatchError, SchemaError
from idforms.groups import (CyclicPresentation, Group, Subgroup, add, admissible, annihilator, pair, pair_dual,
                            pairing, phase, scalar_mul, subgroups, unpair)

from .strategies import brute_subgroups, elements, groups


# -- construction -----------------------------------------------------------

def test_parse_and_labels():
    assert Group.parse("Z3") == Group(0, (3,))
    assert Group.parse("Z(2) x Z(6)") == Group(0, (2, 6))
    assert Group.parse("Z^2xZ4") == Group(2, (4,))
    assert Group.parse("Z") == Group(1, ())
    assert Group(0, ()).is_trivial
    assert Group.parse("Z6xZ2").invariant_factors == (2, 6)
    assert Group.parse("Z4xZ6").invariant_factors == (2, 12)


def test_divisibility_chain_enforced():
    with pytest.raises(SchemaError):
        Group(0, (6, 2))
    with pytest.raises(SchemaError):
        Group(0, (1,))


def test_group_law_examples():
    Z3, Z2sq, Z2Z4 = Group.parse("Z3"), Group.parse("Z^2"), Group.parse("Z2xZ4")
    assert Z3(2) + Z3(2) == Z3(1)
    assert Z2sq.element((), (1, 2)) + Z2sq.element((), (-1, 3)) == Z2sq.element((), (0, 5))
    assert Z2Z4(1, 3) + Z2Z4(1, 1) == Z2Z4.zero()
    Z4, Z5 = Group.parse("Z4"), Group.parse("Z5")
    assert scalar_mul(2, Z4(3)) == Z4(2)
    assert scalar_mul(0, Z4(3)).is_zero
    assert all(scalar_mul(10, x).is_zero for x in Z5.elements())


def test_mismatched_groups_rejected():
    with pytest.raises(GroupMismatchError):
        add(Group.parse("Z3")(1), Group.parse("Z5")(1))


@given(groups(), st.data(), st.integers(-20, 20), st.integers(-20, 20))
def test_scalar_mul_is_a_ring_action(G, data, a, b):
    g = data.draw(elements(G))
    assert scalar_mul(a + b, g) == scalar_mul(a, g) + scalar_mul(b, g)
    assert scalar_mul(a * b, g) == scalar_mul(a, scalar_mul(b, g))
    # repeated addition oracle
    acc = G.zero()
    for _ in range(abs(a)):
        acc = acc + (g if a > 0 else -g)
    assert scalar_mul(a, g) == acc


# -- characters -------------------------------------------------------------

def test_pairing_examples():
    Z2, Z3 = Group.parse("Z2"), Group.parse("Z3")
    assert pairing(Z2(0), Z2.dual_point([1])) == 1
    assert pairing(Z2(1), Z2.dual_point([1])) == -1
    v = pairing(Z3(1), Z3.dual_point([1]))
    assert abs(v - complex(-0.5, math.sqrt(3) / 2)) < 1e-12


@given(groups(), st.data())
def test_pairing_is_multiplicative(G, data):
    x, x2 = data.draw(elements(G)), data.draw(elements(G))
    y = data.draw(st.sampled_from(G.dual_points()))
    assert phase(x + x2, y) == (phase(x, y) + phase(x2, y)) % 1
    assert abs(pairing(x + x2, y) - pairing(x, y) * pairing(x2, y)) < 1e-12


def test_lattice_pairing_uses_torus_coordinates():
    Z = Group.parse("Z")
    y = Z.dual_point((), [Fraction(1, 3)])
    assert phase(Z.element((), [2]), y) == Fraction(2, 3)
    assert abs(pairing(Z.element((), [3]), y) - 1) < 1e-12


# -- admissibility ----------------------------------------------------------

def _admissible_oracle(G: Group, a: int) -> bool:
    if G.lattice_rank:
        return a != 0 or any(not scalar_mul(a, x).is_zero for x in G.torsion_elements())
    return any(not scalar_mul(a, x).is_zero for x in G.elements())


def test_admissible_examples():
    assert not admissible(Group.parse("Z5"), 10)
    assert admissible(Group.parse("Z2xZ6"), 3)
    assert scalar_mul(3, Group.parse("Z2xZ6")(1, 0)) == Group.parse("Z2xZ6")(1, 0)
    assert not admissible(Group.parse("Z^2"), 0)
    assert admissible(Group.parse("Z^2"), 7)
    assert not admissible(Group(0, ()), 5)


MIXED = [Group.parse(t) for t in ("Z2", "Z4", "Z6", "Z2xZ6", "Z3xZ9", "ZxZ2", "Z^2", "Z")]


@given(groups(MIXED), st.integers(-40, 40))
def test_admissible_matches_exhaustive_check(G, a):
    assert admissible(G, a) == _admissible_oracle(G, a)


# -- presentations ----------------------------------------------------------

@pytest.mark.parametrize("factors", [(6, 2), (4, 6), (3, 5), (2, 2, 4), (12, 18), (9, 3, 3)])
def test_cyclic_presentation_is_an_isomorphism(factors):
    pres = CyclicPresentation(factors)
    G = pres.group
    assert G.order == math.prod(factors)
    coords = list(itertools.product(*(range(m) for m in factors)))
    images = {pres.element(c) for c in coords}
    assert len(images) == G.order
    for c1, c2 in itertools.islice(itertools.product(coords, coords), 400):
        s = tuple((a + b) % m for a, b, m in zip(c1, c2, factors))
        assert pres.element(c1) + pres.element(c2) == pres.element(s)


def test_presentation_parse_keeps_lattice():
    pres = CyclicPresentation.parse("Z x Z6 x Z4")
    assert pres.group == Group(1, (2, 12))
    assert pres.element([0, 0], [5]).lattice == (5,)


# -- subgroups --------------------------------------------------------------

def test_subgroup_examples():
    assert [H.order for H in subgroups(Group.parse("Z4"))] == [1, 2, 4]
    assert len(subgroups(Group.parse("Z2xZ2"))) == 5
    assert len(subgroups(Group(0, ()))) == 1
    assert len(subgroups(Group.parse("Z2xZ6"))) == 10


@pytest.mark.parametrize("text", ["Z2", "Z4", "Z6", "Z8", "Z2xZ2", "Z2xZ4", "Z2xZ6", "Z3xZ3", "Z12", "Z2xZ2xZ2"])
def test_subgroups_match_brute_force_closure(text):
    G = Group.parse(text)
    assert {H.elements for H in subgroups(G)} == brute_subgroups(G)


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _conjugate(lam):
    return [sum(1 for part in lam if part >= i) for i in range(1, (lam[0] if lam else 0) + 1)]


def _gauss_binomial(n, k, p):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _count_p_subgroups(lam, p):
    """Birkhoff's count of subgroups of an abelian p-group of type ``lam``, summed over all subtypes."""
    lc = _conjugate(lam)
    total = 0
    for size in range(sum(lam) + 1):
        for mu in _partitions(size):
            if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
                continue
            mc = _conjugate(mu) + [0] * (len(lc) + 1)
            count = 1
            for i in range(len(lc)):
                count *= p ** (mc[i + 1] * (lc[i] - mc[i])) * _gauss_binomial(lc[i] - mc[i + 1], mc[i] - mc[i + 1], p)
            total += count
    return total


def _abelian_groups(order):
    """All abelian groups of the given order as (group, per-prime partitions)."""
    primes = []
    n, p = order, 2
    while n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            primes.append((p, e))
        p += 1
    for choice in itertools.product(*(list(_partitions(e)) for _, e in primes)):
        factors = [p ** k for (p, _), lam in zip(primes, choice) for k in lam]
        yield Group.from_cyclic(factors), [(p, lam) for (p, _), lam in zip(primes, choice)]


def test_subgroup_counts_match_formula_up_to_order_64():
    checked = 0
    for order in range(1, 65):
        for G, parts in _abelian_groups(order):
            expected = math.prod(_count_p_subgroups(lam, p) for p, lam in parts)
            assert len(subgroups(G)) == expected, G
            checked += 1
    assert checked > 64


@given(groups(), st.data())
def test_annihilator_duality(G, data):
    H = data.draw(st.sampled_from(subgroups(G)))
    A = annihilator(G, H)
    assert H.order * A.order == G.order
    assert annihilator(G, A) == H


def test_annihilator_examples():
    Z4, Z5 = Group.parse("Z4"), Group.parse("Z5")
    assert annihilator(Z4, Subgroup.trivial(Z4)).order == 4
    assert annihilator(Z5, Subgroup.whole(Z5)) == Subgroup.trivial(Z5)
    K = Subgroup.generated_by(Z4, [Z4(2)])
    assert {x.torsion for x in annihilator(Z4, K).elements} == {(0,), (2,)}


# -- squares ------------------------------------------------------------------

@given(groups(), st.data())
def test_pair_roundtrip_and_phase(G, data):
    x, y = data.draw(elements(G)), data.draw(elements(G))
    assert unpair(pair(x, y), G) == (x, y)
    u = data.draw(st.sampled_from(G.dual_points()))
    v = data.draw(st.sampled_from(G.dual_points()))
    assert phase(pair(x, y), pair_dual(u, v)) == (phase(x, u) + phase(y, v)) % 1
