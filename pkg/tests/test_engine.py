from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from idforms.counterexamples import prop2_construction
from idforms.distributions import Pmf, degenerate, uniform
from idforms.engine import (class_label, conditionally_symmetric, darmois_condition, darmois_specialize,
                            degenerate_closed_form, group_class, heyde_condition, heyde_specialize,
                            independent_forms, q_mode_check, special_case_derivations, summarize, sweep,
                            sweep_instance, verify, verify_instance, DEFAULT_SWEEP)
from idforms.forms import FormSystem, InstanceSpec, condition_indices, degenerate_instance, identically_distributed
from idforms.groups import Group, pair, scalar_mul, unpair

from .strategies import elements, groups, pmfs

Z, Z2, Z3, Z5 = Group.parse("Z"), Group.cyclic(2), Group.cyclic(3), Group.cyclic(5)


def test_group_classes():
    assert group_class(Z) == ("torsion_free", None)
    assert group_class(Group.parse("Z^2")) == ("torsion_free", None)
    assert class_label(Group.parse("Z3xZ3")) == "p_group(3)"
    assert class_label(Group.cyclic(9)) == "other"
    assert class_label(Group.parse("ZxZ2")) == "other"
    assert class_label(Group.cyclic(6)) == "other"


def test_lattice_point_masses():
    E3 = degenerate(Z.element((), [3]))
    spec = InstanceSpec(Z, FormSystem((1, 1), (1, 2), (1, 1), (1, 2)), (E3, E3))
    v = verify_instance(spec)
    assert v.hypotheses_hold and v.consistent and v.exit_code == 0
    assert all(c.is_degenerate for c in v.classifications)
    assert v.condition_set == []  # determinants a_i d_j - b_i c_j vanish for j = i


def test_prop2_on_z3_is_reported_not_refuted():
    v = verify_instance(prop2_construction(Z3, Z3(1), F(3, 5)))
    assert v.identically_distributed and all(v.nonvanishing)
    assert v.group_class == "p_group(3)"
    assert not v.classifications[0].is_degenerate
    assert v.consistent
    assert any("admissibility" in n for n in v.notes)


def test_prop2_on_z9_lands_in_the_counterexample_regime():
    G = Group.cyclic(9)
    v = verify_instance(prop2_construction(G, G(3), F(3, 5)))
    assert v.condition_set == [1, 2] and v.group_class == "other"
    assert v.hypotheses_hold and v.violations == [1, 2] and v.consistent
    assert any("counterexample regime" in n for n in v.notes)


def test_non_identical_instance_is_vacuous():
    mu = Pmf(Z5, {Z5(0): F(2, 3), Z5(1): F(1, 3)})
    nu = Pmf(Z5, {Z5(0): F(3, 4), Z5(2): F(1, 4)})
    spec = InstanceSpec(Z5, FormSystem((1, 1), (1, 2), (2, 1), (1, 3)), (mu, nu))
    v = verify_instance(spec)
    assert v.condition_set == [1, 2]
    assert not v.identically_distributed and not v.hypotheses_hold and v.consistent
    assert v.to_json()["exit_code"] == 0


def test_p2_note():
    v = verify_instance(InstanceSpec(Z2, FormSystem((1,), (1,), (1,), (1,)), (uniform(Z2),)))
    assert any("p = 2" in n for n in v.notes)
    assert not v.covered


def test_heyde_examples():
    assert heyde_condition((1, 1), (1, 1), Z5) == {1, 2}
    assert heyde_condition((1, 1), (1, -1), Z5) == set()
    s = heyde_specialize((1, 2), (3, 4))
    assert (s.c, s.d) == ((1, 2), (-3, -4))
    # the heyde condition is the general condition on the specialised system
    for a, b in [((1, 1), (1, 1)), ((1, 2), (2, 3)), ((1, 1), (1, -1))]:
        assert heyde_condition(a, b, Z5) == condition_indices(heyde_specialize(a, b), Z5)


def _sym_oracle(a, b, dists):
    """Conditional law of L2 given each value of L1, compared with its reflection."""
    G = dists[0].group
    joint = {}
    from itertools import product
    for combo in product(*[list(mu) for mu in dists]):
        w = 1
        x = y = G.zero()
        for (g, p), ai, bi in zip(combo, a, b):
            w *= p
            x, y = x + scalar_mul(ai, g), y + scalar_mul(bi, g)
        joint[(x, y)] = joint.get((x, y), 0) + w
    return all(joint.get((x, -y), 0) == w for (x, y), w in joint.items())


@given(groups([Z3, Z5, Group.cyclic(4)]), st.data())
def test_heyde_identical_iff_conditionally_symmetric(G, data):
    n = data.draw(st.integers(1, 3))
    a = data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n))
    if not any(a + b):
        a[0] = 1
    dists = tuple(data.draw(pmfs(G, 3)) for _ in range(n))
    spec = InstanceSpec(G, heyde_specialize(a, b), dists)
    ident = identically_distributed(spec)
    assert ident == conditionally_symmetric(a, b, dists) == _sym_oracle(a, b, dists)


def test_darmois_examples():
    mu = uniform(Z2)
    spec = darmois_specialize((1,), (1,), (mu,))
    assert spec.system.n == 2 and not identically_distributed(spec)
    E = degenerate(Z5(2))
    assert identically_distributed(darmois_specialize((1,), (3,), (E,)))
    assert darmois_condition((1, 5), (2, 1), Z5) == {1}


@given(groups([Z2, Z3, Z5]), st.data())
def test_darmois_identical_iff_independent(G, data):
    n = data.draw(st.integers(1, 2))
    a = data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n))
    if not any(a + b):
        a[0] = 1
    dists = tuple(data.draw(pmfs(G, 3)) for _ in range(n))
    ident = identically_distributed(darmois_specialize(a, b, dists))
    assert ident == independent_forms(a, b, dists)


def test_darmois_condition_agrees_with_general_condition_for_admissible_coefficients():
    for a, b in [((1, 2), (3, 1)), ((2, 1, 1), (1, 3, 4))]:
        spec = darmois_specialize(a, b, (uniform(Z5),) * len(a))
        full = condition_indices(spec.system, Z5)
        assert {i for i in full if i <= len(a)} == darmois_condition(a, b, Z5)


@given(groups([Z3, Z5]), st.data())
@settings(max_examples=30)
def test_specialisations_commute_with_verification(G, data):
    a = data.draw(st.lists(st.integers(1, 2), min_size=2, max_size=2))
    b = data.draw(st.lists(st.integers(-2, 2), min_size=2, max_size=2))
    dists = tuple(data.draw(pmfs(G, 2)) for _ in range(2))
    direct = InstanceSpec(G, FormSystem(tuple(a), tuple(b), tuple(a), tuple(-x for x in b)), dists)
    assert verify_instance(InstanceSpec(G, heyde_specialize(a, b), dists)).to_json() == verify_instance(direct).to_json()
    zeros = (0, 0)
    expanded = InstanceSpec(G, FormSystem(tuple(a) + zeros, tuple(b) + zeros, tuple(a) + zeros, zeros + tuple(b)),
                            dists * 2)
    assert verify_instance(darmois_specialize(a, b, dists)).to_json() == verify_instance(expanded).to_json()


def test_degenerate_closure_on_random_instances():
    rng = random.Random(5)
    for k in range(500):
        G = [Z3, Z5, Z, Group.parse("Z2xZ4")][k % 4]
        n = rng.randint(1, 3)
        s = FormSystem(*[tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(4)]) if k % 7 else \
            FormSystem((1,) * n, (2,) * n, (1,) * n, (2,) * n)
        if not any(s.a + s.b + s.c + s.d):
            continue
        pts = [G.element([rng.randrange(m) for m in G.invariant_factors],
                         [rng.randint(-3, 3) for _ in range(G.lattice_rank)]) for _ in range(n)]
        spec = degenerate_instance(G, s, pts)
        lhs1 = sum((scalar_mul(c, x) for c, x in zip(s.a, pts)), G.zero())
        lhs3 = sum((scalar_mul(c, x) for c, x in zip(s.c, pts)), G.zero())
        lhs2 = sum((scalar_mul(c, x) for c, x in zip(s.b, pts)), G.zero())
        lhs4 = sum((scalar_mul(c, x) for c, x in zip(s.d, pts)), G.zero())
        expected = lhs1 == lhs3 and lhs2 == lhs4
        assert degenerate_closed_form(s, pts) == expected
        assert verify_instance(spec).identically_distributed == expected


def test_q_mode_equals_independent_mode():
    rng = random.Random(9)
    for k in range(20):
        G = [Z3, Z5, Group.parse("Z2xZ2")][k % 3]
        mu = Pmf(G, {G.zero(): F(2, 3), rng.choice(G.elements()[1:]): F(1, 3)})
        s = FormSystem((1, rng.randint(1, 2)), (1, 2), (1, 1), (rng.randint(-2, 2), 2))
        ind = verify(InstanceSpec(G, s, (mu, mu)))
        qv = verify(InstanceSpec(G, s, (mu, mu), mode="q_independent"))
        assert qv.mode == "q_independent"
        a, b = ind.to_json(), qv.to_json()
        for key in ("hypotheses", "condition_set", "violations", "consistent", "exit_code"):
            assert a[key] == b[key]
        assert any("constant" in n for n in qv.notes)


@pytest.mark.parametrize("kind", ["x3_heyde", "x2_darmois"])
def test_special_cases(kind):
    r = special_case_derivations(kind)
    assert r.matches and r.all_degenerate and r.chain_consistent and r.ok
    assert r.product_identity >= 1
    assert r.substitution == ("v = -u" if kind == "x3_heyde" else "v = u")


def test_sweep_is_deterministic_and_consistent():
    cfg = {**DEFAULT_SWEEP, "instances": 60}
    first = list(sweep(cfg))
    assert first == list(sweep(cfg, workers=2))
    assert sweep_instance(cfg, 7) == first[7]
    summary = summarize(first, cfg)
    assert summary["instances"] == 60 and summary["inconsistent"] == 0
    assert summary["degenerate_mismatches"] == 0
    assert set(summary["by_group"]) == {"Z(3)", "Z(5)", "Z"}
