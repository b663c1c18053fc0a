"""Verdicts for the four-forms characterization on concrete instances.

A verdict records whether the hypotheses hold (identical distribution of the
form pairs, nonvanishing characteristic functions), which variables satisfy
the admissibility condition, how each law classifies, and whether the
outcome is compatible with the characterization for the group at hand:

* torsion-free ``Z^d``: every condition-set law is degenerate, and this holds
  without the nonvanishing hypothesis;
* ``X = X_(p)`` (all invariant factors equal to one prime ``p``): every
  condition-set law is degenerate.

Only exact pmf facts can produce an inconsistent verdict.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import __version__
from .cyclotomic import Cyclotomic
from .distributions import Classification, Kind, Pmf, classify, degenerate
from .errors import PreconditionError, SchemaError
from .forms import FormSystem, InstanceSpec, condition_indices, form_law, identically_distributed, joint_pmf, marginals
from .groups import Group, GroupElement, admissible, is_prime, scalar_mul
from .spectral import DEFAULT_GRID, Nonvanishing, char_fn_exact, nonvanishing, polynomials_are_constant


# ---------------------------------------------------------------------------
# group classes
# ---------------------------------------------------------------------------

def group_class(G: Group) -> tuple[str, int | None]:
    """``("torsion_free", None)``, ``("p_group", p)`` or ``("other", None)``.

    ``p_group`` requires every invariant factor to be the same prime, so that
    ``pX = 0``; prime-power factors ``p^k`` with ``k > 1`` fall under "other".
    """
    if not G.invariant_factors:
        return "torsion_free", None
    fs = set(G.invariant_factors)
    if G.lattice_rank == 0 and len(fs) == 1 and is_prime(next(iter(fs))):
        return "p_group", next(iter(fs))
    return "other", None


def class_label(G: Group) -> str:
    name, p = group_class(G)
    return f"p_group({p})" if p else name


@lru_cache(maxsize=4096)
def _nonvanishing(mu: Pmf, grid: int) -> Nonvanishing:
    return nonvanishing(mu, grid)


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    group: Group
    identically_distributed: bool
    nonvanishing: list[Nonvanishing]
    condition_set: list[int]
    group_class: str
    covered: bool
    classifications: list[Classification]
    consistent: bool
    notes: list[str] = field(default_factory=list)
    mode: str = "independent"
    heuristic: bool = False

    @property
    def nonvanishing_required(self) -> bool:
        return not self.group_class == "torsion_free"

    @property
    def hypotheses_hold(self) -> bool:
        nv = all(self.nonvanishing) if self.nonvanishing_required else True
        return self.identically_distributed and nv

    @property
    def violations(self) -> list[int]:
        """Condition-set variables whose law is not degenerate."""
        return [i for i in self.condition_set if not self.classifications[i - 1].is_degenerate]

    @property
    def exit_code(self) -> int:
        if not self.consistent:
            return 2
        if self.heuristic:
            return 3
        return 0

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "mode": self.mode,
            "hypotheses": {
                "identically_distributed": self.identically_distributed,
                "nonvanishing": [nv.value for nv in self.nonvanishing],
                "nonvanishing_detail": [nv.to_json() for nv in self.nonvanishing],
                "nonvanishing_required": self.nonvanishing_required,
                "hold": self.hypotheses_hold,
            },
            "condition_set": self.condition_set,
            "group_class": self.group_class,
            "covered": self.covered,
            "conclusion_checks": [{"index": i + 1, "in_condition_set": i + 1 in self.condition_set,
                                   "classification": c.to_json()}
                                  for i, c in enumerate(self.classifications)],
            "violations": self.violations,
            "consistent": self.consistent,
            "exit_code": self.exit_code,
            "notes": list(self.notes),
        }


def verify_instance(spec: InstanceSpec, grid: int = DEFAULT_GRID) -> Verdict:
    G = spec.group
    ident = identically_distributed(spec)
    nvs = [_nonvanishing(mu, grid) for mu in spec.dists]
    cond = sorted(condition_indices(spec.system, G))
    classes = [classify(mu) for mu in spec.dists]
    name, p = group_class(G)
    label = class_label(G)
    notes: list[str] = []
    covered = name == "torsion_free" or (name == "p_group" and p != 2)
    if name == "p_group" and p == 2:
        notes.append("p = 2: the characterization is not asserted here; findings are reported only")
    verdict = Verdict(G, ident, nvs, cond, label, covered, classes, True, notes, spec.mode)
    bad = verdict.violations
    need_nv = verdict.nonvanishing_required
    heuristic = need_nv and ident and any(not nv.exhaustive for nv in nvs)
    verdict.heuristic = heuristic
    if verdict.hypotheses_hold and covered and bad:
        if heuristic:
            notes.append(f"variables {bad} are not degenerate but nonvanishing was only sampled on a grid;"
                         " no violation is claimed")
        else:
            verdict.consistent = False
            notes.append(f"hypotheses hold exactly yet variables {bad} are not degenerate")
    if verdict.hypotheses_hold and not covered and name == "other":
        nondeg = [i + 1 for i, c in enumerate(classes) if not c.is_degenerate]
        if nondeg:
            notes.append(f"{G.label} lies outside the torsion-free and X = X_(p) families; nondegenerate laws "
                         f"{nondeg} with identically distributed form pairs belong to the counterexample regime")
    if ident and name == "p_group" and not cond and any(not c.is_degenerate for c in classes):
        notes.append("no variable satisfies the admissibility condition on this group, so the characterization "
                     "asserts nothing about the nondegenerate laws present")
    if ident and need_nv and not all(nvs):
        zero = [i + 1 for i, nv in enumerate(nvs) if not nv]
        notes.append(f"characteristic functions of variables {zero} vanish somewhere; hypotheses fail")
    if not ident:
        notes.append("form pairs are not identically distributed; the verdict holds vacuously")
    return verdict


# ---------------------------------------------------------------------------
# specializations
# ---------------------------------------------------------------------------

def heyde_specialize(a: Sequence[int], b: Sequence[int]) -> FormSystem:
    """``L3 = L1`` and ``L4 = -L2``."""
    return FormSystem(tuple(a), tuple(b), tuple(a), tuple(-x for x in b))


def heyde_condition(a: Sequence[int], b: Sequence[int], G: Group) -> set[int]:
    """Variables ``i`` with every ``a_i b_j + b_i a_j`` admissible."""
    return {i + 1 for i in range(len(a)) if all(admissible(G, a[i] * b[j] + b[i] * a[j]) for j in range(len(a)))}


def conditionally_symmetric(a: Sequence[int], b: Sequence[int], dists: Sequence[Pmf]) -> bool:
    """Whether the conditional law of ``L2`` given ``L1`` is symmetric, i.e. ``(L1, L2) ~ (L1, -L2)``."""
    group = dists[0].group
    joint = joint_pmf(a, b, dists)
    from .groups import pair, unpair
    flipped = Pmf(joint.group, {pair(x, -y): w for x, y, w in ((*unpair(z, group), w) for z, w in joint)})
    return joint == flipped


def darmois_specialize(a: Sequence[int], b: Sequence[int], dists: Sequence[Pmf]) -> InstanceSpec:
    """Doubled instance with primed copies: ``L3 = L1`` and ``L4 = sum b_j xi'_j``."""
    n = len(a)
    if len(b) != n or len(dists) != n:
        raise SchemaError("a, b and dists must have the same length")
    zeros = (0,) * n
    system = FormSystem(tuple(a) + zeros, tuple(b) + zeros, tuple(a) + zeros, zeros + tuple(b))
    return InstanceSpec(dists[0].group, system, tuple(dists) * 2, origin="darmois")


def darmois_condition(a: Sequence[int], b: Sequence[int], G: Group) -> set[int]:
    """Variables with ``a_i b_i`` admissible."""
    return {i + 1 for i in range(len(a)) if admissible(G, a[i] * b[i])}


def independent_forms(a: Sequence[int], b: Sequence[int], dists: Sequence[Pmf]) -> bool:
    """Whether ``L1`` and ``L2`` are independent: the joint law is the product of its marginals."""
    group = dists[0].group
    joint = joint_pmf(a, b, dists)
    m1, m2 = marginals(joint, group)
    from .groups import pair
    product = Pmf(joint.group, {pair(x, y): w * v for x, w in m1 for y, v in m2})
    return joint == product


# ---------------------------------------------------------------------------
# Q-independence
# ---------------------------------------------------------------------------

def _finite_model(G: Group, grid: int) -> Group:
    """Finite subgroup of the dual of ``X x X`` used to test polynomials.

    For a finite group this is the whole dual; each torus coordinate of a
    lattice part is replaced by its ``grid``-torsion subgroup.
    """
    sq = G.square()
    return Group.from_cyclic(list(sq.invariant_factors) + [grid] * sq.lattice_rank)


@lru_cache(maxsize=64)
def _collapse(G: Group, degree: int, grid: int) -> bool:
    return polynomials_are_constant(_finite_model(G, grid), degree)


def q_mode_check(spec: InstanceSpec, degree: int = 2, grid: int = 6) -> Verdict:
    """Verdict for Q-independent variables.

    A continuous polynomial ``q`` on the compact dual of ``X x X`` with
    ``q(0, 0) = 0`` is identically zero, so the Q-independent equation is the
    independent one.  The collapse is checked with the exact polynomial
    solver (constants are the only solutions of ``Delta_h^(degree+1) q = 0``)
    before delegating to :func:`verify_instance`.
    """
    G = spec.group
    collapsed = _collapse(G, degree, grid)
    verdict = verify_instance(replace(spec, mode="independent"))
    verdict.mode = "q_independent"
    where = "the dual of X x X" if G.is_finite else f"the {grid}-torsion of the dual torus of X x X"
    if collapsed:
        verdict.notes.append(f"polynomials of degree <= {degree} on {where} are constant; with q(0,0) = 0 the "
                             "Q-independent equation reduces to the independent one")
    else:
        verdict.notes.append(f"non-constant polynomials of degree <= {degree} exist on {where}; the reduction"
                             " to independence was not certified")
        verdict.heuristic = True
    return verdict


def verify(spec: InstanceSpec, grid: int = DEFAULT_GRID) -> Verdict:
    return q_mode_check(spec) if spec.mode == "q_independent" else verify_instance(spec, grid)


# ---------------------------------------------------------------------------
# special-case derivations
# ---------------------------------------------------------------------------

@dataclass
class SpecialCaseReport:
    kind: str
    equation: str
    substitution: str
    derived: str
    expected: str
    matches: bool
    group: Group
    tuples_checked: int
    product_identity: int
    all_degenerate: bool
    full_equation: int
    chain_consistent: bool

    @property
    def ok(self) -> bool:
        return self.matches and self.all_degenerate and self.chain_consistent

    def to_json(self) -> dict:
        return {"kind": self.kind, "equation": self.equation, "substitution": self.substitution,
                "derived": self.derived, "expected": self.expected, "matches": self.matches,
                "group": self.group.to_json(), "tuples_checked": self.tuples_checked,
                "tuples_with_unit_product": self.product_identity,
                "tuples_satisfying_equation": self.full_equation,
                "all_degenerate": self.all_degenerate, "chain_consistent": self.chain_consistent,
                "ok": self.ok}


def small_pmfs(G: Group, denominator: int = 12) -> list[Pmf]:
    """Every law on the finite group ``G`` whose weights are multiples of ``1/denominator``."""
    elems = G.elements()
    out = []
    for parts in itertools.product(range(denominator + 1), repeat=len(elems) - 1):
        rest = denominator - sum(parts)
        if rest < 0:
            continue
        ws = list(parts) + [rest]
        out.append(Pmf(G, {x: Fraction(w, denominator) for x, w in zip(elems, ws) if w}))
    return out


def _symbolic(kind: str, m: int, n: int):
    import sympy as sp

    u, v = sp.symbols("u v")
    mus = [sp.Function(f"mu{j}") for j in range(1, n + 1)]
    if kind == "x3_heyde":
        a = sp.symbols(f"a1:{n + 1}")
        c = sp.symbols(f"c1:{n + 1}")
        lhs = sp.Mul(*[mus[j](a[j] * (u - v)) for j in range(m)]) * sp.Mul(*[mus[j](a[j] * (u + v)) for j in range(m, n)])
        rhs = sp.Mul(*[mus[j](c[j] * (u + v)) for j in range(n)])
        sub = {v: -u}
        expected = sp.Eq(sp.Mul(*[mus[j](2 * a[j] * u) for j in range(m)]), 1)
        substitution = "v = -u"
    else:
        k = m
        lhs = sp.Mul(*[mus[j](u + v) for j in range(k)])
        rhs = sp.Mul(*[mus[j](u) for j in range(k)]) * sp.Mul(*[mus[j](v) for j in range(k, n)])
        sub = {v: u}
        expected = sp.Eq(sp.Mul(*[mus[j](u) for j in range(n)]), 1)
        substitution = "v = u"
    # every characteristic function equals 1 at the zero character
    at_zero = {f(0): 1 for f in mus}
    left = lhs.subs(sub).subs(at_zero)
    right = rhs.subs(sub).subs(at_zero)
    if kind == "x2_darmois":
        # the dual of X = X_(2) is 2-torsion, so 2u is the zero character
        left = left.subs({f(2 * u): 1 for f in mus})
        left, right = right, left
    derived = sp.Eq(left, right)
    return sp.Eq(lhs, rhs), substitution, derived, expected


def special_case_derivations(kind: str, m: int = 2, n: int | None = None, denominator: int = 12) -> SpecialCaseReport:
    """Reproduce the substitution chain for the two unit-coefficient special cases and test it exhaustively.

    ``x3_heyde``: on ``X = X_(3)`` with ``a_i = -b_i`` for the first ``m``
    variables and ``c = d``, putting ``v = -u`` gives
    ``prod_{j<=m} mu_j(2 a_j u) = 1``.

    ``x2_darmois``: on ``X = X_(2)`` with ``n = 2m``, ``a = b = c`` equal to one on
    the first half and ``d`` equal to one on the second half, putting ``v = u``
    gives ``prod_j mu_j(u) = 1``.

    The concrete check runs over every tuple of laws with weights in
    ``(1/denominator) Z`` on ``Z(3)`` (resp. ``Z(2)``).  Whenever the product
    identity holds every law must be degenerate, and every tuple satisfying
    the full equation must satisfy the product identity.
    """
    import sympy as sp

    if kind not in ("x3_heyde", "x2_darmois"):
        raise SchemaError(f"unknown special case {kind!r}")
    if kind == "x3_heyde":
        n = m if n is None else n
        G = Group.cyclic(3)
    else:
        n = 2 * m if n is None else n
        if n != 2 * m:
            raise PreconditionError("the Darmois special case needs n = 2m")
        G = Group.cyclic(2)
    eq, substitution, derived, expected = _symbolic(kind, m, n)
    matches = derived == expected

    pmfs = small_pmfs(G, denominator)
    dual = G.dual_points()
    one = Cyclotomic.one(1)
    # unit coefficients: a_j = 1 (so b_j = -1) and c_j = d_j = 1 in the Heyde case
    if kind == "x3_heyde":
        system = FormSystem((1,) * n, (-1,) * m + (1,) * (n - m), (1,) * n, (1,) * n)
        prod_vars = range(m)
        scale = 2
    else:
        system = FormSystem((1,) * m + (0,) * m, (1,) * m + (0,) * m, (1,) * m + (0,) * m, (0,) * m + (1,) * m)
        prod_vars = range(n)
        scale = 1
    # A tolerant floating-point screen over all tuples at once; every exact
    # solution passes it, and each candidate is then re-checked exactly.
    table = np.array([[complex(char_fn_exact(mu, y)) for y in dual] for mu in pmfs])
    pos = {y: i for i, y in enumerate(dual)}
    combos = np.array(list(itertools.product(range(len(pmfs)), repeat=n)), dtype=np.int64)

    def side(r1, r2, uu, vv):
        out = np.ones(len(combos), dtype=complex)
        for j, (p, q) in enumerate(zip(r1, r2)):
            out *= table[combos[:, j], pos[p * uu + q * vv]]
        return out

    ident_mask = np.ones(len(combos), dtype=bool)
    for uu in dual:
        for vv in dual:
            ident_mask &= np.abs(side(system.a, system.b, uu, vv) - side(system.c, system.d, uu, vv)) <= 1e-9
    prod_mask = np.ones(len(combos), dtype=bool)
    for y in dual:
        val = np.ones(len(combos), dtype=complex)
        for j in prod_vars:
            val *= table[combos[:, j], pos[scale * y]]
        prod_mask &= np.abs(val - 1) <= 1e-9
    unit = full = 0
    all_deg = chain = True
    for row in np.nonzero(ident_mask | prod_mask)[0]:
        combo = [pmfs[i] for i in combos[row]]
        ident = all(_product(combo, system.a, system.b, uu, vv) == _product(combo, system.c, system.d, uu, vv)
                    for uu in dual for vv in dual)
        prod_one = all(_char_product([combo[j] for j in prod_vars], scale, y) == one for y in dual)
        if ident:
            full += 1
            chain &= prod_one
        if prod_one:
            unit += 1
            all_deg &= all(len(combo[j]) == 1 for j in prod_vars)
    checked = len(combos)
    return SpecialCaseReport(kind, f"{sp.sstr(eq.lhs)} = {sp.sstr(eq.rhs)}", substitution,
                             f"{sp.sstr(derived.lhs)} = {sp.sstr(derived.rhs)}",
                             f"{sp.sstr(expected.lhs)} = {sp.sstr(expected.rhs)}", bool(matches), G,
                             checked, unit, all_deg, full, chain)


def _product(combo, r1, r2, u, v) -> Cyclotomic:
    acc = Cyclotomic.one(1)
    for p, q, mu in zip(r1, r2, combo):
        acc = acc * char_fn_exact(mu, p * u + q * v)
    return acc


def _char_product(mus, scale: int, y) -> Cyclotomic:
    acc = Cyclotomic.one(1)
    for mu in mus:
        acc = acc * char_fn_exact(mu, scale * y)
    return acc


# ---------------------------------------------------------------------------
# randomized consistency sweep
# ---------------------------------------------------------------------------

DEFAULT_SWEEP = {
    "seed": 20240601,
    "instances": 2000,
    "groups": ["Z3", "Z5", "Z"],
    "n": 2,
    "coefficient_range": [-2, 2],
    "degenerate_fraction": 0.3,
    "max_denominator": 12,
    "max_support": 3,
    "lattice_window": 2,
}


def _random_weights(rng: random.Random, k: int, max_den: int) -> list[Fraction]:
    den = rng.randint(max(k, 2), max_den)
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return [Fraction(p, den) for p in parts]


def _random_element(rng: random.Random, G: Group, window: int) -> GroupElement:
    return G.element([rng.randrange(n) for n in G.invariant_factors],
                     [rng.randint(-window, window) for _ in range(G.lattice_rank)])


def _random_pmf(rng: random.Random, G: Group, cfg: dict) -> Pmf:
    window = cfg["lattice_window"]
    size = G.order if G.is_finite else (2 * window + 1) ** G.lattice_rank
    for _ in range(100):
        k = rng.randint(2, min(cfg["max_support"], size))
        atoms = set()
        while len(atoms) < k:
            atoms.add(_random_element(rng, G, window))
        mu = Pmf(G, dict(zip(sorted(atoms), _random_weights(rng, k, cfg["max_denominator"]))))
        if _nonvanishing(mu, DEFAULT_GRID):
            return mu
    return degenerate(_random_element(rng, G, window))


def _random_system(rng: random.Random, n: int, lo: int, hi: int) -> FormSystem:
    cols = []
    while len(cols) < n:
        col = tuple(rng.randint(lo, hi) for _ in range(4))
        if any(col):
            cols.append(col)
    return FormSystem(*zip(*cols))


def degenerate_closed_form(system: FormSystem, points: Sequence[GroupElement]) -> bool:
    """``sum a_j x_j = sum c_j x_j`` and ``sum b_j x_j = sum d_j x_j``."""
    G = points[0].group

    def comb(r):
        s = G.zero()
        for c, x in zip(r, points):
            s = s + scalar_mul(c, x)
        return s
    return comb(system.a) == comb(system.c) and comb(system.b) == comb(system.d)


def _degenerate_points(rng: random.Random, G: Group, system: FormSystem, window: int, solve: bool):
    n = system.n
    if not solve:
        return [_random_element(rng, G, window) for _ in range(n)]
    if G.is_finite:
        box = G.elements()
    else:
        box = [G.element((), lat) for lat in itertools.product(range(-window, window + 1), repeat=G.lattice_rank)]
    sols = [pts for pts in itertools.product(box, repeat=n) if degenerate_closed_form(system, pts)]
    return list(rng.choice(sols))


def sweep_instance(cfg: dict, index: int) -> dict:
    rng = random.Random(f"{cfg['seed']}:{index}")
    G = Group.parse(cfg["groups"][index % len(cfg["groups"])])
    lo, hi = cfg["coefficient_range"]
    system = _random_system(rng, cfg["n"], lo, hi)
    record: dict = {"index": index, "group": G.label, "system": system.to_json()}
    if rng.random() < cfg["degenerate_fraction"]:
        pts = _degenerate_points(rng, G, system, cfg["lattice_window"], solve=rng.random() < 0.5)
        spec = InstanceSpec(G, system, tuple(degenerate(x) for x in pts), origin="sweep")
        closed = degenerate_closed_form(system, pts)
        record["kind"] = "degenerate"
        record["closed_form"] = closed
    else:
        dists = tuple(_random_pmf(rng, G, cfg) for _ in range(system.n))
        spec = InstanceSpec(G, system, dists, origin="sweep")
        record["kind"] = "random"
        record["closed_form"] = None
    verdict = verify_instance(spec)
    record.update({
        "dists": [mu.to_json(with_group=False) for mu in spec.dists],
        "identically_distributed": verdict.identically_distributed,
        "hypotheses_hold": verdict.hypotheses_hold,
        "condition_set": verdict.condition_set,
        "violations": verdict.violations,
        "consistent": verdict.consistent,
        "exit_code": verdict.exit_code,
    })
    if record["kind"] == "degenerate":
        record["closed_form_match"] = record["closed_form"] == verdict.identically_distributed
    return record


def _chunk(args):
    cfg, indices = args
    return [sweep_instance(cfg, i) for i in indices]


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()


def sweep(config: dict | None = None, workers: int | None = None) -> Iterator[dict]:
    """Seeded randomized consistency sweep yielding one record per instance, in index order.

    Each instance draws from its own generator seeded with ``"{seed}:{index}"``
    so the output does not depend on the number of workers.  The worker count
    defaults to the ``IDFORMS_WORKERS`` environment variable (1 if unset).
    """
    cfg = {**DEFAULT_SWEEP, **(config or {})}
    workers = workers or int(os.environ.get("IDFORMS_WORKERS", "1") or 1)
    total = int(cfg["instances"])
    if workers <= 1:
        for i in range(total):
            yield sweep_instance(cfg, i)
        return
    size = max(1, total // (workers * 8))
    chunks = [(cfg, range(s, min(s + size, total))) for s in range(0, total, size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for records in pool.map(_chunk, chunks):
            yield from records


def summarize(records: Iterable[dict], cfg: dict | None = None) -> dict:
    cfg = {**DEFAULT_SWEEP, **(cfg or {})}
    out = {"tool": "idforms", "version": __version__, "config_sha256": config_hash(cfg), "seed": cfg["seed"],
           "instances": 0, "inconsistent": 0, "identically_distributed": 0, "hypotheses_hold": 0,
           "degenerate_instances": 0, "degenerate_closed_form_true": 0, "degenerate_mismatches": 0,
           "by_group": {}}
    for r in records:
        out["instances"] += 1
        out["inconsistent"] += not r["consistent"]
        out["identically_distributed"] += r["identically_distributed"]
        out["hypotheses_hold"] += r["hypotheses_hold"]
        out["by_group"][r["group"]] = out["by_group"].get(r["group"], 0) + 1
        if r["kind"] == "degenerate":
            out["degenerate_instances"] += 1
            out["degenerate_closed_form_true"] += bool(r["closed_form"])
            out["degenerate_mismatches"] += not r["closed_form_match"]
    return out
