"""Characteristic functions, Fourier inversion and difference-equation detectors on duals."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb
from typing import Callable, Mapping

import numpy as np

from .cyclotomic import Cyclotomic
from .distributions import Pmf
from .errors import SchemaError
from .groups import DualPoint, Group, phase, root_of_unity
from .linalg import nullspace, rank_mod_p

TOL = 1e-9
DEFAULT_GRID = 64


def dual_level(G: Group, y: DualPoint | None = None) -> int:
    """Smallest ``N`` such that every character value at ``y`` is an ``N``-th root of unity."""
    n = G.exponent if G.is_finite else reduce(math.lcm, G.invariant_factors, 1)
    n = max(n, 1)
    if y is not None:
        for t in y.lattice:
            n = math.lcm(n, t.denominator)
    return n


@lru_cache(maxsize=1 << 16)
def char_fn_exact(mu: Pmf, y: DualPoint) -> Cyclotomic:
    """``sum_x mu(x) (x, y)`` as an exact cyclotomic number."""
    n = dual_level(mu.group, y)
    return Cyclotomic.from_phases(n, ((phase(x, y), w) for x, w in mu))


def char_fn(mu: Pmf, y: DualPoint) -> complex:
    return complex(char_fn_exact(mu, y))


def char_fn_float(mu: Pmf, y: DualPoint) -> complex:
    """Plain floating-point Fourier sum (no exact reduction)."""
    return complex(sum(float(w) * root_of_unity(phase(x, y)) for x, w in mu))


@dataclass
class CharFnTable:
    group: Group
    values: dict[DualPoint, complex]
    exact_zero: dict[DualPoint, bool] = field(default_factory=dict)

    def __getitem__(self, y: DualPoint) -> complex:
        return self.values[y]

    def to_json(self) -> list[dict]:
        return [{"dual_point": y.to_json(), "re": v.real, "im": v.imag,
                 "exact_zero": self.exact_zero.get(y, abs(v) <= TOL)}
                for y, v in sorted(self.values.items(), key=lambda kv: kv[0].sort_key)]


def char_fn_table(mu: Pmf, points: list[DualPoint] | None = None, grid: int = DEFAULT_GRID) -> CharFnTable:
    points = points if points is not None else mu.group.dual_points(grid)
    values, zeros = {}, {}
    for y in points:
        e = char_fn_exact(mu, y)
        values[y] = complex(e)
        zeros[y] = e.is_zero()
    return CharFnTable(mu.group, values, zeros)


@dataclass(frozen=True)
class Nonvanishing:
    value: bool
    exhaustive: bool
    method: str
    witness: DualPoint | None = None

    def __bool__(self):
        return self.value

    def to_json(self) -> dict:
        out = {"value": self.value, "exhaustive": self.exhaustive, "method": self.method}
        if self.witness is not None:
            out["zero_at"] = self.witness.to_json()
        return out


def nonvanishing(mu: Pmf, grid: int = DEFAULT_GRID) -> Nonvanishing:
    """Whether the characteristic function of ``mu`` has no zero on the dual.

    Finite groups are checked at every dual point with exact cyclotomic
    arithmetic.  A pure rank-one lattice is decided exactly by locating roots
    of the generating polynomial on the unit circle.  Any other lattice group
    is sampled on a rational grid and the answer is marked non-exhaustive.
    """
    G = mu.group
    if G.is_finite:
        for y in G.dual_points():
            if char_fn_exact(mu, y).is_zero():
                return Nonvanishing(False, True, "exact", y)
        return Nonvanishing(True, True, "exact")
    if G.lattice_rank == 1 and not G.invariant_factors:
        return _nonvanishing_circle(mu)
    for y in G.dual_points(grid):
        if char_fn_exact(mu, y).is_zero():
            return Nonvanishing(False, True, "grid-exact-zero", y)
    return Nonvanishing(True, False, f"grid{grid}")


def _nonvanishing_circle(mu: Pmf) -> Nonvanishing:
    import sympy as sp

    z = sp.Symbol("z")
    t = sp.Symbol("t", real=True)
    lo = min(x.lattice[0] for x in mu.support)
    P = sp.Poly(sum(sp.Rational(w.numerator, w.denominator) * z ** (x.lattice[0] - lo)
                    for x, w in mu), z, domain=sp.QQ)
    G = mu.group
    if P.eval(-1) == 0:
        return Nonvanishing(False, True, "exact-circle", G.dual_point((), [Fraction(1, 2)]))
    R = sp.Poly(list(reversed(P.all_coeffs())), z, domain=sp.QQ)
    g = sp.gcd(P, R)
    if g.degree() <= 0:
        return Nonvanishing(True, True, "exact-circle")
    # z = (1 + i t)/(1 - i t) sweeps the unit circle except z = -1
    D = g.degree()
    expr = sp.expand(sum(c * (1 + sp.I * t) ** k * (1 - sp.I * t) ** (D - k)
                         for k, c in enumerate(reversed(g.all_coeffs()))))
    re, im = expr.as_real_imag()
    common = sp.gcd(sp.Poly(re, t, domain=sp.QQ), sp.Poly(im, t, domain=sp.QQ))
    if common.degree() > 0 and common.count_roots() > 0:
        return Nonvanishing(False, True, "exact-circle")
    return Nonvanishing(True, True, "exact-circle")


class InconsistentTableError(ValueError):
    """The table is not the characteristic function of a probability law."""


def inverse_transform(table: CharFnTable | Mapping[DualPoint, complex], group: Group | None = None,
                      max_denominator: int = 10 ** 6, tol: float = TOL) -> Pmf:
    if isinstance(table, CharFnTable):
        group, values = table.group, table.values
    else:
        values = dict(table)
        if group is None:
            group = next(iter(values)).group
    if not group.is_finite:
        raise SchemaError("inverse transform needs a finite group")
    dual = group.dual_points()
    if set(values) != set(dual):
        raise SchemaError("table must cover the whole dual")
    order = group.order
    weights = {}
    for x in group.elements():
        s = sum(complex(values[y]) * root_of_unity(-phase(x, y)) for y in dual) / order
        if abs(s.imag) > tol:
            raise InconsistentTableError(f"non-real mass {s} at {x!r}")
        w = Fraction(s.real).limit_denominator(max_denominator)
        if w < -Fraction(tol) or (w < 0 and abs(s.real) > tol):
            raise InconsistentTableError(f"negative mass {s.real} at {x!r}")
        if w > 0:
            weights[x] = w
    try:
        mu = Pmf(group, weights)
    except SchemaError as exc:
        raise InconsistentTableError(str(exc)) from exc
    residual = max(abs(char_fn(mu, y) - complex(values[y])) for y in dual)
    if residual > tol:
        raise InconsistentTableError(f"reconstruction residual {residual:.3g} exceeds {tol}")
    return mu


# ---------------------------------------------------------------------------
# functional equations on the dual
# ---------------------------------------------------------------------------

def _lookup(f) -> Callable[[DualPoint], object]:
    return f if callable(f) else f.__getitem__


def _is_zero(v, tol: float) -> bool:
    if isinstance(v, Cyclotomic):
        return v.is_zero()
    if isinstance(v, (int, Fraction)):
        return v == 0
    return abs(v) <= tol


def _finite_dual(G: Group) -> list[DualPoint]:
    if not G.is_finite:
        raise SchemaError("the full dual is only enumerable for finite groups")
    return G.dual_points()


def parallelogram_check(phi, G: Group, tol: float = TOL) -> bool:
    """``phi(u+v) + phi(u-v) == 2(phi(u) + phi(v))`` for every pair of dual points."""
    f = _lookup(phi)
    dual = _finite_dual(G)
    return all(_is_zero(f(u + v) + f(u - v) - 2 * (f(u) + f(v)), tol) for u in dual for v in dual)


def parallelogram_solutions(G: Group) -> list[dict[DualPoint, Fraction]]:
    """Basis of all real solutions of the parallelogram identity on the finite dual.

    An empty list means ``phi == 0`` is the only solution.
    """
    dual = _finite_dual(G)
    idx = {y: i for i, y in enumerate(dual)}
    rows = []
    for u in dual:
        for v in dual:
            row = [0] * len(dual)
            row[idx[u + v]] += 1
            row[idx[u - v]] += 1
            row[idx[u]] -= 2
            row[idx[v]] -= 2
            rows.append(row)
    return [dict(zip(dual, vec)) for vec in nullspace(rows, len(dual))]


def difference(f, h: DualPoint, power: int = 1) -> Callable[[DualPoint], object]:
    """``Delta_h^power f`` with ``Delta_h f(y) = f(y + h) - f(y)``."""
    g = _lookup(f)

    def out(y: DualPoint):
        return sum(((-1) ** (power - k) * comb(power, k) * g(y + k * h) for k in range(power + 1)),
                   0 * g(y))
    return out


def is_polynomial(f, l: int, G: Group, tol: float = TOL) -> bool:
    """``Delta_h^(l+1) f == 0`` for every ``h`` and ``y`` in the finite dual."""
    dual = _finite_dual(G)
    for h in dual:
        d = difference(f, h, l + 1)
        if not all(_is_zero(d(y), tol) for y in dual):
            return False
    return True


def _difference_rows(dual: list[DualPoint], shifts: list[DualPoint], l: int) -> list[list[int]]:
    idx = {y: i for i, y in enumerate(dual)}
    rows = []
    for h in shifts:
        for y in dual:
            row = [0] * len(dual)
            for k in range(l + 2):
                row[idx[y + k * h]] += (-1) ** (l + 1 - k) * comb(l + 1, k)
            rows.append(row)
    return rows


def polynomial_solutions(G: Group, l: int) -> list[dict[DualPoint, Fraction]]:
    """Basis of the functions on the finite dual killed by every ``Delta_h^(l+1)``.

    The system restricted to the standard generators is tried first: if its
    rank modulo a large prime is ``|Y| - 1`` the rational rank is at least that,
    and since constants always solve the system the solution space is exactly
    the constants.  Otherwise the full system is reduced exactly.
    """
    dual = _finite_dual(G)
    size = len(dual)
    gens = [G.dual_point([1 if i == j else 0 for i in range(len(G.factors))])
            for j in range(len(G.factors))]
    if gens:
        rows = _difference_rows(dual, gens, l)
        if rank_mod_p(np.array(rows)) == size - 1:
            return [{y: Fraction(1) for y in dual}]
    rows = _difference_rows(dual, dual, l)
    return [dict(zip(dual, vec)) for vec in nullspace(rows, size)]


def polynomials_are_constant(G: Group, l: int) -> bool:
    basis = polynomial_solutions(G, l)
    return len(basis) == 1 and len(set(basis[0].values())) == 1
