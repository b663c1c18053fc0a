"""Linear forms ``L1..L4`` in independent group-valued variables and their joint laws."""
from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Cyclotomic
from .distributions import Pmf, degenerate
from .errors import GroupMismatchError, SchemaError
from .groups import DualPoint, Group, GroupElement, admissible, pair, scalar_mul, unpair
from .spectral import char_fn_exact, char_fn_float


@dataclass(frozen=True)
class FormSystem:
    """Integer coefficients of ``L1 = sum a_j xi_j`` ... ``L4 = sum d_j xi_j``."""
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    d: tuple[int, ...]

    def __post_init__(self):
        rows = [tuple(int(v) for v in r) for r in (self.a, self.b, self.c, self.d)]
        if not rows[0]:
            raise SchemaError("a form system needs at least one variable")
        if len({len(r) for r in rows}) != 1:
            raise SchemaError(f"coefficient rows differ in length: {[len(r) for r in rows]}")
        for name, r in zip("abcd", rows):
            object.__setattr__(self, name, r)

    @property
    def n(self) -> int:
        return len(self.a)

    def column(self, j: int) -> tuple[int, int, int, int]:
        return self.a[j], self.b[j], self.c[j], self.d[j]

    def select(self, indices: Sequence[int]) -> "FormSystem":
        return FormSystem(*(tuple(r[j] for j in indices) for r in (self.a, self.b, self.c, self.d)))

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "c": list(self.c), "d": list(self.d)}


@dataclass(frozen=True)
class InstanceSpec:
    group: Group
    system: FormSystem
    dists: tuple[Pmf, ...]
    mode: str = "independent"
    origin: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "dists", tuple(self.dists))
        if len(self.dists) != self.system.n:
            raise SchemaError(f"{self.system.n} variables but {len(self.dists)} distributions")
        if any(mu.group != self.group for mu in self.dists):
            raise GroupMismatchError(f"every distribution must live on {self.group.label}")
        if self.mode not in ("independent", "q_independent"):
            raise SchemaError(f"unknown mode {self.mode!r}")

    def to_json(self) -> dict:
        out = {"group": self.group.to_json(), "system": self.system.to_json(),
               "dists": [mu.to_json(with_group=False) for mu in self.dists], "mode": self.mode}
        if self.origin:
            out["origin"] = self.origin
        return out


def _present(spec: InstanceSpec) -> InstanceSpec:
    """Drop variables that appear in no form."""
    keep = [j for j in range(spec.system.n) if any(spec.system.column(j))]
    if len(keep) == spec.system.n:
        return spec
    dropped = [j + 1 for j in range(spec.system.n) if j not in keep]
    warnings.warn(f"variables {dropped} have all-zero coefficients and are ignored", stacklevel=3)
    if not keep:
        return spec
    return replace(spec, system=spec.system.select(keep), dists=tuple(spec.dists[j] for j in keep))


def form_law(coeffs: Sequence[int], dists: Sequence[Pmf]) -> Pmf:
    """Law of ``sum coeffs[j] * xi_j``."""
    if len(coeffs) != len(dists):
        raise SchemaError("coefficient vector and distribution list differ in length")
    group = dists[0].group
    law: dict[GroupElement, Fraction] = {group.zero(): Fraction(1)}
    for r, mu in zip(coeffs, dists):
        nxt: dict[GroupElement, Fraction] = defaultdict(Fraction)
        for s, p in law.items():
            for x, w in mu:
                nxt[s + scalar_mul(r, x)] += p * w
        law = nxt
    return Pmf(group, law)


def joint_pmf(r1: Sequence[int], r2: Sequence[int], dists: Sequence[Pmf]) -> Pmf:
    """Exact law on ``X x X`` of ``(sum r1_j xi_j, sum r2_j xi_j)``."""
    if not (len(r1) == len(r2) == len(dists)):
        raise SchemaError("coefficient vectors and distribution list differ in length")
    if not dists:
        raise SchemaError("need at least one distribution")
    group = dists[0].group
    if any(mu.group != group for mu in dists):
        raise GroupMismatchError("distributions live on different groups")
    law: dict[tuple[GroupElement, GroupElement], Fraction] = {(group.zero(), group.zero()): Fraction(1)}
    for p, q, mu in zip(r1, r2, dists):
        image = [(scalar_mul(p, x), scalar_mul(q, x), w) for x, w in mu]
        nxt: dict[tuple[GroupElement, GroupElement], Fraction] = defaultdict(Fraction)
        for (s, t), prob in law.items():
            for dx, dy, w in image:
                nxt[(s + dx, t + dy)] += prob * w
        law = nxt
    return Pmf(group.square(), {pair(s, t): w for (s, t), w in law.items()})


def marginals(joint: Pmf, group: Group) -> tuple[Pmf, Pmf]:
    first: dict[GroupElement, Fraction] = defaultdict(Fraction)
    second: dict[GroupElement, Fraction] = defaultdict(Fraction)
    for z, w in joint:
        x, y = unpair(z, group)
        first[x] += w
        second[y] += w
    return Pmf(group, first), Pmf(group, second)


def identically_distributed(spec: InstanceSpec) -> bool:
    """Exact equality of the laws of ``(L1, L2)`` and ``(L3, L4)``."""
    spec = _present(spec)
    s = spec.system
    return joint_pmf(s.a, s.b, spec.dists) == joint_pmf(s.c, s.d, spec.dists)


def _side(spec: InstanceSpec, r1, r2, u: DualPoint, v: DualPoint, exact: bool):
    acc = Cyclotomic.one(1) if exact else 1 + 0j
    for p, q, mu in zip(r1, r2, spec.dists):
        y = p * u + q * v
        acc = acc * (char_fn_exact(mu, y) if exact else char_fn_float(mu, y))
    return acc


def equation_residual(spec: InstanceSpec, u: DualPoint, v: DualPoint) -> complex:
    """``prod mu_j^(a_j u + b_j v) - prod mu_j^(c_j u + d_j v)`` in floating point."""
    s = spec.system
    return _side(spec, s.a, s.b, u, v, False) - _side(spec, s.c, s.d, u, v, False)


def equation_residual_exact(spec: InstanceSpec, u: DualPoint, v: DualPoint) -> Cyclotomic:
    s = spec.system
    return _side(spec, s.a, s.b, u, v, True) - _side(spec, s.c, s.d, u, v, True)


def dual_pairs(group: Group, grid: int = 16):
    pts = group.dual_points(grid)
    return [(u, v) for u in pts for v in pts]


def equation_holds_exact(spec: InstanceSpec, grid: int = 16) -> bool:
    """The characteristic-function identity at every pair of (grid) dual points, exactly."""
    return all(equation_residual_exact(spec, u, v).is_zero() for u, v in dual_pairs(spec.group, grid))


def max_equation_residual(spec: InstanceSpec, grid: int = 16) -> float:
    return max(abs(equation_residual(spec, u, v)) for u, v in dual_pairs(spec.group, grid))


def determinant_table(system: FormSystem) -> list[list[int]]:
    """``a_i d_j - b_i c_j`` for all ``i, j``."""
    return [[ai * dj - bi * cj for cj, dj in zip(system.c, system.d)]
            for ai, bi in zip(system.a, system.b)]


def condition_indices(system: FormSystem, G: Group) -> set[int]:
    """Variables ``i`` (numbered from 1) with every ``a_i d_j - b_i c_j`` admissible for ``G``."""
    return {i + 1 for i, row in enumerate(determinant_table(system))
            if all(admissible(G, v) for v in row)}


def degenerate_instance(group: Group, system: FormSystem, points: Sequence[GroupElement],
                        mode: str = "independent") -> InstanceSpec:
    return InstanceSpec(group, system, tuple(degenerate(x) for x in points), mode)
