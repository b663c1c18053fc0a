"""Exact finitely supported probability distributions on a :class:`Group`."""
from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import GroupMismatchError, SchemaError
from .groups import Group, GroupElement, Subgroup, scalar_mul


class Pmf:
    """Probability mass function with rational weights summing exactly to 1."""

    __slots__ = ("group", "_atoms", "_hash")

    def __init__(self, group: Group, weights: Mapping[GroupElement, Fraction] | Iterable[tuple[GroupElement, Fraction]]):
        items = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[GroupElement, Fraction] = defaultdict(Fraction)
        for x, w in items:
            if x.group != group:
                raise GroupMismatchError(f"atom {x!r} is not in {group.label}")
            w = Fraction(w)
            if w < 0:
                raise SchemaError(f"negative weight {w} at {x!r}")
            acc[x] += w
        atoms = tuple(sorted(((x, w) for x, w in acc.items() if w), key=lambda a: a[0].sort_key))
        total = sum((w for _, w in atoms), Fraction(0))
        if total != 1:
            raise SchemaError(f"weights sum to {total}, not 1")
        self.group = group
        self._atoms = atoms
        self._hash = hash((group, atoms))

    @property
    def atoms(self) -> tuple[tuple[GroupElement, Fraction], ...]:
        return self._atoms

    @property
    def weights(self) -> dict[GroupElement, Fraction]:
        return dict(self._atoms)

    @property
    def support(self) -> list[GroupElement]:
        return [x for x, _ in self._atoms]

    def __getitem__(self, x: GroupElement) -> Fraction:
        return self.weights.get(x, Fraction(0))

    def __iter__(self) -> Iterator[tuple[GroupElement, Fraction]]:
        return iter(self._atoms)

    def __len__(self):
        return len(self._atoms)

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return self.group == other.group and self._atoms == other._atoms

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{x!r}: {w}" for x, w in self._atoms)
        return f"Pmf[{self.group.label}]{{{body}}}"

    def to_json(self, with_group: bool = True) -> dict:
        out = {"atoms": [{"element": x.to_json(), "num": w.numerator, "den": w.denominator}
                         for x, w in self._atoms]}
        if with_group:
            out = {"group": self.group.to_json(), **out}
        return out


def degenerate(x: GroupElement) -> Pmf:
    return Pmf(x.group, {x: Fraction(1)})


def haar(K: Subgroup) -> Pmf:
    w = Fraction(1, K.order)
    return Pmf(K.group, {x: w for x in K.elements})


def uniform(G: Group) -> Pmf:
    """Haar distribution of the finite group ``G``."""
    if not G.is_finite:
        raise ValueError("uniform distribution needs a finite group")
    w = Fraction(1, G.order)
    return Pmf(G, {x: w for x in G.elements()})


def _check_same(mu: Pmf, nu: Pmf) -> None:
    if mu.group != nu.group:
        raise GroupMismatchError(f"cannot combine laws on {mu.group.label} and {nu.group.label}")


def convolve(mu: Pmf, nu: Pmf) -> Pmf:
    _check_same(mu, nu)
    acc: dict[GroupElement, Fraction] = defaultdict(Fraction)
    for x, w in mu:
        for y, v in nu:
            acc[x + y] += w * v
    return Pmf(mu.group, acc)


def pushforward(a: int, mu: Pmf) -> Pmf:
    """Image of ``mu`` under ``x -> a x``."""
    acc: dict[GroupElement, Fraction] = defaultdict(Fraction)
    for x, w in mu:
        acc[scalar_mul(a, x)] += w
    return Pmf(mu.group, acc)


def reflect(mu: Pmf) -> Pmf:
    return pushforward(-1, mu)


def mixture(parts: Iterable[tuple[Fraction, Pmf]]) -> Pmf:
    parts = list(parts)
    group = parts[0][1].group
    acc: dict[GroupElement, Fraction] = defaultdict(Fraction)
    for p, mu in parts:
        _check_same(parts[0][1], mu)
        for x, w in mu:
            acc[x] += Fraction(p) * w
    return Pmf(group, acc)


class Kind(enum.Enum):
    DEGENERATE = "degenerate"
    HAAR_SHIFT = "haar_shift"
    OTHER = "other"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    shift: GroupElement | None = None
    subgroup: Subgroup | None = None

    @property
    def is_degenerate(self) -> bool:
        return self.kind is Kind.DEGENERATE

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.shift is not None:
            out["shift"] = self.shift.to_json()
        if self.subgroup is not None:
            out["subgroup"] = self.subgroup.to_json()
        return out


def classify(mu: Pmf) -> Classification:
    """Degenerate, a shifted Haar law of a finite subgroup, or neither.

    The shift reported for a Haar coset is its smallest element.
    """
    support = mu.support
    if len(support) == 1:
        return Classification(Kind.DEGENERATE, shift=support[0])
    weights = {w for _, w in mu}
    if len(weights) == 1:
        base = support[0]
        diffs = frozenset(x - base for x in support)
        if all(s + t in diffs for s in diffs for t in diffs):
            K = Subgroup(mu.group, tuple(sorted(diffs)), diffs)
            return Classification(Kind.HAAR_SHIFT, shift=base, subgroup=K)
    return Classification(Kind.OTHER)


def is_degenerate(mu: Pmf) -> bool:
    return len(mu) == 1
