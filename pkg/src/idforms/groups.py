"""Finitely generated abelian groups ``Z^d x Z(n1) x ... x Z(nk)``.

Groups are kept in invariant-factor form (``n1 | n2 | ... | nk``).  The finite
part is identified with its own dual, and the dual of the lattice part is the
torus, whose points are stored as exact fractions in ``[0, 1)`` so every
character value is a root of unity with a rational phase.
"""
from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

from .errors import GroupMismatchError, SchemaError


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and _prime_powers(n) == [(n, 1)]


@dataclass(frozen=True)
class Group:
    lattice_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(n) for n in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if self.lattice_rank < 0:
            raise SchemaError("lattice_rank must be nonnegative")
        if any(n < 2 for n in factors):
            raise SchemaError(f"invariant factors must be >= 2, got {factors}")
        for n1, n2 in zip(factors, factors[1:]):
            if n2 % n1:
                raise SchemaError(
                    f"invariant factors {factors} do not form a divisibility chain; "
                    "use Group.from_cyclic to normalize")

    # -- construction -------------------------------------------------
    @classmethod
    def from_cyclic(cls, factors: Sequence[int], lattice_rank: int = 0) -> "Group":
        return CyclicPresentation(factors, lattice_rank).group

    @classmethod
    def cyclic(cls, n: int) -> "Group":
        return cls(0, (n,)) if n > 1 else cls()

    @classmethod
    def parse(cls, text: str) -> "Group":
        """Parse shorthand like ``Z3``, ``Z(3)``, ``Z``, ``Z^2xZ4``, ``Z2xZ6``."""
        return CyclicPresentation.parse(text).group

    # -- structure ------------------------------------------------------
    @property
    def factors(self) -> tuple[int, ...]:
        return self.invariant_factors

    @property
    def torsion_order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.lattice_rank == 0

    @property
    def order(self) -> int | None:
        return self.torsion_order if self.is_finite else None

    @property
    def exponent(self) -> int:
        """Least ``e > 0`` with ``eX = 0``; 0 when there is a lattice part."""
        if self.lattice_rank:
            return 0
        return reduce(_lcm, self.invariant_factors, 1)

    @property
    def is_trivial(self) -> bool:
        return self.lattice_rank == 0 and not self.invariant_factors

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.lattice_rank, (0,) * len(self.invariant_factors))

    def element(self, torsion: Iterable[int] = (), lattice: Iterable[int] = ()) -> "GroupElement":
        torsion, lattice = tuple(torsion), tuple(lattice)
        if not lattice and self.lattice_rank:
            lattice = (0,) * self.lattice_rank
        if not torsion and self.invariant_factors:
            torsion = (0,) * len(self.invariant_factors)
        return GroupElement(self, lattice, torsion)

    def __call__(self, *torsion: int) -> "GroupElement":
        return self.element(torsion)

    def torsion_elements(self) -> list["GroupElement"]:
        return list(self._torsion_elements)

    @cached_property
    def _torsion_elements(self) -> tuple["GroupElement", ...]:
        zero_lat = (0,) * self.lattice_rank
        return tuple(GroupElement(self, zero_lat, t)
                     for t in itertools.product(*(range(n) for n in self.invariant_factors)))

    def elements(self) -> list["GroupElement"]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return self.torsion_elements()

    def dual_zero(self) -> "DualPoint":
        return DualPoint(self, (0,) * len(self.invariant_factors),
                         (Fraction(0),) * self.lattice_rank)

    def dual_point(self, torsion: Iterable[int] = (), lattice: Iterable = ()) -> "DualPoint":
        torsion, lattice = tuple(torsion), tuple(Fraction(t) for t in lattice)
        if not torsion and self.invariant_factors:
            torsion = (0,) * len(self.invariant_factors)
        if not lattice and self.lattice_rank:
            lattice = (Fraction(0),) * self.lattice_rank
        return DualPoint(self, torsion, lattice)

    def dual_points(self, grid: int = 64) -> list["DualPoint"]:
        """All dual points of the finite part, times a ``grid``-point mesh per torus axis.

        For finite groups this is the whole dual.  For a lattice part it is the
        finite subgroup ``(1/grid)Z / Z`` of each torus coordinate.
        """
        tors = list(itertools.product(*(range(n) for n in self.invariant_factors)))
        lat = list(itertools.product(*([Fraction(i, grid) for i in range(grid)]
                                       for _ in range(self.lattice_rank))))
        return [DualPoint(self, t, l) for l in lat for t in tors]

    def square(self) -> "Group":
        """``X x X`` in canonical form; coordinates are interleaved (see :func:`pair`)."""
        doubled = tuple(n for n in self.invariant_factors for _ in range(2))
        return Group(2 * self.lattice_rank, doubled)

    # -- presentation ---------------------------------------------------
    def to_json(self) -> dict:
        return {"lattice_rank": self.lattice_rank, "factors": list(self.invariant_factors)}

    @property
    def label(self) -> str:
        parts = []
        if self.lattice_rank == 1:
            parts.append("Z")
        elif self.lattice_rank > 1:
            parts.append(f"Z^{self.lattice_rank}")
        parts += [f"Z({n})" for n in self.invariant_factors]
        return " x ".join(parts) or "{0}"

    def __str__(self):
        return self.label

    def __repr__(self):
        return f"Group({self.label})"


@dataclass(frozen=True)
class GroupElement:
    group: Group
    lattice: tuple[int, ...]
    torsion: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.lattice) != g.lattice_rank or len(self.torsion) != len(g.invariant_factors):
            raise SchemaError(f"element shape does not match {g.label}")
        object.__setattr__(self, "lattice", tuple(int(x) for x in self.lattice))
        object.__setattr__(self, "torsion",
                           tuple(int(x) % n for x, n in zip(self.torsion, g.invariant_factors)))

    @property
    def is_zero(self) -> bool:
        return not any(self.lattice) and not any(self.torsion)

    @property
    def sort_key(self) -> tuple:
        return (self.lattice, self.torsion)

    def __lt__(self, other: "GroupElement"):
        return self.sort_key < other.sort_key

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return add(self, other)

    def __neg__(self) -> "GroupElement":
        return scalar_mul(-1, self)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return add(self, scalar_mul(-1, other))

    def __rmul__(self, a: int) -> "GroupElement":
        return scalar_mul(a, self)

    def order(self) -> int | None:
        """Order of the element, ``None`` when it has infinite order."""
        if any(self.lattice):
            return None
        return reduce(_lcm, (n // math.gcd(n, x) for x, n in
                             zip(self.torsion, self.group.invariant_factors)), 1)

    def to_json(self) -> dict:
        return {"lattice": list(self.lattice), "torsion": list(self.torsion)}

    def __repr__(self):
        parts = list(map(str, self.lattice)) + list(map(str, self.torsion))
        if len(parts) == 1:
            return parts[0]
        return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class DualPoint:
    """A character of ``group``: residues on the finite part, torus fractions on the lattice."""
    group: Group
    torsion: tuple[int, ...]
    lattice: tuple[Fraction, ...]

    def __post_init__(self):
        g = self.group
        if len(self.lattice) != g.lattice_rank or len(self.torsion) != len(g.invariant_factors):
            raise SchemaError(f"dual point shape does not match {g.label}")
        object.__setattr__(self, "torsion",
                           tuple(int(y) % n for y, n in zip(self.torsion, g.invariant_factors)))
        object.__setattr__(self, "lattice", tuple(Fraction(t) % 1 for t in self.lattice))

    @property
    def is_zero(self) -> bool:
        return not any(self.torsion) and not any(self.lattice)

    def __add__(self, other: "DualPoint") -> "DualPoint":
        _same(self.group, other.group)
        return DualPoint(self.group,
                         tuple(a + b for a, b in zip(self.torsion, other.torsion)),
                         tuple(a + b for a, b in zip(self.lattice, other.lattice)))

    def __neg__(self) -> "DualPoint":
        return -1 * self

    def __sub__(self, other: "DualPoint") -> "DualPoint":
        return self + (-1 * other)

    def __rmul__(self, a: int) -> "DualPoint":
        return DualPoint(self.group, tuple(a * y for y in self.torsion),
                         tuple(a * t for t in self.lattice))

    @property
    def sort_key(self) -> tuple:
        return (self.lattice, self.torsion)

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "lattice": [str(t) for t in self.lattice]}

    def __repr__(self):
        parts = [str(t) for t in self.lattice] + [str(y) for y in self.torsion]
        return "y(" + ",".join(parts) + ")"


def _same(g: Group, h: Group) -> None:
    if g != h:
        raise GroupMismatchError(f"elements of {g.label} and {h.label} cannot be combined")


def add(g: GroupElement, h: GroupElement) -> GroupElement:
    _same(g.group, h.group)
    return GroupElement(g.group,
                        tuple(a + b for a, b in zip(g.lattice, h.lattice)),
                        tuple(a + b for a, b in zip(g.torsion, h.torsion)))


def scalar_mul(a: int, g: GroupElement) -> GroupElement:
    """The endomorphism ``x -> a x``."""
    return GroupElement(g.group, tuple(a * x for x in g.lattice), tuple(a * x for x in g.torsion))


def phase(x: GroupElement, y: DualPoint) -> Fraction:
    """Exact phase ``t`` in ``[0, 1)`` with ``(x, y) = exp(2 pi i t)``."""
    _same(x.group, y.group)
    t = sum((Fraction(a * b, n) for a, b, n in zip(x.torsion, y.torsion, x.group.invariant_factors)),
            Fraction(0))
    t += sum((a * s for a, s in zip(x.lattice, y.lattice)), Fraction(0))
    return t % 1


def root_of_unity(t: Fraction) -> complex:
    """``exp(2 pi i t)``, exact at multiples of a quarter turn."""
    t = Fraction(t) % 1
    exact = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if t in exact:
        return exact[t]
    return cmath.exp(2j * math.pi * t)


def pairing(x: GroupElement, y: DualPoint) -> complex:
    """Character value ``(x, y)``; the exact phase is available from :func:`phase`."""
    return root_of_unity(phase(x, y))


def admissible(G: Group, a: int) -> bool:
    """True iff ``aX != {0}``."""
    if G.lattice_rank and a != 0:
        return True
    return any(a % n for n in G.invariant_factors)


def pair(x: GroupElement, y: GroupElement) -> GroupElement:
    """Embed ``(x, y)`` into ``X.square()``."""
    _same(x.group, y.group)
    G2 = x.group.square()
    return GroupElement(G2, x.lattice + y.lattice,
                        tuple(v for ab in zip(x.torsion, y.torsion) for v in ab))


def unpair(z: GroupElement, G: Group) -> tuple[GroupElement, GroupElement]:
    d = G.lattice_rank
    return (GroupElement(G, z.lattice[:d], z.torsion[0::2]),
            GroupElement(G, z.lattice[d:], z.torsion[1::2]))


def pair_dual(u: DualPoint, v: DualPoint) -> DualPoint:
    _same(u.group, v.group)
    return DualPoint(u.group.square(), tuple(t for ab in zip(u.torsion, v.torsion) for t in ab),
                     u.lattice + v.lattice)


# ---------------------------------------------------------------------------
# Presentations: arbitrary cyclic decompositions mapped onto invariant factors
# ---------------------------------------------------------------------------

class CyclicPresentation:
    """``Z^d x Z(m1) x ... x Z(mr)`` for arbitrary ``m_i`` and its isomorphism onto
    the invariant-factor form, via the primary decomposition and the CRT."""

    _TOKEN = re.compile(r"^Z(?:\^(\d+))?(?:\(?(\d+)\)?)?$")

    def __init__(self, factors: Sequence[int], lattice_rank: int = 0):
        factors = [int(m) for m in factors]
        if any(m < 1 for m in factors):
            raise SchemaError(f"cyclic factors must be positive, got {factors}")
        self.source = tuple(factors)
        self.lattice_rank = int(lattice_rank)
        by_prime: dict[int, list[tuple[int, int]]] = {}
        for j, m in enumerate(factors):
            for p, e in _prime_powers(m):
                by_prime.setdefault(p, []).append((e, j))
        k = max((len(v) for v in by_prime.values()), default=0)
        inv = [1] * k
        # slot[(j, p)] = index of the invariant factor receiving the p-part of factor j
        self._slot: dict[tuple[int, int], int] = {}
        for p, parts in by_prime.items():
            parts.sort()
            offset = k - len(parts)
            for pos, (e, j) in enumerate(parts):
                inv[offset + pos] *= p ** e
                self._slot[(j, p)] = offset + pos
        self._prime_parts = {j: _prime_powers(m) for j, m in enumerate(factors)}
        self.group = Group(self.lattice_rank, tuple(inv))

    @classmethod
    def parse(cls, text: str) -> "CyclicPresentation":
        text = text.replace(" ", "").replace("×", "x").replace("*", "x")
        if text in ("", "0", "{0}", "trivial"):
            return cls([])
        rank, factors = 0, []
        for token in text.split("x"):
            m = cls._TOKEN.match(token)
            if not m:
                raise SchemaError(f"cannot parse group factor {token!r}")
            power, n = m.group(1), m.group(2)
            if n is None:
                rank += int(power or 1)
            else:
                factors.extend([int(n)] * int(power or 1))
        return cls(factors, rank)

    def element(self, torsion: Sequence[int] = (), lattice: Sequence[int] = ()) -> GroupElement:
        torsion = list(torsion) or [0] * len(self.source)
        if len(torsion) != len(self.source):
            raise SchemaError(f"expected {len(self.source)} torsion coordinates, got {len(torsion)}")
        inv = self.group.invariant_factors
        residues: list[list[tuple[int, int]]] = [[] for _ in inv]
        for j, r in enumerate(torsion):
            for p, e in self._prime_parts[j]:
                residues[self._slot[(j, p)]].append((r % p ** e, p ** e))
        coords = [_crt(res) for res in residues]
        return self.group.element(coords, lattice)


def _crt(residues: list[tuple[int, int]]) -> int:
    x, mod = 0, 1
    for r, m in residues:
        # coprime moduli by construction
        t = ((r - x) * pow(mod, -1, m)) % m
        x, mod = x + mod * t, mod * m
    return x % mod if mod > 1 else 0


# ---------------------------------------------------------------------------
# Subgroups of the torsion part
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    group: Group
    generators: tuple[GroupElement, ...]
    elements: frozenset[GroupElement] = field(compare=True)

    def __post_init__(self):
        if any(any(g.lattice) for g in self.elements):
            raise SchemaError("subgroups must lie in the torsion part")

    @classmethod
    def generated_by(cls, group: Group, gens: Iterable[GroupElement]) -> "Subgroup":
        gens = tuple(gens)
        for g in gens:
            _same(group, g.group)
        elems = {group.zero()}
        frontier = list(elems)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = x + g
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return cls(group, gens, frozenset(elems))

    @classmethod
    def trivial(cls, group: Group) -> "Subgroup":
        return cls(group, (), frozenset([group.zero()]))

    @classmethod
    def whole(cls, group: Group) -> "Subgroup":
        """The full torsion part."""
        gens = tuple(group.element([1 if i == k else 0 for i in range(len(group.factors))])
                     for k in range(len(group.factors)))
        return cls(group, gens, frozenset(group.torsion_elements()))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.elements

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group == other.group and self.elements == other.elements

    def __hash__(self):
        return hash((self.group, self.elements))

    def to_json(self) -> dict:
        return {"order": self.order, "elements": [x.to_json() for x in sorted(self.elements)]}

    def __repr__(self):
        return "{" + ", ".join(repr(x) for x in sorted(self.elements)) + "}"


def subgroups(G: Group) -> list[Subgroup]:
    """Every subgroup of the torsion part of ``G``, sorted by order then elements.

    Breadth-first: each subgroup found is extended by one element from each of
    its cosets; bitmasks over an index of the torsion part remove duplicates.
    """
    elems = G.torsion_elements()
    index = {x: i for i, x in enumerate(elems)}
    N = len(elems)
    add_table = [[index[x + y] for y in elems] for x in elems]

    def extend(members: list[int], g: int) -> list[int]:
        out, seen = list(members), set(members)
        step = g
        while step not in seen:
            for s in members:
                t = add_table[s][step]
                seen.add(t)
                out.append(t)
            step = add_table[step][g]
        return out

    def mask(members: Iterable[int]) -> int:
        m = 0
        for i in members:
            m |= 1 << i
        return m

    start = [index[G.zero()]]
    found = {mask(start): (start, ())}
    queue = [mask(start)]
    while queue:
        key = queue.pop()
        members, gens = found[key]
        covered = key
        for g in range(N):
            if covered >> g & 1:
                continue
            grown = extend(members, g)
            m = mask(grown)
            covered |= mask(add_table[g][s] for s in members)
            if m not in found:
                found[m] = (grown, gens + (g,))
                queue.append(m)
    result = [Subgroup(G, tuple(elems[i] for i in gens), frozenset(elems[i] for i in members))
              for members, gens in found.values()]
    result.sort(key=lambda H: (H.order, sorted(x.sort_key for x in H.elements)))
    return result


def annihilator(G: Group, H: Subgroup) -> Subgroup:
    """Characters of the finite part trivial on ``H``, as a subgroup of the (self-dual) torsion part.

    With a lattice part the full annihilator is the torus times this subgroup.
    """
    _same(G, H.group)
    gens = H.generators or tuple(H.elements)
    zero = G.dual_zero()
    members = []
    for y in G.torsion_elements():
        dp = DualPoint(G, y.torsion, zero.lattice)
        if all(phase(x, dp) == 0 for x in gens):
            members.append(y)
    return Subgroup(G, tuple(members), frozenset(members))


def as_dual(x: GroupElement) -> DualPoint:
    """The dual point with the same torsion residues as ``x`` (finite part is self-dual)."""
    if any(x.lattice):
        raise ValueError("only torsion elements identify with dual points")
    return DualPoint(x.group, x.torsion, (Fraction(0),) * x.group.lattice_rank)
