"""Exact arithmetic in the cyclotomic field ``Q(zeta_N)``.

Characteristic functions of finitely supported laws at rational dual points
are rational combinations of roots of unity.  Reducing modulo the cyclotomic
polynomial gives a canonical form, so equality and vanishing are decided
exactly rather than by a float threshold.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num[: len(den) - 1]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of ``Phi_n``, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_basis(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds ``zeta_n^k`` in the basis ``1, zeta, ..., zeta^(phi-1)``."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


class Cyclotomic:
    """An element of ``Q(zeta_N)`` in canonical power-basis form."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable):
        self.n = n
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def zero(cls, n: int) -> "Cyclotomic":
        return cls(n, [0] * (len(cyclotomic_poly(n)) - 1))

    @classmethod
    def one(cls, n: int) -> "Cyclotomic":
        return cls.from_exponents(n, {0: 1})

    @classmethod
    def from_exponents(cls, n: int, terms: dict[int, Fraction] | Iterable[tuple[int, Fraction]]) -> "Cyclotomic":
        """``sum w * zeta_n^k`` over ``(k, w)`` terms."""
        basis = _power_basis(n)
        acc = [Fraction(0)] * len(basis[0])
        items = terms.items() if isinstance(terms, dict) else terms
        for k, w in items:
            row = basis[k % n]
            for i, c in enumerate(row):
                if c:
                    acc[i] += c * w
        return cls(n, acc)

    @classmethod
    def from_phases(cls, n: int, terms: Iterable[tuple[Fraction, Fraction]]) -> "Cyclotomic":
        """``sum w * exp(2 pi i t)`` where every phase ``t`` has denominator dividing ``n``."""
        items = []
        for t, w in terms:
            k = Fraction(t) * n
            if k.denominator != 1:
                raise ValueError(f"phase {t} is not an {n}-th root of unity")
            items.append((int(k), w))
        return cls.from_exponents(n, items)

    def lift(self, m: int) -> "Cyclotomic":
        """Re-express in ``Q(zeta_m)`` for a multiple ``m`` of ``n``."""
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"{m} is not a multiple of {self.n}")
        step = m // self.n
        return Cyclotomic.from_exponents(m, [(i * step, c) for i, c in enumerate(self.coeffs) if c])

    def _coerce(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.from_exponents(self.n, {0: Fraction(other)})
        if other.n == self.n:
            return self, other
        m = self.n * other.n // math.gcd(self.n, other.n)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Cyclotomic(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Cyclotomic(a.n, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        basis = _power_basis(a.n)
        prod: dict[int, Fraction] = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] = prod.get(i + j, 0) + x * y
        acc = [Fraction(0)] * len(a.coeffs)
        for k, w in prod.items():
            for i, c in enumerate(basis[k % a.n]):
                if c:
                    acc[i] += c * w
        return Cyclotomic(a.n, acc)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        return Cyclotomic.from_exponents(self.n, [(-i, c) for i, c in enumerate(self.coeffs) if c])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_exponents(self.n, {0: Fraction(other)})
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # equal values may be stored at different levels n

    def rational(self) -> Fraction | None:
        """The value as a rational number, or ``None`` if it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __complex__(self):
        z = cmath.exp(2j * math.pi / self.n)
        return complex(sum(float(c) * z ** i for i, c in enumerate(self.coeffs)))

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"Cyclotomic[{self.n}](" + (" + ".join(terms) or "0") + ")"
