"""Explicit instances where the form pairs are identically distributed yet the laws are not degenerate."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .distributions import Classification, Kind, Pmf, classify, degenerate, uniform
from .errors import PreconditionError
from .forms import FormSystem, InstanceSpec, condition_indices, identically_distributed, joint_pmf
from .groups import Group, GroupElement, is_prime
from .spectral import Nonvanishing, nonvanishing


@dataclass(frozen=True)
class Certificate:
    """Both halves of a counterexample, computed exactly."""
    identically_distributed: bool
    condition_set: frozenset[int]
    classifications: tuple[Classification, ...]
    nonvanishing: tuple[Nonvanishing, ...]

    def to_json(self) -> dict:
        return {"identically_distributed": self.identically_distributed,
                "condition_set": sorted(self.condition_set),
                "classifications": [c.to_json() for c in self.classifications],
                "nonvanishing": [nv.to_json() for nv in self.nonvanishing]}


def certify(spec: InstanceSpec) -> Certificate:
    return Certificate(identically_distributed(spec), frozenset(condition_indices(spec.system, spec.group)),
                       tuple(classify(mu) for mu in spec.dists), tuple(nonvanishing(mu) for mu in spec.dists))


def two_point(x0: GroupElement, m: Fraction) -> Pmf:
    """``m E_0 + (1 - m) E_{x0}``."""
    m = Fraction(m)
    return Pmf(x0.group, {x0.group.zero(): m, x0: 1 - m})


def prop2_construction(G: Group, x0: GroupElement, m: Fraction | str = Fraction(3, 5), n: int = 2) -> InstanceSpec:
    """Two copies of ``m E_0 + (1-m) E_{x0}`` with ``L1 = L2 = L3 = xi_1 + xi_2`` and ``L4 = (1-p)(xi_1 + xi_2)``.

    ``x0`` must have prime order ``p`` and ``1/2 < m < 1`` (which keeps the
    characteristic function away from zero).  Since ``p x0 = 0`` the forms
    ``L2`` and ``L4`` agree on the support, so the pairs are identically
    distributed while the law is not degenerate.
    """
    m = Fraction(m)
    if x0.group != G:
        raise PreconditionError(f"x0 is not an element of {G.label}")
    p = x0.order()
    if p is None or not is_prime(p):
        raise PreconditionError(f"x0 = {x0!r} must have prime order, found {p}")
    if not Fraction(1, 2) < m < 1:
        raise PreconditionError(f"m must lie strictly between 1/2 and 1, got {m}")
    if n != 2:
        raise PreconditionError("the construction uses exactly two variables")
    mu = two_point(x0, m)
    system = FormSystem((1, 1), (1, 1), (1, 1), (1 - p, 1 - p))
    return InstanceSpec(G, system, (mu, mu), origin="prop2")


def haar_construction(G: Group, n: int, leading: Sequence[Pmf]) -> InstanceSpec:
    """``L1 = L3 = xi_1 + .. + xi_{n-1}``, ``L2 = xi_1 + .. + xi_{n-2} + xi_n``, ``L4 = xi_n``.

    The last two variables are Haar-distributed on ``G`` (``Z(2)`` or ``Z(3)``),
    which makes both joint characteristic functions vanish off the origin;
    the first ``n - 2`` laws are arbitrary.
    """
    if G not in (Group.cyclic(2), Group.cyclic(3)):
        raise PreconditionError(f"the construction is for Z(2) or Z(3), not {G.label}")
    if n < 3:
        raise PreconditionError("need n >= 3")
    leading = tuple(leading)
    if len(leading) != n - 2:
        raise PreconditionError(f"need {n - 2} leading distributions, got {len(leading)}")
    ones = (1,) * (n - 2)
    system = FormSystem(ones + (1, 0), ones + (0, 1), ones + (1, 0), (0,) * (n - 2) + (0, 1))
    m = uniform(G)
    return InstanceSpec(G, system, leading + (m, m), origin="haar")


def identity_construction(mu: Pmf) -> InstanceSpec:
    """``L1 = L3 = xi_1 + xi_2`` and ``L2 = -L4 = xi_1 - xi_2`` with both laws ``mu``.

    The pairs are identically distributed for every ``mu`` while no variable
    satisfies the admissibility condition.
    """
    system = FormSystem((1, 1), (1, -1), (1, 1), (-1, 1))
    return InstanceSpec(mu.group, system, (mu, mu), origin="identity")
