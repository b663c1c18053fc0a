"""JSON loading for groups, elements, laws, coefficient systems and instances.

Groups may be given as text (``"Z3"``, ``"Z^2xZ4"``, ``"Z(2) x Z(6)"``) or as
``{"lattice_rank": d, "factors": [...]}``.  Factors need not form a
divisibility chain: they are normalised to invariant-factor form and element
coordinates given in the supplied factors are mapped across by the CRT.
"""
from __future__ import annotations

import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Any

from .distributions import Pmf
from .errors import SchemaError
from .forms import FormSystem, InstanceSpec
from .groups import CyclicPresentation, Group, GroupElement


def read_json(arg: str | None) -> tuple[Any, str]:
    """Parse ``arg`` as inline JSON, a file path, or ``-``/``None`` for stdin.

    Returns the decoded value and the SHA-256 of the raw text.
    """
    if arg is None or arg == "-":
        text = sys.stdin.read()
    elif os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = arg
    digest = hashlib.sha256(text.encode()).hexdigest()
    try:
        return json.loads(text), digest
    except json.JSONDecodeError:
        stripped = text.strip()
        if stripped and stripped[0] not in "[{\"":
            return stripped, digest
        raise SchemaError(f"invalid JSON: {stripped[:60]!r}") from None


def load_presentation(obj: Any) -> CyclicPresentation:
    if isinstance(obj, CyclicPresentation):
        return obj
    if isinstance(obj, Group):
        return CyclicPresentation(obj.invariant_factors, obj.lattice_rank)
    if isinstance(obj, str):
        return CyclicPresentation.parse(obj)
    if isinstance(obj, dict):
        extra = set(obj) - {"lattice_rank", "factors"}
        if extra:
            raise SchemaError(f"unknown group fields {sorted(extra)}")
        rank = obj.get("lattice_rank", 0)
        factors = obj.get("factors", [])
        if not isinstance(rank, int) or rank < 0:
            raise SchemaError("lattice_rank must be a nonnegative integer")
        if not isinstance(factors, list) or not all(isinstance(n, int) and n >= 1 for n in factors):
            raise SchemaError("factors must be a list of positive integers")
        return CyclicPresentation([n for n in factors if n > 1], rank)
    raise SchemaError(f"cannot read a group from {obj!r}")


def load_group(obj: Any) -> Group:
    return load_presentation(obj).group


def load_element(obj: Any, pres: CyclicPresentation) -> GroupElement:
    """``{"lattice": [...], "torsion": [...]}``, a bare list of torsion coordinates, or an integer on a cyclic group."""
    if isinstance(obj, GroupElement):
        return obj
    if isinstance(obj, bool):
        raise SchemaError("an element cannot be a boolean")
    if isinstance(obj, int):
        if len(pres.source) + pres.lattice_rank != 1:
            raise SchemaError("a bare integer element needs a cyclic group")
        return pres.element([obj]) if pres.source else pres.element((), [obj])
    if isinstance(obj, list):
        return pres.element(_ints(obj, "torsion"))
    if isinstance(obj, dict):
        lattice = _ints(obj.get("lattice", []), "lattice")
        torsion = _ints(obj.get("torsion", []), "torsion")
        if len(lattice) not in (0, pres.lattice_rank):
            raise SchemaError(f"expected {pres.lattice_rank} lattice coordinates, got {len(lattice)}")
        return pres.element(torsion, lattice)
    raise SchemaError(f"cannot read an element from {obj!r}")


def _ints(values: Any, what: str) -> list[int]:
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise SchemaError(f"{what} coordinates must be a list of integers")
    return list(values)


def _weight(atom: dict) -> Fraction:
    if "num" in atom or "den" in atom:
        num, den = atom.get("num"), atom.get("den", 1)
        if not isinstance(num, int) or not isinstance(den, int) or den <= 0:
            raise SchemaError(f"bad weight in atom {atom!r}")
        return Fraction(num, den)
    if "weight" in atom:
        try:
            return Fraction(str(atom["weight"]))
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"bad weight {atom['weight']!r}") from None
    raise SchemaError(f"atom {atom!r} has no weight")


def load_pmf(obj: Any, pres: CyclicPresentation | None = None) -> Pmf:
    """``{"group": ..., "atoms": [{"element": ..., "num": p, "den": q}, ...]}``; weights must sum to 1."""
    if not isinstance(obj, dict) or "atoms" not in obj:
        raise SchemaError("a distribution needs an 'atoms' list")
    if "group" in obj:
        own = load_presentation(obj["group"])
        if pres is not None and own.group != pres.group:
            raise SchemaError(f"distribution on {own.group.label} inside an instance on {pres.group.label}")
        pres = own
    if pres is None:
        raise SchemaError("distribution has no group")
    atoms = obj["atoms"]
    if not isinstance(atoms, list) or not atoms:
        raise SchemaError("'atoms' must be a nonempty list")
    weights = []
    for atom in atoms:
        if not isinstance(atom, dict) or "element" not in atom:
            raise SchemaError(f"atom {atom!r} has no element")
        weights.append((load_element(atom["element"], pres), _weight(atom)))
    return Pmf(pres.group, weights)


def load_system(obj: Any) -> FormSystem:
    if isinstance(obj, dict) and "system" in obj:
        obj = obj["system"]
    if not isinstance(obj, dict) or not all(k in obj for k in "abcd"):
        raise SchemaError("a system needs coefficient lists a, b, c and d")
    return FormSystem(*(tuple(_ints(obj[k], k)) for k in "abcd"))


def load_instance(obj: Any) -> InstanceSpec:
    """``{"group", "system": {"a", "b", "c", "d"}, "dists": [...], "mode": "independent"}``."""
    if not isinstance(obj, dict):
        raise SchemaError("an instance must be a JSON object")
    for key in ("group", "system", "dists"):
        if key not in obj:
            raise SchemaError(f"instance is missing {key!r}")
    pres = load_presentation(obj["group"])
    system = load_system(obj["system"])
    if not isinstance(obj["dists"], list):
        raise SchemaError("'dists' must be a list")
    dists = tuple(load_pmf(d, pres) for d in obj["dists"])
    return InstanceSpec(pres.group, system, dists, obj.get("mode", "independent"), obj.get("origin"))


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise SchemaError(f"expected comma-separated integers, got {text!r}") from None
