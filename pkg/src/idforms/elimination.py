"""Symbolic finite-difference elimination for additive functional equations.

The equation handled is::

    sum_{j<=m} phi_j(a_j u + b_j v) = sum_{t<=n} psi_t(c_t u + d_t v) + q(u, v)

on ``Y x Y``.  Replacing ``(u, v)`` by ``(u + beta s, v - alpha s)`` and
subtracting kills every term whose argument is ``alpha u + beta v`` and puts a
difference operator ``Delta_{(alpha' beta - beta' alpha) s}`` on each other term
``f(alpha' u + beta' v)``.  Removing the ``psi_t`` (shift symbols ``k_t``), then
every ``phi_i`` other than the target (``l_i``), and finally ``q`` (``h, k``)
leaves a single difference identity for the target.

The module also carries out the coefficient normalisation used before the
elimination in the characterisation argument (ratio classes, the products
``A, B`` and the rows ``A_i, B_i``), with its non-degeneracy checks.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import PreconditionError
from .forms import FormSystem, condition_indices
from .groups import Group, admissible, is_prime


# ---------------------------------------------------------------------------
# shift expressions
# ---------------------------------------------------------------------------

def _symbol_key(sym: str) -> tuple:
    m = re.fullmatch(r"([a-z]+)(\d*)", sym)
    name, num = m.group(1), m.group(2)
    rank = {"h": 0, "k": 1 if not num else 3, "l": 2}.get(name, 4)
    return (rank, int(num) if num else 0, name)


@dataclass(frozen=True)
class ShiftExpr:
    """Integer combination of formal shift symbols, e.g. ``3*k2 - l1``."""
    terms: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, int] | None = None, **kw: int) -> "ShiftExpr":
        acc: dict[str, int] = {}
        for sym, c in list((mapping or {}).items()) + list(kw.items()):
            acc[sym] = acc.get(sym, 0) + int(c)
        return cls(tuple(sorted(((s, c) for s, c in acc.items() if c), key=lambda t: _symbol_key(t[0]))))

    def __add__(self, other: "ShiftExpr") -> "ShiftExpr":
        acc = dict(self.terms)
        for s, c in other.terms:
            acc[s] = acc.get(s, 0) + c
        return ShiftExpr.of(acc)

    def __neg__(self) -> "ShiftExpr":
        return ShiftExpr.of({s: -c for s, c in self.terms})

    def __sub__(self, other: "ShiftExpr") -> "ShiftExpr":
        return self + (-other)

    def __rmul__(self, a: int) -> "ShiftExpr":
        return ShiftExpr.of({s: a * c for s, c in self.terms})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, sym: str) -> int:
        return dict(self.terms).get(sym, 0)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.terms)

    def vanishes_on(self, G: Group) -> bool:
        """True when the shift is the zero character for every value of the symbols."""
        return all(not admissible(G, c) for _, c in self.terms)

    def evaluate(self, values: Mapping[str, object], zero):
        out = zero
        for s, c in self.terms:
            out = out + c * values[s]
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (s, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = s if mag == 1 else f"{mag}*{s}"
            parts.append(("-" if c < 0 else "") + body if i == 0 else f" {sign} {body}")
        return "".join(parts)


@dataclass(frozen=True)
class Factor:
    """``Delta_shift`` raised to ``power``."""
    shift: ShiftExpr
    power: int = 1

    @property
    def is_zero(self) -> bool:
        return self.shift.is_zero()

    def __str__(self):
        p = f"^{self.power}" if self.power != 1 else ""
        return f"D[{self.shift}]{p}"


def _factor_key(f: Factor) -> tuple:
    syms = f.shift.symbols or ("~",)
    return min((_symbol_key(s) for s in syms if s != "~"), default=(9,))


@dataclass(frozen=True)
class PairShift:
    """A shift ``(s_u, s_v)`` of ``Y x Y`` applied as a difference operator to the whole equation."""
    u: ShiftExpr
    v: ShiftExpr
    power: int = 1

    def induced(self, alpha: int, beta: int) -> ShiftExpr:
        return alpha * self.u + beta * self.v

    def __str__(self):
        p = f"^{self.power}" if self.power != 1 else ""
        return f"D[({self.u}, {self.v})]{p}"


@dataclass(frozen=True)
class Term:
    kind: str  # "phi" (left side) or "psi" (right side)
    index: int
    alpha: int
    beta: int
    factors: tuple[Factor, ...] = ()

    @property
    def key(self) -> tuple[str, int]:
        return (self.kind, self.index)

    @property
    def flagged(self) -> bool:
        """Carries a ``Delta_0`` factor, so the term is identically zero."""
        return any(f.is_zero for f in self.factors)

    def argument(self) -> str:
        return _linear(self.alpha, self.beta)

    def __str__(self):
        ops = "".join(str(f) for f in sorted(self.factors, key=_factor_key))
        return f"{ops}{self.kind}_{self.index}({self.argument()})"


def _linear(alpha: int, beta: int) -> str:
    parts = []
    for coef, var in ((alpha, "u"), (beta, "v")):
        if coef == 0:
            continue
        body = var if abs(coef) == 1 else f"{abs(coef)}{var}"
        if not parts:
            parts.append(("-" if coef < 0 else "") + body)
        else:
            parts.append((" - " if coef < 0 else " + ") + body)
    return "".join(parts) or "0"


@dataclass(frozen=True)
class QPart:
    degree: int | None  # None: q vanishes identically
    ops: tuple[PairShift, ...] = ()
    killed: bool = False

    def __str__(self):
        if self.degree is None or self.killed:
            return "0"
        return "".join(str(o) for o in self.ops) + "q(u, v)"


@dataclass(frozen=True)
class SymbolicEquation:
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]
    q: QPart

    @classmethod
    def initial(cls, system: FormSystem, m: int | None = None, q_degree: int | None = None) -> "SymbolicEquation":
        m = system.n if m is None else m
        if not 1 <= m <= system.n:
            raise PreconditionError(f"m must be between 1 and {system.n}")
        lhs = tuple(Term("phi", j + 1, system.a[j], system.b[j]) for j in range(m))
        rhs = tuple(Term("psi", t + 1, system.c[t], system.d[t]) for t in range(system.n))
        return cls(lhs, rhs, QPart(q_degree))

    def term(self, key: tuple[str, int]) -> Term:
        for t in self.lhs + self.rhs:
            if t.key == key:
                return t
        raise KeyError(key)

    @property
    def functions(self) -> list[tuple[str, int]]:
        return [t.key for t in self.lhs + self.rhs]

    def is_zero(self) -> bool:
        q_zero = self.q.degree is None or self.q.killed or any(o.u.is_zero() and o.v.is_zero() for o in self.q.ops)
        return all(t.flagged for t in self.lhs + self.rhs) and q_zero

    def __str__(self):
        left = " + ".join(str(t) for t in self.lhs) or "0"
        right = [str(t) for t in self.rhs]
        qs = str(self.q)
        if qs != "0" or not right:
            right.append(qs)
        return f"{left} = {' + '.join(right)}"


def substitution_for(term: Term) -> PairShift:
    """The shift of ``(u, v)`` under which ``term`` cancels."""
    sym = f"k{term.index}" if term.kind == "psi" else f"l{term.index}"
    s = ShiftExpr.of({sym: 1})
    return PairShift(term.beta * s, -term.alpha * s)


def _apply(eq: SymbolicEquation, op: PairShift, drop: tuple[str, int] | None) -> SymbolicEquation:
    def grow(t: Term) -> Term:
        return Term(t.kind, t.index, t.alpha, t.beta, t.factors + (Factor(op.induced(t.alpha, t.beta), op.power),))
    lhs = tuple(grow(t) for t in eq.lhs if t.key != drop)
    rhs = tuple(grow(t) for t in eq.rhs if t.key != drop)
    q = eq.q
    if q.degree is not None and not q.killed:
        q = QPart(q.degree, q.ops + (op,))
    return SymbolicEquation(lhs, rhs, q)


def cascade_step(eq: SymbolicEquation, target: tuple[str, int]) -> SymbolicEquation:
    """Remove ``target`` (``("psi", t)`` or ``("phi", i)``) by one shift-and-subtract step."""
    term = eq.term(target)
    return _apply(eq, substitution_for(term), target)


def kill_q(eq: SymbolicEquation, degree: int) -> SymbolicEquation:
    """Apply ``Delta_{(h, k)}^(degree+1)``, which annihilates a polynomial of that degree."""
    op = PairShift(ShiftExpr.of(h=1), ShiftExpr.of(k=1), degree + 1)
    out = _apply(eq, op, None)
    return SymbolicEquation(out.lhs, out.rhs, QPart(eq.q.degree, out.q.ops, killed=True))


@dataclass(frozen=True)
class CascadeStep:
    removed: tuple[str, int] | None  # None for the final polynomial-kill stage
    op: PairShift
    new_factors: tuple[tuple[str, Factor], ...]
    equation: SymbolicEquation

    def substitution(self) -> dict[str, str]:
        def shifted(var: str, e: ShiftExpr) -> str:
            if e.is_zero():
                return var
            text = str(e)
            return f"{var} - {text[1:]}" if text.startswith("-") else f"{var} + {text}"
        return {"u": shifted("u", self.op.u), "v": shifted("v", self.op.v)}

    def to_json(self) -> dict:
        return {
            "removed_function": f"{self.removed[0]}_{self.removed[1]}" if self.removed else "q",
            "substitution": self.substitution(),
            "power": self.op.power,
            "new_factors": [{"term": label, "shift": str(f.shift),
                             "coefficients": dict(f.shift.terms), "power": f.power,
                             "zero": f.is_zero} for label, f in self.new_factors],
        }


@dataclass(frozen=True)
class DiffDerivation:
    system: FormSystem
    m: int
    q_degree: int | None
    cascades: Mapping[int, tuple[CascadeStep, ...]]
    operators: Mapping[int, tuple[Factor, ...]]

    @property
    def steps(self) -> tuple[CascadeStep, ...]:
        """The cascade for ``phi_1`` in its fixed order."""
        return self.cascades[1]

    @property
    def removal_steps(self) -> int:
        return sum(1 for s in self.steps if s.removed is not None)

    @property
    def degree_bound(self) -> int:
        """Exponent ``N`` with ``Delta_h^N phi_j = 0`` once every shift is matched to ``h``."""
        return sum(f.power for f in self.operators[1])

    def flagged(self, j: int, G: Group | None = None) -> list[Factor]:
        """Factors of the ``phi_j`` operator that are the zero operator (on ``G`` if given)."""
        if G is None:
            return [f for f in self.operators[j] if f.is_zero]
        return [f for f in self.operators[j] if f.shift.vanishes_on(G)]

    def identity(self, j: int) -> str:
        a, b = self.system.a[j - 1], self.system.b[j - 1]
        ops = "".join(str(f) for f in self.operators[j])
        return f"{ops}phi_{j}({_linear(a, b)}) = 0"

    def trace(self, j: int = 1) -> list[str]:
        lines = [f"start: {SymbolicEquation.initial(self.system, self.m, self.q_degree)}"]
        for s in self.cascades[j]:
            what = f"{s.removed[0]}_{s.removed[1]}" if s.removed else "q"
            sub = s.substitution()
            lines.append(f"remove {what}: u -> {sub['u']}, v -> {sub['v']}"
                         + (f" (power {s.op.power})" if s.op.power != 1 else ""))
            lines.append(f"  {s.equation}")
        lines.append(f"result: {self.identity(j)}")
        return lines

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(), "m": self.m, "q_degree": self.q_degree,
            "steps": [s.to_json() for s in self.steps],
            "operators": {f"phi_{j}": [{"shift": str(f.shift), "coefficients": dict(f.shift.terms),
                                        "power": f.power, "zero": f.is_zero} for f in ops]
                          for j, ops in self.operators.items()},
            "removal_steps": self.removal_steps,
            "degree_bound": self.degree_bound,
            "identities": {f"phi_{j}": self.identity(j) for j in self.operators},
            "trace": self.trace(1),
        }


def cascade_order(n: int, m: int, j: int) -> list[tuple[str, int]]:
    """``psi_n .. psi_1`` then ``phi_m .. phi_1`` skipping the target ``phi_j``."""
    return [("psi", t) for t in range(n, 0, -1)] + [("phi", i) for i in range(m, 0, -1) if i != j]


def eliminate(system: FormSystem, m: int | None = None, q_degree: int | None = None) -> DiffDerivation:
    """Derive, for each ``phi_j``, the difference operator that annihilates it.

    ``phi_j`` uses coefficients ``(a_j, b_j)`` for ``j <= m`` (default all
    ``n``); every ``(c_t, d_t)`` gives a ``psi_t``.  ``q_degree`` is the degree
    bound of ``q``; ``None`` means ``q == 0``.
    """
    m = system.n if m is None else m
    start = SymbolicEquation.initial(system, m, q_degree)
    cascades, operators = {}, {}
    for j in range(1, m + 1):
        eq, steps = start, []
        for target in cascade_order(system.n, m, j):
            before = {t.key for t in eq.lhs + eq.rhs}
            eq = cascade_step(eq, target)
            steps.append(CascadeStep(target, substitution_for(start.term(target)),
                                     tuple((f"{t.kind}_{t.index}", t.factors[-1])
                                           for t in eq.lhs + eq.rhs if t.key in before), eq))
        if q_degree is not None:
            eq = kill_q(eq, q_degree)
            steps.append(CascadeStep(None, eq.q.ops[-1],
                                     tuple((f"{t.kind}_{t.index}", t.factors[-1]) for t in eq.lhs + eq.rhs),
                                     eq))
        (term,) = eq.lhs
        cascades[j] = tuple(steps)
        operators[j] = tuple(sorted(term.factors, key=_factor_key))
    return DiffDerivation(system, m, q_degree, cascades, operators)


def expected_operator(system: FormSystem, j: int, m: int | None = None,
                      q_degree: int | None = None) -> list[Factor]:
    """The annihilating operator for ``phi_j`` written straight from the closed-form shift coefficients."""
    m = system.n if m is None else m
    a, b, c, d = system.a, system.b, system.c, system.d
    aj, bj = a[j - 1], b[j - 1]
    out = []
    if q_degree is not None:
        out.append(Factor(ShiftExpr.of(h=aj, k=bj), q_degree + 1))
    for i in range(1, m + 1):
        if i != j:
            out.append(Factor(ShiftExpr.of({f"l{i}": aj * b[i - 1] - bj * a[i - 1]})))
    for t in range(1, system.n + 1):
        out.append(Factor(ShiftExpr.of({f"k{t}": aj * d[t - 1] - bj * c[t - 1]})))
    return out


# ---------------------------------------------------------------------------
# numeric application on a finite dual
# ---------------------------------------------------------------------------

@dataclass
class FunctionTuple:
    """Tables of ``phi_1..phi_m`` and ``psi_1..psi_n`` on ``Y`` and of ``q`` on ``Y x Y``.

    ``Y`` is the dual of a finite group with invariant factors ``shape``;
    tables are arrays of that shape.  ``q`` may be a scalar constant.
    """
    shape: tuple[int, ...]
    phi: list[np.ndarray]
    psi: list[np.ndarray]
    q: np.ndarray | int | Fraction = 0


def _grid(shape: tuple[int, ...]) -> np.ndarray:
    return np.indices(shape + shape)


def compose(table: np.ndarray, alpha: int, beta: int) -> np.ndarray:
    """``(u, v) -> table[alpha u + beta v]`` as a table on ``Y x Y``."""
    shape = table.shape
    k = len(shape)
    idx = _grid(shape)
    coords = tuple((alpha * idx[i] + beta * idx[k + i]) % shape[i] for i in range(k))
    return table[coords] if k else np.full((), table[()], dtype=table.dtype)


def _roll(table: np.ndarray, shift: Sequence[int], axes: Sequence[int]) -> np.ndarray:
    return np.roll(table, [-int(s) for s in shift], axis=list(axes)) if axes else table


def delta(table: np.ndarray, shift: Sequence[int], axes: Sequence[int], power: int = 1) -> np.ndarray:
    for _ in range(power):
        table = _roll(table, shift, axes) - table
    return table


def _value(expr: ShiftExpr, shifts: Mapping[str, Sequence[int]], shape: tuple[int, ...]) -> tuple[int, ...]:
    zero = np.zeros(len(shape), dtype=np.int64)
    vec = expr.evaluate({s: np.asarray(v, dtype=np.int64) for s, v in shifts.items()}, zero)
    return tuple(int(x) % n for x, n in zip(vec, shape))


def residual_table(system: FormSystem, funcs: FunctionTuple, m: int | None = None) -> np.ndarray:
    """``sum phi_j(a_j u + b_j v) - sum psi_t(c_t u + d_t v) - q(u, v)``."""
    m = system.n if m is None else m
    out = sum(compose(funcs.phi[j], system.a[j], system.b[j]) for j in range(m))
    out = out - sum(compose(funcs.psi[t], system.c[t], system.d[t]) for t in range(system.n))
    return out - funcs.q


def _pair_axes(shape):
    k = len(shape)
    return list(range(2 * k))


def cascade_apply(residual: np.ndarray, derivation: DiffDerivation, shifts: Mapping[str, Sequence[int]],
                  shape: tuple[int, ...], j: int = 1) -> np.ndarray:
    """Run the shift-and-subtract steps of the ``phi_j`` cascade on a residual table."""
    out = residual
    for step in derivation.cascades[j]:
        s = _value(step.op.u, shifts, shape) + _value(step.op.v, shifts, shape)
        out = delta(out, s, _pair_axes(shape), step.op.power)
    return out


def apply_derivation(funcs: FunctionTuple, derivation: DiffDerivation, shifts: Mapping[str, Sequence[int]],
                     j: int = 1) -> np.ndarray:
    """Composed operator for ``phi_j`` applied directly, minus the same steps applied to ``q``."""
    shape = funcs.shape
    table = funcs.phi[j - 1]
    for f in derivation.operators[j]:
        table = delta(table, _value(f.shift, shifts, shape), list(range(len(shape))), f.power)
    out = compose(table, derivation.system.a[j - 1], derivation.system.b[j - 1])
    q = funcs.q
    if isinstance(q, np.ndarray):
        for step in derivation.cascades[j]:
            s = _value(step.op.u, shifts, shape) + _value(step.op.v, shifts, shape)
            q = delta(q, s, _pair_axes(shape), step.op.power)
        return out - q
    # a constant q survives only if no difference was taken
    return out - (q if not derivation.cascades[j] else 0)


# ---------------------------------------------------------------------------
# coefficient reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedRow:
    label: str
    A: int
    B: int
    members: tuple[int, ...]  # original variable numbers (from 1)
    kind: str  # "ratio", "a_only", "b_only" or "residual"


@dataclass(frozen=True)
class ReducedSystem:
    group: Group
    order: tuple[int, ...]  # original variable numbers after renumbering
    m: int
    A: int
    B: int
    rows: tuple[ReducedRow, ...]
    residual_rows: tuple[ReducedRow, ...]
    C: tuple[int, ...]
    D: tuple[int, ...]
    ratios: tuple[Fraction | str, ...]
    determinant_failures: tuple[tuple[str, int], ...]
    bracket_failures: tuple[tuple[str, str], ...]

    case = 1

    @property
    def ok(self) -> bool:
        return not self.determinant_failures and not self.bracket_failures

    def to_json(self) -> dict:
        row = lambda r: {"label": r.label, "A": r.A, "B": r.B, "members": list(r.members), "kind": r.kind}
        return {
            "case": 1, "group": self.group.to_json(), "order": list(self.order), "m": self.m,
            "A": self.A, "B": self.B, "rows": [row(r) for r in self.rows],
            "residual_rows": [row(r) for r in self.residual_rows],
            "C": list(self.C), "D": list(self.D), "ratios": [str(r) for r in self.ratios],
            "checks": {"determinants_admissible": not self.determinant_failures,
                       "brackets_admissible": not self.bracket_failures,
                       "determinant_failures": [list(f) for f in self.determinant_failures],
                       "bracket_failures": [list(f) for f in self.bracket_failures]},
        }


@dataclass(frozen=True)
class Case2Reduction:
    """All brackets ``b_i a_j - b_j a_i`` inside the condition set vanish on the group.

    Substituting ``u = b_1 y, v = -a_1 y`` leaves
    ``prod_j mu_j((b_1 c_j - a_1 d_j) y) = 1`` provided the left side collapses.
    """
    group: Group
    order: tuple[int, ...]
    m: int
    coefficients: tuple[int, ...]
    lhs_collapses: bool

    case = 2
    ok = True

    def equation(self) -> str:
        factors = " * ".join(f"mu_{v}^({e}y)" for v, e in zip(self.order, self.coefficients))
        return f"{factors} = 1"

    def to_json(self) -> dict:
        return {"case": 2, "group": self.group.to_json(), "order": list(self.order), "m": self.m,
                "coefficients": list(self.coefficients), "lhs_collapses": self.lhs_collapses,
                "equation": self.equation()}


def reduction_prime(G: Group) -> int | None:
    """``p`` when every invariant factor is the prime ``p``; 0 for a torsion-free lattice."""
    if not G.invariant_factors:
        return 0 if G.lattice_rank else None
    if G.lattice_rank == 0 and len(set(G.invariant_factors)) == 1 and is_prime(G.invariant_factors[0]):
        return G.invariant_factors[0]
    return None


def reduce_coefficients(system: FormSystem, G: Group, m: int | None = None) -> ReducedSystem | Case2Reduction:
    """Normalise the coefficients of the condition-set variables.

    Variables satisfying the admissibility condition are moved to the front
    (stable order) unless ``m`` is given, in which case the first ``m`` are
    taken as that set.  "Zero" and "equal ratio" are read on ``G``: an integer
    counts as zero when it is not admissible.
    """
    if reduction_prime(G) is None:
        raise PreconditionError(f"{G.label} is neither torsion-free nor of the form Z(p)^k")
    nz = lambda x: admissible(G, x)
    n = system.n
    if m is None:
        cond = sorted(condition_indices(system, G))
        order = cond + [i for i in range(1, n + 1) if i not in cond]
        m = len(cond)
    else:
        order = list(range(1, n + 1))
        missing = set(range(1, m + 1)) - condition_indices(system, G)
        if missing:
            raise PreconditionError(f"variables {sorted(missing)} do not satisfy the condition")
    sys_ = system.select([i - 1 for i in order])
    a, b, c, d = sys_.a, sys_.b, sys_.c, sys_.d
    if m == 0:
        raise PreconditionError("no variable satisfies the admissibility condition")
    if any(not nz(cj) and not nz(dj) for cj, dj in zip(c, d)):
        raise PreconditionError("some c_j and d_j both vanish, so the condition set is empty")

    if not any(nz(b[i] * a[j] - b[j] * a[i]) for i in range(m) for j in range(m) if i != j):
        coeffs = tuple(b[0] * c[j] - a[0] * d[j] for j in range(n))
        collapses = all(not nz(a[j] * b[0] - b[j] * a[0]) for j in range(n))
        return Case2Reduction(G, tuple(order), m, coeffs, collapses)

    both = [i for i in range(m) if nz(a[i]) and nz(b[i])]
    a_only = [i for i in range(m) if nz(a[i]) and not nz(b[i])]
    b_only = [i for i in range(m) if not nz(a[i]) and nz(b[i])]
    classes: list[list[int]] = []
    for i in both:
        for cls in classes:
            r = cls[0]
            if not nz(a[i] * b[r] - a[r] * b[i]):
                cls.append(i)
                break
        else:
            classes.append([i])
    reps = [cls[0] for cls in classes]
    A = math.prod(b[r] for r in reps)
    B = math.prod(a[r] for r in reps)
    rows = [ReducedRow(str(k), A // b[r], B // a[r], tuple(order[i] for i in cls), "ratio")
            for k, (r, cls) in enumerate(zip(reps, classes))]
    k = len(classes) - 1
    if a_only:
        rows.append(ReducedRow(str(k + 1), 1, 0, tuple(order[i] for i in a_only), "a_only"))
    if b_only:
        rows.append(ReducedRow(str(k + 2), 0, 1, tuple(order[i] for i in b_only), "b_only"))
    C = tuple(cj * A for cj in c)
    D = tuple(dj * B for dj in d)
    residual = tuple(ReducedRow(str(j + 1), a[j] * A, b[j] * B, (order[j],), "residual")
                     for j in range(m, n) if nz(a[j]) or nz(b[j]))

    det_fail = tuple((r.label, j + 1) for r in rows for j in range(n) if not nz(r.A * D[j] - r.B * C[j]))
    br_fail = tuple((r.label, s.label) for r in rows for s in rows + list(residual)
                    if s is not r and not nz(r.A * s.B - r.B * s.A))
    ratios = tuple(Fraction(a[r], b[r]) if G.lattice_rank else f"{a[r]}/{b[r]} mod {G.invariant_factors[0]}"
                   for r in reps)
    return ReducedSystem(G, tuple(order), m, A, B, tuple(rows), residual, C, D, ratios, det_fail, br_fail)
