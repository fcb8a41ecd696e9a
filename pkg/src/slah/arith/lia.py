"""Linear integer arithmetic over the naturals: expressions and formulas.

Formulas are immutable trees.  Smart constructors (``conj``, ``disj``,
``neg``...) do light simplification; the raw node classes can be used when
the exact shape matters (printing, tests).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class ArithError(Exception):
    """Malformed formula or query outside the supported fragment."""


@dataclass(frozen=True)
class LinExpr:
    """``const + sum(coef * var)`` with integer coefficients, canonical."""

    const: int = 0
    coeffs: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def var(name: str, coef: int = 1) -> LinExpr:
        return LinExpr(0, ((name, coef),)) if coef else LinExpr()

    @staticmethod
    def num(n: int) -> LinExpr:
        return LinExpr(n, ())

    @staticmethod
    def build(const: int, coeffs: Mapping[str, int]) -> LinExpr:
        return LinExpr(const, tuple(sorted((v, c) for v, c in coeffs.items() if c)))

    @staticmethod
    def of(x: LinExpr | int | str) -> LinExpr:
        if isinstance(x, LinExpr):
            return x
        if isinstance(x, int):
            return LinExpr.num(x)
        return LinExpr.var(x)

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)

    def vars(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def coeff(self, name: str) -> int:
        for v, c in self.coeffs:
            if v == name:
                return c
        return 0

    @property
    def is_const(self) -> bool:
        return not self.coeffs

    def __add__(self, other) -> LinExpr:
        other = LinExpr.of(other)
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinExpr.build(self.const + other.const, d)

    __radd__ = __add__

    def __neg__(self) -> LinExpr:
        return LinExpr(-self.const, tuple((v, -c) for v, c in self.coeffs))

    def __sub__(self, other) -> LinExpr:
        return self + (-LinExpr.of(other))

    def __rsub__(self, other) -> LinExpr:
        return LinExpr.of(other) - self

    def __mul__(self, k: int) -> LinExpr:
        if not isinstance(k, int):
            raise ArithError("only scalar multiplication is linear")
        if k == 0:
            return LinExpr()
        return LinExpr(self.const * k, tuple((v, c * k) for v, c in self.coeffs))

    __rmul__ = __mul__

    def evaluate(self, stack: Mapping[str, int]) -> int:
        try:
            return self.const + sum(c * stack[v] for v, c in self.coeffs)
        except KeyError as e:
            raise ArithError(f"unbound variable {e.args[0]}") from None

    def substitute(self, sigma: Mapping[str, LinExpr]) -> LinExpr:
        out = LinExpr.num(self.const)
        for v, c in self.coeffs:
            out = out + (sigma[v] * c if v in sigma else LinExpr.var(v, c))
        return out

    def __str__(self) -> str:
        parts = []
        for v, c in self.coeffs:
            if c == 1:
                parts.append(v)
            elif c == -1:
                parts.append(f"-{v}")
            else:
                parts.append(f"{c}*{v}")
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts).replace("+ -", "- ")


OPS = ("=", "!=", "<", "<=")


class Formula:
    """Base class of LIA formula nodes."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return conj(self, other)

    def __or__(self, other: Formula) -> Formula:
        return disj(self, other)

    def __invert__(self) -> Formula:
        return neg(self)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Cmp(Formula):
    lhs: LinExpr
    op: str
    rhs: LinExpr

    def __post_init__(self):
        if self.op not in OPS:
            raise ArithError(f"unknown comparison {self.op!r}")

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass(frozen=True)
class Cong(Formula):
    """``lhs == rhs (mod modulus)``."""

    lhs: LinExpr
    rhs: LinExpr
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ArithError("modulus must be >= 1")

    def __str__(self) -> str:
        return f"{self.lhs} == {self.rhs} (mod {self.modulus})"


class _Nary(Formula):
    args: tuple[Formula, ...]

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__, self.args))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, eq=True)
class And(_Nary):
    args: tuple[Formula, ...]
    __hash__ = _Nary.__hash__

    def __str__(self) -> str:
        return "(" + " & ".join(map(str, self.args)) + ")"


@dataclass(frozen=True, eq=True)
class Or(_Nary):
    args: tuple[Formula, ...]
    __hash__ = _Nary.__hash__

    def __str__(self) -> str:
        return "(" + " | ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def __str__(self) -> str:
        return f"!{self.arg}"


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple[str, ...]
    body: Formula

    def __str__(self) -> str:
        return f"(exists {' '.join(self.vars)}. {self.body})"


# -- smart constructors ------------------------------------------------------

def _cmp(a, op, b) -> Formula:
    a, b = LinExpr.of(a), LinExpr.of(b)
    d = b - a
    if d.is_const:
        k = d.const
        return Const({"=": k == 0, "!=": k != 0, "<": k > 0, "<=": k >= 0}[op])
    return Cmp(a, op, b)


def eq(a, b) -> Formula:
    return _cmp(a, "=", b)


def ne(a, b) -> Formula:
    return _cmp(a, "!=", b)


def lt(a, b) -> Formula:
    return _cmp(a, "<", b)


def le(a, b) -> Formula:
    return _cmp(a, "<=", b)


def gt(a, b) -> Formula:
    return _cmp(b, "<", a)


def ge(a, b) -> Formula:
    return _cmp(b, "<=", a)


def cong(a, b, n: int) -> Formula:
    a, b = LinExpr.of(a), LinExpr.of(b)
    d = a - b
    if n == 1:
        return TRUE
    if d.is_const:
        return Const(d.const % n == 0)
    return Cong(a, b, n)


def conj(*fs: Formula | Iterable[Formula]) -> Formula:
    out: list[Formula] = []
    seen = set()
    for f in _flatten(fs):
        if f == TRUE:
            continue
        if f == FALSE:
            return FALSE
        parts = f.args if isinstance(f, And) else (f,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                out.append(p)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*fs: Formula | Iterable[Formula]) -> Formula:
    out: list[Formula] = []
    seen = set()
    for f in _flatten(fs):
        if f == FALSE:
            continue
        if f == TRUE:
            return TRUE
        parts = f.args if isinstance(f, Or) else (f,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                out.append(p)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def _flatten(fs):
    for f in fs:
        if isinstance(f, Formula):
            yield f
        else:
            yield from f


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def implies(a: Formula, b: Formula) -> Formula:
    return disj(neg(a), b)


def exists(names: Iterable[str], body: Formula) -> Formula:
    names = tuple(n for n in dict.fromkeys(names) if n in free_vars(body))
    if not names:
        return body
    return Exists(names, body)


# -- queries -----------------------------------------------------------------

def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, (Cmp, Cong)):
        return f.lhs.vars() | f.rhs.vars()
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_vars(a) for a in f.args))
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, Exists):
        return free_vars(f.body) - set(f.vars)
    raise ArithError(f"not a formula: {f!r}")


def evaluate(f: Formula, stack: Mapping[str, int]) -> bool:
    """Truth value of quantifier-free ``f`` under ``stack`` (naturals)."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Cmp):
        a, b = f.lhs.evaluate(stack), f.rhs.evaluate(stack)
        if f.op == "=":
            return a == b
        if f.op == "!=":
            return a != b
        if f.op == "<":
            return a < b
        return a <= b
    if isinstance(f, Cong):
        return (f.lhs.evaluate(stack) - f.rhs.evaluate(stack)) % f.modulus == 0
    if isinstance(f, And):
        return all(evaluate(a, stack) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, stack) for a in f.args)
    if isinstance(f, Not):
        return not evaluate(f.arg, stack)
    if isinstance(f, Exists):
        raise ArithError("evaluate expects a quantifier-free formula")
    raise ArithError(f"not a formula: {f!r}")


def strip_root_exists(f: Formula) -> tuple[tuple[str, ...], Formula]:
    names: list[str] = []
    while isinstance(f, Exists):
        names.extend(f.vars)
        f = f.body
    return tuple(names), f


def has_exists(f: Formula) -> bool:
    if isinstance(f, Exists):
        return True
    if isinstance(f, (And, Or)):
        return any(has_exists(a) for a in f.args)
    if isinstance(f, Not):
        return has_exists(f.arg)
    return False


def classify(f: Formula) -> str:
    """``"QFPA"`` or ``"EPA"``; raises ArithError for anything else.

    Classification is done after pushing negations inward, so an ``Exists``
    under an odd number of negations (a universal) is rejected.
    """
    g = nnf(f)
    _, body = strip_root_exists(g)
    if has_exists(body):
        raise ArithError("only root-level existential quantification is supported")
    return "EPA" if isinstance(g, Exists) else "QFPA"


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form; ``Not`` only survives directly above ``Cong``."""
    if isinstance(f, Const):
        return f if positive else Const(not f.value)
    if isinstance(f, Cmp):
        if positive:
            return f
        flip = {"=": "!=", "!=": "=", "<": "<=", "<=": "<"}[f.op]
        if f.op in ("<", "<="):
            return Cmp(f.rhs, flip, f.lhs)
        return Cmp(f.lhs, flip, f.rhs)
    if isinstance(f, Cong):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, And):
        parts = [nnf(a, positive) for a in f.args]
        return conj(parts) if positive else disj(parts)
    if isinstance(f, Or):
        parts = [nnf(a, positive) for a in f.args]
        return disj(parts) if positive else conj(parts)
    if isinstance(f, Exists):
        if not positive:
            raise ArithError("universal quantification is outside EPA")
        return Exists(f.vars, nnf(f.body, True))
    raise ArithError(f"not a formula: {f!r}")


def substitute(f: Formula, sigma: Mapping[str, LinExpr]) -> Formula:
    if isinstance(f, Const):
        return f
    if isinstance(f, Cmp):
        return Cmp(f.lhs.substitute(sigma), f.op, f.rhs.substitute(sigma))
    if isinstance(f, Cong):
        return Cong(f.lhs.substitute(sigma), f.rhs.substitute(sigma), f.modulus)
    if isinstance(f, And):
        return And(tuple(substitute(a, sigma) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, sigma) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute(f.arg, sigma))
    if isinstance(f, Exists):
        inner = {k: v for k, v in sigma.items() if k not in f.vars}
        if any(set(f.vars) & e.vars() for e in inner.values()):
            raise ArithError("substitution would capture a bound variable")
        return Exists(f.vars, substitute(f.body, inner))
    raise ArithError(f"not a formula: {f!r}")


@dataclass
class StackModel:
    """A satisfying assignment; ``witnesses`` holds values of root existentials."""

    assignment: dict[str, int]
    witnesses: dict[str, int] = field(default_factory=dict)

    def __getitem__(self, name: str) -> int:
        return self.assignment[name]

    def full(self) -> dict[str, int]:
        return {**self.witnesses, **self.assignment}
