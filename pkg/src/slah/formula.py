"""SLAH syntax: address terms, spatial atoms, and symbolic heaps.

Address terms are :class:`~slah.arith.LinExpr` values restricted to
non-negative coefficients and constants (sums of variables and naturals).
Differences only ever appear inside arithmetic formulas.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .arith import Cmp, Const, FALSE, Formula, LinExpr, TRUE, conj
from .arith import substitute as lia_substitute


class FormulaError(ValueError):
    """Ill-formed SLAH syntax or a violated structural precondition."""


AddrTerm = LinExpr


def term(x: LinExpr | int | str) -> AddrTerm:
    """Build an address term, rejecting anything outside ``x | n | t+t``."""
    if not isinstance(x, (LinExpr, int, str)):
        raise FormulaError(f"not an address term: {x!r}")
    e = LinExpr.of(x)
    if e.const < 0 or any(c <= 0 for _, c in e.coeffs):
        raise FormulaError(f"not an address term: {e}")
    return e


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Bound = Union[LinExpr, _Infinity]


@dataclass(frozen=True)
class Emp:
    def __str__(self) -> str:
        return "emp"


@dataclass(frozen=True)
class PointsTo:
    addr: AddrTerm
    value: AddrTerm

    def __str__(self) -> str:
        return f"{_p(self.addr)} |-> {_p(self.value)}"


@dataclass(frozen=True)
class Blk:
    start: AddrTerm
    end: AddrTerm

    def __str__(self) -> str:
        return f"blk({self.start}, {self.end})"


@dataclass(frozen=True)
class Hls:
    start: AddrTerm
    end: AddrTerm
    bound: Bound = INF

    def __str__(self) -> str:
        if self.bound is INF:
            return f"hls({self.start}, {self.end})"
        return f"hls({self.start}, {self.end}; {self.bound})"


SpatialAtom = Union[Emp, PointsTo, Blk, Hls]


def _p(t: LinExpr) -> str:
    s = str(t)
    return f"({s})" if " " in s else s


def pto(a, v) -> PointsTo:
    return PointsTo(term(a), term(v))


def blk(a, b) -> Blk:
    return Blk(term(a), term(b))


def hls(a, b, bound=INF) -> Hls:
    return Hls(term(a), term(b), INF if bound is INF or bound is None else term(bound))


def head(a: SpatialAtom) -> AddrTerm:
    if isinstance(a, PointsTo):
        return a.addr
    if isinstance(a, (Blk, Hls)):
        return a.start
    raise FormulaError("head() of emp is undefined")


def tail(a: SpatialAtom) -> AddrTerm:
    if isinstance(a, PointsTo):
        return a.addr + 1
    if isinstance(a, (Blk, Hls)):
        return a.end
    raise FormulaError("tail() of emp is undefined")


def atom_terms(a: SpatialAtom) -> tuple[AddrTerm, ...]:
    """Every term occurring in ``a`` (addresses, values, bounds)."""
    if isinstance(a, PointsTo):
        return (a.addr, a.value)
    if isinstance(a, Blk):
        return (a.start, a.end)
    if isinstance(a, Hls):
        return (a.start, a.end) if a.bound is INF else (a.start, a.end, a.bound)
    return ()


def atom_vars(a: SpatialAtom) -> frozenset[str]:
    return frozenset().union(*(t.vars() for t in atom_terms(a)))


def substitute_atom(a: SpatialAtom, sigma: Mapping[str, LinExpr]) -> SpatialAtom:
    def s(t: LinExpr) -> LinExpr:
        return term(t.substitute(sigma))

    if isinstance(a, PointsTo):
        return PointsTo(s(a.addr), s(a.value))
    if isinstance(a, Blk):
        return Blk(s(a.start), s(a.end))
    if isinstance(a, Hls):
        return Hls(s(a.start), s(a.end), a.bound if a.bound is INF else s(a.bound))
    return a


def _check_pure(f: Formula) -> Formula:
    if isinstance(f, Const):
        return f
    if not isinstance(f, Cmp) or f.op not in ("=", "!=", "<", "<="):
        raise FormulaError(f"pure atoms are comparisons, got {f}")
    term(f.lhs)
    term(f.rhs)
    return f


@dataclass(frozen=True)
class SymbolicHeap:
    """``exists existentials . pure : spatial``.

    ``pure`` is a conjunction of comparison atoms (or constants); ``spatial``
    never contains ``emp`` (it is the unit of ``*``).
    """

    pure: tuple[Formula, ...] = ()
    spatial: tuple[SpatialAtom, ...] = ()
    existentials: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "pure", tuple(_check_pure(p) for p in self.pure if p != TRUE))
        object.__setattr__(self, "spatial", tuple(a for a in self.spatial if not isinstance(a, Emp)))
        object.__setattr__(self, "existentials", frozenset(self.existentials))

    @property
    def pure_formula(self) -> Formula:
        return conj(self.pure)

    def all_vars(self) -> frozenset[str]:
        out: set[str] = set()
        for p in self.pure:
            if isinstance(p, Cmp):
                out |= p.lhs.vars() | p.rhs.vars()
        for a in self.spatial:
            out |= atom_vars(a)
        return frozenset(out)

    def fv(self) -> frozenset[str]:
        return self.all_vars() - self.existentials

    def qf(self) -> SymbolicHeap:
        return SymbolicHeap(self.pure, self.spatial)

    def __str__(self) -> str:
        body = " & ".join(str(p) for p in self.pure) or "true"
        sp = " * ".join(str(a) for a in self.spatial) or "emp"
        pre = f"exists {', '.join(sorted(self.existentials))}. " if self.existentials else ""
        return f"{pre}{body} : {sp}"


def symbolic_heap(pure: Iterable[Formula] = (), spatial: Iterable[SpatialAtom] = (),
                  existentials: Iterable[str] = ()) -> SymbolicHeap:
    pure = list(pure)
    if FALSE in pure:
        pure = [FALSE]
    return SymbolicHeap(tuple(pure), tuple(spatial), frozenset(existentials))


def address_terms(phi: SymbolicHeap | Iterable[SpatialAtom]) -> list[AddrTerm]:
    """Heads and tails of all atoms, deduplicated, in first-occurrence order."""
    atoms = phi.spatial if isinstance(phi, SymbolicHeap) else phi
    out: dict[AddrTerm, None] = {}
    for a in atoms:
        if isinstance(a, Emp):
            continue
        out.setdefault(head(a))
        out.setdefault(tail(a))
    return list(out)


def substitute(phi: SymbolicHeap, sigma: Mapping[str, LinExpr]) -> SymbolicHeap:
    """Simultaneous, capture-free substitution on the free variables of ``phi``."""
    sigma = {k: term(v) for k, v in sigma.items()}
    if set(sigma) & phi.existentials:
        raise FormulaError("substitution domain overlaps the existentials")
    if any(v.vars() & phi.existentials for v in sigma.values()):
        raise FormulaError("substitution would capture an existential variable")
    pure = tuple(lia_substitute(p, sigma) for p in phi.pure)
    return SymbolicHeap(pure, tuple(substitute_atom(a, sigma) for a in phi.spatial),
                        phi.existentials)


def fresh_name(base: str, taken: Iterable[str], counter: Optional[list] = None) -> str:
    """A ``%``-prefixed name (never a user identifier) not in ``taken``."""
    taken = set(taken)
    i = 0 if counter is None else counter[0]
    while f"%{base}{i}" in taken:
        i += 1
    if counter is not None:
        counter[0] = i + 1
    return f"%{base}{i}"
