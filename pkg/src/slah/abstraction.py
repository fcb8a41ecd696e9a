"""Presburger abstraction of symbolic heaps.

Every function here is pure and returns LIA formulas over the naturals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arith import (
    TRUE, Formula, LinExpr, conj, cong, disj, eq, implies, le, lt, ne,
)
from .formula import (
    INF, Blk, Bound, Hls, PointsTo, SpatialAtom, SymbolicHeap, head, tail,
)


def abs_plus_hls(t1: LinExpr, t2: LinExpr, bound: Bound) -> Formula:
    """Summary of a non-empty heap list from ``t1`` to ``t2``."""
    if bound is INF:
        return le(t1 + 2, t2)
    z = bound
    return disj(
        conj(eq(z, 2), le(t1 + 2, t2), cong(t2, t1, 2)),
        conj(lt(2, z), le(t1 + 2, t2)),
    )


def abs_atom(a: SpatialAtom) -> Formula:
    if isinstance(a, PointsTo):
        return TRUE
    if isinstance(a, Blk):
        return lt(a.start, a.end)
    if isinstance(a, Hls):
        return disj(eq(a.start, a.end),
                    conj(lt(a.start, a.end), abs_plus_hls(a.start, a.end, a.bound)))
    raise TypeError(f"no abstraction for {a!r}")


def nonempty_guard(a: SpatialAtom) -> Formula:
    return lt(head(a), tail(a))


def sep_constraints(atoms: Sequence[SpatialAtom]) -> Formula:
    """Pairwise disjointness; pairs involving a heap list are guarded by its non-emptiness."""
    parts = []
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            a, b = atoms[i], atoms[j]
            apart = disj(le(tail(b), head(a)), le(tail(a), head(b)))
            guards = [nonempty_guard(x) for x in (a, b) if isinstance(x, Hls)]
            parts.append(implies(conj(guards), apart) if guards else apart)
    return conj(parts)


@dataclass(frozen=True)
class AbsResult:
    formula: Formula
    nonempty_guards: dict


def abs_result(phi: SymbolicHeap) -> AbsResult:
    atoms = phi.spatial
    f = conj(phi.pure_formula, conj(abs_atom(a) for a in atoms), sep_constraints(atoms))
    return AbsResult(f, {i: nonempty_guard(a) for i, a in enumerate(atoms)})


def abs_atoms(atoms: Sequence[SpatialAtom], pure: Formula = TRUE) -> Formula:
    return conj(pure, conj(abs_atom(a) for a in atoms), sep_constraints(atoms))


def abs_formula(phi: SymbolicHeap) -> Formula:
    """Abstraction of ``qf(phi)``: pure part, atom summaries, separation."""
    return abs_atoms(phi.spatial, phi.pure_formula)


def eub_formula(pi: Formula, h: Hls, z: str) -> Formula:
    """``pi`` plus the constraint pinning ``z`` to the effective upper bound of ``h``.

    The effective upper bound is the largest chunk size over all ways of
    cutting ``h`` into chunks whose sizes lie in ``[2, bound]``.
    """
    t1, t2 = h.start, h.end
    zv = LinExpr.var(z)
    if h.bound is INF:
        return conj(pi, le(t1 + 2, t2), eq(t1 + zv, t2))
    t3 = h.bound
    two = conj(eq(t3, 2), eq(zv, 2), le(t1 + 2, t2), cong(t2, t1, 2))
    more = conj(
        lt(2, t3), le(2, zv), le(zv, t3),
        disj(le(t1 + zv + 2, t2), eq(t2, t1 + zv)),
        implies(le(zv + 1, t3), conj(le(t2, t1 + zv + 2), ne(t2, t1 + zv + 1))),
        implies(le(zv + 2, t3), ne(t2, t1 + zv + 2)),
    )
    return conj(pi, disj(two, more))
