"""Entailment between symbolic heaps.

The query ``phi |= psi`` is reduced to arithmetic: trivial cases are settled
on the abstractions, the remaining query is split over every total preorder
of the address terms compatible with ``Abs(phi)``, and each ordered query is
matched left to right, splitting antecedent atoms where a consequent atom
ends inside them.

Every case split is checked twice: each satisfiable case must succeed, and
the context must entail the disjunction of the cases considered (otherwise
some models fall in no case, and the entailment fails on them).
"""
from __future__ import annotations

import contextvars
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from . import arith
from .abstraction import abs_atom, abs_atoms, abs_formula, abs_plus_hls, eub_formula
from .arith import (
    FALSE, TRUE, And, Cmp, Const, Formula, LinExpr, Not, Or, conj, disj, eq, le, lt, neg,
)
from .formula import (
    INF, AddrTerm, Blk, FormulaError, Hls, PointsTo, SpatialAtom, SymbolicHeap,
    address_terms, head, tail,
)


class ResourceError(RuntimeError):
    """The matching recursion exceeded its depth limit."""


class InternalError(RuntimeError):
    """An invariant guaranteed by compatibility was violated (a bug)."""


@dataclass(frozen=True)
class TotalPreorder:
    """Ordered equivalence classes of address terms."""

    classes: tuple[tuple[AddrTerm, ...], ...]

    def constraint(self) -> Formula:
        parts = []
        for cls in self.classes:
            parts.extend(eq(cls[0], t) for t in cls[1:])
        for a, b in zip(self.classes, self.classes[1:]):
            parts.append(lt(a[0], b[0]))
        return conj(parts)

    def rank(self) -> dict:
        return {t: i for i, cls in enumerate(self.classes) for t in cls}

    def __str__(self) -> str:
        return " < ".join(" = ".join(str(t) for t in cls) for cls in self.classes)


@dataclass(frozen=True)
class Valid:
    preorders: int = 0

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Invalid:
    """``reason`` names the failed check; ``model`` is a stack on which it fails
    (when the failure was an arithmetic one)."""

    reason: str
    preorder: Optional[TotalPreorder] = None
    model: Optional[dict] = None
    trace: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return False


@dataclass
class Stats:
    preorders: int = 0
    sat_calls: int = 0
    decomposed: int = 0


# -- preorders ---------------------------------------------------------------

def _model_rel(m: dict, t: LinExpr, u: LinExpr) -> int:
    a, b = _eval(t, m), _eval(u, m)
    return (a > b) - (a < b)


def _eval(t: LinExpr, m: dict) -> int:
    return t.const + sum(c * m.get(v, 0) for v, c in t.coeffs)


def enumerate_preorders(terms: Sequence[AddrTerm], ctx: Formula,
                        stats: Optional[Stats] = None) -> Iterator[TotalPreorder]:
    """Every total preorder of ``terms`` whose constraint is consistent with ``ctx``.

    Terms are inserted one at a time into a growing ordered partition and
    each prefix is checked for satisfiability.  A table of which pairwise
    relations are possible at all (filled from solver models, then by direct
    queries) avoids most of those checks.
    """
    stats = stats or Stats()
    terms = list(dict.fromkeys(terms))
    base = arith.check_sat(ctx)
    stats.sat_calls += 1
    if base is None:
        return
    m0 = base.full()
    terms.sort(key=lambda t: (_eval(t, m0), str(t)))
    models = [m0]
    possible: dict[tuple[int, int], set[int]] = {}
    n = len(terms)

    def witness(f):
        stats.sat_calls += 1
        r = arith.check_sat(conj(ctx, f))
        if r is not None:
            models.append(r.full())
        return r is not None

    for i in range(n):
        for j in range(i + 1, n):
            t, u = terms[i], terms[j]
            rel = {_model_rel(m, t, u) for m in models}
            d = t - u
            if d.is_const:
                rel = {(d.const > 0) - (d.const < 0)}
            else:
                for r, f in ((-1, lt(t, u)), (0, eq(t, u)), (1, lt(u, t))):
                    if r not in rel and witness(f):
                        rel.add(r)
            possible[i, j] = rel

    def rel_ok(i: int, j: int, r: int) -> bool:
        if i < j:
            return r in possible[i, j]
        return -r in possible[j, i]

    def extend(classes: list[list[int]], k: int) -> Iterator[list[list[int]]]:
        if k == n:
            yield classes
            return
        for pos in range(2 * len(classes) + 1):
            if pos % 2:
                ci = pos // 2
                ok = all(rel_ok(k, i, 0) for i in classes[ci])
                new = [c[:] for c in classes]
                new[ci].append(k)
            else:
                ci = pos // 2
                ok = all(rel_ok(k, i, -1) for c in classes[ci:] for i in c) and \
                    all(rel_ok(k, i, 1) for c in classes[:ci] for i in c)
                new = [c[:] for c in classes]
                new.insert(ci, [k])
            if not ok:
                continue
            po = TotalPreorder(tuple(tuple(terms[i] for i in c) for c in new))
            if k >= 2 and not _consistent_with_models(new, terms, models):
                stats.sat_calls += 1
                r = arith.check_sat(conj(ctx, po.constraint()))
                if r is None:
                    continue
                models.append(r.full())
            yield from extend(new, k + 1)

    for classes in extend([], 0):
        yield TotalPreorder(tuple(tuple(terms[i] for i in c) for c in classes))


def _consistent_with_models(classes, terms, models) -> bool:
    """Some known model of the context realizes this partial preorder."""
    for m in models:
        vals = [[_eval(terms[i], m) for i in c] for c in classes]
        if all(len(set(v)) == 1 for v in vals) and \
                all(a[0] < b[0] for a, b in zip(vals, vals[1:])):
            return True
    return False


# -- order-aware simplification ---------------------------------------------

def _fold(f: Formula, rank: dict) -> Formula:
    """Decide comparisons between two ranked terms; leave the rest alone."""
    if isinstance(f, Cmp):
        a, b = rank.get(f.lhs), rank.get(f.rhs)
        if a is None or b is None:
            return f
        return Const({"=": a == b, "!=": a != b, "<": a < b, "<=": a <= b}[f.op])
    if isinstance(f, And):
        return conj(_fold(g, rank) for g in f.args)
    if isinstance(f, Or):
        return disj(_fold(g, rank) for g in f.args)
    if isinstance(f, Not):
        g = _fold(f.arg, rank)
        return Not(g) if not isinstance(g, Const) else Const(not g.value)
    return f


# -- the engine --------------------------------------------------------------

class _Fail(Exception):
    pass


class Matcher:
    """Ordered matching under a fixed preorder; one instance per preorder."""

    def __init__(self, rank: dict, taken: frozenset, stats: Stats, max_depth: int = 64):
        self.rank = rank
        self.taken = set(taken)
        self.stats = stats
        self.max_depth = max_depth
        self.counter = itertools.count()
        self.trace: list[str] = []
        self.model: Optional[dict] = None

    def fresh(self, base: str) -> str:
        while True:
            name = f"%{base}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name

    # arithmetic helpers

    def sat(self, ctx: Formula, *extra: Formula) -> bool:
        f = _fold(conj(*extra), self.rank) if extra else TRUE
        if f == FALSE:
            return False
        self.stats.sat_calls += 1
        return arith.check_sat(conj(ctx, f)) is not None

    def valid(self, ctx: Formula, goal: Formula, why: str = "") -> bool:
        g = _fold(goal, self.rank)
        if g == TRUE:
            return True
        self.stats.sat_calls += 1
        m = arith.check_sat(conj(ctx, neg(g)))
        if m is None:
            return True
        if why:
            self.fail(why, m.full())
        return False

    def fail(self, why: str, model: Optional[dict] = None) -> bool:
        self.trace.append(why)
        if model is not None and self.model is None:
            self.model = model
        return False

    # matching

    def match_one(self, ctx: Formula, ante: Sequence[SpatialAtom], b: SpatialAtom,
                  depth: int = 0) -> bool:
        if depth > self.max_depth:
            raise ResourceError("matching recursion too deep")
        if not ante:
            return self.fail(f"nothing left to match {b}")
        span = conj(eq(head(ante[0]), head(b)), eq(tail(ante[-1]), tail(b)),
                    conj(eq(tail(x), head(y)) for x, y in zip(ante, ante[1:])))
        if not self.valid(ctx, span, f"{_seq(ante)} does not span {b}"):
            return False
        if isinstance(b, PointsTo):
            a = ante[0]
            if len(ante) != 1 or not isinstance(a, PointsTo):
                return self.fail(f"{_seq(ante)} cannot prove {b}")
            return self.valid(ctx, eq(a.value, b.value), f"value of {a} may differ from {b}")
        if isinstance(b, Blk):
            return True
        return self._match_hls(ctx, ante, b, depth)

    def _match_hls(self, ctx, ante, b: Hls, depth) -> bool:
        a1 = ante[0]
        t1, t2, t3 = b.start, b.end, b.bound
        if isinstance(a1, Blk):
            return self.fail(f"{a1} cannot start the heap list {b}")
        if len(ante) == 1:
            if isinstance(a1, PointsTo):
                return self.fail(f"single cell {a1} cannot be the heap list {b}")
            return self._hls_into_hls(ctx, a1, b)
        if isinstance(a1, Hls):
            return (self.match_one(ctx, [a1], Hls(t1, a1.end, t3), depth + 1)
                    and self.match_one(ctx, ante[1:], Hls(a1.end, t2, t3), depth + 1))
        # a1 is a chunk header t1' |-> v
        v = a1.value
        size_ok = le(2, v) if t3 is INF else conj(le(2, v), le(v, t3))
        if not self.valid(ctx, size_ok, f"header {a1} is not a chunk size allowed by {b}"):
            return False
        L = a1.addr + v
        cases = []
        for j, aj in enumerate(ante):
            at_end = eq(L, tail(aj))
            cases.append(at_end)
            if self.sat(ctx, at_end):
                if j + 1 < len(ante):
                    if not self.match_one(conj(ctx, at_end), ante[j + 1:], Hls(L, t2, t3), depth + 1):
                        return self.fail(f"rest after {aj} is not the heap list from {L}")
            if isinstance(aj, PointsTo):
                continue
            inside = conj(lt(head(aj), L), lt(L, tail(aj)))
            cases.append(inside)
            if not self.sat(ctx, inside):
                continue
            if isinstance(aj, Blk):
                return self.fail(f"next chunk of {b} may start inside {aj}")
            c2 = conj(ctx, inside)
            if self._lands_in_body(c2, ante, j, L):
                return self.fail(f"next chunk of {b} may start inside a chunk body of {aj}")
            rest = Hls(L, aj.end, aj.bound)
            c3 = conj(c2, abs_atom(rest))
            if not self.match_one(c3, [rest] + list(ante[j + 1:]), Hls(L, t2, t3), depth + 1):
                return self.fail(f"rest of {aj} from {L} does not match")
        return self.valid(ctx, disj(cases), f"next chunk of {b} may end outside the antecedent")

    def _lands_in_body(self, ctx, ante, j, L) -> bool:
        """Some model puts ``L`` strictly inside a chunk body of ``ante[j]``."""
        aj: Hls = ante[j]
        x1 = LinExpr.var(self.fresh("x"))
        x2 = LinExpr.var(self.fresh("x"))
        w = LinExpr.var(self.fresh("w"))
        unf = [Hls(aj.start, x1, aj.bound), PointsTo(x1, w), Blk(x1 + 1, x2), Hls(x2, aj.end, aj.bound)]
        atoms = list(ante[:j]) + unf + list(ante[j + 1:])
        where = conj(le(aj.start, x1), lt(x1, L), lt(L, x2), le(x2, aj.end),
                     le(x1 + 2, x2), eq(x1 + w, x2),
                     TRUE if aj.bound is INF else le(x2, x1 + aj.bound))
        return self.sat(ctx, conj(where, abs_atoms(atoms)))

    def _hls_into_hls(self, ctx, a: Hls, b: Hls) -> bool:
        if b.bound is INF:
            return True
        z = self.fresh("z")
        f = conj(eub_formula(ctx, a, z), le(b.bound + 1, LinExpr.var(z)))
        self.stats.sat_calls += 1
        m = arith.check_sat(f)
        if m is None:
            return True
        return self.fail(f"{a} admits a chunk larger than the bound of {b}", m.full())

    def match_seq(self, ctx: Formula, ante: Sequence[SpatialAtom],
                  cons: Sequence[SpatialAtom], depth: int = 0) -> bool:
        if depth > self.max_depth:
            raise ResourceError("matching recursion too deep")
        if not cons:
            return not ante or self.fail(f"{_seq(ante)} left over")
        if not ante:
            return self.fail(f"{_seq(cons)} left unmatched")
        if len(cons) == 1:
            return self.match_one(ctx, ante, cons[0], depth + 1)
        b1, rest = cons[0], cons[1:]
        T = tail(b1)
        cases = []
        for k, ak in enumerate(ante):
            at_end = eq(T, tail(ak))
            cases.append(at_end)
            if self.sat(ctx, at_end):
                c = conj(ctx, at_end)
                if not (self.match_one(c, ante[:k + 1], b1, depth + 1)
                        and self.match_seq(c, ante[k + 1:], rest, depth + 1)):
                    return self.fail(f"{b1} ending with {ak} fails")
            if isinstance(ak, PointsTo):
                continue
            inside = conj(lt(head(ak), T), lt(T, tail(ak)))
            cases.append(inside)
            if not self.sat(ctx, inside):
                continue
            c = conj(ctx, inside)
            if isinstance(ak, Blk):
                splits = [(TRUE, [Blk(ak.start, T)], [Blk(T, ak.end)])]
            else:
                splits = self._hls_splits(ak, T)
            for cond, pre, post in splits:
                if not self.sat(c, cond):
                    continue
                cc = conj(c, cond)
                if not (self.match_one(cc, list(ante[:k]) + pre, b1, depth + 1)
                        and self.match_seq(cc, post + list(ante[k + 1:]), rest, depth + 1)):
                    return self.fail(f"{b1} ending inside {ak} fails")
        return self.valid(ctx, disj(cases), f"{b1} may end outside the antecedent")

    def _hls_splits(self, a: Hls, T: LinExpr):
        """Ways a heap list ``a`` can be cut at ``T`` (strictly inside it)."""
        p, q, c = a.start, a.end, a.bound

        def fits(s, e):
            return conj(le(s + 2, e), TRUE if c is INF else le(e, s + c))

        def plus(s, e):
            return abs_plus_hls(s, e, c)

        out = [(conj(plus(p, T), plus(T, q)), [Hls(p, T, c)], [Hls(T, q, c)])]
        x = LinExpr.var(self.fresh("x"))
        x2 = LinExpr.var(self.fresh("x"))
        chunks = [
            # (start, end, before, after, side condition)
            (p, q, [], [], fits(p, q)),
            (p, x, [], [Hls(x, q, c)], conj(fits(p, x), lt(x, q), plus(x, q))),
            (x, q, [Hls(p, x, c)], [], conj(lt(p, x), plus(p, x), fits(x, q))),
            (x, x2, [Hls(p, x, c)], [Hls(x2, q, c)],
             conj(lt(p, x), plus(p, x), fits(x, x2), lt(x2, q), plus(x2, q))),
        ]
        for s, e, before, after, side in chunks:
            w = LinExpr.var(self.fresh("w"))
            hdr = PointsTo(s, w)
            side = conj(side, eq(s + w, e))
            out.append((conj(side, eq(T, s + 1)),
                        before + [hdr], [Blk(s + 1, e)] + after))
            out.append((conj(side, lt(s + 1, T), lt(T, e)),
                        before + [hdr, Blk(s + 1, T)], [Blk(T, e)] + after))
        return out


def _seq(atoms) -> str:
    return " * ".join(str(a) for a in atoms) or "emp"


# -- normalization and the top level ----------------------------------------

def normalize_ordered(po: TotalPreorder, ante: Sequence[SpatialAtom],
                      cons: Sequence[SpatialAtom]):
    """Drop empty heap lists and sort both sides by start address.

    Returns ``(ante, cons)`` or an :class:`Invalid` when the consequent
    cannot be laid out under ``po``.
    """
    rank = po.rank()

    def keep(a):
        return not (isinstance(a, Hls) and rank[a.start] == rank[a.end])

    A = sorted((a for a in ante if keep(a)), key=lambda a: rank[head(a)])
    B = sorted((b for b in cons if keep(b)), key=lambda b: rank[head(b)])
    for x, y in zip(A, A[1:]):
        if rank[tail(x)] > rank[head(y)]:
            raise InternalError(f"antecedent atoms {x} and {y} overlap under {po}")
    for x in A:
        if rank[head(x)] >= rank[tail(x)]:
            raise InternalError(f"antecedent atom {x} is reversed under {po}")
    for x in B:
        if rank[head(x)] >= rank[tail(x)]:
            return Invalid(f"consequent atom {x} is empty or reversed", po)
    for x, y in zip(B, B[1:]):
        if rank[tail(x)] > rank[head(y)]:
            return Invalid(f"consequent atoms {x} and {y} overlap", po)
    return A, B


def pre_decompose(ctx: Formula, ante: Sequence[SpatialAtom], cons: Sequence[SpatialAtom],
                  stats: Optional[Stats] = None):
    """Peel off consequent blocks covered by a contiguous run of antecedent atoms.

    A block ``b`` of the consequent whose region is, in every model of
    ``ctx``, exactly the union of some antecedent atoms is matched by them
    whatever their contents.  Returns the removed ``(group, b)`` pairs and the
    residual antecedent and consequent.
    """
    stats = stats or Stats()
    ante = list(ante)
    cons = list(cons)
    groups = []

    def valid(goal):
        if goal == TRUE:
            return True
        stats.sat_calls += 1
        return arith.check_sat(conj(ctx, neg(goal))) is None

    nonempty = {}

    def surely_nonempty(i):
        if i not in nonempty:
            a = ante[i]
            nonempty[i] = not isinstance(a, Hls) or valid(lt(a.start, a.end))
        return nonempty[i]

    for b in [b for b in cons if isinstance(b, Blk)]:
        chain = _find_chain(b, ante, valid, surely_nonempty)
        if chain is None:
            continue
        groups.append(([ante[i] for i in chain], b))
        ante = [a for i, a in enumerate(ante) if i not in chain]
        nonempty = {}
        cons.remove(b)
    stats.decomposed += len(groups)
    return groups, ante, cons


def _find_chain(b: Blk, ante, valid, surely_nonempty) -> Optional[list[int]]:
    def step(cur, used):
        if len(used) and valid(eq(cur, b.end)):
            return list(used)
        order = sorted((i for i in range(len(ante)) if i not in used),
                       key=lambda i: head(ante[i]) != cur)
        for i in order:
            a = ante[i]
            if not surely_nonempty(i):
                continue
            if head(a) == cur or valid(eq(head(a), cur)):
                r = step(tail(a), used + [i])
                if r is not None:
                    return r
                return None  # the atom starting at cur is unique
        return None

    return step(b.start, [])


def decide_entail(phi: SymbolicHeap, psi: SymbolicHeap, heuristics: bool = True,
                  max_depth: int = 64, jobs: int = 1, stats: Optional[Stats] = None):
    """``Valid()`` if every model of ``phi`` satisfies ``psi``, else ``Invalid(...)``."""
    if psi.existentials:
        raise FormulaError("the consequent must be quantifier-free")
    extra = psi.fv() - phi.all_vars()
    if extra:
        raise FormulaError(f"consequent variables not in the antecedent: {sorted(extra)}")
    stats = stats if stats is not None else Stats()
    phi = phi.qf()
    abs_phi = abs_formula(phi)
    stats.sat_calls += 1
    if arith.check_sat(abs_phi) is None:
        return Valid()
    stats.sat_calls += 1
    m = arith.check_sat(conj(abs_phi, neg(abs_formula(psi))))
    if m is not None:
        return Invalid("the abstraction of the consequent fails", model=m.full())
    ante, cons = list(phi.spatial), list(psi.spatial)
    if heuristics:
        _, ante, cons = pre_decompose(abs_phi, ante, cons, stats)
    taken = phi.all_vars() | psi.all_vars()
    return _decide_ordered(abs_phi, ante, cons, taken, max_depth, jobs, stats)


def _check_preorder(po: TotalPreorder, ctx: Formula, ante, cons, taken, max_depth, stats):
    norm = normalize_ordered(po, ante, cons)
    if isinstance(norm, Invalid):
        return norm
    A, B = norm
    rank = po.rank()
    full = conj(po.constraint(), _fold(ctx, rank))
    mt = Matcher(rank, taken, stats, max_depth)
    if mt.match_seq(full, A, B):
        return None
    model = mt.model
    if model is None:
        r = arith.check_sat(full)
        model = r.full() if r is not None else None
    return Invalid(mt.trace[0] if mt.trace else "no match", po, model, tuple(mt.trace))


def _decide_ordered(ctx, ante, cons, taken, max_depth, jobs, stats):
    terms = address_terms(ante) + address_terms(cons)
    preorders = enumerate_preorders(terms, ctx, stats)
    if jobs <= 1:
        for po in preorders:
            stats.preorders += 1
            bad = _check_preorder(po, ctx, ante, cons, taken, max_depth, stats)
            if bad is not None:
                return bad
        return Valid(stats.preorders)

    backend = arith.current_backend()

    def work(po):
        with arith.using(arith.fresh_session(backend)):
            return _check_preorder(po, ctx, ante, cons, taken, max_depth, stats)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = []
        for po in preorders:
            stats.preorders += 1
            futures.append(pool.submit(contextvars.copy_context().run, work, po))
        for f in futures:
            bad = f.result()
            if bad is not None:
                for g in futures:
                    g.cancel()
                return bad
    return Valid(stats.preorders)
