"""Reference semantics and bounded brute-force search.

Nothing here uses the abstraction: ``holds`` evaluates the satisfaction
relation directly, and the brute-force searches decide heap-list
decomposability with their own dynamic-programming table.  This module is
the ground truth the decision procedures are tested against.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .arith import Cmp, Const, LinExpr, le, lt, eq, ne
from .formula import (
    INF, Blk, Hls, PointsTo, SpatialAtom, SymbolicHeap, atom_terms, term,
)

Heap = dict


@dataclass(frozen=True)
class Bounds:
    addr_max: int = 16
    value_max: int = 16
    max_atoms: int = 4

    def __post_init__(self):
        if self.addr_max < 2 or self.value_max < 2:
            raise ValueError("addr_max and value_max must be at least 2")


# -- satisfaction relation ---------------------------------------------------

def _cmp(op: str, a: int, b: int) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    return a <= b


def _pure_holds(p, s) -> bool:
    if isinstance(p, Const):
        return p.value
    return _cmp(p.op, p.lhs.evaluate(s), p.rhs.evaluate(s))


def _domain(a: SpatialAtom, s) -> Optional[tuple[int, int]]:
    """Address interval ``[lo, hi)`` that ``a`` must own, or None if impossible."""
    if isinstance(a, PointsTo):
        n = a.addr.evaluate(s)
        return n, n + 1
    lo, hi = a.start.evaluate(s), a.end.evaluate(s)
    if isinstance(a, Blk):
        return (lo, hi) if lo < hi else None
    return (lo, hi) if lo <= hi else None


def _hls_walk(h: Heap, lo: int, hi: int, cap: Optional[int]) -> bool:
    pos = lo
    while pos < hi:
        size = h.get(pos)
        if size is None or size < 2 or (cap is not None and size > cap) or pos + size > hi:
            return False
        pos += size
    return pos == hi


def _qf_holds(s, h: Heap, phi: SymbolicHeap) -> bool:
    if not all(_pure_holds(p, s) for p in phi.pure):
        return False
    spans = []
    for a in phi.spatial:
        d = _domain(a, s)
        if d is None:
            return False
        spans.append(d)
    owned = 0
    order = sorted(range(len(spans)), key=lambda i: spans[i])
    last_hi = None
    for i in order:
        lo, hi = spans[i]
        if lo == hi:
            continue
        if last_hi is not None and lo < last_hi:
            return False
        last_hi = hi
        owned += hi - lo
    if owned != len(h) or any(n not in h for lo, hi in spans for n in range(lo, hi)):
        return False
    for a, (lo, hi) in zip(phi.spatial, spans):
        if isinstance(a, PointsTo):
            if h[lo] != a.value.evaluate(s):
                return False
        elif isinstance(a, Hls):
            cap = None if a.bound is INF else a.bound.evaluate(s)
            if not _hls_walk(h, lo, hi, cap):
                return False
    return True


def holds(s: Mapping[str, int], h: Heap, phi: SymbolicHeap,
          exists_max: Optional[int] = None) -> bool:
    """``s, h |= phi``; existentials are searched over ``[0, exists_max]``."""
    if not phi.existentials:
        return _qf_holds(s, h, phi)
    if exists_max is None:
        pool = list(h) + list(h.values()) + list(s.values()) + [0]
        exists_max = max(pool) + 1
    names = sorted(phi.existentials)
    env = dict(s)
    for vals in itertools.product(range(exists_max + 1), repeat=len(names)):
        env.update(zip(names, vals))
        if _qf_holds(env, h, phi):
            return True
    return False


# -- brute force -------------------------------------------------------------

def decomposable_table(dmax: int) -> np.ndarray:
    """``T[cap, d]``: ``d`` is a sum of at least one part in ``[2, cap]``."""
    T = np.zeros((dmax + 1, dmax + 1), dtype=bool)
    for cap in range(dmax + 1):
        reach = [False] * (dmax + 1)
        reach[0] = True
        for d in range(2, dmax + 1):
            reach[d] = any(reach[d - k] for k in range(2, min(cap, d) + 1))
        T[cap, 2:] = reach[2:]
    return T


def decompositions(d: int, cap: Optional[int]) -> Iterator[tuple[int, ...]]:
    """Every ordered chunk-size sequence with parts in ``[2, cap]`` summing to ``d``."""
    if d == 0:
        yield ()
        return
    top = d if cap is None else min(cap, d)
    for k in range(2, top + 1):
        for rest in decompositions(d - k, cap):
            yield (k,) + rest


def _grid(names: Sequence[str], n: int, chunk: int = 1 << 20) -> Iterator[dict]:
    """Stacks over ``names`` with values in ``[0, n)`` as dicts of numpy columns."""
    k = len(names)
    if k == 0:
        yield {}
        return
    inner = 0
    while inner < k and n ** (inner + 1) <= chunk:
        inner += 1
    inner = max(inner, 1)
    outer = k - inner
    cols = np.indices((n,) * inner).reshape(inner, -1)
    for prefix in itertools.product(range(n), repeat=outer):
        g = {names[i]: np.full(cols.shape[1], prefix[i], dtype=np.int64) for i in range(outer)}
        for j in range(inner):
            g[names[outer + j]] = cols[j].astype(np.int64)
        yield g


def _ev(t: LinExpr, g: dict, size: int) -> np.ndarray:
    out = np.full(size, t.const, dtype=np.int64)
    for v, c in t.coeffs:
        out = out + c * g[v]
    return out


def _np_cmp(op, a, b):
    return {"=": a == b, "!=": a != b, "<": a < b, "<=": a <= b}[op]


def _feasible_mask(phi: SymbolicHeap, g: dict, size: int, table: np.ndarray) -> np.ndarray:
    """Stacks admitting some heap for ``qf(phi)`` (decided by brute-force tables)."""
    dmax = table.shape[0] - 1
    mask = np.ones(size, dtype=bool)
    for p in phi.pure:
        if isinstance(p, Const):
            if not p.value:
                mask[:] = False
        else:
            mask &= _np_cmp(p.op, _ev(p.lhs, g, size), _ev(p.rhs, g, size))
    spans = []
    for a in phi.spatial:
        if isinstance(a, PointsTo):
            lo = _ev(a.addr, g, size)
            spans.append((lo, lo + 1, None))
            continue
        lo, hi = _ev(a.start, g, size), _ev(a.end, g, size)
        if isinstance(a, Blk):
            mask &= lo < hi
            spans.append((lo, hi, None))
        else:
            d = np.clip(hi - lo, 0, dmax)
            cap = np.full(size, dmax) if a.bound is INF else np.clip(_ev(a.bound, g, size), 0, dmax)
            mask &= (lo == hi) | ((lo < hi) & table[cap, d])
            spans.append((lo, hi, lo < hi))
    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            li, hi_, ni = spans[i]
            lj, hj, nj = spans[j]
            apart = (hj <= li) | (hi_ <= lj)
            guard = np.ones(size, dtype=bool)
            if ni is not None:
                guard &= ni
            if nj is not None:
                guard &= nj
            mask &= ~guard | apart
    return mask


def _dmax(phis: Sequence[SymbolicHeap], n: int) -> int:
    top = 0
    for phi in phis:
        for a in phi.spatial:
            for t in atom_terms(a):
                top = max(top, t.const + sum(c for _, c in t.coeffs) * (n - 1))
        for p in phi.pure:
            if isinstance(p, Cmp):
                for t in (p.lhs, p.rhs):
                    top = max(top, t.const + sum(c for _, c in t.coeffs) * (n - 1))
    return top + 2


def _heaps(phi: SymbolicHeap, s: dict, fills: Sequence[int] = (1,),
           all_schemes: bool = False) -> Iterator[Heap]:
    """Heaps for ``qf(phi)`` at ``s``: block cells filled uniformly, heap lists
    cut by one (or every) chunk scheme."""
    per_atom = []
    for a in phi.spatial:
        if isinstance(a, PointsTo):
            per_atom.append([("pto", a.addr.evaluate(s), a.value.evaluate(s))])
        elif isinstance(a, Blk):
            per_atom.append([("blk", a.start.evaluate(s), a.end.evaluate(s))])
        else:
            lo, hi = a.start.evaluate(s), a.end.evaluate(s)
            cap = None if a.bound is INF else a.bound.evaluate(s)
            schemes = decompositions(hi - lo, cap)
            if not all_schemes:
                schemes = itertools.islice(schemes, 1)
            per_atom.append([("hls", lo, sc) for sc in schemes])
    for fill in fills:
        for combo in itertools.product(*per_atom):
            h: Heap = {}
            for kind, lo, x in combo:
                if kind == "pto":
                    h[lo] = x
                elif kind == "blk":
                    for n in range(lo, x):
                        h[n] = fill
                else:
                    pos = lo
                    for size in x:
                        h[pos] = size
                        for n in range(pos + 1, pos + size):
                            h[n] = fill
                        pos += size
            yield h


def brute_sat(phi: SymbolicHeap, bounds: Bounds = Bounds()) -> Optional[tuple[dict, Heap]]:
    """First (stack, heap) model with every variable in ``[0, addr_max]``, or None."""
    names = sorted(phi.all_vars())
    n = bounds.addr_max + 1
    table = decomposable_table(_dmax([phi], n))
    for g in _grid(names, n):
        size = len(next(iter(g.values()))) if g else 1
        mask = _feasible_mask(phi, g, size, table)
        for idx in np.flatnonzero(mask):
            s = {v: int(g[v][idx]) for v in names}
            for h in _heaps(phi, s):
                if _qf_holds(s, h, phi):
                    return s, h
            raise AssertionError("oracle tables and heap construction disagree")
    return None


@dataclass
class Counterexample:
    stack: dict
    heap: Heap


def brute_entail(phi: SymbolicHeap, psi: SymbolicHeap,
                 bounds: Bounds = Bounds(12, 12)) -> Optional[Counterexample]:
    """A model of ``phi`` (variables in ``[0, addr_max]``) that is not a model of ``psi``.

    Every chunk scheme of every heap list is tried.  Cells whose contents
    ``phi`` leaves free are filled uniformly with 1 and with 2: a cell of
    that kind is only observable by ``psi`` through a points-to value or a
    chunk header, and one of the two fillings breaks either reading.
    """
    names = sorted(phi.all_vars() | psi.fv())
    n = bounds.addr_max + 1
    table = decomposable_table(_dmax([phi, psi], n))
    fills = (1, 2) if bounds.value_max >= 2 else (1,)
    qpsi = psi.qf()
    for g in _grid(names, n):
        size = len(next(iter(g.values()))) if g else 1
        mphi = _feasible_mask(phi.qf(), g, size, table)
        if not mphi.any():
            continue
        mpsi = _feasible_mask(qpsi, g, size, table)
        # stacks where psi has no model at all: any phi heap refutes
        for idx in np.flatnonzero(mphi & ~mpsi):
            s = {v: int(g[v][idx]) for v in names}
            h = next(_heaps(phi.qf(), s))
            if not holds(s, h, psi):
                return Counterexample(s, h)
        for idx in np.flatnonzero(mphi & mpsi):
            s = {v: int(g[v][idx]) for v in names}
            for h in _heaps(phi.qf(), s, fills, all_schemes=True):
                if not holds(s, h, psi):
                    return Counterexample(s, h)
    return None


def refute_at(phi: SymbolicHeap, psi: SymbolicHeap, stack: Mapping[str, int]
              ) -> Optional[Counterexample]:
    """A heap of ``phi`` at the given stack that is not a heap of ``psi``.

    Used to confirm counter-stacks lying outside the brute-force bounds.
    Missing variables default to 0.
    """
    s = {v: int(stack.get(v, 0)) for v in sorted(phi.all_vars() | psi.fv())}
    q = phi.qf()
    if not _stack_admits(q, s):
        return None
    for h in _heaps(q, s, (1, 2), all_schemes=True):
        if _qf_holds(s, h, q) and not holds(s, h, psi):
            return Counterexample(s, h)
    return None


def _stack_admits(phi: SymbolicHeap, s: dict) -> bool:
    g = {v: np.array([x], dtype=np.int64) for v, x in s.items()}
    n = max([1] + list(s.values())) + 1
    table = decomposable_table(_dmax([phi], n))
    return bool(_feasible_mask(phi, g, 1, table)[0])


# -- random generation -------------------------------------------------------

@dataclass(frozen=True)
class GenParams:
    max_atoms: int = 4
    max_vars: int = 5
    max_const: int = 8
    max_pure: int = 2
    unfold_prob: float = 0.0
    chain_prob: float = 0.6


def _rand_term(r: random.Random, vs: list[str], p: GenParams, offset_prob=0.3) -> LinExpr:
    roll = r.random()
    if roll < 0.12:
        return LinExpr.num(r.randint(0, p.max_const))
    t = LinExpr.var(r.choice(vs))
    if r.random() < offset_prob:
        t = t + r.randint(1, max(1, p.max_const // 2))
    return t


def _rand_bound(r: random.Random, vs: list[str], p: GenParams):
    roll = r.random()
    if roll < 0.35:
        return INF
    if roll < 0.75:
        return LinExpr.num(r.randint(1, max(2, min(p.max_const, 6))))
    return LinExpr.var(r.choice(vs))


def _rand_atom(r: random.Random, a: LinExpr, b: LinExpr, vs, p: GenParams) -> SpatialAtom:
    kind = r.choice(("pto", "blk", "hls", "hls"))
    if kind == "pto":
        return PointsTo(a, _rand_term(r, vs, p))
    if kind == "blk":
        return Blk(a, b)
    return Hls(a, b, _rand_bound(r, vs, p))


def _rand_pure(r: random.Random, vs, p: GenParams) -> list:
    out = []
    for _ in range(r.randint(0, p.max_pure)):
        op = r.choice(("=", "!=", "<", "<="))
        a, b = _rand_term(r, vs, p), _rand_term(r, vs, p)
        out.append(Cmp(a, op, b))
    return out


def random_formula(seed: int | random.Random, params: GenParams = GenParams()) -> SymbolicHeap:
    """A reproducible random symbolic heap."""
    r = seed if isinstance(seed, random.Random) else random.Random(seed)
    p = params
    nv = r.randint(1, p.max_vars)
    vs = [f"x{i}" for i in range(nv)]
    natoms = r.randint(0, p.max_atoms)
    atoms: list[SpatialAtom] = []
    if r.random() < p.chain_prob and natoms:
        # a contiguous-looking chain: each atom starts where the previous ended
        cur = _rand_term(r, vs, p, 0.0)
        for _ in range(natoms):
            nxt = _rand_term(r, vs, p)
            a = _rand_atom(r, cur, nxt, vs, p)
            atoms.append(a)
            cur = cur + 1 if isinstance(a, PointsTo) else nxt
    else:
        for _ in range(natoms):
            atoms.append(_rand_atom(r, _rand_term(r, vs, p), _rand_term(r, vs, p), vs, p))
    pure = _rand_pure(r, vs, p)
    phi = SymbolicHeap(tuple(pure), tuple(atoms))
    if p.unfold_prob > 0:
        phi = unfold_random(r, phi, p.unfold_prob)
    return phi


def unfold_hls(phi: SymbolicHeap, index: int, w: str, z: str) -> SymbolicHeap:
    """Replace heap list ``index`` by its first chunk and the remaining list.

    ``hls(x,y;v)`` becomes ``x |-> w * blk(x+1,z) * hls(z,y;v)`` with
    ``x + w = z``, ``2 <= w`` and (for finite ``v``) ``w <= v``.
    """
    a = phi.spatial[index]
    if not isinstance(a, Hls):
        raise ValueError("only heap-list atoms unfold")
    wv, zv = LinExpr.var(w), LinExpr.var(z)
    new = [PointsTo(a.start, wv), Blk(a.start + 1, zv), Hls(zv, a.end, a.bound)]
    pure = [Cmp(a.start + wv, "=", zv), Cmp(LinExpr.num(2), "<=", wv)]
    if a.bound is not INF:
        pure.append(Cmp(wv, "<=", a.bound))
    spatial = phi.spatial[:index] + tuple(new) + phi.spatial[index + 1:]
    return SymbolicHeap(phi.pure + tuple(pure), spatial, phi.existentials)


def unfold_random(r: random.Random, phi: SymbolicHeap, prob: float) -> SymbolicHeap:
    i = 0
    k = 0
    taken = phi.all_vars()
    while i < len(phi.spatial):
        if isinstance(phi.spatial[i], Hls) and r.random() < prob:
            while f"w{k}" in taken or f"z{k}" in taken:
                k += 1
            phi = unfold_hls(phi, i, f"w{k}", f"z{k}")
            k += 1
            i += 3
        else:
            i += 1
    return phi


def _chain(r: random.Random, p: GenParams) -> tuple[list, list, list[str]]:
    """Atoms laid end to end over fresh points, plus a few pure facts."""
    nv = r.randint(2, max(2, p.max_vars))
    vs = [f"x{i}" for i in range(nv)]
    free = list(vs)
    cur = LinExpr.var(free.pop(0))
    atoms: list[SpatialAtom] = []
    pure: list = []
    for _ in range(r.randint(1, p.max_atoms)):
        kind = r.choice(("pto", "blk", "hls", "hls"))
        if kind == "pto":
            val = LinExpr.var(r.choice(vs)) if r.random() < 0.5 else LinExpr.num(r.randint(1, p.max_const))
            atoms.append(PointsTo(cur, val))
            cur = cur + 1
            continue
        if free and r.random() < 0.8:
            nxt = LinExpr.var(free.pop(0))
            if r.random() < 0.3:
                pure.append(Cmp(cur + r.randint(1, p.max_const), "=", nxt))
        else:
            nxt = cur + r.randint(1, p.max_const)
        atoms.append(Blk(cur, nxt) if kind == "blk" else Hls(cur, nxt, _rand_bound(r, vs, p)))
        cur = nxt
    if r.random() < 0.4:
        pure += _rand_pure(r, vs, GenParams(max_pure=1, max_const=p.max_const))
    return atoms, pure, vs


def _regroup(r: random.Random, atoms: list, vs, p: GenParams) -> list:
    """Cover the same region with consequent atoms cut at some atom boundaries."""
    cuts = [_head(atoms[0])] + [_tail(a) for a in atoms]
    keep = [0] + [i for i in range(1, len(cuts) - 1) if r.random() < 0.5] + [len(cuts) - 1]
    out = []
    for i, j in zip(keep, keep[1:]):
        seg = atoms[i:j]
        if len(seg) == 1 and r.random() < 0.4:
            out.append(seg[0])
            continue
        lo, hi = cuts[i], cuts[j]
        out.append(Blk(lo, hi) if r.random() < 0.35 else Hls(lo, hi, _rand_bound(r, vs, p)))
    return out


def random_entail_pair(seed: int | random.Random,
                       params: GenParams = GenParams(max_atoms=3, max_vars=4, max_const=6)
                       ) -> tuple[SymbolicHeap, SymbolicHeap]:
    """A random ``(phi, psi)`` with ``fv(psi)`` inside ``fv(phi)``.

    ``phi`` is a chain of atoms; ``psi`` regroups the same region, weakens or
    perturbs single atoms, or is unrelated, so both verdicts are common.
    """
    r = seed if isinstance(seed, random.Random) else random.Random(seed)
    p = params
    atoms, pure, vs = _chain(r, p)
    phi = SymbolicHeap(tuple(pure), tuple(atoms))
    if p.unfold_prob > 0:
        phi = unfold_random(r, phi, p.unfold_prob)
    vs = sorted(phi.all_vars())
    cons = list(atoms)
    mode = r.choice(("regroup", "regroup", "regroup", "weaken", "perturb", "fresh", "same"))
    if mode == "regroup":
        cons = _regroup(r, atoms, vs, p)
    elif mode == "weaken":
        i = r.randrange(len(cons))
        a = cons[i]
        if isinstance(a, Hls):
            cons[i] = Blk(a.start, a.end) if r.random() < 0.4 else Hls(a.start, a.end, _rand_bound(r, vs, p))
        elif isinstance(a, PointsTo):
            cons[i] = PointsTo(a.addr, _rand_term(r, vs, p))
        else:
            cons[i] = Hls(a.start, a.end, _rand_bound(r, vs, p))
    elif mode == "perturb":
        i = r.randrange(len(cons))
        cons[i] = _rand_atom(r, _head(cons[i]), _rand_term(r, vs, p), vs, p)
    elif mode == "fresh":
        cons = [_rand_atom(r, _rand_term(r, vs, p), _rand_term(r, vs, p), vs, p)
                for _ in range(r.randint(0, p.max_atoms))]
    cons = cons[:p.max_atoms]
    cpure = _rand_pure(r, vs, GenParams(max_pure=1, max_const=p.max_const)) if r.random() < 0.2 else []
    return phi, SymbolicHeap(tuple(cpure), tuple(cons))


def _head(a):
    return a.addr if isinstance(a, PointsTo) else a.start


def _tail(a):
    return a.addr + 1 if isinstance(a, PointsTo) else a.end
