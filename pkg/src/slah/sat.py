"""Satisfiability of symbolic heaps, with witness heap construction."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import arith
from .abstraction import abs_formula
from .arith import StackModel
from .formula import INF, Blk, Bound, Hls, PointsTo, SymbolicHeap


class WitnessError(RuntimeError):
    """The stack does not admit the heap it was asked to build (an abstraction bug)."""


Heap = dict  # address -> value


@dataclass(frozen=True)
class Unsat:
    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Sat:
    model: StackModel
    witness: Heap

    def __bool__(self) -> bool:
        return True


SatResult = Union[Sat, Unsat]


def chunk_decompose(d: int, cap: Union[int, None, type(INF)]) -> list[int]:
    """Chunk sizes in ``[2, cap]`` summing to ``d``: all 2s, plus one leading 3 if ``d`` is odd."""
    unbounded = cap is None or cap is INF
    if d < 2 or (not unbounded and cap < 2):
        raise WitnessError(f"cannot cut {d} into chunks bounded by {cap}")
    if d % 2 == 0:
        return [2] * (d // 2)
    if not unbounded and cap < 3:
        raise WitnessError(f"odd length {d} with chunk bound 2")
    return [3] + [2] * ((d - 3) // 2)


def build_witness(s: dict, phi: SymbolicHeap) -> Heap:
    """A heap ``h`` with ``s, h |= qf(phi)``, assuming ``s`` satisfies the abstraction."""
    h: Heap = {}

    def put(addr: int, val: int):
        if addr in h:
            raise WitnessError(f"atoms overlap at address {addr}")
        if addr < 0 or val < 0:
            raise WitnessError("negative address or value")
        h[addr] = val

    for a in phi.spatial:
        if isinstance(a, PointsTo):
            put(a.addr.evaluate(s), a.value.evaluate(s))
        elif isinstance(a, Blk):
            lo, hi = a.start.evaluate(s), a.end.evaluate(s)
            if lo >= hi:
                raise WitnessError(f"empty block {a}")
            for n in range(lo, hi):
                put(n, 1)
        elif isinstance(a, Hls):
            lo, hi = a.start.evaluate(s), a.end.evaluate(s)
            if lo == hi:
                continue
            cap = _bound(a.bound, s)
            pos = lo
            for size in chunk_decompose(hi - lo, cap):
                put(pos, size)
                for n in range(pos + 1, pos + size):
                    put(n, 1)
                pos += size
    return h


def _bound(b: Bound, s: dict) -> Optional[int]:
    return None if b is INF else b.evaluate(s)


class _Total(dict):
    def __missing__(self, key):
        return 0


def decide_sat(phi: SymbolicHeap) -> SatResult:
    """Sat with a stack model and witness heap, or Unsat.

    Existential variables are solved for like free ones; their values are
    included in the returned model.
    """
    model = arith.check_sat(abs_formula(phi))
    if model is None:
        return Unsat()
    s = _Total(model.full())
    for v in phi.all_vars():
        s[v] = s[v]
    full = dict(s)
    assignment = {v: full[v] for v in sorted(phi.fv())}
    witnesses = {v: full[v] for v in sorted(phi.existentials)}
    return Sat(StackModel({**assignment, **witnesses}, {}), build_witness(full, phi))
