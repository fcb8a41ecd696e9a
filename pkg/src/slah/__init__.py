"""Decision procedures for symbolic-heap separation logic with heap lists."""
from .formula import (
    INF, Blk, Emp, Hls, PointsTo, SymbolicHeap, address_terms, blk, head, hls,
    pto, symbolic_heap, tail, term,
)
from .sat import Sat, Unsat, build_witness, chunk_decompose, decide_sat

__version__ = "0.1.0"

__all__ = [
    "INF", "Blk", "Emp", "Hls", "PointsTo", "Sat", "SymbolicHeap", "Unsat",
    "address_terms", "blk", "build_witness", "chunk_decompose", "decide_sat",
    "head", "hls", "pto", "symbolic_heap", "tail", "term",
]
