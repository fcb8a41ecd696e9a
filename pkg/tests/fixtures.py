"""Shared formulas for the tests."""
from slah.arith import Cmp, LinExpr
from slah.formula import SymbolicHeap, blk, hls, pto

V = LinExpr.var
N = LinExpr.num


def H(pure=(), *atoms):
    return SymbolicHeap(tuple(pure), tuple(atoms))


def c(a, op, b):
    return Cmp(LinExpr.of(a), op, LinExpr.of(b))


# 0 < b < e : hls(b, e)
PRE = H([c(0, "<", "b"), c("b", "<", "e")], hls("b", "e"))

# the search loop body; rsz1 plays rsz - 1 (sz0 <= rsz1 reads sz0 < rsz)
STEP_POST = H([c(0, "<", "b"), c("b", "<", "e"), c("b", "<=", "t0"), c("t0", "<", "e"),
               c(2, "<=", "sz0"), c("sz0", "<=", "rsz1"), c(V("t0") + V("sz0"), "=", "t")],
              hls("b", "t0", "rsz1"), pto("t0", "sz0"), blk(V("t0") + 1, "t"), hls("t", "e"))
INV = H([c(0, "<", "b"), c("b", "<", "e"), c("b", "<=", "t")], hls("b", "t", "rsz1"), hls("t", "e"))

FIRST_PATH = H([c(0, "<", "b"), c("b", "<", "e"), c("b", "=", "t"), c("sz0", "<=", "rsz1"),
              c(V("t") + V("sz0"), "=", "t1"), c(2, "<=", "sz0")],
             pto("t", "sz0"), blk(V("t") + 1, "t1"), hls("t1", "e"))

# (name, phi, psi, expected validity)
ENTAIL_FIXTURES = [
    ("blk_composition", H([], blk("x", "y"), blk("y", "z")), H([], blk("x", "z")), True),
    ("hls_composition", H([], hls("x", "y", "v"), hls("y", "z", "v")), H([], hls("x", "z", "v")), True),
    ("span4_bound3_to_2", H([c("x", "<", "y"), c("y", "=", V("x") + 4)], hls("x", "y", 3)),
     H([], hls("x", "y", 2)), True),
    ("free_span_bound3_to_2", H([c("x", "<", "y")], hls("x", "y", 3)), H([], hls("x", "y", 2)), False),
    ("search_inductive_vc", STEP_POST, H([c(0, "<", "b"), c("b", "<=", "t")], hls("b", "t", "rsz1"), hls("t", "e")), True),
    ("search_inductive_vc_full", STEP_POST, INV, True),
    ("blk_resplit", H([c("x", "<", "w"), c("w", "<", "y"), c("y", "<", "z")], blk("x", "y"), blk("y", "z")),
     H([], blk("x", "w"), blk("w", "z")), True),
    ("chunk_folds", H([c(V("x") + V("u"), "=", "y"), c(2, "<=", "u"), c("u", "<=", "v")],
                      pto("x", "u"), blk(V("x") + 1, "y")), H([], hls("x", "y", "v")), True),
    ("blk_is_not_pto", H([c(0, "<=", "v")], blk("x", "y")), H([], pto("x", "v"), blk(V("x") + 1, "y")), False),
]
