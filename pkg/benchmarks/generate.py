"""Regenerate the shipped benchmark suites.

    python3 benchmarks/generate.py [OUTDIR]

MEM-SAT / MEM-ENT hold path conditions and verification conditions of
small heap-list allocator routines (create, split, join, search by size,
search by address).  RANDOM-SAT / RANDOM-ENT enlarge those by unfolding
heap lists, and add seeded random formulas.  Every file carries an
``; expect:`` line whose verdict was re-checked with the bounded oracle
when the oracle could say anything.
"""
from __future__ import annotations

import random
import re
import sys
from pathlib import Path

from slah.arith import Cmp, LinExpr
from slah.entail import decide_entail
from slah.formula import INF, Blk, Hls, PointsTo, SymbolicHeap
from slah.oracle import (Bounds, GenParams, brute_entail, brute_sat, holds,
                         random_entail_pair, random_formula, refute_at, unfold_hls)
from slah.parser import parse, query_text
from slah.sat import decide_sat

def T(s: str | int) -> LinExpr:
    if isinstance(s, int):
        return LinExpr.num(s)
    out = LinExpr()
    for part in s.replace(" ", "").split("+"):
        out = out + (LinExpr.num(int(part)) if part.isdigit() else LinExpr.var(part))
    return out


def P(*facts: str) -> tuple:
    """``P("0<b", "b+1<=e")`` -> pure tuple; chains like ``a<b<c`` are expanded."""
    out = []
    for f in facts:
        parts = re.split(r"(<=|!=|<|=)", f.replace(" ", ""))
        for i in range(0, len(parts) - 2, 2):
            out.append(Cmp(T(parts[i]), parts[i + 1], T(parts[i + 2])))
    return tuple(out)


def pto(a, v):
    return PointsTo(T(a), T(v))


def blk(a, b):
    return Blk(T(a), T(b))


def hls(a, b, v=None):
    return Hls(T(a), T(b), INF if v is None else T(v))


def H(pure, *atoms) -> SymbolicHeap:
    return SymbolicHeap(pure, tuple(atoms))


# -- allocator routines --------------------------------------------------------
#
# Variable conventions: b/e heap bounds, t cursor, sz* chunk sizes, rsz the
# requested size (rsz1 stands for rsz-1, with sz <= rsz1 meaning sz < rsz).

def mem_sat() -> list[tuple[str, SymbolicHeap, str]]:
    out = []
    add = lambda name, phi, note="": out.append((name, phi, note))
    # search by size
    add("search_pre", H(P("0<b<e"), hls("b", "e")))
    add("search_path_first_chunk", H(P("0<b<e", "b=t", "sz0<=rsz1", "t+sz0=t1", "2<=sz0"),
                             pto("t", "sz0"), blk("t+1", "t1"), hls("t1", "e")))
    add("search_path_found", H(P("0<b<e", "b=t", "rsz<=sz0", "t+sz0=t1", "2<=sz0"),
                               pto("t", "sz0"), blk("t+1", "t1"), hls("t1", "e")))
    add("search_inv", H(P("0<b<e", "b<=t"), hls("b", "t", "rsz1"), hls("t", "e")))
    add("search_post_step", H(P("0<b<e", "b<=t0<e", "2<=sz0<=rsz1", "t0+sz0=t"),
                              hls("b", "t0", "rsz1"), pto("t0", "sz0"), blk("t0+1", "t"), hls("t", "e")))
    add("search_exit_null", H(P("0<b<e", "e<=t", "b<=t"), hls("b", "t", "rsz1"), hls("t", "e")))
    add("search_exit_found", H(P("0<b<e", "b<=t<e", "rsz<=sz0", "t+sz0=t1", "2<=sz0"),
                               hls("b", "t", "rsz1"), pto("t", "sz0"), blk("t+1", "t1"), hls("t1", "e")))
    add("search_small_request", H(P("0<b<e", "b<=t0<e", "2<=sz0<=rsz1", "rsz1<2", "t0+sz0=t"),
                                  hls("b", "t0", "rsz1"), pto("t0", "sz0"), blk("t0+1", "t"), hls("t", "e")),
        "a chunk smaller than a request below 3 cannot exist")
    add("search_two_steps", H(P("0<b<e", "b=t0", "2<=sz0<=rsz1", "t0+sz0=t1", "2<=sz1<=rsz1", "t1+sz1=t2", "t2<e"),
                              pto("t0", "sz0"), blk("t0+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2"), hls("t2", "e")))
    add("search_overrun", H(P("0<b<e", "b<=t<e", "t+sz0=t1", "2<=sz0", "e<t1"),
                            hls("b", "t", "rsz1"), pto("t", "sz0"), blk("t+1", "t1"), hls("t1", "e")),
        "the chunk runs past the end of the heap but the list must end at e")
    add("search_bound2_odd", H(P("0<b", "b+5=t"), hls("b", "t", 2), hls("t", "e")),
        "chunks of size at most 2 cannot tile an odd span")
    add("search_bound2_even", H(P("0<b", "b+6=t"), hls("b", "t", 2), hls("t", "e")))
    add("search_bound3_odd", H(P("0<b", "b+5=t"), hls("b", "t", 3), hls("t", "e")))
    # create a heap list with one element
    add("create_pre", H(P("0<b", "b+2<=e"), blk("b", "e")))
    add("create_post", H(P("0<b", "b+sz=e", "2<=sz"), pto("b", "sz"), blk("b+1", "e")))
    add("create_post_list", H(P("0<b", "b+sz=e", "2<=sz"), hls("b", "e")))
    add("create_too_small", H(P("0<b", "b+1=e"), hls("b", "e", "sz"), pto("e", "sz")),
        "a one-cell list is impossible, so the list must be empty but b<e")
    add("create_bounded", H(P("0<b", "b+sz=e", "2<=sz", "sz<=v"), pto("b", "sz"), blk("b+1", "e"), hls("e", "f", "v")))
    add("create_overlap", H(P("0<b", "b+sz=e", "2<=sz", "b<=c<e"), pto("b", "sz"), blk("b+1", "e"), pto("c", "sz")),
        "the new cell lies inside the chunk")
    # split a chunk into two consecutive chunks
    add("split_pre", H(P("0<t", "t+sz=t2", "rsz+2<=sz", "2<=rsz"), pto("t", "sz"), blk("t+1", "t2")))
    add("split_post", H(P("0<t", "t+rsz=t1", "t1+sz1=t2", "2<=rsz", "2<=sz1"),
                        pto("t", "rsz"), blk("t+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2")))
    add("split_post_in_list", H(P("0<b<=t", "t+rsz=t1", "t1+sz1=t2", "2<=rsz", "2<=sz1", "t2<=e"),
                                hls("b", "t"), pto("t", "rsz"), blk("t+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2"), hls("t2", "e")))
    add("split_too_small", H(P("0<t", "t+rsz=t1", "t1+sz1=t2", "2<=rsz", "2<=sz1", "t+3=t2"),
                             pto("t", "rsz"), blk("t+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2")),
        "two chunks of size at least 2 need 4 cells")
    add("split_remainder_one", H(P("0<t", "t+sz=t2", "rsz+1=sz", "t+rsz=t1", "t1+sz1=t2", "2<=rsz", "2<=sz1"),
                                 pto("t", "rsz"), blk("t+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2")),
        "the remainder would be a single cell")
    add("create_two_chunks", H(P("0<b", "b+4=e", "b+2=t"), pto("b", 2), blk("b+1", "t"), hls("t", "e", 2)))
    add("split_bounded", H(P("0<t", "t+sz=t2", "rsz+2<=sz", "2<=rsz", "sz<=v"),
                           hls("b", "t", "v"), pto("t", "sz"), blk("t+1", "t2"), hls("t2", "e", "v")))
    # join two consecutive chunks
    add("join_pre", H(P("0<t", "t+sz1=t1", "t1+sz2=t2", "2<=sz1", "2<=sz2"),
                      pto("t", "sz1"), blk("t+1", "t1"), pto("t1", "sz2"), blk("t1+1", "t2")))
    add("join_post", H(P("0<t", "t+sz=t2", "4<=sz"), pto("t", "sz"), blk("t+1", "t2")))
    add("join_post_in_list", H(P("0<b<=t", "t+sz=t2", "4<=sz", "t2<=e"), hls("b", "t"), pto("t", "sz"), blk("t+1", "t2"), hls("t2", "e")))
    add("join_bound_violated", H(P("0<b<=t", "t+sz=t2", "4<=sz", "sz<=v", "v<4"),
                                 hls("b", "t", "v"), pto("t", "sz"), blk("t+1", "t2"), hls("t2", "e", "v")),
        "the joined chunk exceeds the list bound")
    add("join_bound_ok", H(P("0<b<=t", "t+sz=t2", "4<=sz", "sz<=v"),
                           hls("b", "t", "v"), pto("t", "sz"), blk("t+1", "t2"), hls("t2", "e", "v")))
    # search an address inside a heap list
    add("addr_pre", H(P("0<b<=a<e"), hls("b", "e")))
    add("addr_path_hit", H(P("0<b<=t", "t<=a", "t+sz=t1", "a<t1", "2<=sz", "t1<=e"),
                           hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), hls("t1", "e")))
    add("addr_path_next", H(P("0<b<=t", "t+sz=t1", "t1<=a", "2<=sz", "a<e"),
                            hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), hls("t1", "e")))
    add("addr_path_header", H(P("0<b<=t", "t=a", "t+sz=t1", "2<=sz", "t1<=e"),
                              hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), hls("t1", "e")))
    add("addr_missed", H(P("0<b<=t", "t+sz=t1", "t1<=a", "2<=sz", "e<=a", "t1<=e"),
                         hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), hls("t1", "e"), pto("a", "sz")))
    add("addr_in_header_overlap", H(P("0<b<=t", "t+sz=t1", "2<=sz", "t<=a<t1"),
                                    hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), pto("a", "0")),
        "a points to a cell already owned by the chunk")
    add("addr_bound2", H(P("0<b", "b+4=e", "b<a<e"), hls("b", "e", 2), pto("a", "b")),
        "the cell overlaps the list")
    return out


def mem_ent() -> list[tuple[str, SymbolicHeap, SymbolicHeap, str]]:
    out = []
    add = lambda name, phi, psi, note="": out.append((name, phi, psi, note))
    inv = H(P("0<b<e", "b<=t"), hls("b", "t", "rsz1"), hls("t", "e"))
    post = H(P("0<b<e", "b<=t0<e", "2<=sz0<=rsz1", "t0+sz0=t"),
             hls("b", "t0", "rsz1"), pto("t0", "sz0"), blk("t0+1", "t"), hls("t", "e"))
    add("search_vc_init", H(P("0<b<e", "b=t", "0<=rsz1"), hls("b", "e")), H(P("0<b<e", "b<=t"), hls("b", "t", "rsz1"), hls("t", "e")))
    add("search_vc_inductive", post, H(P("0<b", "b<=t"), hls("b", "t", "rsz1"), hls("t", "e")))
    add("search_vc_inductive_full", post, inv)
    add("search_vc_exit", H(P("0<b<e", "b<=t", "e<=t"), hls("b", "t", "rsz1"), hls("t", "e")), H(P(), hls("b", "e", "rsz1")))
    add("search_vc_found", H(P("0<b<e", "b<=t<e", "rsz1<sz0", "t+sz0=t1", "2<=sz0"),
                             hls("b", "t", "rsz1"), pto("t", "sz0"), blk("t+1", "t1"), hls("t1", "e")),
        H(P(), hls("b", "e")))
    add("search_vc_found_bounded", H(P("0<b<e", "b<=t<e", "rsz1<sz0", "t+sz0=t1", "2<=sz0"),
                                     hls("b", "t", "rsz1"), pto("t", "sz0"), blk("t+1", "t1"), hls("t1", "e")),
        H(P(), hls("b", "e", "rsz1")), "the found chunk is larger than the bound")
    add("search_vc_found_prefix", H(P("0<b<e", "b<=t<e", "rsz1<sz0", "t+sz0=t1", "2<=sz0"),
                                    hls("b", "t", "rsz1"), pto("t", "sz0"), blk("t+1", "t1"), hls("t1", "e")),
        H(P(), hls("b", "t", "rsz1"), hls("t", "e")))
    add("search_vc_wrong_split", post, H(P(), hls("b", "t", "rsz1"), hls("t", "e", "rsz1")),
        "chunks after t are not bounded")
    add("search_vc_step_blk", post, H(P(), hls("b", "t0", "rsz1"), blk("t0", "t"), hls("t", "e")))
    add("search_vc_step_nobound", post, H(P(), hls("b", "t"), hls("t", "e")))
    add("search_vc_post_prefix_bound", H(P("0<b<e", "b<=t0<e", "2<=sz0<=rsz1", "t0+sz0=t"),
                                         hls("b", "t0", "rsz1"), pto("t0", "sz0"), blk("t0+1", "t"), hls("t", "e")),
        H(P(), hls("b", "t", "sz0"), hls("t", "e")), "earlier chunks may exceed sz0")
    add("search_vc_eq5", H(P(), blk("x", "y"), blk("y", "z")), H(P(), blk("x", "z")))
    add("search_vc_eq6", H(P(), hls("x", "y", "v"), hls("y", "z", "v")), H(P(), hls("x", "z", "v")))
    add("chunk_bound_4", H(P("x<y", "x+4=y"), hls("x", "y", 3)), H(P(), hls("x", "y", 2)))
    add("chunk_bound_free", H(P("x<y"), hls("x", "y", 3)), H(P(), hls("x", "y", 2)), "a span of 3 needs a chunk of size 3")
    add("chunk_bound_6", H(P("x+6=y"), hls("x", "y", 5)), H(P(), hls("x", "y", 4)), "a chunk of 5 would leave a single cell, so chunks are at most 4")
    add("chunk_bound_7", H(P("x+7=y"), hls("x", "y", 6)), H(P(), hls("x", "y", 5)), "span 7 admits 2+5 but not 6+1")
    add("chunk_bound_7b", H(P("x+7=y"), hls("x", "y", 7)), H(P(), hls("x", "y", 5)), "a single chunk of 7")
    # create
    add("create_vc", H(P("0<b", "b+sz=e", "2<=sz"), pto("b", "sz"), blk("b+1", "e")), H(P(), hls("b", "e")))
    add("create_vc_bounded", H(P("0<b", "b+sz=e", "2<=sz", "sz<=v"), pto("b", "sz"), blk("b+1", "e")), H(P(), hls("b", "e", "v")))
    add("create_vc_bound2", H(P("0<b", "b+sz=e", "2<=sz"), pto("b", "sz"), blk("b+1", "e")), H(P(), hls("b", "e", 2)),
        "the chunk may be bigger than 2")
    add("create_vc_blk", H(P("0<b", "b+sz=e", "2<=sz"), pto("b", "sz"), blk("b+1", "e")), H(P(), blk("b", "e")))
    add("create_vc_from_blk", H(P("0<b", "b+2<=e"), blk("b", "e")), H(P(), hls("b", "e")), "block contents are arbitrary")
    add("create_vc_append", H(P("0<b<=t", "t+sz=e", "2<=sz"), hls("b", "t"), pto("t", "sz"), blk("t+1", "e")), H(P(), hls("b", "e")))
    # split
    split_post = H(P("0<t", "t+rsz=t1", "t1+sz1=t2", "2<=rsz", "2<=sz1"),
                   pto("t", "rsz"), blk("t+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2"))
    add("split_vc_list", split_post, H(P(), hls("t", "t2")))
    add("split_vc_blk", split_post, H(P(), blk("t", "t2")))
    add("split_vc_first_chunk", split_post, H(P(), hls("t", "t1"), blk("t1", "t2")))
    add("split_vc_bound", split_post, H(P(), hls("t", "t2", "rsz")), "the second chunk may exceed rsz")
    add("split_vc_bound_ok", H(P("0<t", "t+rsz=t1", "t1+sz1=t2", "2<=rsz", "2<=sz1", "sz1<=rsz"),
                               pto("t", "rsz"), blk("t+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2")),
        H(P(), hls("t", "t2", "rsz")))
    add("split_vc_in_list", H(P("0<b<=t", "t+rsz=t1", "t1+sz1=t2", "2<=rsz", "2<=sz1", "t2<=e"),
                              hls("b", "t"), pto("t", "rsz"), blk("t+1", "t1"), pto("t1", "sz1"), blk("t1+1", "t2"), hls("t2", "e")),
        H(P(), hls("b", "e")))
    add("split_vc_pre_size", H(P("0<t", "t+sz=t2", "rsz+2<=sz", "2<=rsz"), pto("t", "sz"), blk("t+1", "t2")),
        H(P(), pto("t", "sz"), blk("t+1", "t2")))
    add("split_vc_wrong_header", split_post, H(P(), pto("t", "sz1"), blk("t+1", "t2")), "the header stores rsz")
    # join
    join_pre = H(P("0<t", "t+sz1=t1", "t1+sz2=t2", "2<=sz1", "2<=sz2"),
                 pto("t", "sz1"), blk("t+1", "t1"), pto("t1", "sz2"), blk("t1+1", "t2"))
    add("join_vc_blk", join_pre, H(P(), pto("t", "sz1"), blk("t+1", "t2")))
    add("join_vc_list", join_pre, H(P(), hls("t", "t2")))
    add("join_vc_bound", join_pre, H(P(), hls("t", "t2", "sz1")), "the second chunk may be larger")
    add("join_vc_joined", H(P("0<t", "t+sz=t2", "4<=sz"), pto("t", "sz"), blk("t+1", "t2")), H(P(), hls("t", "t2")))
    add("join_vc_joined_even", H(P("0<t", "t+sz=t2", "4<=sz"), pto("t", "sz"), blk("t+1", "t2")), H(P(), hls("t", "t2", 2)),
        "a single chunk larger than 2")
    add("join_vc_in_list", H(P("0<b<=t", "t+sz=t2", "4<=sz", "t2<=e"), hls("b", "t"), pto("t", "sz"), blk("t+1", "t2"), hls("t2", "e")),
        H(P(), hls("b", "e")))
    # search by address
    add("addr_vc_hit", H(P("0<b<=t", "t<=a", "t+sz=t1", "a<t1", "2<=sz", "t1<=e"),
                         hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), hls("t1", "e")),
        H(P(), hls("b", "e")))
    add("addr_vc_inv", H(P("0<b<=t", "t+sz=t1", "t1<=a", "2<=sz", "a<e"),
                         hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), hls("t1", "e")),
        H(P(), hls("b", "t1"), hls("t1", "e")))
    add("addr_vc_split_at", H(P("0<b<=t", "t+sz=t1", "2<=sz", "t1<=e"),
                              hls("b", "t"), pto("t", "sz"), blk("t+1", "t1"), hls("t1", "e")),
        H(P(), hls("b", "t"), blk("t", "t1"), hls("t1", "e")))
    add("addr_vc_cell", H(P("0<b<=t", "t<a", "t+sz=t1", "a<t1", "2<=sz"), pto("t", "sz"), blk("t+1", "t1")),
        H(P(), pto("t", "sz"), blk("t+1", "a"), blk("a", "t1")), "a may be the first body cell, leaving an empty block")
    add("addr_vc_not_header", H(P("0<b<=a<e"), hls("b", "e")), H(P(), hls("b", "a"), hls("a", "e")),
        "a need not be a chunk boundary")
    return out


# -- enlargement by unfolding ----------------------------------------------------

def unfold_some(r: random.Random, phi: SymbolicHeap, k: int, max_atoms: int) -> SymbolicHeap:
    """Unfold up to ``k`` heap lists, keeping at most ``max_atoms`` atoms."""
    n = 0
    for _ in range(k):
        idx = [i for i, a in enumerate(phi.spatial) if isinstance(a, Hls)]
        if not idx or len(phi.spatial) + 2 > max_atoms:
            break
        while f"w{n}" in phi.all_vars() or f"z{n}" in phi.all_vars():
            n += 1
        phi = unfold_hls(phi, r.choice(idx), f"w{n}", f"z{n}")
        n += 1
    return phi


# -- verdicts and confirmation ---------------------------------------------------

def sat_verdict(phi: SymbolicHeap) -> tuple[str, str]:
    r = decide_sat(phi)
    if r:
        assert holds(r.model.assignment, r.witness, phi), "witness rejected"
        return "sat", "witness checked"
    if len(phi.all_vars()) <= 6:
        assert brute_sat(phi, Bounds(10, 10)) is None, "oracle found a model"
        return "unsat", "no model with addresses <= 10"
    return "unsat", ""


def ent_verdict(phi: SymbolicHeap, psi: SymbolicHeap) -> tuple[str, str]:
    r = decide_entail(phi, psi)
    r2 = decide_entail(phi, psi, heuristics=False)
    assert bool(r) == bool(r2), "heuristics changed the verdict"
    if not r:
        if r.model is not None and refute_at(phi, psi, r.model) is not None:
            return "invalid", "counterexample checked"
        assert brute_entail(phi, psi, Bounds(8, 8)) is not None, "no counterexample found"
        return "invalid", "counterexample within addresses <= 8"
    if len(phi.all_vars() | psi.fv()) <= 5:
        assert brute_entail(phi, psi, Bounds(8, 8)) is None, "oracle found a counterexample"
        return "valid", "no counterexample with addresses <= 8"
    return "valid", ""


def _write(path: Path, text: str):
    path.write_text(text, encoding="utf-8")
    parse(text)  # must round-trip through the reader


def main(out: Path):
    sizes = {}
    for d in ("MEM-SAT", "MEM-ENT", "RANDOM-SAT", "RANDOM-ENT"):
        (out / d).mkdir(parents=True, exist_ok=True)
        for f in (out / d).glob("*.slah"):
            f.unlink()

    sat_base = mem_sat()
    for name, phi, note in sat_base:
        v, how = sat_verdict(phi)
        _write(out / "MEM-SAT" / f"{name}.slah", query_text("sat", phi, expect=v, comment="\n".join(filter(None, [note, how]))))
    ent_base = mem_ent()
    for name, phi, psi, note in ent_base:
        v, how = ent_verdict(phi, psi)
        _write(out / "MEM-ENT" / f"{name}.slah", query_text("entail", phi, psi, v, "\n".join(filter(None, [note, how]))))

    r = random.Random(2021)
    k = 0
    for name, phi, _ in sat_base:
        if not any(isinstance(a, Hls) for a in phi.spatial):
            continue
        for depth in (1, 2):
            if k >= 35:
                break
            big = unfold_some(r, phi, depth, 8)
            if big == phi:
                continue
            v, how = sat_verdict(big)
            _write(out / "RANDOM-SAT" / f"unfold_{name}_{depth}.slah",
                   query_text("sat", big, expect=v, comment=f"{name} with {depth} heap list(s) unfolded\n{how}"))
            k += 1
    seed = 0
    while k < 50:
        phi = random_formula(seed, GenParams(max_atoms=6, max_vars=6, max_const=10, unfold_prob=0.3))
        seed += 1
        if len(phi.spatial) < 3:
            continue
        v, how = sat_verdict(phi)
        _write(out / "RANDOM-SAT" / f"random_{seed - 1:03d}.slah",
               query_text("sat", phi, expect=v, comment=f"random_formula seed {seed - 1}\n{how}"))
        k += 1

    k = 0
    for name, phi, psi, _ in ent_base:
        if not any(isinstance(a, Hls) for a in phi.spatial) or k >= 35:
            continue
        big = unfold_some(r, phi, 1, 6)
        if big == phi:
            continue
        v, how = ent_verdict(big, psi)
        _write(out / "RANDOM-ENT" / f"unfold_{name}.slah",
               query_text("entail", big, psi, v, f"{name} with one heap list unfolded\n{how}"))
        k += 1
    seed = 0
    while k < 59:
        phi, psi = random_entail_pair(seed, GenParams(max_atoms=4, max_vars=5, max_const=6, unfold_prob=0.3))
        seed += 1
        if len(phi.spatial) < 3 or len(phi.spatial) > 6:
            continue
        v, how = ent_verdict(phi, psi)
        _write(out / "RANDOM-ENT" / f"random_{seed - 1:03d}.slah",
               query_text("entail", phi, psi, v, f"random_entail_pair seed {seed - 1}\n{how}"))
        k += 1

    for d in ("MEM-SAT", "MEM-ENT", "RANDOM-SAT", "RANDOM-ENT"):
        sizes[d] = len(list((out / d).glob("*.slah")))
    print(sizes)


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent)
