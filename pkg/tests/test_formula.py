import pytest
from hypothesis import given, strategies as st

from slah.arith import Cmp, LinExpr
from slah.formula import (
    INF, Blk, Emp, FormulaError, Hls, PointsTo, SymbolicHeap, address_terms, blk, head,
    hls, pto, substitute, tail, term,
)

from fixtures import H, V, c


def test_head_tail():
    assert (head(pto("x", "v")), tail(pto("x", "v"))) == (V("x"), V("x") + 1)
    assert (head(blk(V("x") + 1, "z")), tail(blk(V("x") + 1, "z"))) == (V("x") + 1, V("z"))
    assert (head(hls("b", "e")), tail(hls("b", "e"))) == (V("b"), V("e"))
    with pytest.raises(FormulaError):
        head(Emp())


def test_terms_reject_subtraction():
    with pytest.raises(FormulaError):
        term(V("x") - V("y"))
    with pytest.raises(FormulaError):
        term(-1)
    assert term(V("x") + V("x")) == LinExpr.var("x", 2)


def test_address_terms_examples():
    assert address_terms(H([], blk("x1", "x2"), hls("x2", "x3", "y"))) == [V("x1"), V("x2"), V("x3")]
    assert address_terms(H([])) == []
    assert address_terms(H([], pto("x", "v"), pto("x", "w"))) == [V("x"), V("x") + 1]


def test_substitute_examples():
    phi = substitute(H([], pto("x", "v")), {"x": V("y") + 1})
    assert phi.spatial == (pto(V("y") + 1, "v"),)
    psi = substitute(H([c("x", "=", "y")], blk("x", "y")), {"y": V("x")})
    assert psi.spatial == (blk("x", "x"),) and psi.pure == (c("x", "=", "x"),)


def test_substitute_capture_rejected():
    phi = SymbolicHeap((), (pto("x", "z"),), frozenset({"z"}))
    with pytest.raises(FormulaError):
        substitute(phi, {"x": V("z")})
    with pytest.raises(FormulaError):
        substitute(phi, {"z": V("x")})


def test_emp_dropped_and_fv_qf():
    phi = SymbolicHeap((), (Emp(), pto("x", "z")), frozenset({"z"}))
    assert phi.spatial == (pto("x", "z"),)
    assert phi.fv() == {"x"} and phi.all_vars() == {"x", "z"}
    assert phi.qf().existentials == frozenset()


def test_inf_only_as_bound():
    assert hls("x", "y").bound is INF
    with pytest.raises(FormulaError):
        blk("x", INF)


_terms = st.builds(lambda vs, k: sum((V(v) for v in vs), LinExpr.num(k)),
                   st.lists(st.sampled_from("xyz"), max_size=3), st.integers(0, 5))
_atoms = st.one_of(st.builds(pto, _terms, _terms), st.builds(blk, _terms, _terms),
                   st.builds(hls, _terms, _terms, st.one_of(st.just(INF), _terms)))


@given(st.lists(_atoms, max_size=5))
def test_address_terms_stable_and_complete(atoms):
    got = address_terms(atoms)
    assert len(got) == len(set(got))
    assert address_terms(atoms) == got
    want = {t for a in atoms for t in (head(a), tail(a))}
    assert set(got) == want
    # first-occurrence order: prefixes of the atom list give prefixes of the result
    for k in range(len(atoms) + 1):
        pre = address_terms(atoms[:k])
        assert got[:len(pre)] == pre


@given(st.lists(st.tuples(st.sampled_from("xyz"), st.integers(1, 3)), max_size=5), st.integers(0, 9))
def test_term_canonicalization(parts, k):
    t = LinExpr.num(k)
    for v, n in parts:
        for _ in range(n):
            t = t + V(v)
    u = term(t)
    assert u == t
    s = {"x": 2, "y": 3, "z": 5}
    assert u.evaluate(s) == k + sum(n * s[v] for v, n in parts)
