import pytest
from hypothesis import given, strategies as st

from slah.formula import SymbolicHeap, blk, hls, pto
from slah.oracle import holds
from slah.sat import Sat, Unsat, WitnessError, build_witness, chunk_decompose, decide_sat

from fixtures import H, N, FIRST_PATH, STEP_POST, PRE, V, c


def test_pre_is_sat_with_witness():
    r = decide_sat(PRE)
    assert isinstance(r, Sat)
    s = r.model.assignment
    assert 0 < s["b"] < s["e"]
    assert holds(s, r.witness, PRE)


def test_examples_unsat():
    assert isinstance(decide_sat(H([c("x", "<", "y"), c("y", "<", "x")])), Unsat)
    assert not decide_sat(H([c(V("x") + 5, "=", "y")], hls("x", "y", 2)))


def test_paths_sat():
    for phi in (FIRST_PATH, STEP_POST):
        r = decide_sat(phi)
        assert r and holds(r.model.assignment, r.witness, phi)


def test_build_witness_examples():
    assert build_witness({"x": 5, "v": 9}, H([], pto("x", "v"))) == {5: 9}
    assert build_witness({"x": 2, "y": 5}, H([], blk("x", "y"))) == {2: 1, 3: 1, 4: 1}
    h = build_witness({"x": 0, "y": 7, "z": 3}, H([], hls("x", "y", "z")))
    assert h == {0: 3, 1: 1, 2: 1, 3: 2, 4: 1, 5: 2, 6: 1}
    assert holds({"x": 0, "y": 7, "z": 3}, h, H([], hls("x", "y", "z")))


def test_build_witness_rejects_overlap():
    with pytest.raises(WitnessError):
        build_witness({"x": 0, "y": 3}, H([], blk("x", "y"), pto(V("x") + 1, "y")))


def test_chunk_decompose_examples():
    assert chunk_decompose(6, 2) == [2, 2, 2]
    assert chunk_decompose(7, 3) == [3, 2, 2]
    assert chunk_decompose(2, None) == [2]
    with pytest.raises(WitnessError):
        chunk_decompose(5, 2)
    with pytest.raises(WitnessError):
        chunk_decompose(1, None)


@given(st.integers(2, 40), st.one_of(st.integers(2, 10), st.none()))
def test_chunk_decompose_property(d, cap):
    if cap == 2 and d % 2:
        with pytest.raises(WitnessError):
            chunk_decompose(d, cap)
        return
    parts = chunk_decompose(d, cap)
    assert sum(parts) == d
    assert all(2 <= p <= (cap or d) for p in parts)


def test_existentials_folded_into_model():
    phi = SymbolicHeap((c(V("x") + V("w"), "=", "y"), c(2, "<=", "w")),
                       (pto("x", "w"), blk(V("x") + 1, "y")), frozenset({"w"}))
    r = decide_sat(phi)
    assert "w" in r.model.assignment
    assert holds(r.model.assignment, r.witness, phi.qf())
    assert holds({k: v for k, v in r.model.assignment.items() if k != "w"}, r.witness, phi)
