from pathlib import Path

import pytest

from slah.formula import SymbolicHeap, blk, hls, pto
from slah.oracle import (
    Bounds, GenParams, brute_entail, brute_sat, decomposable_table, decompositions, holds,
    random_entail_pair, random_formula, refute_at, unfold_hls,
)
from slah.parser import parse, query_text

from fixtures import H, N, V, c

GOLDEN = Path(__file__).parent / "golden"

EX_W = SymbolicHeap((c(V("x") + V("w"), "=", "y"), c(2, "<=", "w")),
                    (pto("x", "w"), blk(V("x") + 1, "y")), frozenset({"w"}))

# (stack, heap, formula, expected) -- hand-computed
HOLDS_TABLE = [
    ({}, {}, H([]), True),
    ({}, {0: 1}, H([]), False),
    ({"x": 1, "y": 1}, {}, H([c("x", "=", "y")]), True),
    ({"x": 1, "y": 2}, {}, H([c("x", "=", "y")]), False),
    ({"x": 1, "y": 2}, {}, H([c("x", "<", "y")]), True),
    ({"x": 1, "y": 1}, {}, H([c("x", "!=", "y")]), False),
    ({"x": 2, "y": 2}, {}, H([c("x", "<=", "y")]), True),
    ({"x": 5, "v": 9}, {5: 9}, H([], pto("x", "v")), True),
    ({"x": 5, "v": 9}, {5: 8}, H([], pto("x", "v")), False),
    ({"x": 5, "v": 9}, {5: 9, 6: 1}, H([], pto("x", "v")), False),
    ({"x": 5, "v": 9}, {6: 9}, H([], pto(V("x") + 1, "v")), True),
    ({"x": 2, "y": 5}, {2: 1, 3: 7, 4: 0}, H([], blk("x", "y")), True),
    ({"x": 2, "y": 2}, {}, H([], blk("x", "y")), False),
    ({"x": 2, "y": 5}, {2: 1, 3: 1}, H([], blk("x", "y")), False),
    ({"x": 0, "y": 4}, {0: 2, 1: 1, 2: 2, 3: 1}, H([], hls("x", "y", 2)), True),
    ({"x": 0, "y": 4}, {0: 1, 1: 1, 2: 1, 3: 1}, H([], hls("x", "y", 2)), False),
    ({"x": 3, "y": 3}, {}, H([], hls("x", "y")), True),
    ({"x": 3, "y": 3}, {3: 1}, H([], hls("x", "y")), False),
    ({"x": 0, "y": 1}, {0: 1}, H([], hls("x", "y")), False),
    ({"x": 0, "y": 5}, {0: 5, 1: 0, 2: 0, 3: 0, 4: 0}, H([], hls("x", "y")), True),
    ({"x": 0, "y": 5}, {0: 2, 1: 0, 2: 3, 3: 9, 4: 9}, H([], hls("x", "y")), True),
    ({"x": 0, "y": 5}, {0: 2, 1: 0, 2: 2, 3: 9, 4: 9}, H([], hls("x", "y")), False),
    ({"x": 0, "y": 0, "v": 1}, {}, H([], hls("x", "y", "v")), True),
    ({"x": 0, "y": 2, "v": 1}, {0: 2, 1: 1}, H([], hls("x", "y", "v")), False),
    ({"x": 0, "y": 6}, {0: 3, 1: 0, 2: 0, 3: 3, 4: 0, 5: 0}, H([], hls("x", "y", 3)), True),
    ({"x": 0, "y": 6}, {0: 4, 1: 0, 2: 0, 3: 0, 4: 2, 5: 0}, H([], hls("x", "y", 3)), False),
    ({"x": 0, "y": 3, "v": 2}, {0: 3, 1: 1, 2: 1}, H([], hls("x", "y", "v")), False),
    ({"x": 0, "v": 3, "y": 3}, {0: 3, 1: 0, 2: 0}, H([], pto("x", "v"), blk(V("x") + 1, "y")), True),
    ({"x": 0, "y": 0, "v": 1, "w": 1}, {0: 1}, H([], pto("x", "v"), pto("y", "w")), False),
    ({"x": 0, "y": 1, "v": 4, "w": 5}, {0: 4, 1: 5}, H([], pto("x", "v"), pto("y", "w")), True),
    ({"x": 0, "y": 2, "z": 3}, {0: 1, 1: 1, 2: 1}, H([], blk("x", "y"), blk("y", "z")), True),
    ({"x": 0, "y": 0, "z": 3}, {0: 1, 1: 1, 2: 1}, H([], blk("x", "y"), blk("y", "z")), False),
    ({"x": 0, "y": 2, "z": 2}, {0: 2, 1: 1}, H([], hls("x", "y"), hls("y", "z")), True),
    ({"x": 3, "y": 1, "v": 0}, {3: 0}, H([c("x", "<", "y")], pto("x", "v")), False),
    ({"x": 0, "y": 1, "z": 3}, {0: 1, 1: 2, 2: 0}, H([], pto("x", "y"), hls("y", "z")), True),
    ({"x": 0, "y": 3}, {0: 3, 1: 1, 2: 1}, EX_W, True),
    ({"x": 0, "y": 3}, {0: 2, 1: 1, 2: 1}, EX_W, False),
]


@pytest.mark.parametrize("s,h,phi,want", HOLDS_TABLE)
def test_holds_table(s, h, phi, want):
    assert holds(s, h, phi) is want


def test_holds_table_size():
    assert len(HOLDS_TABLE) >= 30


def test_decomposable_table_matches_enumeration():
    t = decomposable_table(14)
    for cap in range(0, 9):
        for d in range(0, 15):
            assert bool(t[cap, d]) == any(len(p) > 0 for p in decompositions(d, cap)), (cap, d)


def test_brute_sat_examples():
    assert brute_sat(H([], blk("x", "y")), Bounds(4, 4)) == ({"x": 0, "y": 1}, {0: 1})
    assert brute_sat(H([c("x", "<", "y"), c("y", "<", "x")]), Bounds(4, 4)) is None
    assert brute_sat(H([c(V("x") + 5, "=", "y")], hls("x", "y", 2)), Bounds(16, 16)) is None


def test_brute_entail_examples():
    phi, psi = H([c(V("x") + 2, "<=", "y")], blk("x", "y")), H([], pto("x", 1), blk(V("x") + 1, "y"))
    cex = brute_entail(phi, psi)
    assert cex is not None and holds(cex.stack, cex.heap, phi) and not holds(cex.stack, cex.heap, psi)
    assert cex.heap[cex.stack["x"]] == 2
    assert brute_entail(H([], blk("x", "y"), blk("y", "z")), H([], blk("x", "z"))) is None
    cex = brute_entail(H([], hls("x", "y", 3)), H([], hls("x", "y", 2)))
    assert (cex.stack, cex.heap) == ({"x": 0, "y": 3}, {0: 3, 1: 1, 2: 1})


def test_refute_at_outside_bounds():
    phi, psi = H([], hls("x", "y", 3)), H([], hls("x", "y", 2))
    cex = refute_at(phi, psi, {"x": 40, "y": 43})
    assert cex is not None and cex.heap[40] == 3
    assert refute_at(phi, psi, {"x": 40, "y": 44}) is None


def test_random_formula_golden():
    got = query_text("sat", random_formula(1, GenParams(max_atoms=2)))
    assert got == (GOLDEN / "random_formula_seed1.slah").read_text()


def test_random_formula_deterministic():
    for seed in range(20):
        assert random_formula(seed) == random_formula(seed)
        assert random_entail_pair(seed) == random_entail_pair(seed)


def test_random_formula_within_params():
    p = GenParams(max_atoms=4, max_vars=5, max_const=8)
    for seed in range(200):
        phi = random_formula(seed, p)
        assert len(phi.spatial) <= 4
        assert len(phi.all_vars()) <= 5
        text = query_text("sat", phi)
        assert parse(text).phi == phi


def test_random_pairs_well_formed():
    for seed in range(200):
        phi, psi = random_entail_pair(seed)
        assert psi.fv() <= phi.all_vars()
        assert len(psi.spatial) <= 3


def test_unfold_shape():
    phi = unfold_hls(H([], hls("x", "y", "v")), 0, "w", "z")
    assert phi.spatial == (pto("x", "w"), blk(V("x") + 1, "z"), hls("z", "y", "v"))
    assert set(phi.pure) == {c(V("x") + V("w"), "=", "z"), c(2, "<=", "w"), c("w", "<=", "v")}
    with pytest.raises(ValueError):
        unfold_hls(phi, 0, "a", "b")


def test_unfolding_is_stronger():
    # every model of the unfolding is a model of the heap list
    from slah.entail import decide_entail
    base = H([c("x", "<", "y")], hls("x", "y", "v"))
    assert decide_entail(unfold_hls(base, 0, "w", "z"), H([], hls("x", "y", "v")))
