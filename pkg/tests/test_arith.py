import shutil

import pytest
from hypothesis import given, settings, strategies as st

from slah import arith
from slah.abstraction import abs_formula, eub_formula
from slah.arith import (
    FALSE, TRUE, ArithError, BackendError, Cmp, Cong, Exists, LinExpr, Not, SolverTimeout,
    check_sat, check_valid_implication, classify, cong, conj, disj, eq, evaluate,
    exists, le, lt, ne, neg, nnf,
)
from slah.formula import hls

from fixtures import FIRST_PATH, PRE

x, y, z = LinExpr.var("x"), LinExpr.var("y"), LinExpr.var("z")
Z3 = shutil.which("z3") or ("/usr/local/bin/z3" if shutil.os.path.exists("/usr/local/bin/z3") else None)


def test_linexpr_canonical():
    e = x + y + x - y
    assert e == LinExpr.var("x", 2)
    assert (x - x) == LinExpr()
    assert (x + 3).evaluate({"x": 4}) == 7


@given(st.lists(st.tuples(st.sampled_from("abc"), st.integers(-3, 3)), max_size=6),
       st.integers(-5, 5))
def test_linexpr_sum_order_irrelevant(parts, k):
    a = LinExpr.num(k)
    for v, c in parts:
        a = a + LinExpr.var(v, c)
    b = LinExpr.num(k)
    for v, c in reversed(parts):
        b = b + LinExpr.var(v, c)
    assert a == b
    assert all(c != 0 for _, c in a.coeffs)


def test_contradiction_unsat():
    assert check_sat(conj(lt(x, y), lt(y, x))) is None


def test_even_gap_sat():
    f = conj(le(x + 2, y), cong(y, x, 2))
    m = check_sat(f)
    assert m is not None
    s = m.full()
    assert s["y"] - s["x"] >= 2 and (s["y"] - s["x"]) % 2 == 0


def test_path_abstraction_sat():
    assert check_sat(abs_formula(FIRST_PATH)) is not None


def test_valid_implication():
    assert check_valid_implication(le(x + 2, y), lt(x, y))
    assert not check_valid_implication(lt(x, y), le(x + 2, y))
    m = check_sat(conj(lt(x, y), neg(le(x + 2, y))))
    assert m.full()["y"] == m.full()["x"] + 1
    assert check_valid_implication(abs_formula(PRE), lt("b", "e"))


def test_evaluate_examples():
    assert evaluate(Cong(y, x, 2), {"x": 1, "y": 7})
    assert not evaluate(Cmp(x, "<", y), {"x": 3, "y": 3})
    f = eub_formula(TRUE, hls("t1", "t2", "t3"), "z")
    assert evaluate(f, {"t1": 1, "t2": 7, "t3": 3, "z": 3})
    assert not evaluate(f, {"t1": 1, "t2": 7, "t3": 3, "z": 2})


def test_naturals_only():
    # x + 1 <= 0 has integer but no natural solutions
    assert check_sat(le(x + 1, 0)) is None
    assert check_sat(eq(x + y, 0)).full() == {"x": 0, "y": 0}


def test_omega_complete_on_dark_shadow():
    # 1 <= 3x - 3y <= 2 is rationally feasible but has no integer point
    f = conj(le(y * 3 + 1, x * 3), le(x * 3, y * 3 + 2))
    assert check_sat(f) is None


def test_classify_and_nested_exists():
    assert classify(lt(x, y)) == "QFPA"
    assert classify(exists(["z"], eq(x + z, y))) == "EPA"
    with pytest.raises(ArithError):
        classify(conj(lt(x, y), neg(exists(["z"], eq(x + z, y)))))


def test_epa_witness_returned():
    m = check_sat(exists(["z"], conj(eq(x + z, y), le(3, z), eq(x, 1))))
    assert m.full()["y"] >= 4
    assert m.witnesses["z"] == m.full()["y"] - 1


def _nots(f):
    if isinstance(f, Not):
        return [f] + _nots(f.arg)
    return [n for a in getattr(f, "args", ()) for n in _nots(a)]


@settings(max_examples=100, deadline=None)
@given(st.recursive(st.sampled_from([lt(x, y), eq(x, z), ne(y, z), cong(x, y, 2)]),
                    lambda ch: st.one_of(st.lists(ch, min_size=1, max_size=3).map(conj),
                                         st.lists(ch, min_size=1, max_size=3).map(disj),
                                         ch.map(neg)), max_leaves=6))
def test_nnf_equivalent_and_negations_only_on_congruences(f):
    g = nnf(f)
    assert all(isinstance(n.arg, Cong) for n in _nots(g))
    for s in ({"x": a, "y": b, "z": c} for a in range(3) for b in range(3) for c in range(3)):
        assert evaluate(f, s) == evaluate(g, s)


def test_deadline_raises():
    with pytest.raises(SolverTimeout):
        with arith.using("internal", timeout=1e-9):
            import time
            time.sleep(0.001)
            check_sat(lt(x, y))


def test_bad_model_detected():
    class Liar:
        name = "liar"

        def check_sat(self, f):
            return arith.StackModel({"x": 5, "y": 0})

    with pytest.raises(BackendError):
        check_sat(lt(x, y), backend=Liar())


def test_unknown_backend_spec():
    with pytest.raises(ValueError):
        arith.make_backend("quantum")


def test_missing_external_solver_is_an_error_not_unsat():
    with pytest.raises(BackendError):
        with arith.using("external:/nonexistent/solver"):
            check_sat(lt(x, y))


_atoms = st.sampled_from([lt(x, y), lt(y, x), eq(x, y), le(x + 2, y), ne(x, z), lt(z, 3),
                          cong(y, x, 2), cong(x + z, y, 3), eq(z, y + 1)])
_formulas = st.recursive(_atoms, lambda ch: st.one_of(
    st.lists(ch, min_size=1, max_size=3).map(conj),
    st.lists(ch, min_size=1, max_size=3).map(disj),
    ch.map(neg)), max_leaves=6)


@settings(max_examples=150, deadline=None)
@given(_formulas)
def test_internal_agrees_with_bounded_search(f):
    m = check_sat(f)
    found = any(evaluate(f, {"x": a, "y": b, "z": c})
                for a in range(8) for b in range(8) for c in range(8))
    if m is not None:
        assert evaluate(f, m.full())
    if found:
        assert m is not None


@pytest.mark.skipif(Z3 is None, reason="z3 not installed")
@settings(max_examples=60, deadline=None)
@given(_formulas)
def test_external_backend_agrees(f):
    internal = check_sat(f) is not None
    with arith.using(f"external:{Z3}"):
        external = check_sat(f)
    assert internal == (external is not None)
    if external is not None:
        assert evaluate(f, external.full())


@pytest.mark.skipif(Z3 is None, reason="z3 not installed")
def test_external_backend_on_abstractions():
    from fixtures import ENTAIL_FIXTURES
    for _, phi, psi, _ in ENTAIL_FIXTURES:
        for f in (abs_formula(phi), conj(abs_formula(phi), neg(abs_formula(psi)))):
            with arith.using(f"external:{Z3}"):
                ext = check_sat(f) is not None
            assert ext == (check_sat(f) is not None)
