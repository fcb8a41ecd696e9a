"""Omega test: exact satisfiability of conjunctions of linear integer constraints.

A constraint is a pair ``(coeffs, const)`` read as ``sum(coeffs) + const >= 0``
(inequality) or ``== 0`` (equality).  Variables range over all integers;
callers add ``v >= 0`` for naturals.  ``solve`` returns an integer model or
None.

Reference: W. Pugh, "The Omega test: a fast and practical integer programming
algorithm for dependence analysis", 1991.
"""
from __future__ import annotations

import itertools
from math import gcd
from typing import Callable, Optional

Lin = tuple[dict, int]
Model = dict

_fresh = itertools.count()

# set by the caller to enforce deadlines; called once per recursion step
tick: Callable[[], None] = lambda: None


def _norm_eq(coeffs: dict, c: int) -> Optional[Lin] | bool:
    coeffs = {v: a for v, a in coeffs.items() if a}
    if not coeffs:
        return c == 0
    g = 0
    for a in coeffs.values():
        g = gcd(g, a)
    if c % g:
        return False
    if g != 1:
        coeffs = {v: a // g for v, a in coeffs.items()}
        c //= g
    return coeffs, c


def _norm_geq(coeffs: dict, c: int) -> Optional[Lin] | bool:
    coeffs = {v: a for v, a in coeffs.items() if a}
    if not coeffs:
        return c >= 0
    g = 0
    for a in coeffs.values():
        g = gcd(g, a)
    if g != 1:
        coeffs = {v: a // g for v, a in coeffs.items()}
        c = c // g  # floor: tightening
    return coeffs, c


def _subst(con: Lin, x: str, expr: dict, k: int) -> Lin:
    """Replace ``x`` by ``expr + k`` in ``con``."""
    coeffs, c = con
    a = coeffs.get(x)
    if not a:
        return con
    out = dict(coeffs)
    del out[x]
    for v, b in expr.items():
        out[v] = out.get(v, 0) + a * b
    return out, c + a * k


def _val(coeffs: dict, c: int, model: Model) -> int:
    return c + sum(a * model.get(v, 0) for v, a in coeffs.items())


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def solve(eqs: list[Lin], geqs: list[Lin]) -> Optional[Model]:
    tick()
    # normalize
    E: list[Lin] = []
    for coeffs, c in eqs:
        r = _norm_eq(coeffs, c)
        if r is False:
            return None
        if r is not True:
            E.append(r)
    G: list[Lin] = []
    for coeffs, c in geqs:
        r = _norm_geq(coeffs, c)
        if r is False:
            return None
        if r is not True:
            G.append(r)

    if E:
        return _eliminate_equality(E, G)
    return _solve_ineqs(G)


def _eliminate_equality(E: list[Lin], G: list[Lin]) -> Optional[Model]:
    # pick the equality/variable with the smallest absolute coefficient
    best = None
    for i, (coeffs, c) in enumerate(E):
        for v, a in coeffs.items():
            if best is None or abs(a) < best[0]:
                best = (abs(a), i, v)
    _, i, x = best
    coeffs, c = E[i]
    a = coeffs[x]
    if abs(a) == 1:
        # x = -(rest + c) / a
        expr = {v: -b * a for v, b in coeffs.items() if v != x}
        k = -c * a
        rest_E = [_subst(e, x, expr, k) for j, e in enumerate(E) if j != i]
        rest_G = [_subst(g, x, expr, k) for g in G]
        m = solve(rest_E, rest_G)
        if m is None:
            return None
        m[x] = _val(expr, k, m)
        return m
    # Euclid step: x = t - sum(q_i x_i) - q_c with |remainders| < |a|
    t = f"%om{next(_fresh)}"
    expr = {t: 1}
    for v, b in coeffs.items():
        if v != x:
            q = b // a
            if q:
                expr[v] = -q
    k = -(c // a)
    new_E = [_subst(e, x, expr, k) for e in E]
    new_G = [_subst(g, x, expr, k) for g in G]
    m = solve(new_E, new_G)
    if m is None:
        return None
    m[x] = _val(expr, k, m)
    m.pop(t, None)
    return m


def _solve_ineqs(G: list[Lin]) -> Optional[Model]:
    # keep the tightest constant per coefficient vector
    tight: dict[tuple, int] = {}
    for coeffs, c in G:
        key = tuple(sorted(coeffs.items()))
        if key not in tight or c < tight[key]:
            tight[key] = c
    # opposite pairs: a.x + c1 >= 0 and -a.x + c2 >= 0
    for key, c1 in tight.items():
        negkey = tuple((v, -a) for v, a in key)
        c2 = tight.get(negkey)
        if c2 is None:
            continue
        if c1 + c2 < 0:
            return None
        if c1 + c2 == 0:
            rest = [(dict(k), c) for k, c in tight.items() if k not in (key, negkey)]
            return solve([(dict(key), c1)], rest)
    G = [(dict(k), c) for k, c in tight.items()]
    if not G:
        return {}

    variables = sorted({v for coeffs, _ in G for v in coeffs})
    choice = None
    for v in variables:
        lo = [g for g in G if g[0].get(v, 0) > 0]
        up = [g for g in G if g[0].get(v, 0) < 0]
        if not lo or not up:
            choice = (0, v, lo, up, True)
            break
        exact = all(g[0][v] == 1 for g in lo) or all(g[0][v] == -1 for g in up)
        score = (0 if exact else 1, len(lo) * len(up))
        if choice is None or score < choice[0]:
            choice = (score, v, lo, up, exact)
    _, x, lo, up, exact = choice
    others = [g for g in G if not g[0].get(x)]

    if not lo or not up:
        m = solve([], others)
        if m is None:
            return None
        m[x] = _pick(x, lo, up, m)
        return m

    def combine(dark: bool) -> list[Lin]:
        out = list(others)
        for lc, lk in lo:
            a = lc[x]
            for uc, uk in up:
                b = -uc[x]
                coeffs = {}
                for v, w in lc.items():
                    if v != x:
                        coeffs[v] = coeffs.get(v, 0) + b * w
                for v, w in uc.items():
                    if v != x:
                        coeffs[v] = coeffs.get(v, 0) + a * w
                const = b * lk + a * uk
                if dark:
                    const -= (a - 1) * (b - 1)
                out.append((coeffs, const))
        return out

    if exact:
        m = solve([], combine(False))
        if m is None:
            return None
        m[x] = _pick(x, lo, up, m)
        return m

    if solve([], combine(False)) is None:
        return None
    m = solve([], combine(True))
    if m is not None:
        m[x] = _pick(x, lo, up, m)
        return m
    # grey shadow: x pinned close to one of its lower bounds
    bmax = max(-uc[x] for uc, _ in up)
    for lc, lk in lo:
        a = lc[x]
        for i in range((bmax * a - a - bmax) // bmax + 1):
            m = solve([(dict(lc), lk - i)], G)
            if m is not None:
                return m
    return None


def _pick(x: str, lo: list[Lin], up: list[Lin], m: Model) -> int:
    """Smallest integer value of ``x`` meeting its bounds given ``m``."""
    lower = None
    for coeffs, c in lo:
        a = coeffs[x]
        rest = _val({v: w for v, w in coeffs.items() if v != x}, c, m)
        bound = _ceil_div(-rest, a)
        lower = bound if lower is None else max(lower, bound)
    upper = None
    for coeffs, c in up:
        b = -coeffs[x]
        rest = _val({v: w for v, w in coeffs.items() if v != x}, c, m)
        bound = rest // b
        upper = bound if upper is None else min(upper, bound)
    if lower is None:
        return min(upper, 0)
    if upper is not None and lower > upper:
        raise AssertionError("omega: empty range during model reconstruction")
    return lower
