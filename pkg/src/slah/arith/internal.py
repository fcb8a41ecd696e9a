"""Self-contained decision procedure for QFPA/EPA over the naturals."""
from __future__ import annotations

import itertools
from typing import Optional

from . import omega
from .lia import (
    And, ArithError, Cmp, Cong, Const, Exists, Formula, LinExpr, Not, Or,
    StackModel, evaluate, free_vars, nnf, strip_root_exists, has_exists,
)

_CACHE_LIMIT = 200_000


class InternalBackend:
    """Case splitting over disjunctions, guided by the current theory model,
    with the Omega test deciding each conjunction of linear constraints."""

    name = "internal"

    def __init__(self):
        self._theory_cache: dict = {}
        self._fresh = itertools.count()

    def check_sat(self, f: Formula) -> Optional[StackModel]:
        g = nnf(f)
        bound, body = strip_root_exists(g)
        if has_exists(body):
            raise ArithError("only root-level existential quantification is supported")
        free = free_vars(g)
        # bound names are kept distinct from free ones
        rename = {}
        for b in bound:
            if b in free or b in rename.values():
                rename[b] = f"%b{next(self._fresh)}"
        if rename:
            from .lia import substitute
            body = substitute(body, {k: LinExpr.var(v) for k, v in rename.items()})
        names = sorted(free | {rename.get(b, b) for b in bound})
        lits = tuple(_freeze(({v: 1}, 0, False)) for v in names)  # naturals
        lits2, pending = self._expand(body)
        model = self._search(lits + lits2, pending)
        if model is None:
            return None
        assignment = {v: model.get(v, 0) for v in sorted(free)}
        witnesses = {b: model.get(rename.get(b, b), 0) for b in bound}
        return StackModel(assignment, witnesses)

    # -- formula -> (literals, disjunctions) --------------------------------

    def _expand(self, f: Formula) -> tuple[tuple, list]:
        """Flatten a positive NNF formula into theory literals and pending Ors.

        A literal is ``(coeffs, const, is_eq)`` meaning ``sum + const >= 0``
        (or ``== 0``).
        """
        lits: list = []
        pending: list = []
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, Const):
                if not g.value:
                    lits.append(({}, -1, False))
            elif isinstance(g, And):
                stack.extend(g.args)
            elif isinstance(g, Or):
                pending.append(g)
            elif isinstance(g, Cmp):
                if g.op == "!=":
                    pending.append(Or((Cmp(g.lhs, "<", g.rhs), Cmp(g.rhs, "<", g.lhs))))
                else:
                    lits.append(_literal(g))
            elif isinstance(g, Cong):
                d = g.lhs - g.rhs
                q = f"%q{next(self._fresh)}"
                # l - r - n*q = 0
                lits.append(((d - LinExpr.var(q, g.modulus)).as_dict(), d.const, True))
            elif isinstance(g, Not) and isinstance(g.arg, Cong):
                c = g.arg
                d = c.lhs - c.rhs
                q, r = f"%q{next(self._fresh)}", f"%r{next(self._fresh)}"
                e = d - LinExpr.var(q, c.modulus) - LinExpr.var(r)
                lits.append((e.as_dict(), e.const, True))
                lits.append(({r: 1}, -1, False))
                lits.append(({r: -1}, c.modulus - 1, False))
            elif isinstance(g, Exists):
                raise ArithError("nested existential quantifier")
            else:
                raise ArithError(f"unexpected node in NNF: {g!r}")
        return tuple(_freeze(l) for l in lits), pending

    # -- search -------------------------------------------------------------

    def _theory(self, lits: tuple) -> Optional[dict]:
        key = frozenset(lits)
        if key in self._theory_cache:
            m = self._theory_cache[key]
            return None if m is None else dict(m)
        eqs = [(dict(c), k) for c, k, e in key if e]
        geqs = [(dict(c), k) for c, k, e in key if not e]
        m = omega.solve(eqs, geqs)
        if len(self._theory_cache) > _CACHE_LIMIT:
            self._theory_cache.clear()
        self._theory_cache[key] = m
        return None if m is None else dict(m)

    def _search(self, lits: tuple, pending: list, model: Optional[dict] = None) -> Optional[dict]:
        omega.tick()
        if model is None or not all(_holds(l, model) for l in lits):
            model = self._theory(lits)
            if model is None:
                return None
        violated = [o for o in pending if not _eval(o, model)]
        if not violated:
            return model
        # branch on the violated disjunction with fewest alternatives
        target = min(violated, key=lambda o: len(o.args))
        rest = [o for o in pending if o is not target]
        for branch in target.args:
            blits, bpend = self._expand(branch)
            m = self._search(lits + blits, rest + bpend, model)
            if m is not None:
                return m
        return None


def _literal(c: Cmp) -> tuple:
    if c.op == "=":
        d = c.lhs - c.rhs
        return d.as_dict(), d.const, True
    d = c.rhs - c.lhs  # rhs - lhs >= 0  /  rhs - lhs - 1 >= 0
    return d.as_dict(), d.const - (1 if c.op == "<" else 0), False


def _freeze(lit) -> tuple:
    coeffs, c, e = lit
    return tuple(sorted((v, a) for v, a in coeffs.items() if a)), c, e


def _holds(lit, model) -> bool:
    coeffs, c, e = lit
    v = c + sum(a * model.get(x, 0) for x, a in coeffs)
    return v == 0 if e else v >= 0


class _Default(dict):
    def __missing__(self, key):
        return 0


def _eval(f: Formula, model: dict) -> bool:
    return evaluate(f, _Default(model))
