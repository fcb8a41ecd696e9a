"""Reader and printer for the ``.slah`` query format.

::

    file    := decl* query
    decl    := (declare-var IDENT)
    query   := (check-sat pure spatial)
             | (check-entail (pure spatial) (pure spatial))
    pure    := true | (and cmp+)
    cmp     := (= t t) | (distinct t t) | (< t t) | (<= t t)
    term    := IDENT | NAT | (+ term term+)
    spatial := (sep atom*)
    atom    := emp | (pto t t) | (blk t t) | (hls t t bound)
    bound   := term | inf

Comments run from ``;`` to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .arith import Cmp, LinExpr
from .formula import INF, Blk, Emp, Hls, PointsTo, SymbolicHeap

KEYWORDS = frozenset({"true", "emp", "inf", "and", "sep", "pto", "blk", "hls", "distinct"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.'!?@$#^~-]*")
_NAT = re.compile(r"[0-9]+")
_OPS = {"=": "=", "distinct": "!=", "<": "<", "<=": "<="}
_OPS_BACK = {v: k for k, v in _OPS.items()}


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


@dataclass
class Sx:
    """An s-expression node with its source position."""

    value: Union[str, list]
    line: int
    col: int

    @property
    def is_list(self) -> bool:
        return isinstance(self.value, list)

    def head(self) -> Optional[str]:
        if self.is_list and self.value and not self.value[0].is_list:
            return self.value[0].value
        return None


def read_sexprs(text: str) -> list[Sx]:
    out: list[Sx] = []
    stack: list[Sx] = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "(":
            stack.append(Sx([], line, col))
            i, col = i + 1, col + 1
            continue
        if c == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            node = stack.pop()
            (stack[-1].value if stack else out).append(node)
            i, col = i + 1, col + 1
            continue
        j = i
        while j < n and text[j] not in " \t\r\n();":
            j += 1
        tok = Sx(text[i:j], line, col)
        (stack[-1].value if stack else out).append(tok)
        col += j - i
        i = j
    if stack:
        raise ParseError("unclosed '('", stack[-1].line, stack[-1].col)
    return out


@dataclass
class Query:
    kind: str  # "sat" or "entail"
    phi: SymbolicHeap
    psi: Optional[SymbolicHeap] = None
    declarations: tuple[str, ...] = ()
    locations: dict = field(default_factory=dict, compare=False)
    expect: Optional[str] = field(default=None, compare=False)


class _Reader:
    def __init__(self):
        self.decls: dict[str, tuple[int, int]] = {}

    def err(self, node: Sx, msg: str):
        raise ParseError(msg, node.line, node.col)

    def expect_list(self, node: Sx, what: str) -> list:
        if not node.is_list:
            self.err(node, f"expected {what}, got '{node.value}'")
        return node.value

    def arity(self, node: Sx, n: int, what: str):
        got = len(node.value) - 1
        if got != n:
            self.err(node, f"'{what}' takes {n} argument{'s' if n != 1 else ''}, got {got}")

    def term(self, node: Sx) -> LinExpr:
        if not node.is_list:
            tok = node.value
            if _NAT.fullmatch(tok):
                return LinExpr.num(int(tok))
            if _IDENT.fullmatch(tok) and tok not in KEYWORDS:
                if tok not in self.decls:
                    self.err(node, f"undeclared variable '{tok}'")
                return LinExpr.var(tok)
            self.err(node, f"not a term: '{tok}'")
        items = node.value
        if node.head() != "+":
            self.err(node, "expected a term: identifier, natural, or (+ ...)")
        if len(items) < 3:
            self.err(node, "'+' takes at least 2 arguments")
        out = LinExpr()
        for sub in items[1:]:
            out = out + self.term(sub)
        return out

    def pure(self, node: Sx) -> tuple:
        if not node.is_list:
            if node.value == "true":
                return ()
            self.err(node, f"expected 'true' or (and ...), got '{node.value}'")
        if node.head() != "and":
            self.err(node, "expected 'true' or (and ...)")
        if len(node.value) < 2:
            self.err(node, "'and' takes at least 1 comparison")
        out = []
        for c in node.value[1:]:
            self.expect_list(c, "a comparison")
            op = c.head()
            if op not in _OPS:
                self.err(c, f"unknown comparison '{op}'")
            self.arity(c, 2, op)
            out.append(Cmp(self.term(c.value[1]), _OPS[op], self.term(c.value[2])))
        return tuple(out)

    def atom(self, node: Sx):
        if not node.is_list:
            if node.value == "emp":
                return Emp()
            self.err(node, f"expected a spatial atom, got '{node.value}'")
        kind = node.head()
        if kind == "pto":
            self.arity(node, 2, kind)
            return PointsTo(self.term(node.value[1]), self.term(node.value[2]))
        if kind == "blk":
            self.arity(node, 2, kind)
            return Blk(self.term(node.value[1]), self.term(node.value[2]))
        if kind == "hls":
            self.arity(node, 3, kind)
            b = node.value[3]
            bound = INF if (not b.is_list and b.value == "inf") else self.term(b)
            return Hls(self.term(node.value[1]), self.term(node.value[2]), bound)
        self.err(node, f"unknown spatial atom '{kind}'")

    def spatial(self, node: Sx) -> tuple:
        self.expect_list(node, "(sep ...)")
        if node.head() != "sep":
            self.err(node, "expected (sep ...)")
        return tuple(self.atom(a) for a in node.value[1:])

    def heap(self, node: Sx) -> SymbolicHeap:
        items = self.expect_list(node, "(pure spatial)")
        if len(items) != 2:
            self.err(node, "expected (pure spatial)")
        return SymbolicHeap(self.pure(items[0]), self.spatial(items[1]))


def _var_sites(node: Sx, acc: list):
    if node.is_list:
        for c in node.value:
            _var_sites(c, acc)
    elif _IDENT.fullmatch(node.value) and node.value not in KEYWORDS:
        acc.append(node)


_EXPECT = re.compile(r";\s*expect:\s*(sat|unsat|valid|invalid)\b")


def parse(text: str) -> Query:
    nodes = read_sexprs(text)
    r = _Reader()
    query = None
    for node in nodes:
        if query is not None:
            r.err(node, "nothing may follow the query")
        r.expect_list(node, "a command")
        cmd = node.head()
        if cmd == "declare-var":
            r.arity(node, 1, cmd)
            name = node.value[1]
            if name.is_list or not _IDENT.fullmatch(name.value) or name.value in KEYWORDS:
                r.err(name, "expected a variable name")
            if name.value in r.decls:
                r.err(name, f"variable '{name.value}' declared twice")
            r.decls[name.value] = (name.line, name.col)
        elif cmd == "check-sat":
            r.arity(node, 2, cmd)
            phi = SymbolicHeap(r.pure(node.value[1]), r.spatial(node.value[2]))
            query = Query("sat", phi)
        elif cmd == "check-entail":
            r.arity(node, 2, cmd)
            phi = r.heap(node.value[1])
            psi = r.heap(node.value[2])
            bad = psi.fv() - phi.fv()
            if bad:
                sites: list = []
                _var_sites(node.value[2], sites)
                site = next(s for s in sites if s.value in bad)
                r.err(site, f"variable '{site.value}' of the consequent does not occur in the antecedent")
            query = Query("entail", phi, psi)
        else:
            r.err(node, f"unknown command '{cmd}'")
    if query is None:
        raise ParseError("missing (check-sat ...) or (check-entail ...)", 1, 1)
    query.declarations = tuple(r.decls)
    query.locations = dict(r.decls)
    m = _EXPECT.search(text)
    query.expect = m.group(1) if m else None
    return query


# -- printing ----------------------------------------------------------------

def print_term(t: LinExpr) -> str:
    parts = []
    for v, c in t.coeffs:
        parts.extend([v] * c)
    if t.const or not parts:
        parts.append(str(t.const))
    return parts[0] if len(parts) == 1 else f"(+ {' '.join(parts)})"


def _print_pure(pure) -> str:
    if not pure:
        return "true"
    out = []
    for p in pure:
        out.append(f"({_OPS_BACK[p.op]} {print_term(p.lhs)} {print_term(p.rhs)})")
    return "(and " + " ".join(out) + ")"


def _print_atom(a) -> str:
    if isinstance(a, PointsTo):
        return f"(pto {print_term(a.addr)} {print_term(a.value)})"
    if isinstance(a, Blk):
        return f"(blk {print_term(a.start)} {print_term(a.end)})"
    bound = "inf" if a.bound is INF else print_term(a.bound)
    return f"(hls {print_term(a.start)} {print_term(a.end)} {bound})"


def _print_spatial(atoms) -> str:
    return "(sep" + "".join(" " + _print_atom(a) for a in atoms) + ")"


def print_query(q: Query) -> str:
    lines = [f"(declare-var {v})" for v in q.declarations]
    if q.kind == "sat":
        lines.append(f"(check-sat {_print_pure(q.phi.pure)} {_print_spatial(q.phi.spatial)})")
    else:
        lines.append("(check-entail")
        lines.append(f"  ({_print_pure(q.phi.pure)} {_print_spatial(q.phi.spatial)})")
        lines.append(f"  ({_print_pure(q.psi.pure)} {_print_spatial(q.psi.spatial)}))")
    return "\n".join(lines) + "\n"


def query_text(kind: str, phi: SymbolicHeap, psi: Optional[SymbolicHeap] = None,
               expect: Optional[str] = None, comment: str = "") -> str:
    """Render a query for a file, declaring every variable it mentions."""
    names = sorted(phi.all_vars() | (psi.all_vars() if psi else frozenset()))
    head = "".join(f"; {line}\n" for line in comment.splitlines() if line)
    if expect:
        head += f"; expect: {expect}\n"
    return head + print_query(Query(kind, phi, psi, tuple(names)))
