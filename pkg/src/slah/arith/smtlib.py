"""External backend: a solver child process spoken to in SMT-LIB 2."""
from __future__ import annotations

import os
import re
import shlex
import subprocess
from typing import Optional, Sequence

from .lia import (
    And, ArithError, Cmp, Cong, Const, Exists, Formula, LinExpr, Not, Or,
    StackModel, free_vars, nnf, strip_root_exists,
)


class BackendError(Exception):
    """The arithmetic backend failed, timed out, or answered unknown."""


_SIMPLE = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*")


def _sym(name: str) -> str:
    return name if _SIMPLE.fullmatch(name) else f"|{name}|"


def _num(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def term(e: LinExpr) -> str:
    parts = []
    for v, c in e.coeffs:
        parts.append(_sym(v) if c == 1 else f"(* {_num(c)} {_sym(v)})")
    if e.const or not parts:
        parts.append(_num(e.const))
    return parts[0] if len(parts) == 1 else f"(+ {' '.join(parts)})"


class _Printer:
    def __init__(self):
        self.n = 0

    def fresh(self) -> str:
        self.n += 1
        return f"%k{self.n}"

    def __call__(self, f: Formula) -> str:
        if isinstance(f, Const):
            return "true" if f.value else "false"
        if isinstance(f, Cmp):
            a, b = term(f.lhs), term(f.rhs)
            if f.op == "!=":
                return f"(not (= {a} {b}))"
            return f"({f.op} {a} {b})"
        if isinstance(f, Cong):
            q = _sym(self.fresh())
            d = term(f.lhs - f.rhs)
            return f"(exists (({q} Int)) (= {d} (* {f.modulus} {q})))"
        if isinstance(f, Not) and isinstance(f.arg, Cong):
            c = f.arg
            q, r = _sym(self.fresh()), _sym(self.fresh())
            d = term(c.lhs - c.rhs)
            return (f"(exists (({q} Int) ({r} Int)) (and (= {d} (+ (* {c.modulus} {q}) {r}))"
                    f" (<= 1 {r}) (<= {r} {c.modulus - 1})))")
        if isinstance(f, Not):
            return f"(not {self(f.arg)})"
        if isinstance(f, And):
            return "(and " + " ".join(self(a) for a in f.args) + ")"
        if isinstance(f, Or):
            return "(or " + " ".join(self(a) for a in f.args) + ")"
        if isinstance(f, Exists):
            binds = " ".join(f"({_sym(v)} Int)" for v in f.vars)
            return f"(exists ({binds}) {self(f.body)})"
        raise ArithError(f"not a formula: {f!r}")


def script(f: Formula) -> tuple[str, list[str], list[str]]:
    """SMT-LIB text for ``f``; root existentials become declared constants."""
    g = nnf(f)
    bound, body = strip_root_exists(g)
    free = sorted(free_vars(g))
    clash = [b for b in bound if b in free]
    if clash:
        raise ArithError(f"bound variables shadow free ones: {clash}")
    names = free + [b for b in dict.fromkeys(bound)]
    lines = ["(set-option :produce-models true)", "(set-logic LIA)"]
    for v in names:
        lines.append(f"(declare-const {_sym(v)} Int)")
    for v in names:
        lines.append(f"(assert (>= {_sym(v)} 0))")
    lines.append(f"(assert {_Printer()(body)})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    lines.append("(exit)")
    return "\n".join(lines) + "\n", free, list(dict.fromkeys(bound))


def parse_sexprs(text: str):
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            out = []
            while tokens[pos] != ")":
                out.append(read())
            pos += 1
            return out
        return tok

    out = []
    while pos < len(tokens):
        out.append(read())
    return out


def _value(sx) -> int:
    if isinstance(sx, str):
        return int(sx)
    if sx[0] == "-" and len(sx) == 2:
        return -_value(sx[1])
    raise BackendError(f"unexpected model value {sx!r}")


def parse_model(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for top in parse_sexprs(text):
        items = top[1:] if top and top[0] == "model" else top
        for d in items:
            if isinstance(d, list) and d and d[0] == "define-fun" and d[3] == "Int":
                name = d[1].strip("|")
                out[name] = _value(d[4])
    return out


class SmtLibBackend:
    """Fresh solver process per query."""

    def __init__(self, command: Sequence[str] | str, timeout: Optional[float] = None):
        if isinstance(command, str):
            command = shlex.split(command)
        command = list(command)
        if len(command) == 1 and os.path.basename(command[0]).startswith("z3"):
            command.append("-in")
        self.command = command
        self.timeout = timeout
        self.name = "external:" + " ".join(command)

    def check_sat(self, f: Formula) -> Optional[StackModel]:
        text, free, bound = script(f)
        try:
            proc = subprocess.run(self.command, input=text, capture_output=True,
                                  text=True, timeout=self.timeout)
        except subprocess.TimeoutExpired:
            raise BackendError("external solver timed out") from None
        except OSError as e:
            raise BackendError(f"cannot start external solver: {e}") from None
        out = proc.stdout.strip()
        first, _, rest = out.partition("\n")
        first = first.strip()
        if first == "unsat":
            return None
        if first != "sat":
            raise BackendError(f"external solver answered {first or proc.stderr.strip()!r}")
        values = parse_model(rest)
        assignment = {v: values.get(v, 0) for v in free}
        witnesses = {b: values.get(b, 0) for b in bound}
        return StackModel(assignment, witnesses)
