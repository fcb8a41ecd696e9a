"""Presburger arithmetic: formulas, backends, and the sat/validity entry points."""
from __future__ import annotations

import contextvars
import os
import time
from contextlib import contextmanager
from typing import Optional, Protocol

from . import omega
from .internal import InternalBackend
from .lia import (
    FALSE, OPS, TRUE, And, ArithError, Cmp, Cong, Const, Exists, Formula,
    LinExpr, Not, Or, StackModel, classify, cong, conj, disj, eq, evaluate,
    exists, free_vars, ge, gt, implies, le, lt, ne, neg, nnf, strip_root_exists,
    substitute,
)
from .smtlib import BackendError, SmtLibBackend


class SolverTimeout(BackendError):
    """The query's deadline passed before an answer was reached."""


class Backend(Protocol):
    name: str

    def check_sat(self, f: Formula) -> Optional[StackModel]: ...


_backend: contextvars.ContextVar[Optional[Backend]] = contextvars.ContextVar("backend", default=None)
_deadline: contextvars.ContextVar[Optional[float]] = contextvars.ContextVar("deadline", default=None)


def _tick() -> None:
    d = _deadline.get()
    if d is not None and time.monotonic() > d:
        raise SolverTimeout("deadline exceeded")


omega.tick = _tick


def make_backend(spec: Optional[str] = None, timeout: Optional[float] = None) -> Backend:
    """``internal`` or ``external:<command>``; default from ``SLAH_BACKEND``."""
    spec = spec or os.environ.get("SLAH_BACKEND") or "internal"
    if spec == "internal":
        return InternalBackend()
    if spec.startswith("external:"):
        return SmtLibBackend(spec[len("external:"):], timeout=timeout)
    raise ValueError(f"unknown backend {spec!r}")


def fresh_session(b: Backend) -> Backend:
    """A backend of the same kind with no shared state (for worker threads)."""
    if isinstance(b, InternalBackend):
        return InternalBackend()
    if isinstance(b, SmtLibBackend):
        return SmtLibBackend(b.command, b.timeout)
    return b


def current_backend() -> Backend:
    b = _backend.get()
    if b is None:
        b = make_backend()
        _backend.set(b)
    return b


@contextmanager
def using(backend: Backend | str | None = None, timeout: Optional[float] = None):
    """Run a block with a given backend and (optional) wall-clock budget in seconds."""
    if isinstance(backend, str) or backend is None:
        backend = make_backend(backend, timeout)
    tok_b = _backend.set(backend)
    tok_d = _deadline.set(time.monotonic() + timeout if timeout else _deadline.get())
    try:
        yield backend
    finally:
        _backend.reset(tok_b)
        _deadline.reset(tok_d)


def check_sat(f: Formula, backend: Optional[Backend] = None) -> Optional[StackModel]:
    """A model of ``f`` over the naturals, or None when unsatisfiable.

    Every model is re-validated by evaluation before being returned.
    """
    classify(f)
    _tick()
    b = backend or current_backend()
    model = b.check_sat(f)
    if model is not None:
        _, body = strip_root_exists(f)
        if not evaluate(body, _Total(model.full())):
            raise BackendError(f"{b.name} returned a model that does not satisfy the query")
    return model


def check_valid_implication(hyp: Formula, concl: Formula,
                            backend: Optional[Backend] = None) -> bool:
    return check_sat(conj(hyp, neg(concl)), backend) is None


class _Total(dict):
    def __missing__(self, key):
        return 0


__all__ = [
    "FALSE", "OPS", "TRUE", "And", "ArithError", "Backend", "BackendError", "Cmp",
    "Cong", "Const", "Exists", "Formula", "InternalBackend", "LinExpr", "Not", "Or",
    "SmtLibBackend", "SolverTimeout", "StackModel", "check_sat",
    "check_valid_implication", "classify", "cong", "conj", "current_backend", "disj",
    "eq", "evaluate", "exists", "free_vars", "fresh_session", "ge", "gt", "implies", "le", "lt",
    "make_backend", "ne", "neg", "nnf", "substitute", "using",
]
