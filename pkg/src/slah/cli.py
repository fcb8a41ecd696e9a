"""Command-line driver.

Exit status: 0 when every query was solved, 1 on usage or parse errors,
2 on backend failures, timeouts, and oracle disagreements.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import arith, bench
from .arith import BackendError, SolverTimeout
from .entail import Invalid, ResourceError
from .formula import FormulaError
from .oracle import Bounds, brute_entail, brute_sat, holds, refute_at
from .parser import ParseError, parse
from .sat import Sat

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_argparser() -> argparse.ArgumentParser:
    p = _Parser(prog="slah", description="Decide satisfiability and entailment of SLAH symbolic heaps.")
    p.add_argument("files", nargs="*", help=".slah query files ('-' reads stdin)")
    p.add_argument("--backend", default=None,
                   help="internal | external:<path> (default: $SLAH_BACKEND or internal)")
    p.add_argument("--timeout", type=float, default=None, help="seconds per query")
    p.add_argument("--witness", action="store_true", help="print a model and heap for sat / invalid")
    p.add_argument("--oracle-check", type=int, metavar="ADDR_MAX", default=None,
                   help="re-check each verdict by bounded brute force")
    p.add_argument("--bench", metavar="DIR", default=None, help="run every suite under DIR")
    p.add_argument("--report", metavar="FILE", default=None, help="per-instance CSV for --bench")
    p.add_argument("--no-heuristics", action="store_true", help="disable pre-decomposition")
    p.add_argument("--jobs", type=int, default=1, help="worker count")
    return p


def _fmt_stack(s: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in sorted(s.items())) or "(empty)"


def _fmt_heap(h: dict) -> str:
    return " ".join(f"{a}:{v}" for a, v in sorted(h.items())) or "(empty)"


def _oracle(q, verdict: str, result, addr_max: int) -> Optional[str]:
    """None when the oracle agrees (or is inconclusive), else a description."""
    b = Bounds(addr_max, addr_max)
    if q.kind == "sat":
        if isinstance(result, Sat) and not holds(result.model.assignment, result.witness, q.phi):
            return "witness does not satisfy the formula"
        found = brute_sat(q.phi, b)
        if found is not None and verdict == "unsat":
            return f"brute force found a model: {_fmt_stack(found[0])}"
        return None
    cex = brute_entail(q.phi, q.psi, b)
    if cex is not None and verdict == "valid":
        return f"brute force found a counterexample: {_fmt_stack(cex.stack)}"
    return None


def _run_query(text: str, args, out) -> int:
    try:
        q = parse(text)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with arith.using(args.backend, args.timeout):
            verdict, result = bench.solve(q, not args.no_heuristics, args.jobs)
    except SolverTimeout:
        print("timeout", file=sys.stderr)
        return EXIT_FAIL
    except FormulaError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BackendError, ResourceError) as e:
        print(f"backend error: {e}", file=sys.stderr)
        return EXIT_FAIL
    print(verdict, file=out)
    if args.witness:
        if isinstance(result, Sat):
            print(f"stack: {_fmt_stack(result.model.assignment)}", file=out)
            print(f"heap: {_fmt_heap(result.witness)}", file=out)
        elif isinstance(result, Invalid) and result.model is not None:
            names = q.phi.all_vars() | q.psi.fv()
            s = {v: result.model.get(v, 0) for v in names}
            print(f"stack: {_fmt_stack(s)}", file=out)
            cex = refute_at(q.phi, q.psi, s)
            if cex is not None:
                print(f"heap: {_fmt_heap(cex.heap)}", file=out)
    if args.oracle_check is not None:
        problem = _oracle(q, verdict, result, args.oracle_check)
        if problem:
            print(f"oracle disagreement: {problem}", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def _run_bench(args, out) -> int:
    root = Path(args.bench)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return EXIT_USAGE
    timeout = args.timeout if args.timeout is not None else 60.0
    outs = bench.run_bench(root, args.backend, timeout, not args.no_heuristics, args.jobs)
    out.write(bench.summary_csv(outs))
    if args.report:
        Path(args.report).write_text(bench.report_csv(outs), encoding="utf-8")
    status = EXIT_OK
    for o in outs:
        if o.wrong:
            print(f"{o.suite}/{o.instance}: got {o.verdict}, expected {o.expect}", file=sys.stderr)
            status = EXIT_FAIL
        elif o.verdict == "error":
            print(f"{o.suite}/{o.instance}: {o.detail}", file=sys.stderr)
            status = EXIT_FAIL
    return status


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_argparser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    if args.backend is not None:
        try:
            arith.make_backend(args.backend)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
    if args.bench:
        return _run_bench(args, out)
    if not args.files:
        print("error: no input files (or use --bench DIR)", file=sys.stderr)
        return EXIT_USAGE
    status = EXIT_OK
    for name in args.files:
        if name == "-":
            text = sys.stdin.read()
        else:
            try:
                text = Path(name).read_text(encoding="utf-8")
            except OSError as e:
                print(f"error: {e}", file=sys.stderr)
                status = max(status, EXIT_USAGE)
                continue
        if len(args.files) > 1:
            print(f"{name}: ", end="", file=out)
        status = max(status, _run_query(text, args, out))
    return status


if __name__ == "__main__":
    sys.exit(main())
