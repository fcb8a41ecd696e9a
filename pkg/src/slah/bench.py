"""Benchmark runner: a directory of suites, one subdirectory per suite."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import arith
from .arith import BackendError, SolverTimeout
from .entail import ResourceError, decide_entail
from .parser import ParseError, parse
from .sat import decide_sat

SUMMARY_HEADER = ["Benchmark suite", "#instances", "Timeout", "Avg. time", "Min. time", "Max. time"]
REPORT_HEADER = ["suite", "instance", "verdict", "time_s", "timeout"]


@dataclass
class Outcome:
    suite: str
    instance: str
    verdict: str  # sat/unsat/valid/invalid, or timeout/error
    time_s: float
    expect: Optional[str] = None
    detail: str = ""

    @property
    def timeout(self) -> bool:
        return self.verdict == "timeout"

    @property
    def wrong(self) -> bool:
        return self.expect is not None and self.verdict in ("sat", "unsat", "valid", "invalid") \
            and self.verdict != self.expect


def solve(q, heuristics: bool = True, jobs: int = 1):
    """Verdict string and the raw result object for a parsed query."""
    if q.kind == "sat":
        r = decide_sat(q.phi)
        return ("sat" if r else "unsat"), r
    r = decide_entail(q.phi, q.psi, heuristics=heuristics, jobs=jobs)
    return ("valid" if r else "invalid"), r


def run_one(path: str, suite: str, backend: Optional[str], timeout: Optional[float],
            heuristics: bool) -> Outcome:
    p = Path(path)
    t0 = time.perf_counter()
    expect = None
    try:
        q = parse(p.read_text(encoding="utf-8"))
        expect = q.expect
        with arith.using(backend, timeout):
            verdict, _ = solve(q, heuristics)
        detail = ""
    except SolverTimeout:
        verdict, detail = "timeout", ""
    except (ParseError, BackendError, ResourceError) as e:
        verdict, detail = "error", str(e)
    dt = time.perf_counter() - t0
    if timeout and dt > timeout:
        verdict = "timeout"
    return Outcome(suite, p.name, verdict, dt, expect, detail)


def collect(root: Path) -> list[tuple[str, Path]]:
    """(suite, file) pairs; files directly under ``root`` form a suite named after it."""
    items = []
    for f in sorted(root.glob("*.slah")):
        items.append((root.name, f))
    for d in sorted(p for p in root.iterdir() if p.is_dir()):
        for f in sorted(d.rglob("*.slah")):
            items.append((d.name, f))
    return items


def run_bench(root: str | Path, backend: Optional[str] = None, timeout: float = 60.0,
              heuristics: bool = True, jobs: int = 1) -> list[Outcome]:
    items = collect(Path(root))
    args = [(str(f), s, backend, timeout, heuristics) for s, f in items]
    if jobs <= 1:
        return [run_one(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futs = [pool.submit(run_one, *a) for a in args]
        return [f.result() for f in futs]


def _row(name: str, outs: list[Outcome]) -> list:
    solved = [o.time_s for o in outs if not o.timeout]
    fmt = lambda x: f"{x:.3f}"
    if solved:
        stats = [fmt(sum(solved) / len(solved)), fmt(min(solved)), fmt(max(solved))]
    else:
        stats = ["-", "-", "-"]
    return [name, len(outs), sum(o.timeout for o in outs)] + stats


def summary_csv(outs: list[Outcome]) -> str:
    """Per-suite rows plus a TOTAL row; averages leave out timed-out instances."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    suites: dict[str, list[Outcome]] = {}
    for o in outs:
        suites.setdefault(o.suite, []).append(o)
    for name, group in suites.items():
        w.writerow(_row(name, group))
    w.writerow(_row("TOTAL", outs))
    return buf.getvalue()


def report_csv(outs: list[Outcome]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for o in outs:
        w.writerow([o.suite, o.instance, o.verdict, f"{o.time_s:.4f}", str(o.timeout).lower()])
    return buf.getvalue()
