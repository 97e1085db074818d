"""Benchmark runs: generate instances, refute, check, record metrics."""

from __future__ import annotations

import csv
import random
import time
from dataclasses import astuple, dataclass, fields
from typing import Iterator, List, Optional, TextIO, Tuple

from .derivations.refute import refute
from .gf import Certificate, LinSystemFp, solve
from .kernel import check, is_refutation
from .systems import random_unsat, tseitin_cycle

FAMILIES = ("tseitin-cycle", "random")


@dataclass(frozen=True)
class BenchRecord:
    family: str
    n: int
    p: int
    w: int
    length: int
    size: int
    degree: int
    lines: int
    ms: int


CSV_HEADER = [f.name for f in fields(BenchRecord)]


def default_mode(p: int) -> str:
    return "f2" if p == 2 else "fp"


def run_instance(family: str, sys: LinSystemFp, w: int, cert: Optional[Certificate] = None, mode: Optional[str] = None) -> BenchRecord:
    """Refute and check one instance; the time covers solve, refute and check."""
    start = time.perf_counter()
    if cert is None:
        cert = solve(sys)
        if not isinstance(cert, Certificate):
            raise ValueError("benchmark instance is satisfiable")
    proof = refute(sys, cert, mode or default_mode(sys.p))
    m = check(proof)
    if not is_refutation(proof):
        raise RuntimeError("builder output is not a refutation")
    ms = round((time.perf_counter() - start) * 1000)
    return BenchRecord(family, sys.n, sys.p, w, m.length, m.size, m.degree, m.line_count, ms)


def instances(family: str, n_lo: int, n_hi: int, p: int, w: int, seed: int) -> Iterator[Tuple[int, LinSystemFp, Optional[Certificate]]]:
    if family == "tseitin-cycle":
        if p != 2:
            raise ValueError("the Tseitin cycle family is defined over F_2")
        for n in range(n_lo, n_hi + 1):
            yield n, tseitin_cycle(n), None
    elif family == "random":
        rng = random.Random(seed)
        for n in range(n_lo, n_hi + 1):
            sys, cert = random_unsat(rng, n, p, w)
            yield n, sys, cert
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def run_bench(family: str, n_lo: int, n_hi: int, p: int, w: int, seed: int = 0) -> List[BenchRecord]:
    if family == "tseitin-cycle":
        w = 2
    return [run_instance(family, sys, w, cert) for _, sys, cert in instances(family, n_lo, n_hi, p, w, seed)]


def write_csv(records: List[BenchRecord], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(astuple(r))
