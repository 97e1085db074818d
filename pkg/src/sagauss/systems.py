"""Text format for linear systems, and benchmark instance families."""

from __future__ import annotations

import random
import re
from typing import List, Optional, Sequence, Tuple

from .gf import Certificate, LinSystemFp, is_prime, solve


class SystemParseError(ValueError):
    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class NonPrimeField(SystemParseError):
    pass


class IndexOutOfRange(SystemParseError):
    pass


_HEADER_RE = re.compile(r"^\s*(field|vars)\s+(-?\d+)\s*$")
_TERM_RE = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?x(\d+)\s*")
_CONST_RE = re.compile(r"\s*([+-])?\s*(\d+)\s*$")


def parse_system(text: str) -> LinSystemFp:
    """Parse ``field p`` / ``vars n`` headers followed by one equation per line.

    Equations read ``c1*x1 + c2*x2 + ... = b``; a missing coefficient means
    1, and ``0 = b`` is a row with empty support.  Coefficients and
    right-hand sides are reduced mod p.
    """
    p: Optional[int] = None
    n: Optional[int] = None
    rows: List[Tuple[Tuple[int, ...], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _HEADER_RE.match(line)
        if m:
            key, val = m.group(1), int(m.group(2))
            col = line.index(m.group(2)) + 1
            if key == "field":
                if p is not None:
                    raise SystemParseError(lineno, 1, "duplicate field header")
                if not is_prime(val):
                    raise NonPrimeField(lineno, col, f"{val} is not prime")
                p = val
            else:
                if p is None:
                    raise SystemParseError(lineno, 1, "vars before field")
                if n is not None:
                    raise SystemParseError(lineno, 1, "duplicate vars header")
                if val < 0:
                    raise SystemParseError(lineno, col, "negative variable count")
                n = val
            continue
        if p is None or n is None:
            raise SystemParseError(lineno, 1, "equation before field/vars headers")
        rows.append(_parse_equation(line, lineno, p, n))
    if p is None or n is None:
        raise SystemParseError(max(1, len(text.splitlines())), 1, "missing field/vars header")
    return LinSystemFp.from_rows(p, n, rows)


def _parse_equation(line: str, lineno: int, p: int, n: int) -> Tuple[Tuple[int, ...], int]:
    if line.count("=") != 1:
        raise SystemParseError(lineno, 1, "expected exactly one '='")
    lhs, rhs = line.split("=")
    rhs_col = len(lhs) + 2
    mc = _CONST_RE.match(rhs)
    if mc is None:
        raise SystemParseError(lineno, rhs_col, "right-hand side must be an integer")
    b = int(mc.group(2)) * (-1 if mc.group(1) == "-" else 1)
    a = [0] * n
    if re.fullmatch(r"\s*0\s*", lhs):
        return tuple(a), b % p
    pos = 0
    first = True
    while pos < len(lhs):
        if not lhs[pos:].strip():
            break
        mt = _TERM_RE.match(lhs, pos)
        if mt is None or (not first and mt.group(1) is None):
            raise SystemParseError(lineno, pos + 1, "expected a term like 2*x3")
        sign = -1 if mt.group(1) == "-" else 1
        coef = int(mt.group(2)) if mt.group(2) is not None else 1
        idx = int(mt.group(3))
        if not 1 <= idx <= n:
            raise IndexOutOfRange(lineno, mt.start(3) + 1, f"x{idx} outside 1..{n}")
        a[idx - 1] += sign * coef
        pos = mt.end()
        first = False
    if first:
        raise SystemParseError(lineno, 1, "empty left-hand side")
    return tuple(c % p for c in a), b % p


def format_system(sys: LinSystemFp, comment: Optional[str] = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"field {sys.p}")
    out.append(f"vars {sys.n}")
    for a, b in sys.rows:
        terms = [f"{c}*x{i + 1}" for i, c in enumerate(a) if c]
        out.append(f"{' + '.join(terms) if terms else '0'} = {b}")
    return "\n".join(out) + "\n"


def tseitin_cycle(n: int, charges: Optional[Sequence[int]] = None) -> LinSystemFp:
    """The n-cycle parity system ``x_i + x_{i+1} = b_i`` (indices mod n).

    The default charge is a single 1 on the first equation.
    """
    if n < 2:
        raise ValueError("a cycle needs at least 2 vertices")
    b = list(charges) if charges is not None else [1] + [0] * (n - 1)
    if len(b) != n:
        raise ValueError("need one charge per equation")
    rows = []
    for i in range(n):
        a = [0] * n
        a[i] = 1
        a[(i + 1) % n] = 1
        rows.append((tuple(a), b[i] % 2))
    return LinSystemFp.from_rows(2, n, rows)


def random_row(rng: random.Random, n: int, p: int, w: int) -> Tuple[Tuple[int, ...], int]:
    k = rng.randint(1, min(w, n))
    idx = rng.sample(range(n), k)
    a = [0] * n
    for i in idx:
        a[i] = rng.randint(1, p - 1)
    return tuple(a), rng.randrange(p)


def random_unsat(rng: random.Random, n: int, p: int, w: int, m: Optional[int] = None, tries: int = 10_000) -> Tuple[LinSystemFp, Certificate]:
    """Width-<=w system over F_p, resampled until elimination finds a certificate."""
    m = m if m is not None else n + 1
    for _ in range(tries):
        sys = LinSystemFp.from_rows(p, n, [random_row(rng, n, p, w) for _ in range(m)])
        res = solve(sys)
        if isinstance(res, Certificate):
            return sys, res
    raise RuntimeError("no unsatisfiable instance found")


def random_system(rng: random.Random, n: int, p: int, w: int, m: int) -> LinSystemFp:
    return LinSystemFp.from_rows(p, n, [random_row(rng, n, p, w) for _ in range(m)])
