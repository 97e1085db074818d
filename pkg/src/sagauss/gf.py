"""Linear systems over a prime field and their inconsistency certificates."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union


class NonPrimeModulus(ValueError):
    pass


class ZeroInverse(ZeroDivisionError):
    pass


class TooLarge(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def fp_inverse(c: int, p: int) -> int:
    c %= p
    if c == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(c, -1, p)


@dataclass(frozen=True)
class LinSystemFp:
    """Rows ``(a, b)`` meaning ``sum_i a[i] * x_{i+1} = b`` over F_p."""

    p: int
    n: int
    rows: Tuple[Tuple[Tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise NonPrimeModulus(f"{self.p} is not prime")
        norm = []
        for a, b in self.rows:
            if len(a) != self.n:
                raise ValueError(f"row has {len(a)} coefficients, expected {self.n}")
            norm.append((tuple(int(c) % self.p for c in a), int(b) % self.p))
        object.__setattr__(self, "rows", tuple(norm))

    @classmethod
    def from_rows(cls, p: int, n: int, rows: Sequence[Tuple[Sequence[int], int]]) -> "LinSystemFp":
        return cls(p, n, tuple((tuple(a), b) for a, b in rows))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return max((len(support(a)) for a, _ in self.rows), default=0)

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return all(sum(ai * xi for ai, xi in zip(a, x)) % self.p == b for a, b in self.rows)


def support(a: Sequence[int]) -> Tuple[int, ...]:
    """0-based positions of the nonzero entries of ``a``."""
    return tuple(i for i, c in enumerate(a) if c)


@dataclass(frozen=True)
class Certificate:
    """Rows ``J`` (0-based) and nonzero multipliers ``y`` witnessing inconsistency."""

    J: Tuple[int, ...]
    y: Tuple[int, ...]

    def verify(self, sys: LinSystemFp) -> bool:
        if len(self.J) != len(self.y) or not self.J:
            return False
        if len(set(self.J)) != len(self.J) or any(not 0 <= j < sys.m for j in self.J):
            return False
        if any(c % sys.p == 0 for c in self.y):
            return False
        p = sys.p
        total = [0] * sys.n
        rhs = 0
        for j, yj in zip(self.J, self.y):
            a, b = sys.rows[j]
            for i, c in enumerate(a):
                total[i] = (total[i] + yj * c) % p
            rhs = (rhs + yj * b) % p
        return all(c == 0 for c in total) and rhs == 1


@dataclass(frozen=True)
class Solution:
    x: Tuple[int, ...]


def solve(sys: LinSystemFp) -> Union[Solution, Certificate]:
    """Gauss-Jordan elimination tracking how each row combines the input rows.

    Pivots are the first nonzero entry in row-major order.  A reduced row
    ``(0 | c)`` with ``c != 0`` yields a certificate normalized so that the
    right-hand sides combine to exactly 1.
    """
    p, n = sys.p, sys.n
    work: List[Tuple[List[int], int, List[int]]] = []
    for j, (a, b) in enumerate(sys.rows):
        if not any(a):
            if b:
                return Certificate((j,), (fp_inverse(b, p),))
            continue
        combo = [0] * sys.m
        combo[j] = 1
        work.append((list(a), b, combo))

    pivots: List[Tuple[int, int]] = []  # (row position, column)
    r = 0
    for col in range(n):
        piv = next((k for k in range(r, len(work)) if work[k][0][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        a, b, combo = work[r]
        inv = fp_inverse(a[col], p)
        a = [c * inv % p for c in a]
        b = b * inv % p
        combo = [c * inv % p for c in combo]
        work[r] = (a, b, combo)
        for k in range(len(work)):
            if k == r:
                continue
            ak, bk, ck = work[k]
            f = ak[col]
            if f:
                work[k] = (
                    [(x - f * y) % p for x, y in zip(ak, a)],
                    (bk - f * b) % p,
                    [(x - f * y) % p for x, y in zip(ck, combo)],
                )
        pivots.append((r, col))
        r += 1

    for k in range(r, len(work)):
        a, b, combo = work[k]
        if b and not any(a):
            inv = fp_inverse(b, p)
            J = tuple(j for j, c in enumerate(combo) if c)
            y = tuple(combo[j] * inv % p for j in J)
            return Certificate(J, y)

    x = [0] * n
    for row, col in pivots:
        x[col] = work[row][1]
    return Solution(tuple(x))


def rank(sys: LinSystemFp) -> int:
    """Rank of the coefficient matrix."""
    p = sys.p
    rows = [list(a) for a, _ in sys.rows]
    r = 0
    for col in range(sys.n):
        piv = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = fp_inverse(rows[r][col], p)
        rows[r] = [c * inv % p for c in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [(x - f * y) % p for x, y in zip(rows[k], rows[r])]
        r += 1
    return r


@dataclass(frozen=True)
class Satisfiable:
    x: Tuple[int, ...]


@dataclass(frozen=True)
class Unsatisfiable:
    pass


def brute_force_sat(sys: LinSystemFp, cap: int = 2**20) -> Union[Satisfiable, Unsatisfiable]:
    """Exhaustive search over all ``p**n`` assignments (first in lex order)."""
    if sys.p ** sys.n > cap:
        raise TooLarge(f"{sys.p}^{sys.n} assignments exceed cap {cap}")
    for x in product(range(sys.p), repeat=sys.n):
        if sys.satisfied_by(x):
            return Satisfiable(tuple(x))
    return Unsatisfiable()


def solution_or_none(result) -> Optional[Tuple[int, ...]]:
    return result.x if isinstance(result, (Solution, Satisfiable)) else None
