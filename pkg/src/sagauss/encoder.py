"""Inequality encodings of linear equations, indicator axioms, extended monomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Hashable, List, Sequence, Tuple

from .gf import LinSystemFp, support
from .poly import Poly, VarId

Factor = Tuple[VarId, bool]  # (variable, complemented)


class EmptySupport(ValueError):
    pass


def plain(i: int) -> VarId:
    return VarId(i)


def indicator(i: int, value: int) -> VarId:
    return VarId(i, value)


def subsets(I: Sequence[int]) -> List[Tuple[int, ...]]:
    """All subsets of ``I`` in binary order (bit k selects ``I[k]``)."""
    return [tuple(i for k, i in enumerate(I) if mask >> k & 1) for mask in range(2 ** len(I))]


def vectors(I: Sequence[int], p: int) -> List[Tuple[int, ...]]:
    """All of F_p^I in mixed-radix order, first coordinate most significant."""
    return list(product(range(p), repeat=len(I)))


def encode_f2(a: Sequence[int], b: int) -> List[Poly]:
    """One inequality per T with ``|T| = 1 - b (mod 2)``; variables are 1-based ``x{i}``.

    ``a`` is indexed from 0, so ``a[k]`` multiplies ``x{k+1}``.
    """
    I = [k + 1 for k in support(a)]
    if not I:
        raise EmptySupport("row has no nonzero coefficient")
    out = []
    for T in subsets(I):
        if len(T) % 2 == (1 - b) % 2:
            out.append(_f2_inequality(I, T))
    return out


def _f2_inequality(I: Sequence[int], T: Sequence[int]) -> Poly:
    Ts = set(T)
    coeffs = {plain(i): (-1 if i in Ts else 1) for i in I}
    return Poly.linear(coeffs, len(Ts) - 1)


def encode_fp(a: Sequence[int], b: int, p: int) -> List[Poly]:
    """``sum_i (1 - x_i(z_i)) - 1 >= 0`` for every z violating the row."""
    I = [k + 1 for k in support(a)]
    if not I:
        raise EmptySupport("row has no nonzero coefficient")
    coef = [a[i - 1] % p for i in I]
    out = []
    for z in vectors(I, p):
        if sum(c * zi for c, zi in zip(coef, z)) % p != b % p:
            out.append(_fp_inequality(I, z))
    return out


def _fp_inequality(I: Sequence[int], z: Sequence[int]) -> Poly:
    return Poly.linear({indicator(i, zi): -1 for i, zi in zip(I, z)}, len(I) - 1)


def z_axioms(n: int, p: int) -> List[Tuple[Poly, Poly]]:
    if p < 2:
        raise ValueError("p must be at least 2")
    out = []
    for i in range(1, n + 1):
        s = Poly.linear({indicator(i, l): 1 for l in range(p)}, -1)
        out.append((s, -s))
    return out


@dataclass(frozen=True)
class ExtendedMonomial:
    I: Tuple[int, ...]
    selector: Tuple[int, ...]
    factors: Tuple[Factor, ...]
    poly: Poly

    @property
    def degree(self) -> int:
        return len(self.factors)


def f2_factors(I: Sequence[int], T: Sequence[int]) -> Tuple[Factor, ...]:
    Ts = set(T)
    return tuple((plain(i), False) for i in I if i in Ts) + tuple((plain(i), True) for i in I if i not in Ts)


def fp_factors(I: Sequence[int], z: Sequence[int], p: int) -> Tuple[Factor, ...]:
    ones = tuple((indicator(i, zi), False) for i, zi in zip(I, z))
    compls = tuple((indicator(i, l), True) for i, zi in zip(I, z) for l in range(p) if l != zi)
    return ones + compls


def ext_monomial_f2(I: Sequence[int], T: Sequence[int]) -> ExtendedMonomial:
    if not set(T) <= set(I):
        raise ValueError("T must be a subset of I")
    fs = f2_factors(I, T)
    return ExtendedMonomial(tuple(I), tuple(T), fs, Poly.product(fs))


def ext_monomial_fp(I: Sequence[int], z: Sequence[int], p: int) -> ExtendedMonomial:
    if len(z) != len(I) or any(not 0 <= zi < p for zi in z):
        raise ValueError("z must be a vector in F_p^I")
    fs = fp_factors(I, z, p)
    return ExtendedMonomial(tuple(I), tuple(z), fs, Poly.product(fs))


@dataclass
class HypothesisBank:
    """Ordered hypotheses with a reverse index ``(row, selector) -> position``.

    Selectors are the subset T (F_2 mode), the vector z (F_p mode), or
    ``("Z", i, +1/-1)`` for the two directions of an indicator axiom.
    """

    mode: str
    p: int
    polys: List[Poly] = field(default_factory=list)
    index: Dict[Tuple[Hashable, Hashable], int] = field(default_factory=dict)
    by_content: Dict[Tuple[Hashable, Hashable], int] = field(default_factory=dict)

    def add(self, row: Hashable, selector: Hashable, poly: Poly, content: Hashable = None) -> int:
        pos = len(self.polys)
        self.polys.append(poly)
        self.index[(row, selector)] = pos
        if content is not None:
            self.by_content.setdefault((content, selector), pos)
        return pos

    def lookup(self, row: Hashable, selector: Hashable) -> int:
        return self.index[(row, selector)]

    def find(self, a: Sequence[int], b: int, selector: Hashable) -> int:
        """First hypothesis for the row with content ``(a, b)`` and this selector."""
        return self.by_content[((tuple(c % self.p for c in a), b % self.p), selector)]

    def z_axiom(self, i: int) -> Tuple[int, int]:
        return self.index[("Z", ("Z", i, 1))], self.index[("Z", ("Z", i, -1))]

    def __len__(self) -> int:
        return len(self.polys)


def encode_system(sys: LinSystemFp, mode: str) -> HypothesisBank:
    """Hypotheses of a whole system: rows in order, then (fp mode) the Z axioms.

    A row with empty support and ``b != 0`` contributes the single
    inequality ``-1 >= 0`` (the empty instance of the encoding); ``(0 | 0)``
    rows contribute nothing.
    """
    if mode not in ("f2", "fp"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "f2" and sys.p != 2:
        raise ValueError("f2 mode needs p = 2")
    bank = HypothesisBank(mode, sys.p)
    for j, (a, b) in enumerate(sys.rows):
        content = (tuple(a), b)
        I = [k + 1 for k in support(a)]
        if not I:
            if b:
                bank.add(j, (), Poly.const(-1), content)
            continue
        if mode == "f2":
            for T in subsets(I):
                if len(T) % 2 == (1 - b) % 2:
                    bank.add(j, T, _f2_inequality(I, T), content)
        else:
            coef = [a[i - 1] for i in I]
            for z in vectors(I, sys.p):
                if sum(c * zi for c, zi in zip(coef, z)) % sys.p != b:
                    bank.add(j, z, _fp_inequality(I, z), content)
    if mode == "fp":
        for i, (pos, neg) in enumerate(z_axioms(sys.n, sys.p), start=1):
            bank.add("Z", ("Z", i, 1), pos)
            bank.add("Z", ("Z", i, -1), neg)
    return bank


def variable_universe(sys: LinSystemFp, mode: str) -> List[VarId]:
    if mode == "f2":
        return [plain(i) for i in range(1, sys.n + 1)]
    return [indicator(i, l) for i in range(1, sys.n + 1) for l in range(sys.p)]
