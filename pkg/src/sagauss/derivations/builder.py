"""Incremental proof construction with equations, lifting and sums."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..encoder import Factor, HypothesisBank
from ..kernel import (
    Axiom,
    Hypothesis,
    Justification,
    LinComb,
    MultCompl,
    MultVar,
    Proof,
    ProofLine,
    axiom_poly,
)
from ..poly import Poly, Rational, VarId, as_rational


class DerivationError(ValueError):
    pass


class NegativeConstant(DerivationError):
    pass


class NoVariables(DerivationError):
    pass


class DecompositionMismatch(DerivationError):
    pass


@dataclass(frozen=True)
class EqProof:
    """Line ids for ``P - Q >= 0`` (``pos``) and ``Q - P >= 0`` (``neg``)."""

    pos: int
    neg: int

    def side(self, sign: int) -> int:
        return self.pos if sign >= 0 else self.neg

    def flipped(self) -> "EqProof":
        return EqProof(self.neg, self.pos)


@dataclass(frozen=True)
class Factored:
    """A cofactor given as ``coef * prod(factors)``; multiplied in by lifting."""

    coef: Rational
    factors: Tuple[Factor, ...]

    def poly(self) -> Poly:
        return Poly.product(self.factors).scale(self.coef)


Cofactor = Union[Poly, Factored]


class ProofBuilder:
    """Single-writer line allocator.

    Axiom, hypothesis and constant lines are shared; lifts through a factor
    sequence are memoized by prefix so common prefixes are derived once.
    """

    def __init__(self, bank: Optional[HypothesisBank] = None, universe: Sequence[VarId] = (), mode: str = "f2", p: int = 2):
        self.bank = bank
        self.hypotheses: List[Poly] = list(bank.polys) if bank is not None else []
        self.mode = bank.mode if bank is not None else mode
        self.p = bank.p if bank is not None else p
        self.lines: List[ProofLine] = []
        self._universe = list(universe)
        self._axioms: Dict[Tuple[str, VarId], int] = {}
        self._hyps: Dict[int, int] = {}
        self._consts: Dict[Rational, int] = {}
        self._lifts: Dict[Tuple[int, Tuple[Factor, ...]], int] = {}
        self.memo: Dict[object, object] = {}

    # primitive rules

    def poly(self, line: int) -> Poly:
        return self.lines[line].poly

    def _emit(self, poly: Poly, just: Justification) -> int:
        lid = len(self.lines)
        self.lines.append(ProofLine(lid, poly, just))
        return lid

    def axiom(self, kind: str, v: VarId) -> int:
        key = (kind, v)
        lid = self._axioms.get(key)
        if lid is None:
            lid = self._emit(axiom_poly(kind, v), Axiom(kind, v))
            self._axioms[key] = lid
        return lid

    def hyp(self, index: int) -> int:
        lid = self._hyps.get(index)
        if lid is None:
            lid = self._emit(self.hypotheses[index], Hypothesis(index))
            self._hyps[index] = lid
        return lid

    def lincomb(self, i: int, a, j: int, b) -> int:
        a, b = as_rational(a), as_rational(b)
        if a < 0 or b < 0:
            raise DerivationError(f"negative scalar ({a}, {b})")
        return self._emit(self.poly(i).add_scaled(a, self.poly(j), b), LinComb(i, a, j, b))

    def mult_var(self, i: int, v: VarId) -> int:
        return self._emit(self.poly(i).mul_var(v), MultVar(i, v))

    def mult_compl(self, i: int, v: VarId) -> int:
        return self._emit(self.poly(i).mul_var(v, complemented=True), MultCompl(i, v))

    # composite steps

    def scale(self, i: int, a) -> int:
        a = as_rational(a)
        if a == 1:
            return i
        return self.lincomb(i, a, i, 0)

    def add(self, i: int, j: int) -> int:
        return self.lincomb(i, 1, j, 1)

    def combine(self, items: Iterable[Tuple[Rational, int]]) -> int:
        """Non-negative combination ``sum c_k * line_k`` as a balanced LinComb tree.

        Uses exactly ``k - 1`` LinComb lines for ``k`` items (one scaling line
        when ``k == 1``).  Pairing neighbours keeps intermediate sums small,
        where a left fold would re-copy the running total at every step.
        """
        level = [(as_rational(c), lid) for c, lid in items if c]
        if not level:
            return self.const(0)
        if len(level) == 1:
            c, lid = level[0]
            return self.scale(lid, c)
        while len(level) > 1:
            nxt = []
            for k in range(0, len(level) - 1, 2):
                (c0, l0), (c1, l1) = level[k], level[k + 1]
                nxt.append((1, self.lincomb(l0, c0, l1, c1)))
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0][1]

    def default_var(self) -> VarId:
        if self._universe:
            return self._universe[0]
        for h in self.hypotheses:
            vs = h.variables()
            if vs:
                return vs[0]
        raise NoVariables("no variable available to derive a constant")

    def const(self, k) -> int:
        k = as_rational(k)
        lid = self._consts.get(k)
        if lid is None:
            lid = prove_const_nonneg(self, k)
        return lid

    def lift(self, line: int, factors: Sequence[Factor]) -> int:
        """Multiply ``line`` by each factor in turn (``x`` or ``1 - x``)."""
        factors = tuple(factors)
        cur = line
        for k in range(1, len(factors) + 1):
            key = (line, factors[:k])
            nxt = self._lifts.get(key)
            if nxt is None:
                v, compl = factors[k - 1]
                nxt = self.mult_compl(cur, v) if compl else self.mult_var(cur, v)
                self._lifts[key] = nxt
            cur = nxt
        return cur

    def lift_eq(self, eq: EqProof, factors: Sequence[Factor]) -> EqProof:
        return EqProof(self.lift(eq.pos, factors), self.lift(eq.neg, factors))

    def combine_eq(self, items: Iterable[Tuple[Rational, EqProof]]) -> EqProof:
        """``sum c_k * E_k`` for equations; negative ``c_k`` swap sides."""
        items = [(as_rational(c), e) for c, e in items if c]
        pos = self.combine((abs(c), e.side(c)) for c, e in items)
        neg = self.combine((abs(c), e.side(-c)) for c, e in items)
        return EqProof(pos, neg)

    def zero_eq(self) -> EqProof:
        z = self.const(0)
        return EqProof(z, z)

    def bool_eq(self, v: VarId) -> EqProof:
        """``v^2 - v = 0``."""
        return EqProof(self.axiom("bool_up", v), self.axiom("bool_down", v))

    def proof(self, goal: Optional[Poly] = None) -> Proof:
        return Proof(list(self.hypotheses), list(self.lines), goal, self.p, self.mode)


def prove_const_nonneg(b: ProofBuilder, k, v: Optional[VarId] = None) -> int:
    """Derive the constant ``k >= 0`` as ``k*x + k*(1 - x)``."""
    k = as_rational(k)
    if k < 0:
        raise NegativeConstant(f"{k} is negative")
    v = v or b.default_var()
    lid = b.lincomb(b.axiom("nonneg", v), k, b.axiom("compl", v), k)
    b._consts.setdefault(k, lid)
    return lid


def _monomial_factors(m) -> Tuple[Factor, ...]:
    return tuple((VarId.parse(n), False) for n, e in m for _ in range(e))


def prove_eq_mult(b: ProofBuilder, eq: EqProof, C: Cofactor) -> EqProof:
    """From ``A = 0`` derive ``C * A = 0``, lifting term by term."""
    if isinstance(C, Factored):
        return b.combine_eq([(C.coef, b.lift_eq(eq, C.factors))])
    items = []
    for m, c in C.sorted_terms():
        items.append((c, b.lift_eq(eq, _monomial_factors(m))))
    if not items:
        return b.zero_eq()
    return b.combine_eq(items)


def mult_side(b: ProofBuilder, eq: EqProof, C: Cofactor, sign: int = 1) -> int:
    """Only the ``sign * C * A >= 0`` half of :func:`prove_eq_mult`."""
    if isinstance(C, Factored):
        c = C.coef * sign
        return b.combine([(abs(c), b.lift(eq.side(c), C.factors))])
    items = []
    for m, c in C.sorted_terms():
        c = c * sign
        items.append((abs(c), b.lift(eq.side(c), _monomial_factors(m))))
    return b.combine(items)


def prove_ideal_rewrite(b: ProofBuilder, P: Poly, Q: Poly, decomposition: Sequence[Tuple[Cofactor, EqProof]]) -> EqProof:
    """``P = Q`` from ``P - Q = sum C_k * A_k`` and proofs of ``A_k = 0``.

    The identity is verified before any line is emitted.
    """
    total = Poly()
    for C, eq in decomposition:
        Cp = C.poly() if isinstance(C, Factored) else C
        total = total + Cp * b.poly(eq.pos)
    if total != P - Q:
        raise DecompositionMismatch(f"P - Q differs from the decomposition by {P - Q - total}")
    if not decomposition:
        return b.zero_eq()
    parts = [prove_eq_mult(b, eq, C) for C, eq in decomposition]
    return b.combine_eq((1, e) for e in parts)
