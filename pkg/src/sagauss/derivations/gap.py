"""Degree-3 proofs that an integer linear form avoids an open unit interval."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..poly import ONE, Poly, Rational, VarId, as_rational
from .builder import DerivationError, ProofBuilder


class NonIntegerInput(DerivationError):
    pass


def gap_poly(L: Poly, c) -> Poly:
    """``D_c(L) = (L - c)(L - c + 1)``."""
    u = L - as_rational(c)
    return u * (u + 1)


@dataclass(frozen=True)
class GapStatement:
    L: Poly
    c: Rational

    @property
    def poly(self) -> Poly:
        return gap_poly(self.L, self.c)


def linear_coefficients(L: Poly) -> Tuple[List[Tuple[VarId, Rational]], Rational]:
    """Variable coefficients (sorted by variable) and the constant term of a linear form."""
    if L.degree() > 1:
        raise DerivationError(f"{L} is not linear")
    coeffs = [(VarId.parse(m[0][0]), c) for m, c in L.terms.items() if m]
    coeffs.sort(key=lambda t: t[0].sort_key)
    return coeffs, L.terms.get(ONE, 0)


class GapProver:
    """Memoized prefix dynamic program for ``D_c(L) >= 0``.

    With ``L_j`` the sum of the first ``j`` terms of ``L``, the identity
    ``D_c(L_j) = x D_{c-a}(L_{j-1}) + (1-x) D_c(L_{j-1}) + a^2 (x^2 - x)``
    reduces every statement to the constants ``D_c(0) = c(c-1) >= 0``.
    """

    def __init__(self, builder: ProofBuilder, L: Poly):
        coeffs, const = linear_coefficients(L)
        if const != 0:
            raise NonIntegerInput("the linear form must have zero constant term")
        for _, a in coeffs:
            if not isinstance(as_rational(a), int):
                raise NonIntegerInput(f"coefficient {a} is not an integer")
        self.b = builder
        self.L = L
        self.coeffs = [(v, as_rational(a)) for v, a in coeffs]
        self._memo: Dict[Tuple[int, int], int] = {}

    def prove(self, c) -> int:
        c = as_rational(c)
        if not isinstance(c, int):
            raise NonIntegerInput(f"threshold {c} is not an integer")
        return self._prove(len(self.coeffs), c)

    def _prove(self, j: int, c: int) -> int:
        todo = [(j, c)]
        while todo:
            jj, cc = todo[-1]
            if (jj, cc) in self._memo:
                todo.pop()
                continue
            if jj == 0:
                self._memo[(jj, cc)] = self.b.const(cc * (cc - 1))
                todo.pop()
                continue
            v, a = self.coeffs[jj - 1]
            deps = [(jj - 1, cc - a), (jj - 1, cc)]
            missing = [d for d in deps if d not in self._memo]
            if missing:
                todo.extend(missing)
                continue
            todo.pop()
            b = self.b
            up = b.mult_var(self._memo[deps[0]], v)
            down = b.mult_compl(self._memo[deps[1]], v)
            both = b.add(up, down)
            self._memo[(jj, cc)] = b.lincomb(both, 1, b.axiom("bool_up", v), a * a)
        return self._memo[(j, c)]


def prove_gap(builder: ProofBuilder, L: Poly, c) -> int:
    """Line id of ``D_c(L) >= 0`` for an integer linear form ``L``."""
    key = ("gap", L)
    prover = builder.memo.get(key)
    if prover is None:
        prover = GapProver(builder, L)
        builder.memo[key] = prover
    return prover.prove(c)
