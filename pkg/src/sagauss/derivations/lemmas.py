"""Equations about extended monomials, for both variable regimes."""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

from ..encoder import (
    Factor,
    f2_factors,
    fp_factors,
    indicator,
    subsets,
    vectors,
)
from ..gf import support
from ..poly import Poly
from .builder import DerivationError, EqProof, Factored, ProofBuilder, prove_eq_mult, prove_ideal_rewrite


class WrongParity(DerivationError):
    pass


class NotViolating(DerivationError):
    pass


class MissingZAxioms(DerivationError):
    pass


def monomial_nonneg(b: ProofBuilder, factors: Sequence[Factor]) -> int:
    """``prod(factors) >= 0`` from the first factor's axiom and lifts."""
    if not factors:
        return b.const(1)
    v, compl = factors[0]
    return b.lift(b.axiom("compl" if compl else "nonneg", v), factors[1:])


def _kill_chain(b: ProofBuilder, start: int, kill: Sequence[Factor], extra: Sequence[Factor]) -> int:
    """Turn ``sum(terms) - 1 >= 0`` into ``-prod(kill + extra) >= 0``.

    ``start`` is a linear inequality with one term per kill factor, each of
    which is the complement of that factor.  Lifting by a factor turns its
    own term into ``v(1 - v) * prefix``, which a lifted ``v^2 - v >= 0``
    cancels.  The last kill factor needs no lift: once every other term is
    gone the line already reads ``-prod(kill) >= 0``.
    """
    line = start
    for k, (v, compl) in enumerate(kill[:-1]):
        lifted = b.mult_compl(line, v) if compl else b.mult_var(line, v)
        line = b.add(lifted, b.lift(b.axiom("bool_up", v), kill[:k]))
    return b.lift(line, extra)


# F_2 regime


def _row_of(a: Sequence[int]) -> Tuple[int, ...]:
    return tuple(k + 1 for k in support(a))


def prove_partition_unity_f2(b: ProofBuilder, I: Sequence[int]) -> EqProof:
    """``sum_T M^I_T = 1``; the sum expands to 1, so both sides are ``0 >= 0``."""
    total = Poly()
    for T in subsets(I):
        total = total + Poly.product(f2_factors(I, T))
    if total != Poly.const(1):
        raise DerivationError("extended monomials do not sum to 1")
    return b.zero_eq()


def prove_violated_monomial_f2(b: ProofBuilder, a: Sequence[int], rhs: int, T: Sequence[int], row: Optional[int] = None) -> EqProof:
    """``M^I_T = 0`` for a T of the wrong parity, from the row's hypotheses."""
    I = _row_of(a)
    T = tuple(T)
    if len(T) % 2 != (1 - rhs) % 2:
        raise WrongParity(f"|T| = {len(T)} has the right parity for b = {rhs}")
    if b.bank is None:
        raise DerivationError("no hypothesis bank")
    idx = b.bank.lookup(row, T) if row is not None else b.bank.find(a, rhs, T)
    factors = f2_factors(I, T)
    neg = _kill_chain(b, b.hyp(idx), factors, ())
    return EqProof(monomial_nonneg(b, factors), neg)


def prove_weight_identity_f2(b: ProofBuilder, I: Sequence[int], T: Sequence[int]) -> EqProof:
    """``(sum_{i in I} x_i - |T|) * M^I_T = 0``.

    For ``i`` outside T the monomial carries ``1 - x_i`` so ``x_i M`` is a
    lifted ``x_i - x_i^2``; for ``i`` in T, ``x_i M - M`` is a lifted
    ``x_i^2 - x_i``.
    """
    factors = f2_factors(I, T)
    parts = []
    for k, (v, compl) in enumerate(factors):
        rest = factors[:k] + factors[k + 1:]
        eq = b.bool_eq(v)
        parts.append((1, b.lift_eq(eq.flipped() if compl else eq, rest)))
    if not parts:
        return b.zero_eq()
    return b.combine_eq(parts)


# F_p regime


def prove_ortho(b: ProofBuilder, i: int, z: int, l: int, p: int) -> EqProof:
    """``x_i(z) x_i(l) = 0`` for ``z != l`` from the indicator axiom of ``i``."""
    if z == l:
        raise DerivationError("orthogonality needs two distinct values")
    key = ("ortho", i, z, l)
    if key in b.memo:
        return b.memo[key]
    if b.bank is None:
        raise MissingZAxioms("no hypothesis bank")
    try:
        zpos, zneg = b.bank.z_axiom(i)
    except KeyError:
        raise MissingZAxioms(f"no indicator axiom for variable {i}") from None
    u, v = indicator(i, z), indicator(i, l)
    lifted = EqProof(b.mult_var(b.hyp(zpos), u), b.mult_var(b.hyp(zneg), u))
    # sum_{l' != z} u x(l') = 0, as (u*Z) - (u^2 - u)
    pair = b.combine_eq([(1, lifted), (-1, b.bool_eq(u))])
    siblings = [(1, b.lift(b.axiom("nonneg", u), [(indicator(i, m), False)])) for m in range(p) if m not in (z, l)]
    upper = b.combine([(1, pair.neg)] + siblings)
    lower = b.lift(b.axiom("nonneg", u), [(v, False)])
    eq = EqProof(lower, upper)
    b.memo[key] = eq
    return eq


def prove_violated_monomial_fp(b: ProofBuilder, a: Sequence[int], rhs: int, z: Sequence[int], p: int, row: Optional[int] = None) -> EqProof:
    """``M_z = 0`` for a z violating the row ``a . x = rhs``."""
    I = _row_of(a)
    coef = [a[i - 1] % p for i in I]
    z = tuple(z)
    if sum(c * zi for c, zi in zip(coef, z)) % p == rhs % p:
        raise NotViolating(f"z = {z} satisfies the row")
    if b.bank is None:
        raise DerivationError("no hypothesis bank")
    idx = b.bank.lookup(row, z) if row is not None else b.bank.find(a, rhs, z)
    factors = fp_factors(I, z, p)
    kill, extra = factors[: len(I)], factors[len(I):]
    neg = _kill_chain(b, b.hyp(idx), kill, extra)
    return EqProof(monomial_nonneg(b, factors), neg)


def prove_weight_identity_fp(b: ProofBuilder, I: Sequence[int], a: Sequence[int], z: Sequence[int], p: int) -> EqProof:
    """``(sum_i a_i X_i - sum_i a_i z_i) * M_z = 0`` with ``X_i = sum_l l x_i(l)``.

    ``a`` and ``z`` are indexed like ``I``.
    """
    factors = fp_factors(I, z, p)
    pos = {f: k for k, f in enumerate(factors)}
    parts = []
    for i, ai, zi in zip(I, a, z):
        ai %= p
        for l in range(p):
            w = ai * l
            if not w:
                continue
            v = indicator(i, l)
            if l == zi:
                k = pos[(v, False)]
                eq = b.bool_eq(v)
            else:
                k = pos[(v, True)]
                eq = b.bool_eq(v).flipped()
            rest = factors[:k] + factors[k + 1:]
            parts.append((w, b.lift_eq(eq, rest)))
    if not parts:
        return b.zero_eq()
    return b.combine_eq(parts)


def prove_monomial_split(b: ProofBuilder, I: Sequence[int], z: Sequence[int], p: int) -> EqProof:
    """``prod_i x_i(z_i) = M_z`` by peeling one complement factor at a time.

    With ``P_j`` the product of the ones and the first ``j`` complements,
    ``P_{j-1} - P_j = P_{j-1} * x_i(l)``, an orthogonality equation lifted
    by the remaining factors of ``P_{j-1}``.
    """
    factors = fp_factors(I, z, p)
    ones, compls = factors[: len(I)], factors[len(I):]
    decomposition = []
    for j, (v, _) in enumerate(compls):
        i, l = v.index, v.value
        zi = z[list(I).index(i)]
        others = tuple(f for f in ones if f[0].index != i)
        C = Factored(1, others + compls[:j])
        decomposition.append((C, prove_ortho(b, i, zi, l, p)))
    P = Poly.product(ones)
    Q = Poly.product(factors)
    return prove_ideal_rewrite(b, P, Q, decomposition)


def prove_partition_unity_fp(b: ProofBuilder, I: Sequence[int], p: int) -> EqProof:
    """``sum_z M_z = 1`` from the indicator axioms of the variables in I."""
    key = ("partition_fp", tuple(I), p)
    if key in b.memo:
        return b.memo[key]
    if not I:
        return b.zero_eq()
    if b.bank is None:
        raise MissingZAxioms("no hypothesis bank")
    eq: Optional[EqProof] = None
    for i in I:
        try:
            zp, zn = b.bank.z_axiom(i)
        except KeyError:
            raise MissingZAxioms(f"no indicator axiom for variable {i}") from None
        zeq = EqProof(b.hyp(zp), b.hyp(zn))
        if eq is None:
            eq = zeq
        else:
            S = Poly.linear({indicator(i, l): 1 for l in range(p)})
            eq = b.combine_eq([(1, prove_eq_mult(b, eq, S)), (1, zeq)])
    parts = [(1, eq)]
    for z in vectors(I, p):
        parts.append((-1, prove_monomial_split(b, I, z, p)))
    result = b.combine_eq(parts)
    b.memo[key] = result
    return result
