"""Refutations of unsatisfiable linear systems by simulated Gaussian elimination.

Given a certificate ``(J, y)`` the level forms

    L_k = (1/p) * (sum_{j<k} y_j a_j . X + sum_{j>=k} y_j b_j)

interpolate between the constant ``L_0 = q + 1/p`` and an integer form
``L_K``.  ``D_c(L_K) >= 0`` comes from the gap prover; each level is then
peeled off by multiplying with extended monomials, rewriting with the
weight identities, discarding the monomials that violate the row, and
summing back to ``D_c(L_k) >= 0``.  At level 0 the statement is the
negative constant ``(1 - p)/p^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from ..encoder import (
    encode_system,
    f2_factors,
    fp_factors,
    indicator,
    plain,
    subsets,
    variable_universe,
    vectors,
)
from ..gf import Certificate, LinSystemFp, support
from ..kernel import Proof
from ..poly import ONE, Poly, as_rational, rational
from .builder import DerivationError, EqProof, ProofBuilder, mult_side, prove_eq_mult
from .gap import prove_gap
from .lemmas import (
    prove_partition_unity_fp,
    prove_violated_monomial_f2,
    prove_violated_monomial_fp,
    prove_weight_identity_f2,
    prove_weight_identity_fp,
)


class InvalidCertificate(DerivationError):
    pass


@dataclass(frozen=True)
class LevelForm:
    k: int
    poly: Poly


@dataclass(frozen=True)
class ThresholdPlan:
    """Thresholds needed per level, and the upper end of the admissible range."""

    levels: Tuple[Tuple[int, ...], ...]
    bounds: Tuple[int, ...]

    def contained(self) -> bool:
        return all(all(0 <= c <= hi for c in cs) for cs, hi in zip(self.levels, self.bounds))


class _Regime:
    mode = ""

    def __init__(self, p: int):
        self.p = p

    def X(self, i: int) -> Poly:
        raise NotImplementedError

    def selectors(self, I, coef, rhs):
        raise NotImplementedError


class F2Regime(_Regime):
    mode = "f2"

    def X(self, i: int) -> Poly:
        return Poly.var(plain(i))

    def selectors(self, I, coef, rhs):
        for T in subsets(I):
            yield T, len(T), len(T) % 2 == rhs % 2

    def factors(self, I, sel):
        return f2_factors(I, sel)

    def weight_eq(self, b, I, coef, sel):
        return prove_weight_identity_f2(b, I, sel)

    def violated_eq(self, b, row, a, rhs, sel):
        return prove_violated_monomial_f2(b, a, rhs, sel, row=row)

    def partition_eq(self, b, I) -> Optional[EqProof]:
        return None


class FpRegime(_Regime):
    mode = "fp"

    def X(self, i: int) -> Poly:
        return Poly.linear({indicator(i, l): l for l in range(1, self.p)})

    def selectors(self, I, coef, rhs):
        for z in vectors(I, self.p):
            t = sum(c * zi for c, zi in zip(coef, z))
            yield z, t, t % self.p == rhs % self.p

    def factors(self, I, sel):
        return fp_factors(I, sel, self.p)

    def weight_eq(self, b, I, coef, sel):
        return prove_weight_identity_fp(b, I, coef, sel, self.p)

    def violated_eq(self, b, row, a, rhs, sel):
        return prove_violated_monomial_fp(b, a, rhs, sel, self.p, row=row)

    def partition_eq(self, b, I) -> Optional[EqProof]:
        return prove_partition_unity_fp(b, I, self.p)


def _regime(mode: str, p: int) -> _Regime:
    if mode == "f2":
        if p != 2:
            raise ValueError("f2 mode needs p = 2")
        return F2Regime(p)
    if mode == "fp":
        return FpRegime(p)
    raise ValueError(f"unknown mode {mode!r}")


def _multipliers(sys: LinSystemFp, cert: Certificate, mode: str) -> Tuple[int, ...]:
    return tuple(1 for _ in cert.J) if mode == "f2" else tuple(y % sys.p for y in cert.y)


def level_forms(sys: LinSystemFp, cert: Certificate, mode: str) -> List[LevelForm]:
    reg = _regime(mode, sys.p)
    p = sys.p
    ys = _multipliers(sys, cert, mode)
    K = len(cert.J)
    forms = []
    for k in range(K + 1):
        acc = Poly()
        for idx, (j, y) in enumerate(zip(cert.J, ys)):
            a, b = sys.rows[j]
            if idx < k:
                for i0, c in enumerate(a):
                    if c:
                        acc = acc + reg.X(i0 + 1).scale(y * c)
            else:
                acc = acc + y * b
        forms.append(LevelForm(k, acc.scale(rational(1, p))))
    return forms


def endgame_total(sys: LinSystemFp, cert: Certificate, mode: str) -> int:
    """``sum_j y_j b_j`` over the integers; congruent to 1 mod p."""
    ys = _multipliers(sys, cert, mode)
    return sum(y * sys.rows[j][1] for j, y in zip(cert.J, ys))


def plan_thresholds(sys: LinSystemFp, cert: Certificate, mode: str) -> ThresholdPlan:
    """Backward closure from ``q + 1`` at level 0."""
    reg = _regime(mode, sys.p)
    p = sys.p
    ys = _multipliers(sys, cert, mode)
    total = endgame_total(sys, cert, mode)
    q = (total - 1) // p
    levels: List[Set[int]] = [{q + 1}]
    for j, y in zip(cert.J, ys):
        a, b = sys.rows[j]
        I = [k + 1 for k in support(a)]
        coef = [a[i - 1] for i in I]
        shifts = set()
        for _, t, good in reg.selectors(I, coef, b):
            if good:
                shifts.add((t - b) * y // p)
        levels.append({c + s for c in levels[-1] for s in shifts})
    n = sys.n
    scale = 1 if mode == "f2" else p * p
    bounds = tuple((k + 1) * scale * n for k in range(len(levels)))
    return ThresholdPlan(tuple(tuple(sorted(cs)) for cs in levels), bounds)


class _LevelStep:
    """Everything reused across thresholds when peeling one row."""

    def __init__(self, b: ProofBuilder, reg: _Regime, sys: LinSystemFp, row: int, y: int, Lk: Poly, L: Poly):
        self.b = b
        self.Lk = Lk
        self.s = rational(y, sys.p)
        a, rhs = sys.rows[row]
        I = [k + 1 for k in support(a)]
        coef = [a[i - 1] for i in I]
        self.good = []
        groups: Dict[int, List] = {}
        vanish = []
        for sel, t, good in reg.selectors(I, coef, rhs):
            if good:
                groups.setdefault(t, []).append((reg.factors(I, sel), reg.weight_eq(b, I, coef, sel)))
            else:
                vanish.append((1, reg.violated_eq(b, row, a, rhs, sel)))
        # Selectors of equal weight t share the threshold shift, so their
        # weight identities are summed before being multiplied by L and L_k.
        for t, members in sorted(groups.items()):
            eqA = b.combine_eq((1, e) for _, e in members)
            self.good.append(
                (
                    rational((t - rhs) * y, sys.p),
                    [f for f, _ in members],
                    eqA,
                    mult_side(b, eqA, L, -1),
                    mult_side(b, eqA, Lk, -1),
                )
            )
        # Residual R = 1 - sum_good M: the violated monomials plus, with
        # indicator variables, 1 - sum_all M.  R, L_k R and L_k^2 R are
        # shared by every threshold of this level.
        E0 = reg.partition_eq(b, I)
        if E0 is not None:
            vanish.append((-1, E0))
        r0 = b.combine_eq(vanish) if vanish else b.zero_eq()
        r1 = prove_eq_mult(b, r0, Lk)
        self.residual = (r0, r1, mult_side(b, r1, Lk, 1))

    def derive(self, c: int, upper: Dict[int, int]) -> int:
        b, s = self.b, self.s
        parts = []
        for shift, factor_lists, eqA, negLA, negLkA in self.good:
            d = as_rational(c + shift)
            items = [(1, b.lift(upper[d], f)) for f in factor_lists]
            # -s (L - d + 1) A >= 0 turns (L - d) into (L_k - c)
            items += [(s, negLA), (s * abs(d - 1), eqA.side(d - 1))]
            # -s (L_k - c) A >= 0 turns (L - d + 1) into (L_k - c + 1)
            items += [(s, negLkA), (s * abs(c), eqA.side(c))]
            parts.append((1, b.combine(items)))
        # D_c(L_k) R = L_k^2 R + (1 - 2c) L_k R + c(c - 1) R
        lin, const = 1 - 2 * c, c * (c - 1)
        r0, r1, r2 = self.residual
        parts.append((1, b.combine([(1, r2), (abs(lin), r1.side(lin)), (const, r0.pos)])))
        return b.combine(parts)


def _validate(sys: LinSystemFp, cert: Certificate, mode: str) -> None:
    if not isinstance(cert, Certificate) or not cert.verify(sys):
        raise InvalidCertificate("certificate does not witness inconsistency")
    if mode == "f2" and sys.p != 2:
        raise ValueError("f2 mode needs p = 2")


def refute(sys: LinSystemFp, cert: Certificate, mode: str) -> Proof:
    _validate(sys, cert, mode)
    reg = _regime(mode, sys.p)
    p = sys.p
    bank = encode_system(sys, mode)
    b = ProofBuilder(bank, variable_universe(sys, mode))

    for j in cert.J:
        a, rhs = sys.rows[j]
        if not any(a) and rhs:
            b.hyp(bank.lookup(j, ()))
            return b.proof(Poly.const(-1))

    forms = [f.poly for f in level_forms(sys, cert, mode)]
    K = len(cert.J)
    top = forms[K]
    if ONE in top.terms or not all(isinstance(c, int) for c in top.terms.values()):
        raise DerivationError(f"top level form {top} is not an integer form")
    total = endgame_total(sys, cert, mode)
    if total % p != 1:
        raise DerivationError("multipliers do not sum to 1 mod p")
    q = (total - 1) // p
    plan = plan_thresholds(sys, cert, mode)
    if not plan.contained():
        raise DerivationError("planned thresholds leave the admissible range")

    lines = {c: prove_gap(b, top, c) for c in plan.levels[K]}
    ys = _multipliers(sys, cert, mode)
    for k in reversed(range(K)):
        step = _LevelStep(b, reg, sys, cert.J[k], ys[k], forms[k], forms[k + 1])
        lines = {c: step.derive(c, lines) for c in plan.levels[k]}

    final = lines[q + 1]
    if b.poly(final) != Poly.const(rational(1 - p, p * p)):
        raise DerivationError(f"endgame constant is {b.poly(final)}")
    b.scale(final, rational(p * p, p - 1))
    return b.proof(Poly.const(-1))


def refute_f2(sys: LinSystemFp, cert: Certificate) -> Proof:
    return refute(sys, cert, "f2")


def refute_fp(sys: LinSystemFp, cert: Certificate) -> Proof:
    return refute(sys, cert, "fp")
