"""Semi-algebraic proofs: lines, rule checking and complexity measures.

A proof is a list of lines, each asserting ``poly >= 0`` together with the
rule that justifies it.  The checker never trusts a recorded polynomial: it
recomputes what the rule mandates from the recorded polynomials of earlier
lines and demands structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .poly import Poly, Rational, VarId, as_rational, bool_poly

AXIOM_KINDS = ("nonneg", "compl", "bool_up", "bool_down")


class ProofError(Exception):
    """A rule violation; ``line`` is the offending line id when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class BadReference(ProofError):
    pass


class NegativeScalar(ProofError):
    pass


class PolyMismatch(ProofError):
    def __init__(self, line: int, expected: Poly, found: Poly):
        super().__init__(f"recorded {found} but rule yields {expected}", line)
        self.expected = expected
        self.found = found


class FlavorMixing(ProofError):
    pass


class BadHypIndex(ProofError):
    pass


class BadLineId(ProofError):
    pass


class GoalMismatch(ProofError):
    pass


class UniverseTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Axiom:
    kind: str
    var: VarId

    def __post_init__(self) -> None:
        if self.kind not in AXIOM_KINDS:
            raise ValueError(f"unknown axiom kind {self.kind!r}")


@dataclass(frozen=True)
class Hypothesis:
    index: int


@dataclass(frozen=True)
class LinComb:
    p1: int
    a: Rational
    p2: int
    b: Rational


@dataclass(frozen=True)
class MultVar:
    p1: int
    var: VarId


@dataclass(frozen=True)
class MultCompl:
    p1: int
    var: VarId


Justification = Union[Axiom, Hypothesis, LinComb, MultVar, MultCompl]


def axiom_poly(kind: str, v: VarId) -> Poly:
    x = Poly.var(v)
    if kind == "nonneg":
        return x
    if kind == "compl":
        return 1 - x
    if kind == "bool_up":
        return bool_poly(v)
    if kind == "bool_down":
        return -bool_poly(v)
    raise ValueError(f"unknown axiom kind {kind!r}")


def references(just: Justification) -> Tuple[int, ...]:
    if isinstance(just, LinComb):
        return (just.p1,) if just.p1 == just.p2 else (just.p1, just.p2)
    if isinstance(just, (MultVar, MultCompl)):
        return (just.p1,)
    return ()


def is_inference(just: Justification) -> bool:
    return isinstance(just, (LinComb, MultVar, MultCompl))


@dataclass(frozen=True)
class ProofLine:
    id: int
    poly: Poly
    just: Justification


@dataclass
class Proof:
    hypotheses: List[Poly]
    lines: List[ProofLine] = field(default_factory=list)
    goal: Optional[Poly] = None
    modulus: int = 2
    mode: str = "f2"

    @property
    def last(self) -> Optional[ProofLine]:
        return self.lines[-1] if self.lines else None


@dataclass(frozen=True)
class ProofMetrics:
    degree: int
    length: int
    size: int
    tree_like: bool
    line_count: int
    max_coeff_bits: int


def expected_poly(just: Justification, hypotheses: Sequence[Poly], polys: Sequence[Poly], line_id: int) -> Poly:
    """Polynomial mandated by ``just`` for line ``line_id``.

    ``polys`` holds the recorded polynomials of lines ``0..line_id-1``.
    """
    for ref in references(just):
        if not isinstance(ref, int) or ref < 0 or ref >= line_id:
            raise BadReference(f"reference to line {ref} is not backward", line_id)
    if isinstance(just, Axiom):
        return axiom_poly(just.kind, just.var)
    if isinstance(just, Hypothesis):
        if not 0 <= just.index < len(hypotheses):
            raise BadHypIndex(f"no hypothesis {just.index}", line_id)
        return hypotheses[just.index]
    if isinstance(just, LinComb):
        if just.a < 0 or just.b < 0:
            raise NegativeScalar(f"negative scalar in ({just.a}, {just.b})", line_id)
        return polys[just.p1].add_scaled(just.a, polys[just.p2], just.b)
    if isinstance(just, MultVar):
        return polys[just.p1].mul_var(just.var)
    if isinstance(just, MultCompl):
        return polys[just.p1].mul_var(just.var, complemented=True)
    raise ProofError(f"unknown justification {just!r}", line_id)


def _flavor_of(vars_: Sequence[VarId]) -> set:
    return {v.is_indicator for v in vars_}


def _check_flavor(proof: Proof) -> None:
    """Reject proofs mixing plain and indicator variables.

    Every variable of a verified line comes from a hypothesis or from the
    variable named by an axiom or lifting step, so those are all we scan.
    """
    flavors = set()
    for h in proof.hypotheses:
        flavors |= _flavor_of(h.variables())
    if len(flavors) > 1:
        raise FlavorMixing("hypotheses mix plain and indicator variables")
    for line in proof.lines:
        if isinstance(line.just, (Axiom, MultVar, MultCompl)):
            flavors.add(line.just.var.is_indicator)
            if len(flavors) > 1:
                raise FlavorMixing("plain and indicator variables mixed", line.id)
    expected = {"f2": {False}, "fp": {True}}.get(proof.mode)
    if expected is not None and flavors and flavors != expected:
        raise FlavorMixing(f"variables do not match mode {proof.mode!r}")


def check(proof: Proof) -> ProofMetrics:
    """Verify every line; return the metrics or raise the first violation."""
    _check_flavor(proof)
    polys: List[Poly] = []
    for pos, line in enumerate(proof.lines):
        if line.id != pos:
            raise BadLineId(f"line at position {pos} carries id {line.id}", pos)
        exp = expected_poly(line.just, proof.hypotheses, polys, pos)
        if exp != line.poly:
            raise PolyMismatch(pos, exp, line.poly)
        polys.append(line.poly)
    if proof.goal is not None:
        last = proof.last
        if last is None or last.poly != proof.goal:
            raise GoalMismatch("final line does not match the goal", None if last is None else last.id)
    return metrics(proof)


def is_refutation(proof: Proof) -> bool:
    last = proof.last
    return last is not None and last.poly == Poly.const(-1)


def _rat_bits(c: Rational) -> int:
    if type(c) is int:
        return abs(c).bit_length()
    c = as_rational(c)
    if isinstance(c, int):
        return abs(c).bit_length()
    return max(abs(c.numerator).bit_length(), c.denominator.bit_length())


def _coeff_bits(p: Poly) -> int:
    if not p.terms:
        return 0
    vals = p.terms.values()
    num = max(abs(c.numerator) for c in vals)
    den = max(c.denominator for c in vals)
    return max(num.bit_length(), den.bit_length())


def metrics(proof: Proof) -> ProofMetrics:
    """Complexity measures of a (previously checked) proof.

    Length counts LinComb/MultVar/MultCompl lines only; size sums polynomial
    sizes over lines; a line counts as used once per distinct consumer.
    """
    uses: Dict[int, int] = {}
    degree = max((h.degree() for h in proof.hypotheses), default=0)
    length = size = bits = 0
    for line in proof.lines:
        d, sz = line.poly.shape()
        degree = max(degree, d)
        size += sz
        bits = max(bits, _coeff_bits(line.poly))
        if is_inference(line.just):
            length += 1
        if isinstance(line.just, LinComb):
            bits = max(bits, _rat_bits(line.just.a), _rat_bits(line.just.b))
        for ref in references(line.just):
            uses[ref] = uses.get(ref, 0) + 1
    tree_like = all(n <= 1 for n in uses.values())
    return ProofMetrics(degree, length, size, tree_like, len(proof.lines), bits)


# soundness probing over Boolean points


@dataclass
class SoundnessReport:
    points: int
    satisfying: int
    violations: List[Tuple[int, Dict[str, int]]]

    @property
    def sound(self) -> bool:
        return not self.violations


def _integer_form(p: Poly) -> Tuple[list, list]:
    from math import lcm

    den = 1
    for c in p.terms.values():
        den = lcm(den, int(getattr(c, "denominator", 1)))
    monos, coefs = [], []
    for m, c in p.terms.items():
        monos.append(tuple(n for n, _ in m))
        coefs.append(int(c * den))
    return monos, coefs


def _evaluate_sign(p: Poly, cols: Dict[str, np.ndarray], count: int) -> np.ndarray:
    """Values of ``p`` scaled by a positive integer, at every point of ``cols``."""
    monos, coefs = _integer_form(p)
    use_obj = sum(abs(c) for c in coefs) >= 2**62
    acc = np.zeros(count, dtype=object if use_obj else np.int64)
    for names, c in zip(monos, coefs):
        if not names:
            acc += c
            continue
        try:
            mask = cols[names[0]].copy()
            for n in names[1:]:
                mask &= cols[n]
        except KeyError as exc:
            raise ValueError(f"universe lacks variable {exc.args[0]}") from None
        if use_obj:
            acc[mask] += c
        else:
            acc += c * mask
    return acc


def soundness_probe(proof: Proof, var_universe: Sequence[VarId], cap: int = 2**20) -> SoundnessReport:
    """Evaluate hypotheses and lines at every 0/1 point of ``var_universe``.

    Every line must be non-negative wherever all hypotheses are.  Returns the
    number of hypothesis-satisfying points and any violations found.
    """
    universe = sorted(set(var_universe), key=lambda v: v.sort_key)
    npoints = 2 ** len(universe)
    if npoints > cap:
        raise UniverseTooLarge(f"2^{len(universe)} points exceed cap {cap}")
    grid = np.array(list(product((0, 1), repeat=len(universe))), dtype=bool).reshape(npoints, len(universe))
    cols = {v.name: grid[:, k] for k, v in enumerate(universe)}
    ok = np.ones(npoints, dtype=bool)
    for h in proof.hypotheses:
        ok &= _evaluate_sign(h, cols, npoints) >= 0
    rows = np.nonzero(ok)[0]
    violations: List[Tuple[int, Dict[str, int]]] = []
    if len(rows):
        sub = {n: col[rows] for n, col in cols.items()}
        for line in proof.lines:
            vals = _evaluate_sign(line.poly, sub, len(rows))
            bad = np.nonzero(vals < 0)[0]
            if len(bad):
                pt = grid[rows[bad[0]]]
                violations.append((line.id, {v.name: int(pt[k]) for k, v in enumerate(universe)}))
    return SoundnessReport(npoints, int(len(rows)), violations)
