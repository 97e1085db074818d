"""Shared instance generators and measurement helpers for the test suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Sequence, Tuple

from sagauss.derivations.builder import EqProof, ProofBuilder
from sagauss.derivations.lemmas import (
    prove_partition_unity_f2,
    prove_partition_unity_fp,
    prove_violated_monomial_f2,
    prove_violated_monomial_fp,
    prove_weight_identity_f2,
    prove_weight_identity_fp,
)
from sagauss.encoder import encode_system, subsets, variable_universe, vectors
from sagauss.gf import Certificate, LinSystemFp
from sagauss.kernel import (
    LinComb,
    MultCompl,
    MultVar,
    Proof,
    ProofError,
    ProofLine,
    expected_poly,
    references,
)
from sagauss.poly import Poly
from sagauss.systems import random_unsat

CYCLE3 = LinSystemFp.from_rows(2, 3, [((1, 1, 0), 1), ((0, 1, 1), 1), ((1, 0, 1), 1)])
PAIR_F3 = LinSystemFp.from_rows(3, 2, [((1, 1), 1), ((2, 2), 1)])
X1_CLASH = LinSystemFp.from_rows(2, 1, [((1,), 0), ((1,), 1)])

CYCLE3_TEXT = "field 2\nvars 3\n1*x1 + 1*x2 = 1\n1*x2 + 1*x3 = 1\n1*x1 + 1*x3 = 1\n"
PAIR_F3_TEXT = "field 3\nvars 2\n1*x1 + 1*x2 = 1\n2*x1 + 2*x2 = 1\n"


def cone(lines, roots: Iterable[int]) -> List[int]:
    """Ids of every line that ``roots`` depend on, roots included."""
    seen = set()
    todo = list(roots)
    while todo:
        lid = todo.pop()
        if lid in seen:
            continue
        seen.add(lid)
        todo.extend(references(lines[lid].just))
    return sorted(seen)


def cone_degree(b: ProofBuilder, roots: Iterable[int]) -> int:
    return max((b.lines[i].poly.degree() for i in cone(b.lines, roots)), default=0)


def eq_degree(b: ProofBuilder, eq: EqProof) -> int:
    return cone_degree(b, (eq.pos, eq.neg))


# lemma suite


@dataclass
class LemmaCase:
    lemma: str
    p: int
    I: Tuple[int, ...]
    selector: tuple
    degree: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.degree <= self.bound


@dataclass
class LemmaBatch:
    """One builder holding several lemma proofs over a satisfiable hypothesis set."""

    builder: ProofBuilder
    universe: list
    cases: List[LemmaCase]


def row_coefficients(I: Sequence[int], p: int) -> Tuple[int, ...]:
    """Coefficients cycling through 1..p-1 so F_3 rows mix 1s and 2s."""
    return tuple((k % (p - 1)) + 1 for k in range(len(I)))


def _row_system(I: Sequence[int], coef: Sequence[int], rhs: int, p: int) -> LinSystemFp:
    n = max(I)
    a = [0] * n
    for i, c in zip(I, coef):
        a[i - 1] = c
    return LinSystemFp.from_rows(p, n, [(tuple(a), rhs)])


def f2_lemma_batches(k: int) -> Iterator[LemmaBatch]:
    I = tuple(range(1, k + 1))
    for rhs in (0, 1):
        sys = _row_system(I, [1] * k, rhs, 2)
        b = ProofBuilder(encode_system(sys, "f2"), variable_universe(sys, "f2"))
        a = sys.rows[0][0]
        cases = []
        for T in subsets(I):
            if len(T) % 2 == (1 - rhs) % 2:
                eq = prove_violated_monomial_f2(b, a, rhs, T, row=0)
                cases.append(LemmaCase("violated_f2", 2, I, T, eq_degree(b, eq), k))
            if rhs == 0:
                eq = prove_weight_identity_f2(b, I, T)
                cases.append(LemmaCase("weight_f2", 2, I, T, eq_degree(b, eq), k + 1))
        if rhs == 0:
            eq = prove_partition_unity_f2(b, I)
            cases.append(LemmaCase("partition_f2", 2, I, (), eq_degree(b, eq), k))
        yield LemmaBatch(b, variable_universe(sys, "f2"), cases)


def fp_lemma_batches(k: int, p: int) -> Iterator[LemmaBatch]:
    I = tuple(range(1, k + 1))
    coef = row_coefficients(I, p)
    for rhs in range(p):
        sys = _row_system(I, coef, rhs, p)
        b = ProofBuilder(encode_system(sys, "fp"), variable_universe(sys, "fp"))
        a = sys.rows[0][0]
        cases = []
        for z in vectors(I, p):
            if sum(c * zi for c, zi in zip(coef, z)) % p != rhs:
                eq = prove_violated_monomial_fp(b, a, rhs, z, p, row=0)
                cases.append(LemmaCase("violated_fp", p, I, z, eq_degree(b, eq), k * p))
            if rhs == 0:
                eq = prove_weight_identity_fp(b, I, coef, z, p)
                cases.append(LemmaCase("weight_fp", p, I, z, eq_degree(b, eq), k * p + 1))
        if rhs == 0:
            eq = prove_partition_unity_fp(b, I, p)
            cases.append(LemmaCase("partition_fp", p, I, (), eq_degree(b, eq), k * p))
        yield LemmaBatch(b, variable_universe(sys, "fp"), cases)


def lemma_batches(max_width: int = 4) -> Iterator[LemmaBatch]:
    for k in range(1, max_width + 1):
        yield from f2_lemma_batches(k)
        for p in (2, 3):
            yield from fp_lemma_batches(k, p)


# random unsatisfiable suite


@dataclass
class RandomInstance:
    p: int
    w: int
    n: int
    system: LinSystemFp
    cert: Certificate

    def modes(self) -> Tuple[str, ...]:
        return ("f2", "fp") if self.p == 2 else ("fp",)


# p = 5 instances are limited to width <= 2 and n <= 3: with wider rows the
# refutations reach 10^8 monomials, beyond desk-scale runtime.
SHAPES = {2: (3, 6), 3: (3, 6), 5: (2, 3)}
FIELD_CYCLE = (2, 2, 3, 3, 5)


def random_suite(count: int = 200, seed: int = 20240601) -> List[RandomInstance]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        p = FIELD_CYCLE[k % len(FIELD_CYCLE)]
        w_max, n_max = SHAPES[p]
        w = rng.randint(1, w_max)
        n = rng.randint(2, n_max)
        sys, cert = random_unsat(rng, n, p, w)
        out.append(RandomInstance(p, w, n, sys, cert))
    return out


def random_systems(count: int, seed: int) -> Iterator[LinSystemFp]:
    """Random systems of either verdict with p^n <= 2^12, for oracle comparisons."""
    from sagauss.systems import random_system

    rng = random.Random(seed)
    shapes = [(p, n) for p in (2, 3, 5, 7) for n in range(1, 13) if p ** n <= 2 ** 12]
    for _ in range(count):
        p, n = rng.choice(shapes)
        w = rng.randint(1, min(3, n))
        m = rng.randint(1, n + 2)
        yield random_system(rng, n, p, w, m)


# tampering


def mutate(proof: Proof, rng: random.Random):
    """One effective single-line mutation; returns (new proof, mutated line id)."""
    lines = list(proof.lines)
    polys = [ln.poly for ln in lines]
    while True:
        k = rng.randrange(len(lines))
        ln = lines[k]
        j = ln.just
        kind = rng.choice(["coefficient", "scalar", "reference", "rule"])
        new = None
        if kind == "coefficient":
            terms = dict(ln.poly.terms)
            if terms and rng.random() < 0.7:
                m = rng.choice(sorted(terms, key=repr))
                terms[m] = terms[m] + rng.choice([1, -1, Fraction(1, 2)])
            else:
                terms[(("x1", 1),)] = terms.get((("x1", 1),), 0) + 1
            new = ProofLine(k, Poly(terms), j)
        elif kind == "scalar" and isinstance(j, LinComb):
            a = j.a + rng.choice([1, Fraction(1, 3)]) if rng.random() < 0.5 else j.a
            b = j.b if a != j.a else j.b + rng.choice([1, Fraction(1, 3)])
            new = ProofLine(k, ln.poly, LinComb(j.p1, a, j.p2, b))
        elif kind == "reference" and isinstance(j, (LinComb, MultVar, MultCompl)) and k > 1:
            r = rng.randrange(k)
            if isinstance(j, LinComb):
                new = ProofLine(k, ln.poly, LinComb(r, j.a, j.p2, j.b))
            else:
                new = ProofLine(k, ln.poly, type(j)(r, j.var))
        elif kind == "rule" and isinstance(j, (MultVar, MultCompl)):
            other = MultCompl if isinstance(j, MultVar) else MultVar
            new = ProofLine(k, ln.poly, other(j.p1, j.var))
        if new is None:
            continue
        try:
            if expected_poly(new.just, proof.hypotheses, polys, k) == new.poly:
                continue  # the mutation happened to be harmless
        except ProofError:
            pass
        lines[k] = new
        return Proof(proof.hypotheses, lines, proof.goal, proof.modulus, proof.mode), k
