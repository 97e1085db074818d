import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sagauss.derivations.builder import ProofBuilder
from sagauss.derivations.gap import prove_gap
from sagauss.derivations.refute import refute
from sagauss.encoder import plain
from sagauss.gf import solve
from sagauss.kernel import (
    Axiom,
    BadHypIndex,
    BadReference,
    FlavorMixing,
    Hypothesis,
    LinComb,
    MultCompl,
    MultVar,
    NegativeScalar,
    Proof,
    ProofError,
    ProofLine,
    PolyMismatch,
    UniverseTooLarge,
    check,
    is_refutation,
    metrics,
    soundness_probe,
)
from sagauss.poly import Poly, VarId, parse_poly

from support import CYCLE3, mutate

X1, X2 = VarId(1), VarId(2)


def line(i, text, just):
    return ProofLine(i, parse_poly(text), just)


def test_single_axiom_metrics():
    proof = Proof([], [line(0, "x1^2 - x1", Axiom("bool_up", X1))])
    m = check(proof)
    assert (m.degree, m.length, m.size, m.tree_like) == (2, 0, 3, True)
    assert metrics(proof) == m


def test_negative_scalar():
    proof = Proof([], [line(0, "x1", Axiom("nonneg", X1)), line(1, "-x1", LinComb(0, -1, 0, 0))])
    with pytest.raises(NegativeScalar) as exc:
        check(proof)
    assert exc.value.line == 1


def test_poly_mismatch_names_line():
    proof = Proof([], [line(0, "x1", Axiom("nonneg", X1)), line(1, "x1", MultVar(0, X2))])
    with pytest.raises(PolyMismatch) as exc:
        check(proof)
    assert exc.value.line == 1
    assert exc.value.expected == parse_poly("x1*x2")


def test_forward_reference_and_bad_hypothesis():
    with pytest.raises(BadReference):
        check(Proof([], [line(0, "x1", MultVar(0, X1))]))
    with pytest.raises(BadHypIndex):
        check(Proof([parse_poly("x1")], [line(0, "x1", Hypothesis(1))]))


def test_flavor_mixing():
    proof = Proof(
        [],
        [line(0, "x1", Axiom("nonneg", X1)), line(1, "x1*x2_0", MultVar(0, VarId(2, 0)))],
    )
    with pytest.raises(FlavorMixing):
        check(proof)
    with pytest.raises(FlavorMixing):
        check(Proof([], [line(0, "x1", Axiom("nonneg", X1))], mode="fp", modulus=3))


def test_is_refutation():
    base = [line(0, "x1", Axiom("nonneg", X1)), line(1, "-x1 + 1", Axiom("compl", X1))]
    assert not is_refutation(Proof([], base + [line(2, "0", LinComb(0, 0, 1, 0))]))
    minus_quarter = Proof([parse_poly("-1/4")], [line(0, "-1/4", Hypothesis(0))])
    assert not is_refutation(minus_quarter)
    minus_one = Proof([parse_poly("-1/4")], [line(0, "-1/4", Hypothesis(0)), line(1, "-1", LinComb(0, 4, 0, 0))])
    check(minus_one)
    assert is_refutation(minus_one)


def test_tree_like_detection():
    lines = [line(0, "x1", Axiom("nonneg", X1)), line(1, "x1*x2", MultVar(0, X2)), line(2, "x1 - x1*x2", MultCompl(0, X2))]
    assert not check(Proof([], lines)).tree_like
    assert check(Proof([], lines[:2])).tree_like


def test_soundness_probe_examples():
    b = ProofBuilder(universe=[X1, X2])
    L = Poly.var(X1) + Poly.var(X2)
    lid = prove_gap(b, L, 1)
    proof = b.proof()
    check(proof)
    assert proof.lines[lid].poly == (L - 1) * L
    values = sorted(proof.lines[lid].poly.eval({X1: u, X2: v}) for u in (0, 1) for v in (0, 1))
    assert values == [0, 0, 0, 2]
    rep = soundness_probe(proof, [X1, X2])
    assert rep.sound and rep.satisfying == 4

    assert soundness_probe(Proof([], []), []).sound

    ref = refute(CYCLE3, solve(CYCLE3), "f2")
    rep = soundness_probe(ref, [plain(i) for i in (1, 2, 3)])
    assert rep.points == 8 and rep.satisfying == 0


def test_soundness_probe_finds_violation_and_cap():
    # an unchecked, unsound line: -x1 >= 0 without hypotheses
    proof = Proof([], [line(0, "-x1", Axiom("nonneg", X1))])
    rep = soundness_probe(proof, [X1])
    assert rep.violations == [(0, {"x1": 1})]
    with pytest.raises(UniverseTooLarge):
        soundness_probe(proof, [VarId(i) for i in range(1, 22)])


def _regression_proof():
    return refute(CYCLE3, solve(CYCLE3), "f2")


def test_cycle_refutation_metrics_frozen():
    # frozen from the first accepted pipeline run
    m = check(_regression_proof())
    assert (m.degree, m.length, m.size, m.line_count, m.tree_like) == (4, 183, 3138, 199, False)


def test_metrics_monotone_under_append():
    proof = _regression_proof()
    prev = None
    for k in range(1, len(proof.lines) + 1, 17):
        m = metrics(Proof(proof.hypotheses, proof.lines[:k]))
        if prev is not None:
            assert m.length >= prev.length and m.size >= prev.size and m.degree >= prev.degree
        prev = m


# tampering


def test_tamper_fuzz():
    proof = _regression_proof()
    rng = random.Random(5)
    for _ in range(40):
        bad, k = mutate(proof, rng)
        with pytest.raises(ProofError) as exc:
            check(bad)
        assert exc.value.line == k


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_gap_proofs_accepted(a, c):
    b = ProofBuilder(universe=[X1, X2])
    L = Poly.var(X1).scale(a) + Poly.var(X2).scale(2)
    if a == 0:
        L = Poly.var(X2).scale(2)
    lid = prove_gap(b, L, c)
    proof = b.proof()
    m = check(proof)
    assert m.degree <= 3
    assert proof.lines[lid].poly == (L - c) * (L - c + 1)
    assert soundness_probe(proof, [X1, X2]).sound
