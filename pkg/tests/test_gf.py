import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sagauss.gf import (
    Certificate,
    LinSystemFp,
    NonPrimeModulus,
    Satisfiable,
    Solution,
    TooLarge,
    Unsatisfiable,
    ZeroInverse,
    brute_force_sat,
    fp_inverse,
    rank,
    solve,
)

from support import CYCLE3, PAIR_F3, random_systems


def test_cycle_certificate():
    cert = solve(CYCLE3)
    assert isinstance(cert, Certificate)
    assert cert.J == (0, 1, 2) and cert.y == (1, 1, 1)
    assert cert.verify(CYCLE3)


def test_pair_certificate():
    cert = solve(PAIR_F3)
    assert cert.J == (0, 1) and cert.y == (2, 2)


def test_single_row_solution():
    sys = LinSystemFp.from_rows(2, 2, [((1, 1), 1)])
    res = solve(sys)
    assert isinstance(res, Solution) and sys.satisfied_by(res.x)
    assert brute_force_sat(sys) == Satisfiable((0, 1))


def test_inverse():
    assert fp_inverse(2, 5) == 3
    assert fp_inverse(1, 2) == 1
    assert fp_inverse(4, 7) == 2
    with pytest.raises(ZeroInverse):
        fp_inverse(7, 7)


def test_non_prime_and_cap():
    with pytest.raises(NonPrimeModulus):
        LinSystemFp.from_rows(4, 1, [((1,), 1)])
    with pytest.raises(TooLarge):
        brute_force_sat(LinSystemFp.from_rows(2, 21, []))


def test_brute_force_examples():
    assert isinstance(brute_force_sat(CYCLE3), Unsatisfiable)
    assert isinstance(brute_force_sat(PAIR_F3), Unsatisfiable)


def test_empty_support_rows():
    sys = LinSystemFp.from_rows(3, 2, [((0, 0), 0), ((1, 0), 1), ((0, 0), 2)])
    cert = solve(sys)
    assert cert.J == (2,) and cert.y == (2,)
    assert isinstance(solve(LinSystemFp.from_rows(3, 2, [((0, 0), 0)])), Solution)


def check_against_oracle(sys):
    res = solve(sys)
    oracle = brute_force_sat(sys)
    if isinstance(res, Certificate):
        assert isinstance(oracle, Unsatisfiable)
        assert res.verify(sys)
        assert len(res.J) <= rank(sys) + 1
    else:
        assert isinstance(oracle, Satisfiable)
        assert sys.satisfied_by(res.x)


def test_oracle_agreement_random():
    for sys in random_systems(300, seed=11):
        check_against_oracle(sys)


@st.composite
def systems(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 5))
    rows = [
        (tuple(draw(st.integers(0, p - 1)) for _ in range(n)), draw(st.integers(0, p - 1)))
        for _ in range(m)
    ]
    return LinSystemFp.from_rows(p, n, rows)


@settings(max_examples=200, deadline=None)
@given(systems())
def test_oracle_agreement_property(sys):
    check_against_oracle(sys)


@settings(max_examples=100, deadline=None)
@given(systems(), st.data())
def test_row_scaling_preserves_verdict(sys, data):
    rows = []
    for a, b in sys.rows:
        s = data.draw(st.integers(1, sys.p - 1))
        rows.append((tuple(s * c for c in a), s * b))
    scaled = LinSystemFp.from_rows(sys.p, sys.n, rows)
    assert isinstance(solve(sys), Certificate) == isinstance(solve(scaled), Certificate)


def test_determinism():
    rng = random.Random(3)
    for sys in random_systems(50, seed=rng.randrange(10**6)):
        assert solve(sys) == solve(sys)
