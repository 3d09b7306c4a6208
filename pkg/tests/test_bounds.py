import itertools
import random
from fractions import Fraction

import mpmath
import pytest

from kohnalg.bounds import (
    Enclosure,
    GradedMonomialRing,
    MatsusakaInput,
    TruncationInsufficient,
    generation_bound,
    generation_bound_check,
    generation_degree,
    kx_coefficient,
    matsusaka_bound,
    matsusaka_constant,
    ot_constant,
    skoda_exponents,
)
from oracles import semigroup_generation_degree

# -- Matsusaka -------------------------------------------------------------


def test_matsusaka_n2():
    assert matsusaka_constant(2) == 16  # 2^(1+2) * 1 * 2
    assert kx_coefficient(2) == 45  # 4 * C(5, 2) + 5
    r = matsusaka_bound(MatsusakaInput(2, 1, 1))
    assert r.bound == 32 and r.C_n == 16 and r.exponent == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_matsusaka_folds_agree(n):
    assert matsusaka_constant(n, "left") == matsusaka_constant(n, "right")
    for lk, ln in [(1, 1), (3, 2), (0, 5), (-1, 4)]:
        inp = MatsusakaInput(n, lk, ln)
        assert matsusaka_bound(inp, "left") == matsusaka_bound(inp, "right")


def test_matsusaka_n3_by_hand():
    # 2^(2+4) * (1 * 2^1)^1 * (2 * 1)^1 * (3 * 2^0)^2
    assert matsusaka_constant(3) == 64 * 2 * 2 * 9
    r = matsusaka_bound(MatsusakaInput(3, 2, 4))
    assert r.bound == Fraction(matsusaka_constant(3)) * 2**2 * Fraction(3, 2) ** 2


def test_matsusaka_is_exact():
    r = matsusaka_bound(MatsusakaInput(8, 7, 3))
    assert isinstance(r.bound, Fraction)
    assert r.bound == matsusaka_constant(8) * 7**64 * Fraction(10, 3) ** 64


def test_matsusaka_rejects_bad_input():
    with pytest.raises(ValueError):
        MatsusakaInput(0, 1, 1)
    with pytest.raises(ValueError):
        MatsusakaInput(2, 1, 0)
    with pytest.raises(ValueError):
        matsusaka_constant(2, "middle")


# -- OT constant -----------------------------------------------------------


def _reference() -> mpmath.mpf:
    with mpmath.workdps(60):
        return 8 * mpmath.pi * mpmath.e * mpmath.sqrt(2 + 1 / mpmath.e)


def test_ot_two_digits():
    enc = ot_constant(Fraction(1, 100))
    assert Fraction("105.13") in enc and enc.width <= Fraction(1, 100)


def test_ot_six_digits():
    enc = ot_constant()
    assert enc.width <= Fraction(1, 10**6)
    ref = _reference()
    with mpmath.workdps(60):
        assert mpmath.mpf(enc.lo.numerator) / enc.lo.denominator < ref
        assert ref < mpmath.mpf(enc.hi.numerator) / enc.hi.denominator


def test_ot_enclosures_nested():
    encs = [ot_constant(Fraction(1, 10**k)) for k in range(1, 13)]
    for coarse, fine in zip(encs, encs[1:]):
        assert fine.within(coarse)
    mid = encs[-1].midpoint
    assert all(mid in e for e in encs)


def test_ot_arbitrary_precision():
    enc = ot_constant("3/1000")
    assert enc.width <= Fraction(3, 1000)
    with pytest.raises(ValueError):
        ot_constant(0)


def test_enclosure_helpers():
    e = Enclosure(Fraction(1), Fraction(3))
    assert e.width == 2 and e.midpoint == 2 and 3 in e and 4 not in e
    assert Enclosure(Fraction(2), Fraction(3)).within(e)


# -- Skoda -----------------------------------------------------------------


def test_skoda_examples():
    s = skoda_exponents(2, 1)
    assert (s.alpha, s.q, s.inner_exponent) == (Fraction(3, 2), 2, 8)
    s = skoda_exponents(1, 1)
    assert (s.alpha, s.q, s.inner_exponent) == (2, 1, 6)
    s = skoda_exponents(3, 2)
    assert (s.alpha, s.q, s.inner_exponent) == (Fraction(5, 3), 3, 12)


def test_skoda_identity_exhaustive():
    for n, k in itertools.product(range(1, 7), range(1, 11)):
        s = skoda_exponents(n, k)
        alpha = Fraction(n + k, n)
        assert 2 * alpha * n + 2 == 2 * (n + k + 1) == s.inner_exponent == s.target
        assert s.outer_exponent == s.inner_exponent - 2
        assert s.constant == alpha / (alpha - 1)


def test_skoda_unpadded_q():
    assert skoda_exponents(3, 1, p=2).q_unpadded == 1
    assert skoda_exponents(3, 1, p=9).q_unpadded == 3
    with pytest.raises(ValueError):
        skoda_exponents(0, 1)


# -- generation degree -----------------------------------------------------


def test_semigroup_2_3():
    R = GradedMonomialRing.semigroup([2, 3], 12)
    assert generation_degree(R).degree == 3
    assert generation_bound(1, 2, 1) == 6
    assert generation_bound_check(R, 1, 2, 1)


def test_polynomial_ring():
    R = GradedMonomialRing.polynomial_ring(2, 8)
    assert generation_degree(R).degree == 1
    assert generation_bound_check(R, 2, 2, 0)


def test_veronese():
    R = GradedMonomialRing.veronese(2, 2, 8)
    res = generation_degree(R)
    assert res.degree == 1
    # every factorization multiplies back to its monomial
    for (m, mono), factors in res.factorizations.items():
        assert sum(d for d, _ in factors) == m
        assert tuple(map(sum, zip(*[f for _, f in factors]))) == mono


def test_adversarial_degree_nine():
    R = GradedMonomialRing.semigroup([9], 18)
    assert generation_degree(R).degree == 9
    assert not generation_bound_check(R, 1, 2, 2)


@pytest.mark.parametrize("gens", [[2, 3], [3, 5], [4, 6, 9], [5, 7, 11], [3, 4, 5], [6, 10, 15]])
def test_semigroups_against_oracle(gens):
    M = 40
    R = GradedMonomialRing.semigroup(gens, M)
    assert generation_degree(R).degree == semigroup_generation_degree(gens, M)


def test_invariant_under_listing_order():
    rng = random.Random(3)
    base = GradedMonomialRing.veronese(3, 2, 6)
    pieces = {}
    for m in rng.sample(list(base.pieces), len(base.pieces)):
        monos = list(base.pieces[m])
        rng.shuffle(monos)
        pieces[m] = monos
    shuffled = GradedMonomialRing(pieces, 6)
    assert generation_degree(shuffled).degree == generation_degree(base).degree
    assert generation_degree(shuffled).factorizations == generation_degree(base).factorizations


def test_truncation_insufficient():
    with pytest.raises(TruncationInsufficient):
        generation_degree(GradedMonomialRing.semigroup([9], 12))


def test_closure_is_validated():
    with pytest.raises(ValueError):
        GradedMonomialRing({1: [(1,)], 2: []}, 4)
    with pytest.raises(ValueError):
        GradedMonomialRing({0: [(1,)]}, 2)


def test_bound_check_hypotheses():
    R = GradedMonomialRing.polynomial_ring(1, 4)
    with pytest.raises(ValueError):
        generation_bound_check(R, 1, 1, 0)
