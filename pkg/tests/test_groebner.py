import random
from fractions import Fraction

import pytest

from helpers import random_poly
from kohnalg.groebner import (
    Ideal,
    PowerBoundExceeded,
    RadicalUnsupported,
    eliminate,
    groebner_basis,
    intersect,
    is_groebner,
    is_member,
    is_radical_member,
    is_zero_dimensional,
    min_power_in,
    normal_form,
    poly_gcd,
    radical,
    s_polynomial,
    squarefree_part,
)
from kohnalg.poly import GREVLEX, LEX, Polynomial, elimination, variables
from oracles import macaulay_member, monomial_radical_member, monomials_up_to

z1, z2 = variables(2)
x, y, z = variables(3)


def mono(*e):
    return Polynomial.monomial(e)


# -- examples ---------------------------------------------------------------


def test_basis_of_coordinate_ideal():
    assert set(Ideal([z1, z2]).basis) == {z1, z2}


def test_monomial_ideal_is_its_own_basis():
    assert set(Ideal([z1**2, z1 * z2, z2**2]).basis) == {z1**2, z1 * z2, z2**2}


def test_basis_reduces_z1_cubed():
    I = Ideal([z1**2 + z2**2, z1 * z2])
    assert normal_form(z1**3, I) == 0
    # the identity behind it
    assert z1**3 == z1 * (z1**2 + z2**2) - z2 * (z1 * z2)


@pytest.mark.parametrize(
    "p, gens, nf",
    [
        (z1**2 * z2, [z1**2, z2], 0),
        (z1, [z1**2, z2**2], z1),
        (z1**3, [z1**2 + z2**2, z1 * z2], 0),
    ],
)
def test_normal_form_examples(p, gens, nf):
    assert normal_form(p, Ideal(gens)) == nf


@pytest.mark.parametrize(
    "p, gens, member",
    [
        (z1 * z2, [z1], True),
        (Polynomial.one(2), [z1, z2], False),
        (z1**3, [z1**2 + z2**2, z1 * z2], True),
    ],
)
def test_membership_examples(p, gens, member):
    assert is_member(p, Ideal(gens)) is member


def test_rabinowitsch_identity():
    # 1 = y^2 z1^2 + (1 + y z1)(1 - y z1) in Q[z1, z2, y]
    a, _, t = variables(3)
    assert t**2 * a**2 + (1 + t * a) * (1 - t * a) == 1


@pytest.mark.parametrize(
    "f, gens, member",
    [(z1, [z1**2], True), (z2, [z1**2], False), (z1 * z2, [z1**2 * z2**3], True)],
)
def test_radical_membership_examples(f, gens, member):
    assert is_radical_member(f, Ideal(gens)) is member


def test_min_power_examples():
    assert min_power_in(z1, Ideal([z1**2])) == 2
    assert min_power_in(z1, Ideal([z1 * z2])) is None
    assert min_power_in(z1 * z2, Ideal([4 * z1 * z2])) == 1


def test_min_power_bound_exceeded_is_distinct():
    with pytest.raises(PowerBoundExceeded):
        min_power_in(z1, Ideal([z1**5]), m_max=4)
    assert min_power_in(z1, Ideal([z1**5]), m_max=5) == 5


def test_eliminate_examples():
    assert eliminate(Ideal([z1 - z2**2]), [1]).is_zero()
    assert set(eliminate(Ideal([z1, z2]), [0]).generators) == {z1}
    kept = eliminate(Ideal([z1**2, z2**2]), [0])
    assert set(kept.generators) == {z1**2}


def test_eliminate_matches_macaulay_up_to_degree_4():
    gens = [z1**2, z2**2]
    kept = eliminate(Ideal(gens), [0])
    for d in range(5):
        p = z1**d
        assert is_member(p, kept) == macaulay_member(p, gens, 4)


def test_eliminate_twisted_cubic():
    t = variables(4)
    s, a, b, c = t
    I = Ideal([a - s, b - s**2, c - s**3])
    K = eliminate(I, [1, 2, 3])
    for rel in (b - a**2, c - a * b, a * c - b**2):
        assert is_member(rel, K)
    assert not is_member(b - a, K)
    assert all(0 not in g.variables() for g in K.generators)


@pytest.mark.parametrize(
    "gens, zero_dim",
    [([z1**2, z2**3], True), ([z1 * z2], False), ([z1, z2], True), ([z1**2 + z2**2, z1 * z2], True)],
)
def test_zero_dimensional_examples(gens, zero_dim):
    assert is_zero_dimensional(Ideal(gens)) is zero_dim


@pytest.mark.parametrize(
    "gens, expected",
    [
        ([z1**2 * z2, z2**3], [z2]),
        ([z1**2, z2**2], [z1, z2]),
        ([4 * z1 * z2], [z1 * z2]),
    ],
)
def test_radical_examples(gens, expected):
    assert set(radical(Ideal(gens)).basis) == set(expected)


def test_radical_unsupported_for_other_ideals():
    with pytest.raises(RadicalUnsupported):
        radical(Ideal([z1**2 + z2**3]))


def test_zero_dimensional_radical():
    # (z1^2 - z2, z2^2) has the single root 0 with multiplicity 4
    I = Ideal([z1**2 - z2, z2**2])
    assert set(radical(I).basis) == {z1, z2}
    # two points (1, 1) and (-1, 1), one of them doubled
    J = Ideal([(z1 - 1) ** 2 * (z1 + 1), z2 - 1])
    R = radical(J)
    assert set(R.basis) == {z1**2 - 1, z2 - 1}


def test_gcd_and_squarefree_part():
    f = (z1 + z2) ** 2 * (z1 - 2 * z2)
    g = (z1 + z2) * z2
    assert poly_gcd(f, g) == z1 + z2
    assert squarefree_part(f) == ((z1 + z2) * (z1 - 2 * z2)).monic()
    assert squarefree_part(z1**3 * z2) == z1 * z2


def test_intersection():
    I = intersect(Ideal([z1]), Ideal([z2]))
    assert set(I.basis) == {z1 * z2}
    J = intersect(Ideal([z1**2, z2]), Ideal([z1, z2**2]))
    assert set(J.basis) == {z1**2, z1 * z2, z2**2}


def test_zero_and_unit_ideals():
    Z = Ideal([], nvars=2)
    assert Z.is_zero() and normal_form(z1, Z) == z1
    assert not is_radical_member(z1, Z)
    U = Ideal([z1 + 1, z1])
    assert U.is_unit() and is_member(z2**7, U)


def test_lex_basis():
    I = Ideal([x**2 + y + z - 1, x + y**2 + z - 1, x + y + z**2 - 1], order=LEX)
    assert is_groebner(I.basis, LEX)
    assert any(b.variables() == {2} for b in I.basis)  # a univariate eliminant in z


def test_s_polynomial():
    f, g = z1**2 + z2, z1 * z2 + 1
    assert s_polynomial(f, g) == z2**2 - z1


# -- invariants ------------------------------------------------------------


def _random_ideal(rng):
    n = rng.choice([2, 3])
    gens = [random_poly(rng, n, rng.randint(1, 4), 3, constant=False) for _ in range(rng.randint(1, 3))]
    return n, gens


def test_every_basis_passes_buchberger_criterion():
    rng = random.Random(11)
    for _ in range(100):
        n, gens = _random_ideal(rng)
        for order in (GREVLEX, LEX, elimination(1)):
            I = Ideal(gens, order=order)
            assert is_groebner(I.basis, order), gens
            # reduced: monic, and no term of one element divisible by another's leading monomial
            lms = I.leading_monomials()
            for b, lm in zip(I.basis, lms):
                assert b.leading_coefficient(order) == 1
                for other in lms:
                    if other != lm:
                        assert not any(all(e >= o for e, o in zip(m, other)) for m in b.terms)


def test_basis_independent_of_generator_order_and_scaling():
    rng = random.Random(12)
    for _ in range(30):
        n, gens = _random_ideal(rng)
        shuffled = [g.scale(rng.choice([2, -3, Fraction(1, 5)])) for g in reversed(gens)]
        assert Ideal(gens).basis == Ideal(shuffled).basis


def test_normal_form_idempotent():
    rng = random.Random(13)
    for _ in range(500):
        n, gens = _random_ideal(rng)
        I = Ideal(gens)
        p = random_poly(rng, n, 5, 6)
        r = normal_form(p, I)
        assert normal_form(r, I) == r
        assert is_member(p - r, I)


def test_membership_agrees_with_macaulay_oracle():
    rng = random.Random(14)
    checked = positives = 0
    for _ in range(100):
        n, gens = _random_ideal(rng)
        I = Ideal(gens)
        cases = []
        # members built from cofactors, total degree <= 6
        for _ in range(2):
            p = Polynomial.zero(n)
            for g in gens:
                budget = 6 - g.degree()
                if budget >= 0:
                    p = p + random_poly(rng, n, budget, 3) * g
            cases.append(p)
        # arbitrary polynomials of low degree
        for _ in range(3):
            cases.append(random_poly(rng, n, 3, 4))
        cases.append(Polynomial.one(n))
        cases += [Polynomial.variable(i, n) for i in range(n)]
        for p in cases:
            got = is_member(p, I)
            assert got == macaulay_member(p, gens, 6), (gens, p)
            checked += 1
            positives += got
    assert checked >= 600 and positives >= 200


def test_membership_matches_explicit_cofactors():
    rng = random.Random(15)
    for _ in range(50):
        n, gens = _random_ideal(rng)
        p = sum((random_poly(rng, n, 3, 3) * g for g in gens), Polynomial.zero(n))
        assert is_member(p, Ideal(gens))


def _random_monomial_ideal(rng):
    n = rng.choice([2, 3])
    gens = sorted({tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(rng.randint(1, 4))})
    gens = [g for g in gens if any(g)] or [(1,) + (0,) * (n - 1)]
    return n, gens


def test_radical_membership_agrees_with_squarefree_rule():
    rng = random.Random(16)
    for _ in range(100):
        n, gens = _random_monomial_ideal(rng)
        I = Ideal([Polynomial.monomial(g) for g in gens])
        candidates = [Polynomial.monomial(m) for m in monomials_up_to(n, 2) if any(m)]
        candidates.append(random_poly(rng, n, 3, 3, constant=False))
        for f in candidates:
            assert is_radical_member(f, I) == monomial_radical_member(f, gens), (gens, f)


def test_radical_idempotent_on_monomial_path():
    rng = random.Random(17)
    for _ in range(100):
        n, gens = _random_monomial_ideal(rng)
        I = Ideal([Polynomial.monomial(g) for g in gens])
        R = radical(I)
        assert radical(R).basis == R.basis
        assert all(is_member(g, R) for g in I.generators)
        assert all(is_radical_member(b, I) for b in R.basis)


def test_zero_dimensional_radical_agrees_with_rabinowitsch():
    rng = random.Random(18)
    seen = 0
    while seen < 25:
        n = 2
        # pure powers plus noise; non-zero-dimensional draws are skipped
        gens = [
            z1 ** rng.randint(2, 3) + random_poly(rng, n, 2, 2, constant=False),
            z2 ** rng.randint(1, 3) - random_poly(rng, n, 2, 2, constant=False) * z1,
        ]
        I = Ideal(gens)
        if I.is_unit():
            continue
        if not is_zero_dimensional(I):
            continue
        seen += 1
        R = radical(I)
        assert all(is_radical_member(b, I) for b in R.basis)
        assert all(is_member(g, R) for g in I.generators)
        assert radical(R).basis == R.basis
        for m in monomials_up_to(n, 2):
            f = Polynomial.monomial(m) + random_poly(rng, n, 2, 2)
            assert is_member(f, R) == is_radical_member(f, I)


def test_groebner_basis_returns_cached_ideal():
    I = Ideal([z1**2 + z2, z1 * z2])
    G = groebner_basis(I)
    assert G.generators == I.basis == G.basis


def test_min_power_is_minimal():
    rng = random.Random(19)
    for _ in range(40):
        n, gens = _random_monomial_ideal(rng)
        I = Ideal([Polynomial.monomial(g) for g in gens])
        for f in radical(I).basis:
            m = min_power_in(f, I)
            assert m is not None and is_member(f**m, I)
            if m > 1:
                assert not is_member(f ** (m - 1), I)
