"""Exact effective bounds: the Matsusaka very-ampleness bound, the
Ohsawa-Takegoshi extension constant, Skoda exponents, and a generation
degree checker for graded monomial rings."""

from __future__ import annotations

import functools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

import mpmath

Monomial = tuple[int, ...]


# ---------------------------------------------------------------------------
# Matsusaka
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatsusakaInput:
    n: int
    LK: int  # L^{n-1} . K~_X
    Ln: int  # L^n

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("dimension n must be >= 1")
        if self.Ln < 1:
            raise ValueError("L^n must be a positive integer")


@dataclass(frozen=True)
class MatsusakaResult:
    bound: Fraction
    C_n: int
    kx_coefficient: int
    exponent: int


def _matsusaka_factors(n: int) -> list[int]:
    factors = [2 ** (n - 1 + 2 ** (n - 1))]
    for k in range(1, n + 1):
        base = k * 2 ** ((n - k - 1) * (n - k) // 2)
        factors.append(base ** (2 ** max(k - 2, 0)))
    return factors


def matsusaka_constant(n: int, fold: str = "left") -> int:
    """``C_n``; ``fold`` picks the evaluation order of the product."""
    factors = _matsusaka_factors(n)
    if fold == "left":
        return functools.reduce(operator.mul, factors, 1)
    if fold == "right":
        return functools.reduce(lambda acc, x: x * acc, reversed(factors), 1)
    raise ValueError("fold must be 'left' or 'right'")


def kx_coefficient(n: int) -> int:
    """Coefficient of ``L`` in ``K~_X = (2n C(3n-1, n) + 2n + 1) L + B + 2 K_X``."""
    return 2 * n * math.comb(3 * n - 1, n) + 2 * n + 1


def matsusaka_bound(inp: MatsusakaInput, fold: str = "left") -> MatsusakaResult:
    e = 2 ** max(inp.n - 2, 0)
    c = matsusaka_constant(inp.n, fold)
    lk = Fraction(inp.LK)
    parts = [Fraction(c), lk**e, (1 + lk / inp.Ln) ** e]
    if fold == "left":
        bound = functools.reduce(operator.mul, parts, Fraction(1))
    else:
        bound = functools.reduce(lambda acc, x: x * acc, reversed(parts), Fraction(1))
    return MatsusakaResult(bound, c, kx_coefficient(inp.n), e)


# ---------------------------------------------------------------------------
# Ohsawa-Takegoshi constant 8 pi e sqrt(2 + 1/e)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def within(self, other: Enclosure) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi


def _mpf_to_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(man) * Fraction(2) ** exp


def _tight_ot(bits: int) -> tuple[Fraction, Fraction]:
    iv = mpmath.iv
    old = iv.prec
    iv.prec = bits
    try:
        e = iv.e
        val = 8 * iv.pi * e * iv.sqrt(2 + 1 / e)
        return _mpf_to_fraction(val.a), _mpf_to_fraction(val.b)
    finally:
        iv.prec = old


def ot_constant(precision: Union[Fraction, str, int] = Fraction(1, 10**6)) -> Enclosure:
    """Certified enclosure of ``8 pi e sqrt(2 + 1/e)`` of width at most ``precision``.

    Endpoints sit on a decimal grid (outward rounded from an interval
    evaluation), so enclosures for decreasing powers of ten are nested.
    """
    precision = Fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    k = 0
    while Fraction(1, 10**k) > precision:
        k += 1
    bits = 64 + 4 * k
    a, b = _tight_ot(bits)
    while True:
        scale = 10**k
        lo = Fraction(math.floor(a * scale), scale)
        hi = Fraction(math.ceil(b * scale), scale)
        if hi - lo <= precision:
            return Enclosure(lo, hi)
        k += 1
        a, b = _tight_ot(64 + 4 * k)


# ---------------------------------------------------------------------------
# Skoda exponents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkodaExponents:
    alpha: Fraction
    q_unpadded: int
    q: int
    inner_exponent: Fraction  # 2 alpha q + 2, the weight on f
    outer_exponent: Fraction  # 2 alpha q, the weight on h
    target: int  # 2 (n + k + 1)
    constant: Fraction  # alpha / (alpha - 1)


def skoda_exponents(n: int, k: int, p: Optional[int] = None) -> SkodaExponents:
    """Exponents for Skoda's division theorem with ``alpha = (n+k)/n``.

    ``p`` generators give ``q = min(n, p-1)``; padding with zero generators
    up to ``n+1`` makes ``q = n``, and then ``2 alpha q + 2 = 2(n+k+1)``.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if p is None:
        p = n + 1
    if p < 1:
        raise ValueError("need p >= 1")
    alpha = Fraction(n + k, n)
    q = n
    inner = 2 * alpha * q + 2
    target = 2 * (n + k + 1)
    if inner != target:
        raise ArithmeticError("Skoda exponent identity failed")
    return SkodaExponents(alpha, min(n, p - 1), q, inner, 2 * alpha * q, target, alpha / (alpha - 1))


# ---------------------------------------------------------------------------
# generation degree of graded monomial rings
# ---------------------------------------------------------------------------


class TruncationInsufficient(ValueError):
    pass


class GradedMonomialRing:
    """Truncated graded ring spanned by monomials: ``pieces[m]`` spans degree ``m``.

    Degree 0 is always ``{1}``; products landing in degree ``<= truncation``
    must stay inside the declared pieces.
    """

    def __init__(self, pieces: Mapping[int, Iterable[Sequence[int]]], truncation: int):
        if truncation < 1:
            raise ValueError("truncation must be >= 1")
        clean: dict[int, frozenset[Monomial]] = {}
        width = None
        for m, monos in pieces.items():
            if m < 0 or m > truncation:
                continue
            s = frozenset(tuple(x) for x in monos)
            for mono in s:
                width = len(mono) if width is None else width
                if len(mono) != width or any(e < 0 for e in mono):
                    raise ValueError("monomials must share one exponent length")
            clean[m] = s
        self.nvars = width or 1
        one = (0,) * self.nvars
        if clean.get(0, frozenset([one])) != frozenset([one]):
            raise ValueError("degree-0 piece must be {1}")
        clean[0] = frozenset([one])
        self.truncation = truncation
        self.pieces = {m: clean.get(m, frozenset()) for m in range(truncation + 1)}
        for a in range(1, truncation + 1):
            for b in range(a, truncation - a + 1):
                for x in self.pieces[a]:
                    for y in self.pieces[b]:
                        if tuple(i + j for i, j in zip(x, y)) not in self.pieces[a + b]:
                            raise ValueError(f"pieces not closed under multiplication in degree {a + b}")

    @classmethod
    def semigroup(cls, generators: Iterable[int], truncation: int) -> GradedMonomialRing:
        """``Γ_m = {t^m}`` exactly when ``m`` lies in the numerical semigroup."""
        gens = sorted(set(generators))
        if not gens or gens[0] < 1:
            raise ValueError("semigroup generators must be positive")
        member = [False] * (truncation + 1)
        member[0] = True
        for m in range(1, truncation + 1):
            member[m] = any(g <= m and member[m - g] for g in gens)
        return cls({m: [(m,)] for m in range(truncation + 1) if member[m]}, truncation)

    @classmethod
    def polynomial_ring(cls, nvars: int, truncation: int) -> GradedMonomialRing:
        return cls({m: _monomials(nvars, m) for m in range(truncation + 1)}, truncation)

    @classmethod
    def veronese(cls, nvars: int, d: int, truncation: int) -> GradedMonomialRing:
        """``Γ_m`` = monomials of degree ``d m``."""
        return cls({m: _monomials(nvars, d * m) for m in range(truncation + 1)}, truncation)


def _monomials(n: int, d: int) -> list[Monomial]:
    if n == 1:
        return [(d,)]
    return [(i,) + rest for i in range(d, -1, -1) for rest in _monomials(n - 1, d - i)]


@dataclass(frozen=True)
class GenerationResult:
    degree: int
    factorizations: dict  # (m, monomial) -> tuple of (degree, monomial) factors


def _reachable(R: GradedMonomialRing, D: int) -> list[dict[Monomial, tuple]]:
    reach: list[dict[Monomial, tuple]] = [{(0,) * R.nvars: ()}]
    for m in range(1, R.truncation + 1):
        level: dict[Monomial, tuple] = {}
        for d in range(1, min(D, m) + 1):
            for g in sorted(R.pieces[d]):
                for rest, fac in sorted(reach[m - d].items()):
                    prod = tuple(i + j for i, j in zip(g, rest))
                    if prod not in level:
                        level[prod] = ((d, g),) + fac
        reach.append(level)
    return reach


def generation_degree(R: GradedMonomialRing) -> GenerationResult:
    """Smallest ``D`` whose pieces of degree ``<= D`` generate every piece up to the truncation.

    Raises :class:`TruncationInsufficient` when ``2 D`` exceeds the truncation.
    """
    M = R.truncation
    for D in range(1, M + 1):
        reach = _reachable(R, D)
        if all(R.pieces[m] <= reach[m].keys() for m in range(D + 1, M + 1)):
            if 2 * D > M:
                raise TruncationInsufficient(
                    f"truncation {M} cannot certify generation degree {D} (needs >= {2 * D})"
                )
            table = {
                (m, mono): reach[m][mono] for m in range(D + 1, M + 1) for mono in sorted(R.pieces[m])
            }
            return GenerationResult(D, table)
    raise AssertionError("unreachable: D = truncation always generates")


def generation_bound(n: int, a: int, b: int) -> int:
    return (n + 2) * a + b - 1


def generation_bound_check(R: GradedMonomialRing, n: int, a: int, b: int) -> bool:
    """Is the generation degree of ``R`` at most ``(n+2) a + b - 1``?

    ``n``, ``a``, ``b`` describe the geometric situation the model stands for
    (``aF`` and ``bF - K_X`` globally free); the caller vouches for that.
    """
    if n < 1 or a <= 1 or b < 0:
        raise ValueError("need n >= 1, a > 1 and b >= 0")
    return generation_degree(R).degree <= generation_bound(n, a, b)
