"""Finite-type order, a monomial-curve estimate of the D'Angelo type, and
the inequalities tying the two together."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .groebner import Ideal, is_member, is_zero_dimensional
from .kohn import SpecialDomain
from .poly import Polynomial

DEFAULT_P_CAP = 12
DEFAULT_EXPONENT_CAP = 6


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for cut in itertools.combinations(range(d + n - 1), n - 1):
        prev = -1
        exps = []
        for c in cut + (d + n - 1,):
            exps.append(c - prev - 1)
            prev = c
        out.append(tuple(exps))
    return out


def finite_type_order(domain: SpecialDomain, p_cap: int = DEFAULT_P_CAP) -> Optional[int]:
    """Smallest ``p <= p_cap`` with ``m^p`` inside the ideal of germs spanned by the h_j.

    The local condition is decided in the polynomial ring: by Nakayama,
    ``m^p ⊂ (h) O_0`` iff ``m^p ⊂ (h) + m^(p+1)``, and the right-hand ideal is
    m-primary so global and local membership agree for it.
    """
    if p_cap < 1:
        raise ValueError("p_cap must be >= 1")
    n = domain.n
    for p in range(1, p_cap + 1):
        tail = [Polynomial.monomial(m) for m in monomials_of_degree(n, p + 1)]
        ideal = Ideal(list(domain.h) + tail, nvars=n)
        if all(is_member(Polynomial.monomial(m), ideal) for m in monomials_of_degree(n, p)):
            return p
    return None


@dataclass(frozen=True)
class TypeEstimate:
    """Best normalized touching order found; ``value is None`` means infinite."""

    value: Optional[Fraction]
    exponents: tuple[int, ...]
    coefficients: tuple[Fraction, ...]

    @property
    def infinite(self) -> bool:
        return self.value is None


def _curve_order(h: Polynomial, exponents: Sequence[int], coeffs: Sequence[Fraction]) -> Optional[int]:
    """Vanishing order in ``t`` of ``h(c_1 t^a_1, ..., c_n t^a_n)``; None if identically zero."""
    collected: dict[int, Fraction] = {}
    for mono, c in h.terms.items():
        value = c
        for e, ci in zip(mono, coeffs):
            if e:
                value *= ci**e
        if value:
            power = sum(a * e for a, e in zip(exponents, mono))
            collected[power] = collected.get(power, 0) + value
    live = [k for k, v in collected.items() if v]
    return min(live) if live else None


def dangelo_type_estimate(
    domain: SpecialDomain,
    exponent_cap: int = DEFAULT_EXPONENT_CAP,
    samples: int = 2,
    seed: int = 0,
) -> TypeEstimate:
    """Lower bound for the type from curves ``t -> (c_i t^a_i)``.

    Each curve contributes ``2 min_j ord(h_j∘φ) / min{a_i : c_i != 0}``.  A
    curve along which every h_j vanishes identically is returned at once as
    an infinite witness.
    """
    if exponent_cap < 1:
        raise ValueError("exponent_cap must be >= 1")
    n = domain.n
    best: Optional[TypeEstimate] = None
    supports = [v for v in itertools.product((0, 1), repeat=n) if any(v)]
    for exps in itertools.product(range(1, exponent_cap + 1), repeat=n):
        rng = random.Random(f"{seed}:{exps}")
        choices = [tuple(Fraction(c) for c in v) for v in supports]
        for _ in range(samples):
            choices.append(tuple(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) for _ in range(n)))
        for coeffs in choices:
            orders = [_curve_order(h, exps, coeffs) for h in domain.h]
            curve_ord = min(a for a, c in zip(exps, coeffs) if c)
            live = [o for o in orders if o is not None]
            if not live:
                return TypeEstimate(None, exps, coeffs)
            value = Fraction(2 * min(live), curve_ord)
            if best is None or value > best.value:
                best = TypeEstimate(value, exps, coeffs)
    assert best is not None
    return best


@dataclass(frozen=True)
class TypeReport:
    p: Optional[int]
    type_lower_bound: Optional[Fraction]
    zero_dim: bool
    inequality_checks: tuple[tuple[str, bool], ...] = ()
    q_candidates: tuple[int, ...] = ()
    p_cap: int = DEFAULT_P_CAP
    curve: tuple = field(default=(), compare=False)

    @property
    def finite_type(self) -> bool:
        return self.p is not None

    @property
    def passed(self) -> bool:
        return self.p is not None and all(ok for _, ok in self.inequality_checks)


def check_relations(
    p: Optional[int],
    t_hat: Optional[Fraction],
    n: int,
    zero_dim: bool = True,
    p_cap: int = DEFAULT_P_CAP,
) -> TypeReport:
    """Check that some integer ``q`` satisfies ``q <= t <= 2q`` and ``p <= q <= (n+2)p``.

    Relations are recorded, never raised.  With ``p`` unknown they are skipped.
    """
    if p is None:
        return TypeReport(None, t_hat, zero_dim, (), (), p_cap)
    checks: list[tuple[str, bool]] = []
    if t_hat is None:
        checks.append(("type_lower_bound >= 2", True))
        checks.append(("exists q: q <= t <= 2q", False))
        checks.append(("exists q: q <= t <= 2q and p <= q <= (n+2)p", False))
        return TypeReport(p, None, zero_dim, tuple(checks), (), p_cap)
    lo, hi = math.ceil(t_hat / 2), math.floor(t_hat)
    from_type = range(lo, hi + 1)
    joint = tuple(q for q in from_type if p <= q <= (n + 2) * p)
    checks.append(("type_lower_bound >= 2", t_hat >= 2))
    checks.append(("exists q: q <= t <= 2q", len(from_type) > 0))
    checks.append(("exists q: q <= t <= 2q and p <= q <= (n+2)p", bool(joint)))
    return TypeReport(p, t_hat, zero_dim, tuple(checks), joint, p_cap)


def type_report(
    domain: SpecialDomain,
    p_cap: int = DEFAULT_P_CAP,
    exponent_cap: int = DEFAULT_EXPONENT_CAP,
    seed: int = 0,
) -> TypeReport:
    p = finite_type_order(domain, p_cap)
    est = dangelo_type_estimate(domain, exponent_cap, seed=seed)
    # an isolated zero at the origin is witnessed by a finite p, or by a
    # globally zero-dimensional ideal (every zero isolated)
    zero_dim = p is not None or is_zero_dimensional(Ideal(domain.h))
    report = check_relations(p, est.value, domain.n, zero_dim, p_cap)
    return TypeReport(
        report.p,
        report.type_lower_bound,
        report.zero_dim,
        report.inequality_checks,
        report.q_candidates,
        p_cap,
        (est.exponents, est.coefficients),
    )
