"""Gröbner bases and the ideal operations built on them.

Buchberger's algorithm with sugar-degree pair selection, the coprime and
chain criteria, and reduction to the unique reduced basis.  Membership,
radical membership (Rabinowitsch), minimal powers, elimination and the two
radical computations the Kohn engine relies on (monomial ideals and
zero-dimensional ideals) sit on top of it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import (
    GREVLEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    VariableMismatch,
    elimination,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

DEFAULT_M_MAX = 64

__all__ = [
    "Ideal",
    "RadicalUnsupported",
    "PowerBoundExceeded",
    "groebner_basis",
    "normal_form",
    "is_member",
    "is_radical_member",
    "min_power_in",
    "eliminate",
    "intersect",
    "is_zero_dimensional",
    "radical",
    "s_polynomial",
    "is_groebner",
    "poly_gcd",
    "divide_exact",
    "squarefree_part",
]


class RadicalUnsupported(ValueError):
    """Raised when an ideal is neither monomial nor zero-dimensional."""

    def __init__(self, msg: str = "radical unsupported for this ideal class"):
        super().__init__(msg)


class PowerBoundExceeded(ArithmeticError):
    """``f`` is in the radical but no power up to ``m_max`` lies in the ideal."""

    def __init__(self, m_max: int):
        super().__init__(f"no power f^m with m <= {m_max} lies in the ideal")
        self.m_max = m_max


# ---------------------------------------------------------------------------
# dict-level kernels
# ---------------------------------------------------------------------------

Terms = dict  # Monomial -> Fraction


@dataclass
class _Elem:
    terms: Terms
    lm: Monomial
    lc: Fraction
    sugar: int


def _reduce(f: Terms, basis: Sequence[_Elem], key, *, full: bool = True) -> Terms:
    """Remainder of ``f`` on division by ``basis``."""
    p = dict(f)
    rem: Terms = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for g in basis:
            if mono_divides(g.lm, lm):
                q = mono_div(lm, g.lm)
                factor = c / g.lc
                for m, v in g.terms.items():
                    mm = mono_mul(m, q)
                    s = p.get(mm, 0) - factor * v
                    if s:
                        p[mm] = s
                    else:
                        p.pop(mm, None)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[lm] = c
            del p[lm]
    return rem


def _make_elem(terms: Terms, key, sugar: int) -> _Elem:
    lm = max(terms, key=key)
    lc = terms[lm]
    if lc != 1:
        terms = {m: c / lc for m, c in terms.items()}
    return _Elem(terms, lm, Fraction(1), sugar)


def _spoly_terms(a: _Elem, b: _Elem) -> tuple[Terms, int]:
    lcm = mono_lcm(a.lm, b.lm)
    qa = mono_div(lcm, a.lm)
    qb = mono_div(lcm, b.lm)
    out: Terms = {}
    for m, c in a.terms.items():
        out[mono_mul(m, qa)] = c / a.lc
    for m, c in b.terms.items():
        mm = mono_mul(m, qb)
        s = out.get(mm, 0) - c / b.lc
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    sugar = max(a.sugar + sum(qa), b.sugar + sum(qb))
    return out, sugar


def _check_cap(terms: Terms, nvars: int) -> None:
    # constructing the Polynomial enforces the degree cap
    Polynomial(terms, nvars, _trusted=True)


def _buchberger(polys: Sequence[Polynomial], order: MonomialOrder, nvars: int) -> list[Polynomial]:
    key = order.key
    G: list[_Elem] = []
    for p in polys:
        if p:
            G.append(_make_elem(dict(p.terms), key, int(p.degree())))
    if not G:
        return []
    if any(not any(g.lm) for g in G):
        return [Polynomial.one(nvars)]

    pending: set[tuple[int, int]] = set()
    queue: list[tuple] = []

    def push(i: int, j: int) -> None:
        lcm = mono_lcm(G[i].lm, G[j].lm)
        sugar = max(
            G[i].sugar + sum(lcm) - sum(G[i].lm),
            G[j].sugar + sum(lcm) - sum(G[j].lm),
        )
        pending.add((i, j))
        heapq.heappush(queue, (sugar, key(lcm), i, j))

    for j in range(len(G)):
        for i in range(j):
            push(i, j)

    while queue:
        pair = heapq.heappop(queue)[2:]
        pending.discard(pair)
        i, j = pair
        a, b = G[i], G[j]
        lcm = mono_lcm(a.lm, b.lm)
        # Buchberger's first criterion: coprime leading monomials
        if all(x == 0 or y == 0 for x, y in zip(a.lm, b.lm)):
            continue
        # chain criterion
        skip = False
        for k, g in enumerate(G):
            if k == i or k == j:
                continue
            if mono_divides(g.lm, lcm):
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    skip = True
                    break
        if skip:
            continue
        s, sugar = _spoly_terms(a, b)
        r = _reduce(s, G, key)
        if not r:
            continue
        _check_cap(r, nvars)
        elem = _make_elem(r, key, sugar)
        if not any(elem.lm):
            return [Polynomial.one(nvars)]
        t = len(G)
        G.append(elem)
        for i2 in range(t):
            push(i2, t)

    return _reduced(G, key, nvars)


def _reduced(G: list[_Elem], key, nvars: int) -> list[Polynomial]:
    G = sorted(G, key=lambda g: key(g.lm))
    minimal: list[_Elem] = []
    for g in G:
        if any(mono_divides(h.lm, g.lm) for h in minimal):
            continue
        minimal = [h for h in minimal if not mono_divides(g.lm, h.lm)]
        minimal.append(g)
    out: list[_Elem] = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = dict(g.terms)
        lead = tail.pop(g.lm)
        r = _reduce(tail, others, key)
        r[g.lm] = lead
        out.append(_make_elem(r, key, g.sugar))
    out.sort(key=lambda g: key(g.lm))
    return [Polynomial(g.terms, nvars, _trusted=True) for g in out]


def _elems(basis: Sequence[Polynomial], order: MonomialOrder) -> list[_Elem]:
    return [_make_elem(dict(b.terms), order.key, int(b.degree())) for b in basis]


# ---------------------------------------------------------------------------
# Ideal
# ---------------------------------------------------------------------------


class Ideal:
    """Ideal given by a generator list, with a lazily cached reduced basis.

    Zero generators are dropped, so ``Ideal([], nvars=2)`` is the zero ideal.
    Treat instances as immutable.
    """

    __slots__ = ("generators", "order", "nvars", "_cache")

    def __init__(
        self,
        generators: Iterable[Polynomial],
        order: MonomialOrder = GREVLEX,
        nvars: int | None = None,
    ):
        gens = tuple(generators)
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for an ideal without generators")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise VariableMismatch("generators live in different polynomial rings")
        self.generators: tuple[Polynomial, ...] = tuple(g for g in gens if g)
        self.order = order
        self.nvars = nvars
        self._cache: dict = {}

    @property
    def basis(self) -> tuple[Polynomial, ...]:
        """The reduced Gröbner basis (computed once)."""
        if "gb" not in self._cache:
            self._cache["gb"] = tuple(_buchberger(self.generators, self.order, self.nvars))
        return self._cache["gb"]

    def _basis_elems(self) -> list[_Elem]:
        if "elems" not in self._cache:
            self._cache["elems"] = _elems(self.basis, self.order)
        return self._cache["elems"]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def leading_monomials(self) -> list[Monomial]:
        return [b.leading_monomial(self.order) for b in self.basis]

    def __contains__(self, p: Polynomial) -> bool:
        return is_member(p, self)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"Ideal([{gens}], order={self.order})"


def groebner_basis(I: Ideal) -> Ideal:
    """Return an ideal whose generators are the reduced basis of ``I``."""
    out = Ideal(I.basis, I.order, I.nvars)
    out._cache["gb"] = I.basis
    return out


def normal_form(p: Polynomial, I: Ideal) -> Polynomial:
    if p.nvars != I.nvars:
        raise VariableMismatch("polynomial and ideal live in different rings")
    if not p:
        return p
    r = _reduce(dict(p.terms), I._basis_elems(), I.order.key)
    return Polynomial(r, I.nvars, _trusted=True)


def is_member(p: Polynomial, I: Ideal) -> bool:
    return not normal_form(p, I)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    a = _make_elem(dict(f.terms), order.key, int(f.degree()))
    b = _make_elem(dict(g.terms), order.key, int(g.degree()))
    s, _ = _spoly_terms(a, b)
    return Polynomial(s, f.nvars, _trusted=True)


def is_groebner(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    elems = _elems(basis, order)
    for j in range(len(elems)):
        for i in range(j):
            s, _ = _spoly_terms(elems[i], elems[j])
            if _reduce(s, elems, order.key):
                return False
    return True


def _with_extra_variable(I: Ideal, extra_polys: Sequence[Polynomial]) -> Ideal:
    gens = [g.extend(1) for g in I.generators] + list(extra_polys)
    return Ideal(gens, I.order, I.nvars + 1)


def is_radical_member(f: Polynomial, I: Ideal) -> bool:
    """``f`` lies in the radical of ``I`` iff ``1`` is in ``I + (1 - y f)``."""
    if f.nvars != I.nvars:
        raise VariableMismatch("polynomial and ideal live in different rings")
    if not f:
        return True
    if I.is_zero():
        return False
    if is_member(f, I):
        return True
    n = I.nvars
    y = Polynomial.variable(n, n + 1)
    rab = Polynomial.one(n + 1) - y * f.extend(1)
    return _with_extra_variable(I, [rab]).is_unit()


def min_power_in(f: Polynomial, I: Ideal, m_max: int = DEFAULT_M_MAX) -> int | None:
    """Smallest ``m <= m_max`` with ``f**m`` in ``I``.

    Returns ``None`` when ``f`` is not in the radical of ``I``; raises
    :class:`PowerBoundExceeded` when it is, but only at a power above ``m_max``.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if not is_radical_member(f, I):
        return None
    power = normal_form(f, I)
    for m in range(1, m_max + 1):
        if not power:
            return m
        power = normal_form(power * f, I)
    raise PowerBoundExceeded(m_max)


def eliminate(I: Ideal, keep: Iterable[int]) -> Ideal:
    """Generators of ``I`` intersected with the subring in the kept variables."""
    keep = sorted(set(keep))
    n = I.nvars
    if not keep:
        raise ValueError("keep must name at least one variable")
    if any(not 0 <= k < n for k in keep):
        raise IndexError("kept variable index out of range")
    drop = [i for i in range(n) if i not in keep]
    if not drop:
        return groebner_basis(I)
    perm = drop + keep
    inverse = [0] * n
    for pos, var in enumerate(perm):
        inverse[var] = pos
    permuted = Ideal([g.permute(perm) for g in I.generators], elimination(len(drop)), n)
    dropped = set(range(len(drop)))
    kept = [b.permute(inverse) for b in permuted.basis if not (b.variables() & dropped)]
    return Ideal(kept, I.order, n)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` via elimination of ``t`` from ``t I + (1 - t) J``."""
    if I.nvars != J.nvars:
        raise VariableMismatch("ideals live in different rings")
    n = I.nvars
    if I.is_zero() or J.is_zero():
        return Ideal([], I.order, n)
    t = Polynomial.variable(n, n + 1)
    gens = [t * g.extend(1) for g in I.generators]
    gens += [(Polynomial.one(n + 1) - t) * g.extend(1) for g in J.generators]
    big = eliminate(Ideal(gens, I.order, n + 1), range(n))
    return Ideal([b.restrict(range(n)) for b in big.generators], I.order, n)


def divide_exact(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Quotient ``f / g``; raises ``ArithmeticError`` if ``g`` does not divide ``f``."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    key = order.key
    glm = g.leading_monomial(order)
    glc = g.terms[glm]
    p = dict(f.terms)
    quot: Terms = {}
    while p:
        lm = max(p, key=key)
        if not mono_divides(glm, lm):
            raise ArithmeticError("inexact polynomial division")
        q = mono_div(lm, glm)
        c = p[lm] / glc
        quot[q] = c
        for m, v in g.terms.items():
            mm = mono_mul(m, q)
            s = p.get(mm, 0) - c * v
            if s:
                p[mm] = s
            else:
                p.pop(mm, None)
    return Polynomial(quot, f.nvars, _trusted=True)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd, computed as ``a*b / lcm(a, b)`` with the lcm from an intersection."""
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Polynomial.one(a.nvars)
    meet = intersect(Ideal([a]), Ideal([b]))
    (lcm,) = meet.basis
    return divide_exact(a * b, lcm).monic()


def squarefree_part(f: Polynomial) -> Polynomial:
    """Monic product of the distinct irreducible factors of ``f``."""
    if not f or f.is_constant():
        return Polynomial.one(f.nvars) if f else f
    if f.is_monomial():
        (m,) = f.terms
        return Polynomial.monomial(tuple(1 if e else 0 for e in m))
    g = f
    for i in sorted(f.variables()):
        g = poly_gcd(g, f.partial(i))
        if g.is_constant():
            break
    return divide_exact(f, g).monic()


def is_zero_dimensional(I: Ideal) -> bool:
    """True iff every variable has a pure power among the leading monomials."""
    if I.is_zero():
        return I.nvars == 0
    lms = I.leading_monomials()
    if any(not any(m) for m in lms):
        return True
    for i in range(I.nvars):
        if not any(m[i] > 0 and sum(m) == m[i] for m in lms):
            return False
    return True


def _is_monomial_ideal(I: Ideal) -> bool:
    return all(b.is_monomial() for b in I.basis)


def _univariate_min_poly(I: Ideal, i: int) -> list[Fraction]:
    """Coefficients (low to high) of the monic generator of ``I ∩ Q[z_i]``.

    Finds the first linear dependence among normal forms of ``z_i^k``; this
    terminates because the quotient ring is finite-dimensional.
    """
    n = I.nvars
    z = Polynomial.variable(i, n)
    rows: list[tuple[dict, dict]] = []  # (reduced vector, combination of powers)
    power = Polynomial.one(n)
    k = 0
    while True:
        vec = dict(normal_form(power, I).terms)
        combo = {k: Fraction(1)}
        for pivot_vec, pivot_combo in rows:
            pivot = max(pivot_vec, key=GREVLEX.key)
            c = vec.get(pivot)
            if c:
                factor = c / pivot_vec[pivot]
                for m, v in pivot_vec.items():
                    s = vec.get(m, 0) - factor * v
                    if s:
                        vec[m] = s
                    else:
                        vec.pop(m, None)
                for j, v in pivot_combo.items():
                    s = combo.get(j, 0) - factor * v
                    if s:
                        combo[j] = s
                    else:
                        combo.pop(j, None)
        if not vec:
            lead = combo[k]
            return [combo.get(j, Fraction(0)) / lead for j in range(k + 1)]
        rows.append((vec, combo))
        power = power * z
        k += 1


def _uni_trim(p: list[Fraction]) -> list[Fraction]:
    while p and not p[-1]:
        p.pop()
    return p


def _uni_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for j, v in enumerate(b):
            a[shift + j] -= c * v
        a.pop()
        _uni_trim(a)
    return a


def _uni_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _uni_trim(list(a)), _uni_trim(list(b))
    while b:
        a, b = b, _uni_rem(a, b)
    return [c / a[-1] for c in a]


def _uni_div(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for j, v in enumerate(b):
            a[shift + j] -= c * v
        a.pop()
        _uni_trim(a)
    return q


def _uni_squarefree(p: list[Fraction]) -> list[Fraction]:
    deriv = [j * c for j, c in enumerate(p)][1:]
    if not _uni_trim(list(deriv)):
        return [Fraction(1)]
    return _uni_div(p, _uni_gcd(p, deriv))


def radical(I: Ideal) -> Ideal:
    """Radical of a monomial or zero-dimensional ideal, as a reduced basis.

    Raises :class:`RadicalUnsupported` for every other ideal.
    """
    n = I.nvars
    if I.is_zero() or I.is_unit():
        return groebner_basis(I)
    if _is_monomial_ideal(I):
        gens = []
        for b in I.basis:
            (m,) = b.terms
            gens.append(Polynomial.monomial(tuple(1 if e else 0 for e in m)))
        return groebner_basis(Ideal(gens, I.order, n))
    if is_zero_dimensional(I):
        extra = []
        for i in range(n):
            coeffs = _uni_squarefree(_univariate_min_poly(I, i))
            terms = {
                tuple(j if v == i else 0 for v in range(n)): c for j, c in enumerate(coeffs) if c
            }
            extra.append(Polynomial(terms, n))
        return groebner_basis(Ideal(list(I.basis) + extra, I.order, n))
    raise RadicalUnsupported()
