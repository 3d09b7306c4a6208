"""Independent reference computations used to cross-check the library.

None of these call into the Gröbner kernel.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from kohnalg.poly import Polynomial


def monomials_up_to(n: int, d: int) -> list[tuple[int, ...]]:
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) <= d]


def _row_reduce(rows: list[dict]) -> list[tuple[object, dict]]:
    """Echelon form over Q; each row is a sparse dict column -> Fraction."""
    pivots: list[tuple[object, dict]] = []
    for row in rows:
        row = dict(row)
        for col, prow in pivots:
            c = row.get(col)
            if c:
                for k, v in prow.items():
                    nv = row.get(k, 0) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        if row:
            col = max(row)
            inv = 1 / row[col]
            row = {k: v * inv for k, v in row.items()}
            for i, (pc, prow) in enumerate(pivots):
                c = prow.get(col)
                if c:
                    new = dict(prow)
                    for k, v in row.items():
                        nv = new.get(k, 0) - c * v
                        if nv:
                            new[k] = nv
                        else:
                            new.pop(k, None)
                    pivots[i] = (pc, new)
            pivots.append((col, row))
    return pivots


def macaulay_member(p: Polynomial, gens: list[Polynomial], degree: int) -> bool:
    """Is ``p`` in the span of ``m * g`` with ``deg(m g) <= degree``?

    This is a truncated test: a True answer is a proof of membership, a
    False answer only says no certificate of that degree exists.
    """
    n = p.nvars
    rows = []
    for g in gens:
        if not g:
            continue
        for m in monomials_up_to(n, degree - g.degree()):
            rows.append({_col(k): Fraction(v) for k, v in g.mul_term(m, 1).terms.items()})
    target = {_col(k): Fraction(v) for k, v in p.terms.items()}
    pivots = _row_reduce(rows)
    for col, prow in pivots:
        c = target.get(col)
        if c:
            for k, v in prow.items():
                nv = target.get(k, 0) - c * v
                if nv:
                    target[k] = nv
                else:
                    target.pop(k, None)
    return not target


def _col(m: tuple[int, ...]) -> tuple:
    # any fixed total order on monomials works for elimination
    return (sum(m), m)


def monomial_radical_member(f: Polynomial, gens: list[tuple[int, ...]]) -> bool:
    """Squarefree rule: the radical of a monomial ideal is generated by the
    supports of its generators, and is itself monomial, so ``f`` belongs
    exactly when each of its terms does."""
    supports = [{i for i, e in enumerate(g) if e} for g in gens]
    for mono in f.terms:
        own = {i for i, e in enumerate(mono) if e}
        if not any(s <= own for s in supports):
            return False
    return True


def monomial_ideal_member(mono: tuple[int, ...], gens: list[tuple[int, ...]]) -> bool:
    return any(all(a >= b for a, b in zip(mono, g)) for g in gens)


def staircase_order(gens: list[tuple[int, ...]], n: int, cap: int) -> int | None:
    """Smallest ``p`` with every degree-``p`` monomial divisible by some generator."""
    for p in range(1, cap + 1):
        degree_p = [m for m in itertools.product(range(p + 1), repeat=n) if sum(m) == p]
        if all(monomial_ideal_member(m, gens) for m in degree_p):
            return p
    return None


def jacobian_2x2(a: Polynomial, b: Polynomial) -> Polynomial:
    return a.partial(0) * b.partial(1) - a.partial(1) * b.partial(0)


def semigroup_generation_degree(gens: list[int], truncation: int) -> int:
    """Largest minimal generator of the numerical semigroup below the truncation."""
    member = [False] * (truncation + 1)
    member[0] = True
    for m in range(1, truncation + 1):
        member[m] = any(g <= m and member[m - g] for g in gens)
    elems = [m for m in range(1, truncation + 1) if member[m]]
    minimal = [m for m in elems if not any(member[a] and member[m - a] for a in range(1, m))]
    return max(minimal)
