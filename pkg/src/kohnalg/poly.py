"""Exact multivariate polynomials over the rationals.

Monomials are dense exponent tuples; a polynomial is an immutable map from
monomials to nonzero :class:`fractions.Fraction` coefficients.  Monomial
orders are small key objects so that ``max(terms, key=order.key)`` picks the
leading monomial.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

DEFAULT_DEGREE_CAP = 64

_degree_cap: contextvars.ContextVar[int] = contextvars.ContextVar(
    "degree_cap", default=DEFAULT_DEGREE_CAP
)


class DegreeCapError(ArithmeticError):
    """A polynomial exceeded the configured total-degree cap."""


class VariableMismatch(ValueError):
    pass


def get_degree_cap() -> int:
    return _degree_cap.get()


@contextlib.contextmanager
def degree_cap(cap: int) -> Iterator[None]:
    """Temporarily change the total-degree cap for the current context."""
    if cap < 1:
        raise ValueError("degree cap must be positive")
    token = _degree_cap.set(cap)
    try:
        yield
    finally:
        _degree_cap.reset(token)


def set_degree_cap(cap: int) -> None:
    if cap < 1:
        raise ValueError("degree cap must be positive")
    _degree_cap.set(cap)


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------


def _grevlex_key(m: Monomial) -> tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order.  ``key(m)`` grows with the monomial.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"elim"``.  The elimination
    order compares the first ``block`` variables by grevlex and breaks ties
    with grevlex on the rest, so any monomial involving the first block is
    larger than every monomial free of it.
    """

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 1:
            raise ValueError("elimination order needs a block split index >= 1")

    def key(self, m: Monomial) -> tuple:
        if self.kind == "grevlex":
            return _grevlex_key(m)
        if self.kind == "lex":
            return m
        return (_grevlex_key(m[: self.block]), _grevlex_key(m[self.block :]))

    def __str__(self) -> str:
        return f"elim({self.block})" if self.kind == "elim" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination(block: int) -> MonomialOrder:
    return MonomialOrder("elim", block)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar], nvars: int, *, _trusted: bool = False):
        if _trusted:
            clean = dict(terms)
        else:
            if nvars < 0:
                raise ValueError("nvars must be non-negative")
            clean = {}
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != nvars or any(e < 0 for e in mono):
                    raise VariableMismatch(
                        f"monomial {mono} does not fit {nvars} variables"
                    )
                c = _as_fraction(c)
                if c:
                    clean[mono] = clean.get(mono, 0) + c
                    if not clean[mono]:
                        del clean[mono]
        cap = _degree_cap.get()
        for mono in clean:
            if sum(mono) > cap:
                raise DegreeCapError(
                    f"total degree {sum(mono)} exceeds degree cap {cap}"
                )
        self._terms: dict[Monomial, Fraction] = clean
        self.nvars = nvars
        self._hash: int | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls({}, nvars, _trusted=True)

    @classmethod
    def constant(cls, c: Scalar, nvars: int) -> Polynomial:
        c = _as_fraction(c)
        return cls({(0,) * nvars: c} if c else {}, nvars, _trusted=True)

    @classmethod
    def one(cls, nvars: int) -> Polynomial:
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> Polynomial:
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return cls({mono: Fraction(1)}, nvars, _trusted=True)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: Scalar = 1) -> Polynomial:
        return cls({tuple(exponents): coeff}, len(exponents))

    # -- basic queries ----------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self, order: MonomialOrder = GREVLEX) -> list[tuple[Monomial, Fraction]]:
        """Terms sorted from the leading term down."""
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree(self) -> float | int:
        """Total degree; ``-math.inf`` for the zero polynomial."""
        if not self._terms:
            return -math.inf
        return max(sum(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self._terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if not self._terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return Polynomial({m: c / lc for m, c in self._terms.items()}, self.nvars, _trusted=True)

    def variables(self) -> set[int]:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise VariableMismatch(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(out, self.nvars, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self._terms.items()}, self.nvars, _trusted=True)

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def scale(self, c: Scalar) -> Polynomial:
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial({m: v * c for m, v in self._terms.items()}, self.nvars, _trusted=True)

    def mul_term(self, mono: Monomial, c: Scalar) -> Polynomial:
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial(
            {mono_mul(m, mono): v * c for m, v in self._terms.items()}, self.nvars, _trusted=True
        )

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(out, self.nvars, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def partial(self, i: int) -> Polynomial:
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                out[m[:i] + (e - 1,) + m[i + 1 :]] = c * e
        return Polynomial(out, self.nvars, _trusted=True)

    # -- reshaping --------------------------------------------------------

    def extend(self, extra: int) -> Polynomial:
        """Embed into ``nvars + extra`` variables (new variables appended)."""
        pad = (0,) * extra
        return Polynomial({m + pad: c for m, c in self._terms.items()}, self.nvars + extra, _trusted=True)

    def permute(self, perm: Sequence[int]) -> Polynomial:
        """Rename variable ``perm[i]`` to position ``i``."""
        return Polynomial(
            {tuple(m[j] for j in perm): c for m, c in self._terms.items()}, self.nvars, _trusted=True
        )

    def restrict(self, keep: Sequence[int]) -> Polynomial:
        """Drop variables outside ``keep``; they must not occur."""
        drop = set(range(self.nvars)) - set(keep)
        if self.variables() & drop:
            raise ValueError("polynomial involves a dropped variable")
        return Polynomial(
            {tuple(m[j] for j in keep): c for m, c in self._terms.items()}, len(keep), _trusted=True
        )

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.constant(other, self.nvars)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def sort_key(self) -> tuple:
        """Deterministic total ordering key (grevlex terms, then coefficients)."""
        return tuple((GREVLEX.key(m), c) for m, c in self.items())

    # -- printing ---------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None, order: MonomialOrder = GREVLEX) -> str:
        if names is None:
            names = default_names(self.nvars)
        if not self._terms:
            return "0"
        parts: list[str] = []
        for m, c in self.items(order):
            factors = [
                name if e == 1 else f"{name}^{e}" for name, e in zip(names, m) if e
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r}, nvars={self.nvars})"


def default_names(nvars: int) -> list[str]:
    return [f"z{i + 1}" for i in range(nvars)]


def variables(nvars: int) -> list[Polynomial]:
    return [Polynomial.variable(i, nvars) for i in range(nvars)]


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.partial(i)


def eval_at_origin(p: Polynomial) -> Fraction:
    return p.constant_term()


def jacobian_det(g: Sequence[Polynomial]) -> Polynomial:
    """Determinant of the Jacobian matrix ``(dg_i/dz_j)``.

    Laplace expansion along rows, memoised on the set of used columns, so the
    cost is ``O(2^n n)`` polynomial products.
    """
    if not g:
        raise ValueError("need at least one polynomial")
    n = g[0].nvars
    if len(g) != n or any(p.nvars != n for p in g):
        raise ValueError(f"jacobian_det needs exactly {n} polynomials in {n} variables")
    rows = [[p.partial(j) for j in range(n)] for p in g]
    memo: dict[int, Polynomial] = {}

    def minor(row: int, used: int) -> Polynomial:
        if row == n:
            return Polynomial.one(n)
        if used in memo:
            return memo[used]
        total = Polynomial.zero(n)
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            entry = rows[row][col]
            if entry:
                term = entry * minor(row + 1, used | (1 << col))
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[used] = total
        return total

    return minor(0, 0)


def linear_combination(coeffs: Iterable[Scalar], polys: Sequence[Polynomial]) -> Polynomial:
    coeffs = list(coeffs)
    if len(coeffs) != len(polys):
        raise ValueError("coefficient count does not match polynomial count")
    out = Polynomial.zero(polys[0].nvars)
    for c, p in zip(coeffs, polys):
        if c:
            out = out + p.scale(c)
    return out
