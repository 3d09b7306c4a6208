import random

from kohnalg.kohn import SpecialDomain
from kohnalg.poly import Polynomial, variables


def random_poly(rng: random.Random, nvars: int, max_deg: int, max_terms: int, *, constant=True) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            m = tuple(rng.randint(0, max_deg) for _ in range(nvars))
            if sum(m) <= max_deg and (constant or sum(m) > 0):
                break
        terms[m] = rng.choice([-3, -2, -1, 1, 2, 3])
    return Polynomial(terms, nvars)


def domain(*exprs, n=2) -> SpecialDomain:
    """Build a domain from callables of the variables, e.g. ``lambda z1, z2: z1**2``."""
    zs = variables(n)
    return SpecialDomain(tuple(f(*zs) for f in exprs))


def monomial_domain(*exps) -> SpecialDomain:
    return SpecialDomain(tuple(Polynomial.monomial(e) for e in exps))
