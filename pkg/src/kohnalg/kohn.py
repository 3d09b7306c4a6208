"""Inductive multiplier ideals for special domains.

A special domain is ``Re w + sum |h_j(z)|^2 < 0``.  Starting from Jacobian
determinants of linear combinations of the ``h_j`` the engine alternates two
steps, each generator carrying a subellipticity order:

* radical step: ``J_nu -> J~_nu``; a root ``f`` with ``f^m`` in ``J_nu`` gets
  order ``gamma_nu(f^m) / m``;
* Jacobian step: ``J~_nu -> J_{nu+1}``; mixed Jacobians of ``k`` combinations
  of the ``h_j`` and ``n - k`` members of ``J~_nu``.

It stops once some member of ``J~_nu`` is a unit at the origin.  Every
generator keeps its derivation, so a finished run can be replayed exactly.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence, Union

from .groebner import (
    DEFAULT_M_MAX,
    Ideal,
    PowerBoundExceeded,
    RadicalUnsupported,
    is_member,
    is_radical_member,
    min_power_in,
    radical,
    squarefree_part,
)
from .poly import Polynomial, jacobian_det, linear_combination

log = logging.getLogger(__name__)

BASE_ORDER = Fraction(1, 8)
FULL_RADICAL = "full-radical"
CERTIFIED_MEMBERS = "certified-members"


class ReplayMismatch(Exception):
    """A certificate node failed to re-derive."""

    def __init__(self, node: str, reason: str):
        super().__init__(f"{node}: {reason}")
        self.node = node
        self.reason = reason


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialDomain:
    """The functions ``h_1..h_N`` in ``z_1..z_n``; the boundary point is the origin."""

    h: tuple[Polynomial, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        h = tuple(self.h)
        object.__setattr__(self, "h", h)
        if not h:
            raise ValueError("a special domain needs at least one h_j")
        n = h[0].nvars
        if n < 1 or any(p.nvars != n for p in h):
            raise ValueError("all h_j must live in the same ring of n >= 1 variables")
        for j, p in enumerate(h, 1):
            if p.constant_term():
                raise ValueError(f"h{j} must vanish at the origin")
        names = tuple(self.names) or tuple(f"z{i + 1}" for i in range(n))
        if len(names) != n:
            raise ValueError("one name per variable required")
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.h[0].nvars

    @property
    def N(self) -> int:
        return len(self.h)

    def digest(self) -> str:
        """Name-independent SHA-256 of the generator list."""
        lines = [f"n={self.n}"]
        for p in self.h:
            lines.append(";".join(f"{m}:{c}" for m, c in p.items()))
        return hashlib.sha256("\n".join(lines).encode()).hexdigest()

    def scaled(self, factors: Sequence[Fraction]) -> SpecialDomain:
        return SpecialDomain(tuple(p.scale(c) for p, c in zip(self.h, factors)), self.names)


@dataclass(frozen=True)
class ComboStrategy:
    """Finite stand-in for "all linear combinations of the h_j".

    Every single ``h_j`` plus ``random_combos`` seeded random rational
    combinations with numerators and denominators bounded by ``coeff_bound``.
    """

    random_combos: int = 4
    seed: int = 0
    coeff_bound: int = 5

    def pool(self, domain: SpecialDomain) -> list[tuple[tuple[Fraction, ...], Polynomial]]:
        N = domain.N
        out = []
        for j in range(N):
            vec = tuple(Fraction(int(i == j)) for i in range(N))
            out.append((vec, domain.h[j]))
        rng = random.Random(self.seed)
        b = self.coeff_bound
        made = 0
        while made < self.random_combos:
            vec = tuple(Fraction(rng.randint(-b, b), rng.randint(1, b)) for _ in range(N))
            if not any(vec):
                continue
            out.append((vec, linear_combination(vec, domain.h)))
            made += 1
        return out


@dataclass(frozen=True)
class KohnConfig:
    max_level: int = 8
    m_max: int = DEFAULT_M_MAX
    generator_cap: int = 256
    combos: ComboStrategy = field(default_factory=ComboStrategy)

    def __post_init__(self) -> None:
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if self.generator_cap < 1:
            raise ValueError("generator_cap must be >= 1")

    def as_dict(self) -> dict:
        return {
            "max_level": self.max_level,
            "m_max": self.m_max,
            "generator_cap": self.generator_cap,
            "random_combos": self.combos.random_combos,
            "seed": self.combos.seed,
            "coeff_bound": self.combos.coeff_bound,
        }

    @classmethod
    def from_dict(cls, d: dict) -> KohnConfig:
        return cls(
            max_level=int(d["max_level"]),
            m_max=int(d["m_max"]),
            generator_cap=int(d["generator_cap"]),
            combos=ComboStrategy(int(d["random_combos"]), int(d["seed"]), int(d["coeff_bound"])),
        )


# ---------------------------------------------------------------------------
# generators and derivations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class JacobianMix:
    """``f`` from ``dg_1 ^ ... ^ dg_n``: ``k`` combinations of h, then members of J~."""

    k: int
    combos: tuple[tuple[Fraction, ...], ...]
    children: tuple[OrderedGenerator, ...]


@dataclass(frozen=True, eq=False)
class RadicalRoot:
    """``f`` with ``f^m`` in the ideal spanned by ``support`` (orders >= ``power_order``)."""

    m: int
    power_order: Fraction
    support: tuple[OrderedGenerator, ...]


@dataclass(frozen=True, eq=False)
class Inherited:
    child: OrderedGenerator


Derivation = Union[JacobianMix, RadicalRoot, Inherited]


@dataclass(frozen=True, eq=False)
class OrderedGenerator:
    poly: Polynomial
    order: Fraction
    derivation: Derivation


@dataclass(frozen=True)
class KohnState:
    level: int
    J: tuple[OrderedGenerator, ...]
    J_tilde: tuple[OrderedGenerator, ...] = ()
    mode: str = FULL_RADICAL
    warnings: tuple[str, ...] = ()

    def ideal(self, nvars: int) -> Ideal:
        return Ideal([g.poly for g in self.J], nvars=nvars)


@dataclass(frozen=True)
class Subelliptic:
    epsilon: Fraction
    witness: OrderedGenerator
    level: int


@dataclass(frozen=True)
class Exhausted:
    caps: dict
    levels_run: int


@dataclass(frozen=True)
class Certificate:
    outcome: Union[Subelliptic, Exhausted]
    config: KohnConfig
    domain_digest: str
    history: tuple[KohnState, ...]
    claimed_history_digest: str | None = None

    @property
    def subelliptic(self) -> bool:
        return isinstance(self.outcome, Subelliptic)

    @property
    def warnings(self) -> list[str]:
        return [w for s in self.history for w in s.warnings]

    def history_digest(self) -> str:
        return history_digest(self.history)


# ---------------------------------------------------------------------------
# order rules
# ---------------------------------------------------------------------------


def mix_order(k: int, n: int, child_orders: Sequence[Fraction]) -> Fraction:
    """Order of a mixed Jacobian with ``k`` combination slots and ``n-k`` J~ slots."""
    if not 0 <= k <= n or len(child_orders) != n - k:
        raise ValueError("inconsistent Jacobian mixture")
    if k == n:
        return BASE_ORDER
    halves = [o / 2 for o in child_orders]
    if k == 0:
        return min(halves)
    return min([BASE_ORDER] + halves)


def _normalize(p: Polynomial) -> Polynomial:
    return p.monic()


def _canonical(gens: dict[Polynomial, OrderedGenerator]) -> tuple[OrderedGenerator, ...]:
    return tuple(sorted(gens.values(), key=lambda g: g.poly.sort_key()))


def _merge(bucket: dict[Polynomial, OrderedGenerator], gen: OrderedGenerator) -> None:
    old = bucket.get(gen.poly)
    if old is None or gen.order > old.order:
        bucket[gen.poly] = gen


def _apply_cap(
    bucket: dict[Polynomial, OrderedGenerator], cap: int, level: int
) -> tuple[tuple[OrderedGenerator, ...], list[str]]:
    gens = _canonical(bucket)
    if len(gens) <= cap:
        return gens, []
    keep = sorted(gens, key=lambda g: (-g.order, g.poly.sort_key()))[:cap]
    msg = f"level {level}: {len(gens)} generators pruned to cap {cap} (lowest orders dropped)"
    log.warning(msg)
    return tuple(sorted(keep, key=lambda g: g.poly.sort_key())), [msg]


# ---------------------------------------------------------------------------
# the procedure
# ---------------------------------------------------------------------------


def build_J1(
    domain: SpecialDomain,
    combos: ComboStrategy | None = None,
    generator_cap: int = 256,
) -> KohnState:
    """Level one: Jacobians of n-tuples from the combination pool, all of order 1/8."""
    combos = combos or ComboStrategy()
    n = domain.n
    pool = combos.pool(domain)
    bucket: dict[Polynomial, OrderedGenerator] = {}
    for picks in itertools.combinations(pool, n):
        f = jacobian_det([p for _, p in picks])
        if not f:
            continue
        f = _normalize(f)
        deriv = JacobianMix(n, tuple(v for v, _ in picks), ())
        _merge(bucket, OrderedGenerator(f, BASE_ORDER, deriv))
    J, warnings = _apply_cap(bucket, generator_cap, 1)
    if not J:
        msg = "level 1: every Jacobian vanishes identically; J_1 = (0)"
        log.warning(msg)
        warnings.append(msg)
    return KohnState(1, J, (), FULL_RADICAL, tuple(warnings))


def _best_power_order(
    power: Polynomial,
    thresholds: Sequence[Fraction],
    ideals: dict[Fraction, Ideal],
) -> Fraction:
    for t in thresholds:
        if is_member(power, ideals[t]):
            return t
    raise AssertionError("power is not a member of the full ideal")


def radical_step(state: KohnState, nvars: int, m_max: int = DEFAULT_M_MAX) -> KohnState:
    """Fill ``J_tilde`` with certified roots of members of ``J``.

    Candidates are the reduced basis of the radical when it is computable.
    Otherwise they are the generators of ``J`` together with the squarefree
    parts of generators that certify by Rabinowitsch.
    """
    if not state.J:
        return replace(state, J_tilde=())
    warnings = list(state.warnings)
    thresholds = sorted({g.order for g in state.J}, reverse=True)
    ideals = {
        t: Ideal([g.poly for g in state.J if g.order >= t], nvars=nvars) for t in thresholds
    }
    full = ideals[thresholds[-1]]
    mode = FULL_RADICAL
    candidates: dict[Polynomial, None] = {}
    try:
        for b in radical(full).basis:
            candidates[_normalize(b)] = None
    except RadicalUnsupported:
        mode = CERTIFIED_MEMBERS
        for g in state.J:
            candidates[g.poly] = None
        certified = 0
        for g in state.J:
            sq = squarefree_part(g.poly)
            if sq != g.poly and is_radical_member(sq, full):
                candidates[_normalize(sq)] = None
                certified += 1
        msg = f"level {state.level}: radical unsupported; using {len(candidates)} certified members"
        if not certified:
            msg += " (no squarefree part certified)"
        log.warning(msg)
        warnings.append(msg)

    bucket: dict[Polynomial, OrderedGenerator] = {}
    for f in candidates:
        try:
            m = min_power_in(f, full, m_max)
        except PowerBoundExceeded:
            msg = f"level {state.level}: no power of {f} up to {m_max} lies in J; skipped"
            log.warning(msg)
            warnings.append(msg)
            continue
        if m is None:
            raise AssertionError(f"candidate {f} is not in the radical")
        t = _best_power_order(f**m, thresholds, ideals)
        support = tuple(g for g in state.J if g.order >= t)
        _merge(bucket, OrderedGenerator(f, t / m, RadicalRoot(m, t, support)))
    return replace(state, J_tilde=_canonical(bucket), mode=mode, warnings=tuple(warnings))


def advance_level(
    state: KohnState,
    domain: SpecialDomain,
    combos: ComboStrategy | None = None,
    generator_cap: int = 256,
) -> KohnState:
    """``J_{nu+1}``: inherited members of ``J~_nu`` plus every mixed Jacobian."""
    combos = combos or ComboStrategy()
    n = domain.n
    pool = combos.pool(domain)
    level = state.level + 1
    bucket: dict[Polynomial, OrderedGenerator] = {}
    for g in state.J_tilde:
        _merge(bucket, OrderedGenerator(g.poly, g.order, Inherited(g)))
    for k in range(n + 1):
        for hs in itertools.combinations(pool, k):
            for ts in itertools.combinations(state.J_tilde, n - k):
                f = jacobian_det([p for _, p in hs] + [t.poly for t in ts])
                if not f:
                    continue
                order = mix_order(k, n, [t.order for t in ts])
                deriv = JacobianMix(k, tuple(v for v, _ in hs), tuple(ts))
                _merge(bucket, OrderedGenerator(_normalize(f), order, deriv))
    J, warnings = _apply_cap(bucket, generator_cap, level)
    return KohnState(level, J, (), state.mode, tuple(warnings))


def _witnesses(state: KohnState) -> list[OrderedGenerator]:
    return [g for g in state.J_tilde if g.poly.constant_term()]


def run(domain: SpecialDomain, config: KohnConfig | None = None) -> Certificate:
    """Iterate until a unit multiplier appears in ``J~_nu`` or ``max_level`` is reached."""
    config = config or KohnConfig()
    n = domain.n
    history: list[KohnState] = []
    state = build_J1(domain, config.combos, config.generator_cap)
    outcome: Union[Subelliptic, Exhausted]
    while True:
        state = radical_step(state, n, config.m_max)
        history.append(state)
        log.info(
            "level %d: |J|=%d |J~|=%d mode=%s", state.level, len(state.J), len(state.J_tilde), state.mode
        )
        found = _witnesses(state)
        if found:
            best = max(found, key=lambda g: g.order)
            outcome = Subelliptic(best.order, best, state.level)
            break
        if state.level >= config.max_level:
            outcome = Exhausted(config.as_dict(), state.level)
            break
        state = advance_level(state, domain, config.combos, config.generator_cap)
    hist = tuple(history)
    return Certificate(outcome, config, domain.digest(), hist, history_digest(hist))


# ---------------------------------------------------------------------------
# digests and replay
# ---------------------------------------------------------------------------


def generator_ids(history: Sequence[KohnState]) -> dict[int, str]:
    """Stable ids ``J<level>.<i>`` / ``T<level>.<i>`` keyed by object identity."""
    ids: dict[int, str] = {}
    for s in history:
        for i, g in enumerate(s.J):
            ids[id(g)] = f"J{s.level}.{i}"
        for i, g in enumerate(s.J_tilde):
            ids[id(g)] = f"T{s.level}.{i}"
    return ids


def _describe(d: Derivation, ids: dict[int, str]) -> str:
    if isinstance(d, JacobianMix):
        combos = "|".join(",".join(str(c) for c in v) for v in d.combos)
        kids = ",".join(ids.get(id(c), "?") for c in d.children)
        return f"jac k={d.k} combos={combos} children={kids}"
    if isinstance(d, RadicalRoot):
        sup = ",".join(ids.get(id(c), "?") for c in d.support)
        return f"root m={d.m} power_order={d.power_order} support={sup}"
    return f"inherited {ids.get(id(d.child), '?')}"


def history_digest(history: Sequence[KohnState]) -> str:
    ids = generator_ids(history)
    h = hashlib.sha256()
    for s in history:
        h.update(f"level {s.level} mode {s.mode}\n".encode())
        for g in s.J + s.J_tilde:
            terms = ";".join(f"{m}:{c}" for m, c in g.poly.items())
            h.update(f"{ids[id(g)]} [{terms}] {g.order} {_describe(g.derivation, ids)}\n".encode())
    return h.hexdigest()


def _check_order_range(node: str, order: Fraction) -> None:
    if not 0 < order <= BASE_ORDER:
        raise ReplayMismatch(node, f"order {order} outside (0, 1/8]")


def check_certificate(cert: Certificate, domain: SpecialDomain) -> None:
    """Re-derive every node of ``cert`` from ``domain``.

    Raises :class:`ReplayMismatch` naming the first node that does not match.
    """
    if cert.domain_digest != domain.digest():
        raise ReplayMismatch("domain", "domain digest mismatch")
    n = domain.n
    ids = generator_ids(cert.history)
    prev_tilde: set[int] = set()
    for expected_level, state in enumerate(cert.history, 1):
        if state.level != expected_level:
            raise ReplayMismatch(f"level {state.level}", "levels out of sequence")
        for g in state.J:
            node = ids[id(g)]
            _check_order_range(node, g.order)
            d = g.derivation
            if isinstance(d, Inherited):
                if id(d.child) not in prev_tilde:
                    raise ReplayMismatch(node, "inherited from a generator outside J~ of the previous level")
                if d.child.poly != g.poly or d.child.order != g.order:
                    raise ReplayMismatch(node, "inherited generator differs from its source")
            elif isinstance(d, JacobianMix):
                if state.level == 1 and d.k != n:
                    raise ReplayMismatch(node, "level-1 Jacobians use combinations only")
                if len(d.combos) != d.k or len(d.children) != n - d.k:
                    raise ReplayMismatch(node, "slot counts do not match k")
                if any(id(c) not in prev_tilde for c in d.children):
                    raise ReplayMismatch(node, "Jacobian input outside J~ of the previous level")
                gs = []
                for vec in d.combos:
                    if len(vec) != domain.N:
                        raise ReplayMismatch(node, "combination length differs from N")
                    gs.append(linear_combination(vec, domain.h))
                gs += [c.poly for c in d.children]
                f = jacobian_det(gs)
                if not f or _normalize(f) != g.poly:
                    raise ReplayMismatch(node, "Jacobian determinant does not reproduce the polynomial")
                if mix_order(d.k, n, [c.order for c in d.children]) != g.order:
                    raise ReplayMismatch(node, "order does not follow the Jacobian rule")
            else:
                raise ReplayMismatch(node, "J generators must be Jacobians or inherited")
        members = {id(g) for g in state.J}
        full = Ideal([g.poly for g in state.J], nvars=n)
        for g in state.J_tilde:
            node = ids[id(g)]
            _check_order_range(node, g.order)
            d = g.derivation
            if not isinstance(d, RadicalRoot):
                raise ReplayMismatch(node, "J~ generators must be radical roots")
            if d.m < 1 or any(id(s) not in members for s in d.support) or not d.support:
                raise ReplayMismatch(node, "support outside J of this level")
            if min(s.order for s in d.support) != d.power_order:
                raise ReplayMismatch(node, "power order is not the support minimum")
            if not is_member(g.poly**d.m, Ideal([s.poly for s in d.support], nvars=n)):
                raise ReplayMismatch(node, f"f^{d.m} is not in the supporting ideal")
            if d.m > 1 and is_member(g.poly ** (d.m - 1), full):
                raise ReplayMismatch(node, f"m={d.m} is not the smallest power")
            if g.order != d.power_order / d.m:
                raise ReplayMismatch(node, "order is not power_order / m")
        prev_tilde = {id(g) for g in state.J_tilde}

    out = cert.outcome
    if not cert.history:
        raise ReplayMismatch("outcome", "empty history")
    for state in cert.history[:-1]:
        if _witnesses(state):
            raise ReplayMismatch("outcome", f"a unit multiplier already exists at level {state.level}")
    last = cert.history[-1]
    if isinstance(out, Subelliptic):
        if out.level != last.level or out.witness not in last.J_tilde:
            raise ReplayMismatch("outcome", "witness is not a generator of the final J~")
        if not out.witness.poly.constant_term():
            raise ReplayMismatch("outcome", "witness vanishes at the origin")
        if out.epsilon != out.witness.order:
            raise ReplayMismatch("outcome", "epsilon differs from the witness order")
        if out.epsilon != max(g.order for g in _witnesses(last)):
            raise ReplayMismatch("outcome", "epsilon is not the best witnessed order")
    else:
        if _witnesses(last):
            raise ReplayMismatch("outcome", "exhausted run contains a unit multiplier")
        if last.level != cert.config.max_level or out.levels_run != last.level:
            raise ReplayMismatch("outcome", "exhausted before max_level")
    if cert.claimed_history_digest is not None and cert.claimed_history_digest != cert.history_digest():
        raise ReplayMismatch("history", "history digest mismatch")


def replay(cert: Certificate, domain: SpecialDomain) -> bool:
    try:
        check_certificate(cert, domain)
    except ReplayMismatch as exc:
        log.info("replay mismatch at %s", exc)
        return False
    except (KeyError, ValueError, ArithmeticError) as exc:
        log.info("malformed certificate: %s", exc)
        return False
    return True
