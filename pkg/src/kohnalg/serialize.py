"""JSON documents: certificates, type reports, bound evaluations.

Rationals are written as exact ``"p/q"`` strings, polynomials in the domain's
own variable names.  Keys are sorted on output so identical runs give
identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Sequence

from .bounds import Enclosure, GenerationResult, MatsusakaResult, SkodaExponents
from .finite_type import TypeReport
from .kohn import (
    Certificate,
    Exhausted,
    Inherited,
    JacobianMix,
    KohnConfig,
    KohnState,
    OrderedGenerator,
    RadicalRoot,
    Subelliptic,
    generator_ids,
)
from .parser import parse_polynomial

SCHEMA_ID = "kohnalg/run-output/1"

_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_DECIMAL = {"type": "string", "pattern": r"^-?\d+(\.\d+)?$"}

_ENTRY = {
    "type": "object",
    "required": ["id", "poly", "order", "derivation"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "pattern": r"^[JT]\d+\.\d+$"},
        "poly": {"type": "string"},
        "order": _RATIONAL,
        "derivation": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["rule", "k", "combos", "children"],
                    "additionalProperties": False,
                    "properties": {
                        "rule": {"const": "jacobian"},
                        "k": {"type": "integer", "minimum": 0},
                        "combos": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
                        "children": {"type": "array", "items": {"type": "string"}},
                    },
                },
                {
                    "type": "object",
                    "required": ["rule", "m", "power_order", "support"],
                    "additionalProperties": False,
                    "properties": {
                        "rule": {"const": "radical"},
                        "m": {"type": "integer", "minimum": 1},
                        "power_order": _RATIONAL,
                        "support": {"type": "array", "items": {"type": "string"}},
                    },
                },
                {
                    "type": "object",
                    "required": ["rule", "child"],
                    "additionalProperties": False,
                    "properties": {"rule": {"const": "inherited"}, "child": {"type": "string"}},
                },
            ]
        },
    },
}

_CONFIG = {
    "type": "object",
    "required": ["max_level", "m_max", "generator_cap", "random_combos", "seed", "coeff_bound"],
    "additionalProperties": {"type": "integer"},
}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["variables", "domain_digest", "config", "outcome", "levels", "history_digest"],
    "additionalProperties": False,
    "properties": {
        "variables": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "domain_digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "history_digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "config": _CONFIG,
        "outcome": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["kind", "epsilon", "level", "witness", "witness_poly"],
                    "additionalProperties": False,
                    "properties": {
                        "kind": {"const": "subelliptic"},
                        "epsilon": _RATIONAL,
                        "level": {"type": "integer", "minimum": 1},
                        "witness": {"type": "string"},
                        "witness_poly": {"type": "string"},
                    },
                },
                {
                    "type": "object",
                    "required": ["kind", "levels_run", "caps"],
                    "additionalProperties": False,
                    "properties": {
                        "kind": {"const": "exhausted"},
                        "levels_run": {"type": "integer", "minimum": 1},
                        "caps": _CONFIG,
                    },
                },
            ]
        },
        "levels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["level", "mode", "warnings", "J", "J_tilde"],
                "additionalProperties": False,
                "properties": {
                    "level": {"type": "integer", "minimum": 1},
                    "mode": {"enum": ["full-radical", "certified-members"]},
                    "warnings": {"type": "array", "items": {"type": "string"}},
                    "J": {"type": "array", "items": _ENTRY},
                    "J_tilde": {"type": "array", "items": _ENTRY},
                },
            },
        },
    },
}

TYPE_REPORT_SCHEMA = {
    "type": "object",
    "required": ["p", "status", "p_cap", "type_lower_bound", "zero_dim", "inequality_checks", "q_candidates"],
    "additionalProperties": False,
    "properties": {
        "p": {"type": ["integer", "null"]},
        "status": {"enum": ["finite type", "not finite type up to cap"]},
        "p_cap": {"type": "integer"},
        "type_lower_bound": {"oneOf": [_RATIONAL, {"const": "infinity"}]},
        "zero_dim": {"type": "boolean"},
        "inequality_checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "holds"],
                "properties": {"name": {"type": "string"}, "holds": {"type": "boolean"}},
            },
        },
        "q_candidates": {"type": "array", "items": {"type": "integer"}},
        "curve": {
            "type": "object",
            "properties": {
                "exponents": {"type": "array", "items": {"type": "integer"}},
                "coefficients": {"type": "array", "items": _RATIONAL},
            },
        },
    },
}

RUN_OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": SCHEMA_ID,
    "type": "object",
    "required": ["schema", "command", "input_digest", "config"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "command": {"type": "string"},
        "input_digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "config": {"type": "object", "additionalProperties": {"type": "integer"}},
        "certificate": CERTIFICATE_SCHEMA,
        "type_report": TYPE_REPORT_SCHEMA,
        "bounds": {
            "type": "object",
            "properties": {
                "ot": {
                    "type": "object",
                    "required": ["interval", "precision", "width"],
                    "properties": {
                        "interval": {"type": "array", "items": _DECIMAL, "minItems": 2, "maxItems": 2},
                        "precision": _RATIONAL,
                        "width": _RATIONAL,
                    },
                },
                "matsusaka": {
                    "type": "object",
                    "properties": {"C_n": _RATIONAL, "kx_coefficient": _RATIONAL, "bound": _RATIONAL},
                },
                "skoda": {
                    "type": "object",
                    "properties": {
                        "alpha": _RATIONAL,
                        "inner_exponent": _RATIONAL,
                        "outer_exponent": _RATIONAL,
                        "target": _RATIONAL,
                        "identity_holds": {"const": True},
                    },
                },
                "generation": {"type": "object", "required": ["degree", "factorizations"]},
            },
        },
        "groebner": {"type": "object"},
        "timing": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}


def rat(x: Fraction | int) -> str:
    return str(Fraction(x))


def decimal_str(x: Fraction) -> str:
    """Exact decimal rendering of a rational whose denominator is ``2^a 5^b``."""
    x = Fraction(x)
    den = x.denominator
    for prime in (2, 5):
        while den % prime == 0:
            den //= prime
    if den != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    digits = 0
    while (x * 10**digits).denominator != 1:
        digits += 1
    scaled = abs(x.numerator * 10**digits // x.denominator)
    sign = "-" if x < 0 else ""
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}" if not digits else f"{sign}{whole}.{frac:0{digits}d}"


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def _derivation_dict(d, ids: dict[int, str]) -> dict:
    if isinstance(d, JacobianMix):
        return {
            "rule": "jacobian",
            "k": d.k,
            "combos": [[rat(c) for c in vec] for vec in d.combos],
            "children": [ids[id(c)] for c in d.children],
        }
    if isinstance(d, RadicalRoot):
        return {
            "rule": "radical",
            "m": d.m,
            "power_order": rat(d.power_order),
            "support": [ids[id(s)] for s in d.support],
        }
    return {"rule": "inherited", "child": ids[id(d.child)]}


def certificate_to_dict(cert: Certificate, names: Sequence[str]) -> dict:
    ids = generator_ids(cert.history)

    def entry(g: OrderedGenerator) -> dict:
        return {
            "id": ids[id(g)],
            "poly": g.poly.to_str(names),
            "order": rat(g.order),
            "derivation": _derivation_dict(g.derivation, ids),
        }

    out = cert.outcome
    if isinstance(out, Subelliptic):
        outcome = {
            "kind": "subelliptic",
            "epsilon": rat(out.epsilon),
            "level": out.level,
            "witness": ids[id(out.witness)],
            "witness_poly": out.witness.poly.to_str(names),
        }
    else:
        outcome = {"kind": "exhausted", "levels_run": out.levels_run, "caps": dict(out.caps)}
    return {
        "variables": list(names),
        "domain_digest": cert.domain_digest,
        "config": cert.config.as_dict(),
        "outcome": outcome,
        "levels": [
            {
                "level": s.level,
                "mode": s.mode,
                "warnings": list(s.warnings),
                "J": [entry(g) for g in s.J],
                "J_tilde": [entry(g) for g in s.J_tilde],
            }
            for s in cert.history
        ],
        "history_digest": cert.history_digest(),
    }


def certificate_from_dict(doc: dict) -> Certificate:
    """Rebuild a certificate; references are resolved to shared objects.

    Raises ``KeyError``/``ValueError`` on structurally broken documents.
    """
    names = doc["variables"]
    by_id: dict[str, OrderedGenerator] = {}

    def build(e: dict, allowed_prefix: str) -> OrderedGenerator:
        d = e["derivation"]

        def ref(key: str) -> OrderedGenerator:
            if not key.startswith(allowed_prefix):
                raise ValueError(f"{e['id']} refers to {key} outside its allowed scope")
            return by_id[key]

        rule = d["rule"]
        if rule == "jacobian":
            deriv = JacobianMix(
                int(d["k"]),
                tuple(tuple(Fraction(c) for c in vec) for vec in d["combos"]),
                tuple(ref(c) for c in d["children"]),
            )
        elif rule == "radical":
            deriv = RadicalRoot(int(d["m"]), Fraction(d["power_order"]), tuple(ref(s) for s in d["support"]))
        elif rule == "inherited":
            deriv = Inherited(ref(d["child"]))
        else:
            raise ValueError(f"unknown derivation rule {rule!r}")
        g = OrderedGenerator(parse_polynomial(e["poly"], names), Fraction(e["order"]), deriv)
        if e["id"] in by_id:
            raise ValueError(f"duplicate id {e['id']}")
        by_id[e["id"]] = g
        return g

    history = []
    for lv in doc["levels"]:
        level = int(lv["level"])
        J = tuple(build(e, f"T{level - 1}.") for e in lv["J"])
        T = tuple(build(e, f"J{level}.") for e in lv["J_tilde"])
        history.append(KohnState(level, J, T, lv["mode"], tuple(lv["warnings"])))
    o = doc["outcome"]
    if o["kind"] == "subelliptic":
        outcome = Subelliptic(Fraction(o["epsilon"]), by_id[o["witness"]], int(o["level"]))
    elif o["kind"] == "exhausted":
        outcome = Exhausted(dict(o["caps"]), int(o["levels_run"]))
    else:
        raise ValueError(f"unknown outcome {o['kind']!r}")
    return Certificate(
        outcome,
        KohnConfig.from_dict(doc["config"]),
        doc["domain_digest"],
        tuple(history),
        doc.get("history_digest"),
    )


# ---------------------------------------------------------------------------
# other reports
# ---------------------------------------------------------------------------


def type_report_to_dict(r: TypeReport) -> dict:
    out = {
        "p": r.p,
        "status": "finite type" if r.p is not None else "not finite type up to cap",
        "p_cap": r.p_cap,
        "type_lower_bound": "infinity" if r.type_lower_bound is None else rat(r.type_lower_bound),
        "zero_dim": r.zero_dim,
        "inequality_checks": [{"name": n, "holds": ok} for n, ok in r.inequality_checks],
        "q_candidates": list(r.q_candidates),
    }
    if r.curve:
        exps, coeffs = r.curve
        out["curve"] = {"exponents": list(exps), "coefficients": [rat(c) for c in coeffs]}
    return out


def matsusaka_to_dict(n: int, LK: int, Ln: int, r: MatsusakaResult) -> dict:
    return {
        "n": n,
        "LK": LK,
        "Ln": Ln,
        "C_n": rat(r.C_n),
        "kx_coefficient": rat(r.kx_coefficient),
        "exponent": r.exponent,
        "bound": rat(r.bound),
    }


def ot_to_dict(enc: Enclosure, precision: Fraction) -> dict:
    return {
        "precision": rat(precision),
        "interval": [decimal_str(enc.lo), decimal_str(enc.hi)],
        "width": rat(enc.width),
    }


def skoda_to_dict(n: int, k: int, p: int, s: SkodaExponents) -> dict:
    return {
        "n": n,
        "k": k,
        "p": p,
        "alpha": rat(s.alpha),
        "q_unpadded": s.q_unpadded,
        "q": s.q,
        "inner_exponent": rat(s.inner_exponent),
        "outer_exponent": rat(s.outer_exponent),
        "target": rat(s.target),
        "identity_holds": s.inner_exponent == s.target,
        "constant": rat(s.constant),
    }


def generation_to_dict(res: GenerationResult, bound: int | None = None) -> dict:
    out: dict[str, Any] = {
        "degree": res.degree,
        "factorizations": [
            {"degree": m, "monomial": list(mono), "factors": [{"degree": d, "monomial": list(g)} for d, g in fac]}
            for (m, mono), fac in sorted(res.factorizations.items())
        ],
    }
    if bound is not None:
        out["bound"] = bound
        out["within_bound"] = res.degree <= bound
    return out
