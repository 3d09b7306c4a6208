"""Command line front end.

Exit codes: 0 success, 1 usage or parse error, 2 a search hit its caps
(Exhausted run, no finite type up to the cap, or a violated generation
bound), 3 replay mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .bounds import (
    GradedMonomialRing,
    MatsusakaInput,
    generation_bound,
    generation_degree,
    matsusaka_bound,
    ot_constant,
    skoda_exponents,
)
from .finite_type import DEFAULT_EXPONENT_CAP, DEFAULT_P_CAP, TypeReport, type_report
from .groebner import Ideal, is_member, is_radical_member, normal_form
from .kohn import Certificate, KohnConfig, ReplayMismatch, Subelliptic, check_certificate, run
from .parser import CONFIG_KEYS, DomainFile, parse_domain, parse_polynomial
from .poly import DEFAULT_DEGREE_CAP, degree_cap
from .serialize import (
    RUN_OUTPUT_SCHEMA,
    SCHEMA_ID,
    certificate_from_dict,
    certificate_to_dict,
    dumps,
    generation_to_dict,
    matsusaka_to_dict,
    ot_to_dict,
    rat,
    sha256_text,
    skoda_to_dict,
    type_report_to_dict,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EXHAUSTED = 2
EXIT_REPLAY_MISMATCH = 3

ENV_PREFIX = "KOHNALG_"

log = logging.getLogger("kohnalg")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _defaults() -> dict[str, int]:
    k = KohnConfig()
    base = {
        "max_level": k.max_level,
        "m_max": k.m_max,
        "generator_cap": k.generator_cap,
        "random_combos": k.combos.random_combos,
        "seed": k.combos.seed,
        "coeff_bound": k.combos.coeff_bound,
        "p_cap": DEFAULT_P_CAP,
        "exponent_cap": DEFAULT_EXPONENT_CAP,
        "degree_cap": DEFAULT_DEGREE_CAP,
    }
    for key in CONFIG_KEYS:
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            try:
                base[key] = int(env)
            except ValueError:
                raise UsageError(f"{ENV_PREFIX + key.upper()} must be an integer, got {env!r}") from None
    return base


def effective_config(args: argparse.Namespace, df: DomainFile | None = None) -> dict[str, int]:
    """Defaults, then environment, then the domain file, then command-line flags."""
    cfg = _defaults()
    if df is not None:
        cfg.update(df.config)
    for key, flag in (("seed", "seed"), ("max_level", "max_level"), ("degree_cap", "degree_cap")):
        val = getattr(args, flag, None)
        if val is not None:
            cfg[key] = val
    return cfg


def kohn_config(cfg: dict[str, int]) -> KohnConfig:
    return DomainFile((), (), cfg).kohn_config()


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_domain(path: str) -> tuple[str, DomainFile]:
    text = _read(path)
    return text, parse_domain(text)


def _emit(args: argparse.Namespace, doc: dict, human: list[str], started: float) -> None:
    if args.timing:
        doc["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    if args.json:
        sys.stdout.write(dumps(doc))
    else:
        if args.timing:
            human = human + [f"time: {doc['timing']['seconds']:.3f} s"]
        sys.stdout.write("\n".join(human) + "\n")


def _document(command: str, input_text: str, cfg: dict[str, int]) -> dict:
    return {
        "schema": SCHEMA_ID,
        "command": command,
        "input_digest": sha256_text(input_text),
        "config": dict(cfg),
    }


def _type_lines(r: TypeReport) -> list[str]:
    if r.p is None:
        lines = [f"finite type: no (not finite type up to cap {r.p_cap})"]
    else:
        lines = [f"finite type: p = {r.p}"]
    t = "infinity" if r.type_lower_bound is None else rat(r.type_lower_bound)
    lines.append(f"type lower bound (monomial curves): {t}")
    lines.append(f"isolated zero at origin: {'yes' if r.zero_dim else 'not established'}")
    for name, ok in r.inequality_checks:
        lines.append(f"  [{'pass' if ok else 'FAIL'}] {name}")
    if r.q_candidates:
        lines.append(f"  consistent q: {', '.join(map(str, r.q_candidates))}")
    return lines


def _cert_lines(cert: Certificate, names: Sequence[str], trace: bool) -> list[str]:
    lines = []
    out = cert.outcome
    if isinstance(out, Subelliptic):
        lines.append(
            f"outcome: subelliptic, epsilon = {rat(out.epsilon)} at level {out.level} "
            f"(witness {out.witness.poly.to_str(names)})"
        )
    else:
        lines.append(f"outcome: exhausted after {out.levels_run} levels (no unit multiplier found within caps)")
    for w in cert.warnings:
        lines.append(f"warning: {w}")
    if trace:
        for s in cert.history:
            lines.append(f"level {s.level} [{s.mode}]")
            lines.append("  J:  " + ", ".join(f"{g.poly.to_str(names)} ({rat(g.order)})" for g in s.J))
            lines.append("  J~: " + ", ".join(f"{g.poly.to_str(names)} ({rat(g.order)})" for g in s.J_tilde))
    return lines


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_kohn(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    text, df = _load_domain(args.file)
    cfg = effective_config(args, df)
    domain = df.domain()
    with degree_cap(cfg["degree_cap"]):
        cert = run(domain, kohn_config(cfg))
        report = type_report(domain, cfg["p_cap"], cfg["exponent_cap"], cfg["seed"])
    doc = _document("kohn", text, cfg)
    doc["certificate"] = certificate_to_dict(cert, domain.names)
    doc["type_report"] = type_report_to_dict(report)
    human = _cert_lines(cert, domain.names, args.trace) + _type_lines(report)
    _emit(args, doc, human, started)
    return EXIT_OK if cert.subelliptic else EXIT_EXHAUSTED


def cmd_finite_type(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    text, df = _load_domain(args.file)
    cfg = effective_config(args, df)
    with degree_cap(cfg["degree_cap"]):
        report = type_report(df.domain(), cfg["p_cap"], cfg["exponent_cap"], cfg["seed"])
    doc = _document("finite-type", text, cfg)
    doc["type_report"] = type_report_to_dict(report)
    _emit(args, doc, _type_lines(report), started)
    return EXIT_OK if report.p is not None else EXIT_EXHAUSTED


def cmd_groebner(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    text, df = _load_domain(args.file)
    cfg = effective_config(args, df)
    names = df.names
    if args.op != "gb" and args.poly is None:
        raise UsageError(f"groebner {args.op} needs --poly")
    with degree_cap(cfg["degree_cap"]):
        ideal = Ideal(df.h, nvars=len(names))
        result: dict = {"op": args.op, "basis": [b.to_str(names) for b in ideal.basis]}
        human = ["basis: " + ", ".join(result["basis"])]
        if args.poly is not None:
            f = parse_polynomial(args.poly, names)
            result["poly"] = f.to_str(names)
            if args.op == "nf":
                r = normal_form(f, ideal)
                result["normal_form"] = r.to_str(names)
                human.append(f"normal form: {result['normal_form']}")
            elif args.op == "member":
                result["member"] = is_member(f, ideal)
                human.append(f"member: {'yes' if result['member'] else 'no'}")
            elif args.op == "radical-member":
                result["radical_member"] = is_radical_member(f, ideal)
                human.append(f"radical member: {'yes' if result['radical_member'] else 'no'}")
    doc = _document("groebner", text + "\n--poly " + (args.poly or ""), cfg)
    doc["groebner"] = result
    _emit(args, doc, human, started)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    kind = args.kind
    if kind == "matsusaka":
        r = matsusaka_bound(MatsusakaInput(args.n, args.lk, args.ln))
        body = matsusaka_to_dict(args.n, args.lk, args.ln, r)
        human = [
            f"C_{args.n} = {r.C_n}",
            f"K~_X coefficient of L = {r.kx_coefficient}",
            f"mL - B very ample for m >= {rat(r.bound)}",
        ]
    elif kind == "ot":
        prec = Fraction(args.precision)
        enc = ot_constant(prec)
        body = ot_to_dict(enc, prec)
        human = [f"8 pi e sqrt(2 + 1/e) in [{body['interval'][0]}, {body['interval'][1]}]"]
    elif kind == "skoda":
        p = args.p if args.p is not None else args.n + 1
        s = skoda_exponents(args.n, args.k, p)
        body = skoda_to_dict(args.n, args.k, p, s)
        human = [
            f"alpha = {rat(s.alpha)}, q = {s.q} (min(n, p-1) = {s.q_unpadded} before padding)",
            f"2 alpha q + 2 = {rat(s.inner_exponent)} = 2(n+k+1) = {s.target}",
            f"alpha/(alpha-1) = {rat(s.constant)}",
        ]
    else:
        ring = _ring_from_args(args)
        res = generation_degree(ring)
        bound = None
        if args.a is not None:
            if args.n is None or args.b is None:
                raise UsageError("--a needs --n and --b as well")
            if args.a <= 1 or args.b < 0 or args.n < 1:
                raise UsageError("need n >= 1, a > 1, b >= 0")
            bound = generation_bound(args.n, args.a, args.b)
        body = generation_to_dict(res, bound)
        human = [f"generation degree: {res.degree}"]
        if bound is not None:
            human.append(f"(n+2)a+b-1 = {bound}: {'within bound' if res.degree <= bound else 'BOUND VIOLATED'}")
    doc = _document("bounds", args.argv, {})
    doc["bounds"] = {kind: body}
    _emit(args, doc, human, started)
    if kind == "generation" and body.get("within_bound") is False:
        return EXIT_EXHAUSTED
    return EXIT_OK


def _ring_from_args(args: argparse.Namespace) -> GradedMonomialRing:
    M = args.truncation
    chosen = [x for x in (args.semigroup, args.polynomial_ring, args.veronese) if x is not None]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --semigroup, --polynomial-ring, --veronese")
    if args.semigroup is not None:
        return GradedMonomialRing.semigroup(args.semigroup, M)
    if args.polynomial_ring is not None:
        return GradedMonomialRing.polynomial_ring(args.polynomial_ring, M)
    nv, d = args.veronese
    return GradedMonomialRing.veronese(nv, d, M)


def cmd_replay(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    raw = _read(args.output)
    text, df = _load_domain(args.domain)
    try:
        doc = json.loads(raw)
        cert_doc = doc.get("certificate", doc)
        cert = certificate_from_dict(cert_doc)
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        sys.stderr.write(f"replay: malformed certificate: {exc}\n")
        return EXIT_REPLAY_MISMATCH
    cfg = effective_config(args, df)
    try:
        with degree_cap(cfg["degree_cap"]):
            check_certificate(cert, df.domain())
    except ReplayMismatch as exc:
        sys.stderr.write(f"replay: mismatch at {exc.node}: {exc.reason}\n")
        return EXIT_REPLAY_MISMATCH
    except (KeyError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"replay: malformed certificate: {exc}\n")
        return EXIT_REPLAY_MISMATCH
    doc = _document("replay", raw + text, cfg)
    _emit(args, doc, ["replay: ok, every node re-derived"], started)
    return EXIT_OK


def cmd_schema(args: argparse.Namespace) -> int:
    sys.stdout.write(dumps(RUN_OUTPUT_SCHEMA))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--trace", action="store_true", help="print every level of the run")
    common.add_argument("--seed", type=int, help="seed for random combinations and curve samples")
    common.add_argument("--max-level", type=int, dest="max_level")
    common.add_argument("--degree-cap", type=int, dest="degree_cap")
    common.add_argument("--timing", action="store_true", help="report wall-clock time (breaks byte-identical output)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="kohnalg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kohn", parents=[common], help="run the multiplier-ideal procedure")
    p.add_argument("file")
    p.set_defaults(func=cmd_kohn)

    p = sub.add_parser("finite-type", parents=[common], help="finite-type order and type estimate")
    p.add_argument("file")
    p.set_defaults(func=cmd_finite_type)

    p = sub.add_parser("groebner", parents=[common], help="Gröbner basis operations on (h_1..h_N)")
    p.add_argument("op", choices=["gb", "nf", "member", "radical-member"])
    p.add_argument("file")
    p.add_argument("--poly", help="polynomial in the file's variables")
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("bounds", help="effective bound formulas")
    bsub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    b = bsub.add_parser("matsusaka", parents=[common])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--lk", type=int, required=True, help="L^(n-1).K~_X")
    b.add_argument("--ln", type=int, required=True, help="L^n")
    b = bsub.add_parser("ot", parents=[common])
    b.add_argument("--precision", default="1/1000000")
    b = bsub.add_parser("skoda", parents=[common])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--p", type=int)
    b = bsub.add_parser("generation", parents=[common])
    b.add_argument("--semigroup", type=int, nargs="+")
    b.add_argument("--polynomial-ring", type=int, dest="polynomial_ring", metavar="NVARS")
    b.add_argument("--veronese", type=int, nargs=2, metavar=("NVARS", "DEGREE"))
    b.add_argument("--truncation", type=int, required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--a", type=int)
    b.add_argument("--b", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("replay", parents=[common], help="audit a certificate against a domain file")
    p.add_argument("output")
    p.add_argument("domain")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("schema", help="print the JSON schema of --json output")
    p.set_defaults(func=cmd_schema, verbose=0)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.argv = " ".join(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"kohnalg: {exc}\n")
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"kohnalg: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
