"""Reader and printer for domain files.

::

    # comments run to end of line
    vars z1 z2;
    h1 = z1^2;
    h2 = z2^2 - 3/4*z1*z2;
    config { max_level = 5; seed = 7; }
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .kohn import ComboStrategy, KohnConfig, SpecialDomain
from .poly import Polynomial

CONFIG_KEYS = (
    "coeff_bound",
    "degree_cap",
    "exponent_cap",
    "generator_cap",
    "m_max",
    "max_level",
    "p_cap",
    "random_combos",
    "seed",
)
KEYWORDS = {"vars", "config"}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()=;{}])"
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, tokens: list[Token], names: Sequence[str] = ()):
        self.toks = tokens
        self.i = 0
        self.names = list(names)

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.text else "end of input"
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "id")

    # expr := term (('+'|'-') term)*
    def expr(self) -> Polynomial:
        value = self.term()
        while self.at("+") or self.at("-"):
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or not rhs:
                    raise self.error("division only by a nonzero constant", op)
                value = value.scale(1 / rhs.constant_term())
        return value

    def unary(self) -> Polynomial:
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.at("^"):
            self.take()
            exp = self.take(kind="num")
            return base ** int(exp.text)
        return base

    def atom(self) -> Polynomial:
        t = self.tok
        n = len(self.names)
        if t.kind == "num":
            self.take()
            return Polynomial.constant(int(t.text), n)
        if t.kind == "id":
            if t.text not in self.names:
                raise self.error(f"undeclared variable {t.text!r}")
            self.take()
            return Polynomial.variable(self.names.index(t.text), n)
        if self.at("("):
            self.take()
            value = self.expr()
            self.take(")")
            return value
        got = repr(t.text) if t.text else "end of input"
        raise self.error(f"expected a number, variable or '(', found {got}")


@dataclass
class DomainFile:
    names: tuple[str, ...]
    h: tuple[Polynomial, ...]
    config: dict[str, int] = field(default_factory=dict)

    def domain(self) -> SpecialDomain:
        return SpecialDomain(self.h, self.names)

    def kohn_config(self, **overrides) -> KohnConfig:
        c = {**self.config, **{k: v for k, v in overrides.items() if v is not None}}
        defaults = KohnConfig()
        combos = ComboStrategy(
            c.get("random_combos", defaults.combos.random_combos),
            c.get("seed", defaults.combos.seed),
            c.get("coeff_bound", defaults.combos.coeff_bound),
        )
        return KohnConfig(
            max_level=c.get("max_level", defaults.max_level),
            m_max=c.get("m_max", defaults.m_max),
            generator_cap=c.get("generator_cap", defaults.generator_cap),
            combos=combos,
        )


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    p = _Parser(tokenize(text), names)
    value = p.expr()
    p.take(kind="eof")
    return value


def parse_domain(text: str) -> DomainFile:
    p = _Parser(tokenize(text))
    p.take("vars")
    names: list[str] = []
    while p.tok.kind == "id":
        t = p.take()
        if t.text in KEYWORDS or re.fullmatch(r"h\d+", t.text):
            raise p.error(f"{t.text!r} cannot be a variable name", t)
        if t.text in names:
            raise p.error(f"variable {t.text!r} declared twice", t)
        names.append(t.text)
    if not names:
        raise p.error("declare at least one variable")
    p.take(";")
    p.names = names

    defs: dict[int, tuple[Polynomial, Token]] = {}
    while p.tok.kind == "id" and re.fullmatch(r"h\d+", p.tok.text):
        head = p.take()
        idx = int(head.text[1:])
        if idx < 1:
            raise p.error("h indices start at 1", head)
        if idx in defs:
            raise p.error(f"{head.text} defined twice", head)
        p.take("=")
        poly = p.expr()
        p.take(";")
        if poly.constant_term():
            raise p.error(f"{head.text} must vanish at the origin (constant term {poly.constant_term()})", head)
        defs[idx] = (poly, head)
    if not defs:
        raise p.error("expected at least one definition h1 = ...;")
    for k in range(1, max(defs) + 1):
        if k not in defs:
            raise p.error(f"h{k} is missing", defs[max(defs)][1])

    config: dict[str, int] = {}
    if p.at("config"):
        p.take("config")
        p.take("{")
        while not p.at("}"):
            key = p.take(kind="id")
            if key.text not in CONFIG_KEYS:
                raise p.error(f"unknown config key {key.text!r}", key)
            if key.text in config:
                raise p.error(f"config key {key.text!r} set twice", key)
            p.take("=")
            val = p.take(kind="num")
            p.take(";")
            config[key.text] = int(val.text)
        p.take("}")
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    h = tuple(defs[k][0] for k in sorted(defs))
    return DomainFile(tuple(names), h, config)


def format_domain(df: DomainFile) -> str:
    """Canonical text; ``parse_domain(format_domain(df))`` reproduces ``df``."""
    lines = ["vars " + " ".join(df.names) + ";"]
    for j, poly in enumerate(df.h, 1):
        lines.append(f"h{j} = {poly.to_str(df.names)};")
    if df.config:
        lines.append("config {")
        for key in sorted(df.config):
            lines.append(f"  {key} = {df.config[key]};")
        lines.append("}")
    return "\n".join(lines) + "\n"
