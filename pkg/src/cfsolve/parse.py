"""Text front end: polynomial systems and domain boxes.

A system is a ``;``-separated list of expressions over integer literals,
identifiers, ``+ - * ^`` (``**`` also accepted) and parentheses.  An optional
``vars x, y;`` header fixes the variable order; otherwise variables are
numbered in order of first appearance.  ``#`` starts a comment.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .homography import DomainBox
from .tensorpoly import TensorPoly

__all__ = ["ParseError", "ParsedSystem", "parse_system", "parse_box", "format_system"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class _Tok:
    kind: str  # int, ident, op, end
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>\#[^\n]*) |
    (?P<bad>\d+(?:\.\d*)?[eE][+-]?\d+|\d+\.\d*|\.\d+) |
    (?P<int>\d+) |
    (?P<ident>[A-Za-z_][A-Za-z0-9_]*) |
    (?P<op>\*\*|[-+*^();,:])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "bad":
            raise ParseError(f"non-integer literal {m.group()!r}", line, col)
        elif kind in ("int", "ident", "op"):
            toks.append(_Tok(kind, m.group(), line, col))
        pos = m.end()
    toks.append(_Tok("end", "", line, pos - line_start + 1))
    return toks


# polynomials during parsing: {exponent tuple: coefficient}
Poly = dict


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _ppow(a: Poly, k: int, n: int) -> Poly:
    result: Poly = {(0,) * n: 1}
    while k:
        if k & 1:
            result = _pmul(result, a)
        a = _pmul(a, a)
        k >>= 1
    return result


class _Parser:
    def __init__(self, toks: list[_Tok], names: list[str]):
        self.toks = toks
        self.i = 0
        self.names = names

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def expression(self) -> Poly:
        acc = self.term()
        while True:
            if self.accept("+"):
                acc = _padd(acc, self.term())
            elif self.accept("-"):
                acc = _padd(acc, self.term(), -1)
            else:
                return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.accept("*"):
            acc = _pmul(acc, self.unary())
        return acc

    def unary(self) -> Poly:
        if self.accept("-"):
            return {e: -c for e, c in self.unary().items()}
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.accept("^") or self.accept("**"):
            tok = self.tok
            if tok.kind != "int":
                self.error("exponent must be a nonnegative integer literal")
            self.i += 1
            return _ppow(base, int(tok.text), len(self.names))
        return base

    def atom(self) -> Poly:
        tok = self.tok
        n = len(self.names)
        if tok.kind == "int":
            self.i += 1
            v = int(tok.text)
            return {(0,) * n: v} if v else {}
        if tok.kind == "ident":
            self.i += 1
            if tok.text not in self.names:
                self.error(f"undeclared variable {tok.text!r}", tok)
            e = [0] * n
            e[self.names.index(tok.text)] = 1
            return {tuple(e): 1}
        if self.accept("("):
            inner = self.expression()
            self.expect(")")
            return inner
        self.error(f"unexpected {tok.text or 'end of input'!r}")


@dataclass(frozen=True)
class ParsedSystem:
    variables: tuple[str, ...]
    polys: tuple[TensorPoly, ...]

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]


def _header(toks: list[_Tok]) -> tuple[list[str] | None, int]:
    if not (toks[0].kind == "ident" and toks[0].text == "vars"):
        return None, 0
    names: list[str] = []
    i = 1
    while True:
        t = toks[i]
        if t.kind != "ident":
            raise ParseError("expected a variable name", t.line, t.col)
        if t.text in names:
            raise ParseError(f"duplicate variable {t.text!r}", t.line, t.col)
        names.append(t.text)
        i += 1
        t = toks[i]
        if t.kind == "op" and t.text == ",":
            i += 1
            continue
        if t.kind == "op" and t.text == ";":
            return names, i + 1
        raise ParseError("expected ',' or ';' in variable header", t.line, t.col)


def parse_system(text: str, variables: Sequence[str] | None = None) -> ParsedSystem:
    """Parse a ``;``-separated polynomial system into tensors."""
    toks = _tokenize(text)
    names, start = _header(toks)
    if variables is not None:
        names = list(variables)
    if names is None:
        names = []
        for t in toks[start:]:
            if t.kind == "ident" and t.text not in names:
                names.append(t.text)
        if not names:
            names = ["x"]
    p = _Parser(toks[start:], names)
    polys = []
    while p.tok.kind != "end":
        if p.accept(";"):
            continue
        polys.append(p.expression())
        if p.tok.kind != "end" and not p.accept(";"):
            p.error(f"expected ';' or an operator, found {p.tok.text!r}")
    if not polys:
        raise ParseError("no polynomial given", 1, 1)
    n = len(names)
    out = tuple(TensorPoly.from_terms(d, n) if d else TensorPoly.constant(0, n) for d in polys)
    return ParsedSystem(tuple(names), out)


def _parse_endpoint(s: str, allow_inf: bool) -> Fraction | float:
    s = s.strip()
    if s.lower() in ("inf", "+inf", "infinity", "oo"):
        if not allow_inf:
            raise ParseError(f"lower endpoint cannot be infinite: {s!r}")
        return math.inf
    m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", s)
    if not m:
        raise ParseError(f"malformed endpoint {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"zero denominator in {s!r}")
    return Fraction(num, den)


def parse_box(text: str, nvars: int | None = None) -> DomainBox:
    """Parse ``lo:hi,lo:hi,...``; a single interval is repeated ``nvars`` times."""
    parts = [p for p in text.split(",")]
    ivs = []
    for part in parts:
        if part.count(":") != 1:
            raise ParseError(f"interval {part.strip()!r} must have the form lo:hi")
        lo_s, hi_s = part.split(":")
        lo = _parse_endpoint(lo_s, False)
        hi = _parse_endpoint(hi_s, True)
        if hi != math.inf and lo >= hi:
            raise ParseError(f"empty interval {part.strip()!r}")
        ivs.append((lo, hi))
    if nvars is not None:
        if len(ivs) == 1 and nvars > 1:
            ivs = ivs * nvars
        elif len(ivs) != nvars:
            raise ParseError(f"box has {len(ivs)} intervals but the system has {nvars} variables")
    return DomainBox(ivs)


def format_system(system: ParsedSystem | Sequence[TensorPoly], variables: Sequence[str] | None = None) -> str:
    """Canonical text form, parseable by :func:`parse_system`."""
    if isinstance(system, ParsedSystem):
        variables = variables or system.variables
        polys = system.polys
    else:
        polys = list(system)
    names = list(variables) if variables else None
    header = f"vars {', '.join(names)};\n" if names else ""
    return header + ";\n".join(f.to_string(names) for f in polys) + "\n"
