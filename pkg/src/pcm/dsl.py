"""Parser and printer for the ``.pcm`` manifold description language.

Example::

    manifold "ss-example" {
      dim 3
      params [alpha, beta]
      metric diag(1, -1, 1)
      bracket [1,2] = alpha * e3
      phi e1 = e2
      xi = e3
      eta = dual(e3)
    }

Items are one per line; ``#`` starts a comment.  Scalars are polynomial
(or rational) expressions over the declared parameters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import ONE, ZERO, Scalar, as_scalar
from .model import AlgebraSpec, SpecError, make_spec


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, BASIS, STRING, NL, EOF, or the punctuation itself
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<string>"[^"\n]*")
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\](),;=+\-*/^])
""", re.VERBOSE)

_BASIS_RE = re.compile(r"e([1-9][0-9]*)$")


def tokenize(text: str, file: str = "<input>") -> List[Token]:
    toks: List[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(file, line, col))
        kind = m.lastgroup
        s = m.group()
        span = SourceSpan(file, line, col, max(len(s), 1))
        if kind == "nl":
            toks.append(Token("NL", s, span))
            line, col = line + 1, 1
        else:
            if kind == "string":
                toks.append(Token("STRING", s[1:-1], span))
            elif kind == "int":
                toks.append(Token("INT", s, span))
            elif kind == "ident":
                toks.append(Token("BASIS" if _BASIS_RE.match(s) else "IDENT", s, span))
            elif kind == "punct":
                toks.append(Token(s, s, span))
            col += len(s)
        pos = m.end()
    toks.append(Token("EOF", "", SourceSpan(file, line, col)))
    return toks


_ITEMS = ("dim", "params", "metric", "bracket", "phi", "xi", "eta")


class _Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0
        self.params: Tuple[str, ...] = ()
        self.dim: Optional[int] = None

    # -- token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        return ParseError(msg, (tok or self.tok).span)

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            got = "end of line" if self.tok.kind == "NL" else ("end of file" if self.tok.kind == "EOF" else repr(self.tok.text))
            raise self.error(f"expected {what or repr(kind)}, got {got}")
        return self.next()

    def skip_nl(self) -> None:
        while self.tok.kind == "NL":
            self.i += 1

    def end_item(self) -> None:
        if self.tok.kind not in ("NL", "}", "EOF"):
            raise self.error(f"unexpected {self.tok.text!r} after item")

    # -- scalars ------------------------------------------------------------

    def scalar(self) -> Scalar:
        """sum := prod (("+"|"-") prod)*"""
        v = self.product()
        while self.tok.kind in ("+", "-"):
            op = self.next().kind
            w = self.product()
            v = v + w if op == "+" else v - w
        return v

    def product(self) -> Scalar:
        v = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.next()
            w = self.unary()
            v = self._mul(v, w, op)
        return v

    def _mul(self, v: Scalar, w: Scalar, op: Token) -> Scalar:
        if op.kind == "*":
            return v * w
        if w.is_zero():
            raise self.error("division by zero", op)
        return v / w

    def unary(self) -> Scalar:
        if self.tok.kind == "-":
            self.next()
            return -self.unary()
        if self.tok.kind == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Scalar:
        base = self.atom()
        if self.tok.kind == "^":
            self.next()
            e = self.expect("INT", "an integer exponent")
            return base ** int(e.text)
        return base

    def atom(self) -> Scalar:
        t = self.tok
        if t.kind == "INT":
            self.next()
            return Scalar.const(int(t.text))
        if t.kind == "IDENT":
            if t.text not in self.params:
                raise self.error(f"unknown parameter: {t.text}")
            self.next()
            return Scalar.var(t.text, self.params)
        if t.kind == "(":
            self.next()
            v = self.scalar()
            self.expect(")", "')'")
            return v
        if t.kind == "BASIS":
            raise self.error(f"basis vector {t.text} where a scalar is expected")
        raise self.error("expected a scalar expression")

    # -- vectors ----------------------------------------------------------------

    def basis_index(self, tok: Token) -> int:
        k = int(_BASIS_RE.match(tok.text).group(1))
        if self.dim is not None and k > self.dim:
            raise self.error(f"index out of range: e{k} (dim {self.dim})", tok)
        return k - 1

    def _basis(self, dual: bool) -> int:
        if dual:
            t = self.tok
            if not (t.kind == "IDENT" and t.text == "dual"):
                raise self.error("expected dual(eK)")
            self.next()
            self.expect("(", "'('")
            k = self.basis_index(self.expect("BASIS", "a basis vector eK"))
            self.expect(")", "')'")
            return k
        return self.basis_index(self.expect("BASIS", "a basis vector eK"))

    def _at_basis(self, dual: bool) -> bool:
        t = self.tok
        return (t.kind == "IDENT" and t.text == "dual") if dual else t.kind == "BASIS"

    def vec_term(self, dual: bool) -> Tuple[Scalar, int]:
        """``[scalar "*"] basis`` where the scalar is a product of factors."""
        coef = ONE
        if self.tok.kind in ("-", "+"):
            if self.next().kind == "-":
                coef = -coef
        op = None
        while not self._at_basis(dual):
            f = self.power()
            coef = coef * f if op is None or op.kind == "*" else self._mul(coef, f, op)
            if self.tok.kind not in ("*", "/"):
                raise self.error("expected '*' before the basis vector" if self.tok.kind not in ("NL", "EOF")
                                 else "expected a basis vector")
            op = self.next()
        return coef, self._basis(dual)

    def vecexpr(self, dual: bool = False) -> List[Scalar]:
        assert self.dim is not None
        out = [ZERO] * self.dim
        t = self.tok
        if t.kind == "INT" and t.text == "0" and self.toks[self.i + 1].kind in ("NL", "}", "EOF"):
            self.next()
            return out
        coef, k = self.vec_term(dual)
        out[k] = out[k] + coef
        while self.tok.kind in ("+", "-"):
            sign = self.next().kind
            coef, k = self.vec_term(dual)
            out[k] = out[k] + coef if sign == "+" else out[k] - coef
        return out

    # -- items ------------------------------------------------------------------

    def parse(self) -> AlgebraSpec:
        self.skip_nl()
        kw = self.tok
        if not (kw.kind == "IDENT" and kw.text == "manifold"):
            raise self.error("expected 'manifold'")
        self.next()
        name = self.expect("STRING", "a quoted manifold name").text
        self.expect("{", "'{'")
        seen: Dict[str, Token] = {}
        metric_tok = None
        metric: Optional[List] = None
        brackets: Dict[Tuple[int, int], List[Scalar]] = {}
        phi: Dict[int, List[Scalar]] = {}
        xi = eta = None
        while True:
            self.skip_nl()
            t = self.tok
            if t.kind == "}":
                close = self.next()
                break
            if t.kind == "EOF":
                raise self.error("missing '}'")
            if t.kind != "IDENT" or t.text not in _ITEMS:
                raise self.error(f"unknown item {t.text!r}")
            self.next()
            item = t.text
            if item in ("dim", "params", "metric", "xi", "eta"):
                if item in seen:
                    raise self.error(f"duplicate item: {item}", t)
                seen[item] = t
            if item != "dim" and item != "params" and self.dim is None:
                raise self.error("dim must be declared before " + item, t)
            if item == "dim":
                it = self.expect("INT", "an integer dimension")
                d = int(it.text)
                if d < 3 or d % 2 == 0:
                    raise self.error("dim must be odd and at least 3", it)
                self.dim = d
            elif item == "params":
                self.expect("[", "'['")
                names = []
                while True:
                    p = self.expect("IDENT", "a parameter name")
                    if p.text in names:
                        raise self.error(f"duplicate parameter: {p.text}", p)
                    if p.text == "dual":
                        raise self.error("'dual' is reserved", p)
                    names.append(p.text)
                    if self.tok.kind != ",":
                        break
                    self.next()
                self.expect("]", "']'")
                self.params = tuple(names)
            elif item == "metric":
                metric_tok = t
                metric = self.metric()
            elif item == "bracket":
                self.expect("[", "'['")
                it = self.expect("INT", "an index")
                self.expect(",", "','")
                jt = self.expect("INT", "an index")
                self.expect("]", "']'")
                i, j = int(it.text), int(jt.text)
                for tk, v in ((it, i), (jt, j)):
                    if not 1 <= v <= self.dim:
                        raise self.error(f"index out of range: {v} (dim {self.dim})", tk)
                if i == j:
                    raise self.error("bracket indices must differ", it)
                key = (min(i, j) - 1, max(i, j) - 1)
                if key in brackets:
                    raise self.error(f"duplicate bracket [{key[0] + 1},{key[1] + 1}]", t)
                self.expect("=", "'='")
                v = self.vecexpr()
                brackets[key] = v if i < j else [-x for x in v]
            elif item == "phi":
                bt = self.expect("BASIS", "a basis vector eK")
                k = self.basis_index(bt)
                if k in phi:
                    raise self.error(f"duplicate phi {bt.text}", t)
                self.expect("=", "'='")
                phi[k] = self.vecexpr()
            elif item == "xi":
                self.expect("=", "'='")
                xi_tok = self.tok
                xi = (self.vecexpr(), xi_tok)
            elif item == "eta":
                self.expect("=", "'='")
                eta_tok = self.tok
                eta = (self.vecexpr(dual=True), eta_tok)
            self.end_item()
        self.skip_nl()
        if self.tok.kind != "EOF":
            raise self.error("unexpected input after manifold block")
        for req in ("dim", "metric", "xi"):
            if req not in seen and not (req == "dim" and self.dim is not None):
                raise ParseError(f"missing required item: {req}", close.span)
        return self.build(name, metric, metric_tok, brackets, phi, xi, eta)

    def metric(self) -> List:
        kind = self.expect("IDENT", "'diag' or 'rows'")
        if kind.text not in ("diag", "rows"):
            raise self.error("expected 'diag' or 'rows'", kind)
        self.expect("(", "'('")
        rows: List[List[Tuple[Scalar, Token]]] = [[]]
        while True:
            st = self.tok
            rows[-1].append((self.scalar(), st))
            if self.tok.kind == ",":
                self.next()
            elif self.tok.kind == ";" and kind.text == "rows":
                self.next()
                rows.append([])
            else:
                break
        self.expect(")", "')'")
        for row in rows:
            for v, st in row:
                if not v.is_constant():
                    raise self.error("metric entries must be constant", st)
        if kind.text == "diag":
            vals = [v for v, _ in rows[0]]
            if len(vals) != self.dim:
                raise self.error(f"metric diag has {len(vals)} entries, dim is {self.dim}", kind)
            return vals
        if len(rows) != self.dim or any(len(r) != self.dim for r in rows):
            raise self.error(f"metric rows must form a {self.dim}x{self.dim} matrix", kind)
        return [[v for v, _ in r] for r in rows]

    def build(self, name, metric, metric_tok, brackets, phi, xi, eta) -> AlgebraSpec:
        xi_vec, xi_tok = xi
        for v in xi_vec:
            if not v.is_constant():
                raise self.error("xi must have constant components", xi_tok)
        xi_c = [v.constant_value() for v in xi_vec]
        eta_c = None
        if eta is not None:
            eta_vec, eta_tok = eta
            if any(not v.is_constant() for v in eta_vec):
                raise self.error("eta must have constant components", eta_tok)
            eta_c = [v.constant_value() for v in eta_vec]
        try:
            spec = make_spec(name, self.dim, self.params, brackets, metric, phi, xi_c)
        except SpecError as exc:
            raise ParseError(str(exc), metric_tok.span) from exc
        if eta_c is not None and tuple(eta_c) != spec.eta:
            raise ParseError("eta does not match g(., xi)", eta_tok.span)
        return spec


def parse_spec(text: str, file: str = "<input>") -> AlgebraSpec:
    return _Parser(text, file).parse()


def load_spec(path: str) -> AlgebraSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), path)


# ---------------------------------------------------------------------------
# Printer


def _coef(s: Scalar) -> str:
    """A scalar in a form that can stand before ``* eK``."""
    text = str(s)
    if s.den.is_constant() and len(s.num.terms) == 1:
        return text
    return f"({text})" if s.den.is_constant() else text


def format_vec(vec: Sequence[Scalar], dual: bool = False) -> str:
    parts = []
    for k, c in enumerate(as_scalar(x) for x in vec):
        if c.is_zero():
            continue
        basis = f"dual(e{k + 1})" if dual else f"e{k + 1}"
        neg = c.is_constant() and c.constant_value() < 0 or (
            c.den.is_constant() and len(c.num.terms) == 1 and c.num.leading()[1] < 0)
        mag = -c if neg else c
        body = basis if mag == ONE else f"{_coef(mag)} * {basis}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts) or "0"


def format_spec(spec: AlgebraSpec) -> str:
    d = spec.dim
    g = spec.metric
    lines = [f'manifold "{spec.name}" {{', f"  dim {d}"]
    if spec.params:
        lines.append(f"  params [{', '.join(spec.params)}]")
    if all(g[i, j].is_zero() for i in range(d) for j in range(d) if i != j):
        lines.append(f"  metric diag({', '.join(str(g[i, i]) for i in range(d))})")
    else:
        rows = "; ".join(", ".join(str(g[i, j]) for j in range(d)) for i in range(d))
        lines.append(f"  metric rows({rows})")
    for i in range(d):
        for j in range(i + 1, d):
            v = spec.bracket_vec(i, j)
            if any(not x.is_zero() for x in v):
                lines.append(f"  bracket [{i + 1},{j + 1}] = {format_vec(v)}")
    for j in range(d):
        lines.append(f"  phi e{j + 1} = {format_vec(spec.phi.col(j))}")
    lines.append(f"  xi = {format_vec([Scalar.const(x) for x in spec.xi])}")
    lines.append(f"  eta = {format_vec([Scalar.const(x) for x in spec.eta], dual=True)}")
    lines.append("}")
    return "\n".join(lines) + "\n"
