"""Tokenizer and recursive-descent parser for the ML-like surface language."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .syntax import (
    FrontendError,
    PCons,
    PLit,
    PNil,
    PTuple,
    PVar,
    SApp,
    SBinop,
    SCons,
    SExpr,
    SFun,
    SIf,
    SLet,
    SList,
    SLit,
    SMatch,
    SShare,
    SSeq,
    STick,
    STuple,
    SUnop,
    SurfaceProgram,
    SVar,
    Span,
    error,
)

KEYWORDS = {"let", "in", "match", "with", "if", "then", "else", "tick", "true", "false", "not", "share", "as"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\(\*)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_'#$]*)
  | (?P<sym>::|->|&&|\|\||[()\[\],;|@=<+\-*/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # int | ident | kw | sym | eof
    text: str
    span: Span


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        span = Span(line, pos - line_start + 1)
        if not m:
            raise error(f"unexpected character {source[pos]!r}", span)
        kind = m.lastgroup
        if kind == "comment":
            depth, i = 1, m.end()
            while depth and i < len(source):
                if source.startswith("(*", i):
                    depth, i = depth + 1, i + 2
                elif source.startswith("*)", i):
                    depth, i = depth - 1, i + 2
                else:
                    i += 1
            if depth:
                raise error("unterminated comment", span)
            end = i
        else:
            end = m.end()
            text = m.group()
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            if kind != "ws":
                tokens.append(Token(kind, text, span))
        chunk = source[pos:end]
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = end
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return tokens


class Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("kw", "sym") and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise error(f"expected {text!r} but found {self.tok.text or 'end of input'!r}", self.tok.span)
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise error(f"expected identifier but found {self.tok.text or 'end of input'!r}", self.tok.span)
        return self.advance()

    # -- program

    def program(self) -> SurfaceProgram:
        funs: list[SFun] = []
        seen: set[str] = set()
        while self.tok.kind != "eof":
            start = self.expect("let")
            name = self.ident()
            params = []
            while self.tok.kind == "ident":
                params.append(self.advance().text)
            if not params:
                raise error(f"function {name.text!r} needs at least one parameter", name.span)
            self.expect("=")
            body = self.expr()
            if name.text in seen:
                raise error(f"duplicate function name {name.text!r}", name.span)
            seen.add(name.text)
            funs.append(SFun(name.text, tuple(params), body, start.span))
        return SurfaceProgram(tuple(funs))

    # -- expressions, lowest precedence first

    def expr(self) -> SExpr:
        first = self.control()
        if self.at(";"):
            span = self.advance().span
            return SSeq(first, self.expr(), span)
        return first

    def control(self) -> SExpr:
        t = self.tok
        if self.at("let"):
            if not (self.peek().kind == "ident" and self.peek(2).text == "="):
                raise error("expected 'let <name> = <expr> in <expr>'", t.span)
            self.advance()
            name = self.ident().text
            self.expect("=")
            bound = self.expr()
            self.expect("in")
            return SLet(name, bound, self.expr(), t.span)
        if self.at("match"):
            self.advance()
            scrut = self.expr()
            self.expect("with")
            arms = []
            if not self.at("|"):
                raise error("match needs at least one arm", self.tok.span)
            while self.at("|"):
                self.advance()
                pat = self.pattern()
                self.expect("->")
                arms.append((pat, self.expr()))
            return SMatch(scrut, tuple(arms), t.span)
        if self.at("if"):
            self.advance()
            cond = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            return SIf(cond, then, self.expr(), t.span)
        if self.at("share"):
            self.advance()
            name = self.ident().text
            self.expect("as")
            c1 = self.ident().text
            self.expect(",")
            c2 = self.ident().text
            self.expect("in")
            return SShare(name, c1, c2, self.expr(), t.span)
        return self.disjunction()

    def disjunction(self) -> SExpr:
        left = self.conjunction()
        while self.at("||"):
            span = self.advance().span
            left = SBinop("||", left, self.conjunction(), span)
        return left

    def conjunction(self) -> SExpr:
        left = self.comparison()
        while self.at("&&"):
            span = self.advance().span
            left = SBinop("&&", left, self.comparison(), span)
        return left

    def comparison(self) -> SExpr:
        left = self.cons()
        if self.at("=") or self.at("<"):
            op = self.advance()
            return SBinop(op.text, left, self.cons(), op.span)
        return left

    def cons(self) -> SExpr:
        left = self.additive()
        if self.at("::"):
            span = self.advance().span
            return SCons(left, self.cons(), span)
        if self.at("@"):
            span = self.advance().span
            return SApp("append", (left, self.cons()), span)
        return left

    def additive(self) -> SExpr:
        left = self.multiplicative()
        while self.at("+") or self.at("-"):
            op = self.advance()
            left = SBinop(op.text, left, self.multiplicative(), op.span)
        return left

    def multiplicative(self) -> SExpr:
        left = self.unary()
        while self.at("*"):
            op = self.advance()
            left = SBinop("*", left, self.unary(), op.span)
        return left

    def unary(self) -> SExpr:
        t = self.tok
        if self.at("not"):
            self.advance()
            return SUnop("not", self.unary(), t.span)
        if self.at("-"):
            self.advance()
            if self.tok.kind == "int":
                return SLit(-int(self.advance().text), t.span)
            return SUnop("neg", self.unary(), t.span)
        if self.at("tick"):
            self.advance()
            return STick(self.rational(), t.span)
        return self.application()

    def rational(self) -> Fraction:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise error("expected a rational literal", self.tok.span)
        num = int(self.advance().text)
        den = 1
        if self.at("/"):
            self.advance()
            if self.tok.kind != "int" or int(self.tok.text) == 0:
                raise error("expected a nonzero denominator", self.tok.span)
            den = int(self.advance().text)
        return Fraction(sign * num, den)

    def starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("ident", "int") or (t.kind == "kw" and t.text in ("true", "false")) or (
            t.kind == "sym" and t.text in ("(", "[")
        )

    def application(self) -> SExpr:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            args = []
            while self.starts_atom():
                args.append(self.atom())
            if args:
                return SApp(t.text, tuple(args), t.span)
            return SVar(t.text, t.span)
        return self.atom()

    def atom(self) -> SExpr:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return SVar(t.text, t.span)
        if t.kind == "int":
            self.advance()
            return SLit(int(t.text), t.span)
        if self.at("true") or self.at("false"):
            self.advance()
            return SLit(t.text == "true", t.span)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return SLit(None, t.span)
            items = [self.expr()]
            while self.at(","):
                self.advance()
                items.append(self.expr())
            self.expect(")")
            return items[0] if len(items) == 1 else STuple(tuple(items), t.span)
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.control())
                while self.at(";"):
                    self.advance()
                    items.append(self.control())
            self.expect("]")
            return SList(tuple(items), t.span)
        raise error(f"unexpected {t.text or 'end of input'!r}", t.span)

    def pattern(self):
        t = self.tok
        if self.at("["):
            self.advance()
            self.expect("]")
            return PNil()
        if self.at("("):
            self.advance()
            names = [self.ident().text]
            while self.at(","):
                self.advance()
                names.append(self.ident().text)
            self.expect(")")
            if len(names) < 2:
                raise error("tuple pattern needs at least two components", t.span)
            return PTuple(tuple(names))
        if self.at("true") or self.at("false"):
            self.advance()
            return PLit(t.text == "true")
        if t.kind == "int" or self.at("-"):
            neg = self.at("-")
            if neg:
                self.advance()
            if self.tok.kind != "int":
                raise error("expected an integer pattern", self.tok.span)
            v = int(self.advance().text)
            return PLit(-v if neg else v)
        name = self.ident().text
        if self.at("::"):
            self.advance()
            return PCons(name, self.ident().text)
        return PVar(name)


def parse(source: str) -> SurfaceProgram:
    """Parse a whole program; raises FrontendError with a located diagnostic on failure."""
    return Parser(source).program()


def parse_expr(source: str) -> SExpr:
    p = Parser(source)
    e = p.expr()
    if p.tok.kind != "eof":
        raise error(f"unexpected {p.tok.text!r} after expression", p.tok.span)
    return e
