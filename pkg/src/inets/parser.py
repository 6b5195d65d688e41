"""Concrete syntax: lexer and recursive-descent parser.

Grammar (UTF-8, line comments with --):

    term   ::= '\\' ident ':' type '.' term | app
    app    ::= factor factor*                      (left-associative)
    factor ::= 'suc' factor
             | 'cons' factor factor
             | 'iterbool' '<' term '>' '<' term '>' factor
             | 'iternat' '<' '\\' ident '.' term '>' '<' term '>' factor
             | 'iterlist' '<' '\\' ident ident '.' term '>' '<' term '>' factor
             | atom
    atom   ::= ident | 'true' | 'false' | '0' | 'nil' | '(' term ')'
    type   ::= tatom ('->' type)?                  (right-associative)
    tatom  ::= 'bool' | 'nat' | 'list' tatom | '(' type ')'
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Abs, App, Arrow, Bool, Cons, Fls, IterBool, IterList, IterNat,
    ListOf, Nat, Nil, Suc, Term, Tru, Type, Var, Zero,
)

KEYWORDS = {
    "true", "false", "nil", "suc", "cons",
    "iterbool", "iternat", "iterlist",
    "bool", "nat", "list",
}

_PUNCT = ["->", "\\", ":", ".", "(", ")", "<", ">", "0"]


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: set[str]):
        self.line = line
        self.col = col
        self.expected = expected
        detail = ""
        if expected:
            detail = f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(f"{line}:{col}: {message}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', a keyword, or punctuation; 'eof'
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("--", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        for p in _PUNCT:
            if source.startswith(p, i):
                toks.append(Token(p, p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (source[j].isalnum() or source[j] in "_'"):
                    j += 1
                word = source[i:j]
                kind = word if word in KEYWORDS else "ident"
                toks.append(Token(kind, word, line, col))
                col += j - i
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r}", line, col, set())
    toks.append(Token("eof", "", line, col))
    return toks


_ATOM_STARTS = {"ident", "true", "false", "0", "nil", "("}
_FACTOR_STARTS = _ATOM_STARTS | {"suc", "cons", "iterbool", "iternat", "iterlist"}


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, expected: set[str]) -> ParseError:
        t = self.peek()
        got = t.text if t.kind != "eof" else "end of input"
        return ParseError(f"{message}, got {got!r}", t.line, t.col, expected)

    def expect(self, kind: str) -> Token:
        if self.peek().kind != kind:
            raise self.fail(f"expected {kind!r}", {kind})
        return self.next()

    # -- terms ------------------------------------------------------------

    def term(self) -> Term:
        if self.peek().kind == "\\":
            self.next()
            name = self.expect("ident").text
            self.expect(":")
            annot = self.type_()
            self.expect(".")
            return Abs(name, annot, self.term())
        return self.app()

    def app(self) -> Term:
        t = self.factor()
        while self.peek().kind in _FACTOR_STARTS:
            t = App(t, self.factor())
        return t

    def factor(self) -> Term:
        k = self.peek().kind
        if k == "suc":
            self.next()
            return Suc(self.factor())
        if k == "cons":
            self.next()
            return Cons(self.factor(), self.factor())
        if k == "iterbool":
            self.next()
            self.expect("<")
            on_true = self.term()
            self.expect(">")
            self.expect("<")
            on_false = self.term()
            self.expect(">")
            return IterBool(on_true, on_false, self.factor())
        if k == "iternat":
            self.next()
            self.expect("<")
            self.expect("\\")
            binder = self.expect("ident").text
            self.expect(".")
            step = self.term()
            self.expect(">")
            self.expect("<")
            base = self.term()
            self.expect(">")
            return IterNat(binder, step, base, self.factor())
        if k == "iterlist":
            self.next()
            self.expect("<")
            self.expect("\\")
            hb = self.expect("ident").text
            ab = self.expect("ident").text
            self.expect(".")
            step = self.term()
            self.expect(">")
            self.expect("<")
            base = self.term()
            self.expect(">")
            return IterList(hb, ab, step, base, self.factor())
        return self.atom()

    def atom(self) -> Term:
        t = self.peek()
        if t.kind == "ident":
            self.next()
            return Var(t.text)
        if t.kind == "true":
            self.next()
            return Tru()
        if t.kind == "false":
            self.next()
            return Fls()
        if t.kind == "0":
            self.next()
            return Zero()
        if t.kind == "nil":
            self.next()
            return Nil()
        if t.kind == "(":
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        raise self.fail("expected a term", set(_FACTOR_STARTS) | {"\\"})

    # -- types ------------------------------------------------------------

    def type_(self) -> Type:
        t = self.tatom()
        if self.peek().kind == "->":
            self.next()
            return Arrow(t, self.type_())
        return t

    def tatom(self) -> Type:
        t = self.peek()
        if t.kind == "bool":
            self.next()
            return Bool()
        if t.kind == "nat":
            self.next()
            return Nat()
        if t.kind == "list":
            self.next()
            return ListOf(self.tatom())
        if t.kind == "(":
            self.next()
            inner = self.type_()
            self.expect(")")
            return inner
        raise self.fail("expected a type", {"bool", "nat", "list", "("})


def parse(source: str) -> Term:
    """Parse a single term; raises ParseError with line/column on bad input."""
    p = _Parser(tokenize(source))
    t = p.term()
    if p.peek().kind != "eof":
        raise p.fail("trailing input after term", {"eof"})
    return t


def parse_type(source: str) -> Type:
    p = _Parser(tokenize(source))
    t = p.type_()
    if p.peek().kind != "eof":
        raise p.fail("trailing input after type", {"eof"})
    return t
