"""Concrete syntax: tokenizer, recursive-descent parser and sort elaboration.

Parsing happens in two passes.  The first builds a sort-agnostic surface
tree; the second resolves every identifier against its scope, decides
whether a juxtaposition is a term or proof application, and produces kernel
syntax together with a map from kernel positions to source spans.

Grammar (loosest to tightest)::

    expr     ::= binder | imp
    binder   ::= '\\' id ':' (type | expr) '.' expr
               | 'lll' id ':' id '=[' type ']' id '.' expr
    imp      ::= pathapp (('=>' | '=>*') (binder | imp))?
    pathapp  ::= app ('@[' expr ',' expr ']' app)*
    app      ::= postfix postfix*
    postfix  ::= atom ('^+' | '^-')*
    atom     ::= id | 'bot' | 'ref' '(' expr ')'
               | 'univ' '(' expr ',' expr ',' expr ',' expr ')' | '(' expr ')'
    type     ::= tatom ('->' type)?
    tatom    ::= 'Omega' | '(' type ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from ..syntax import (
    App, Arrow, BOT, EVar, Equation, Imp, ImpStar, Minus, OMEGA, PApp, PathApp,
    Plus, PVar, Ref, Sort, Univ, Var, fresh, lam, plam, trilam,
)

RESERVED = frozenset({"Omega", "bot", "ref", "univ", "lll", "assume", "def", "check", "normalize"})
STATEMENT_KEYWORDS = frozenset({"assume", "def", "check", "normalize"})


class SourceSpan(NamedTuple):
    file: str
    line: int
    column: int
    length: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        super().__init__(f"{span}: {message}" if span else message)
        self.message = message
        self.span = span


class Token(NamedTuple):
    kind: str   # 'id', 'kw', 'sym', 'eof'
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<sym>=>\*|=>|->|=\[|@\[|\^\+|\^-|:=|[\\:.(),\]])
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(file, line, pos - line_start + 1, 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        span = SourceSpan(file, line, pos - line_start + 1, m.end() - pos)
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "id":
            tokens.append(Token("kw" if m.group() in RESERVED else "id", m.group(), span))
        elif kind == "sym":
            tokens.append(Token("sym", m.group(), span))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(file, line, pos - line_start + 1, 0)))
    return tokens


# -- surface tree ------------------------------------------------------------

@dataclass
class SNode:
    tag: str
    args: tuple
    span: SourceSpan


@dataclass
class Statement:
    keyword: str
    span: SourceSpan
    name: Optional[str] = None
    sort: Optional[str] = None
    expr: Optional[SNode] = None
    classifier: Optional[SNode] = None


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text):
        t = self.tok
        return t.kind in ("sym", "kw") and t.text == text

    def expect(self, text):
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.span)
        return self.advance()

    def ident(self):
        t = self.tok
        if t.kind != "id":
            what = "reserved word " + repr(t.text) if t.kind == "kw" else repr(t.text or "end of input")
            raise ParseError(f"expected an identifier, found {what}", t.span)
        return self.advance()

    # types
    def type_(self):
        start = self.tok.span
        if self.at("Omega"):
            self.advance()
            left = SNode("Omega", (), start)
        elif self.at("("):
            self.advance()
            left = self.type_()
            self.expect(")")
        else:
            raise ParseError("expected a type", start)
        if self.at("->"):
            self.advance()
            return SNode("Arrow", (left, self.type_()), start)
        return left

    def try_type(self, followers):
        save = self.i
        try:
            t = self.type_()
        except ParseError:
            self.i = save
            return None
        if self.tok.text in followers or self.tok.kind == "eof" and "" in followers:
            return t
        self.i = save
        return None

    # expressions
    def expr(self):
        if self.at("\\") or self.at("lll"):
            return self.binder()
        return self.imp()

    def binder(self):
        start = self.tok.span
        if self.at("\\"):
            self.advance()
            name = self.ident()
            self.expect(":")
            ann = self.try_type({"."})
            if ann is None:
                ann = self.expr()
            self.expect(".")
            return SNode("Lam", (name.text, ann, self.expr()), start)
        self.expect("lll")
        e = self.ident()
        self.expect(":")
        x = self.ident()
        self.expect("=[")
        a = self.type_()
        self.expect("]")
        y = self.ident()
        if x.text == y.text:
            raise ParseError("the endpoint variables of lll must be distinct", y.span)
        self.expect(".")
        return SNode("TriLam", (e.text, x.text, a, y.text, self.expr()), start)

    def imp(self):
        left = self.pathapp()
        for op, tag in (("=>*", "ImpStar"), ("=>", "Imp")):
            if self.at(op):
                self.advance()
                right = self.binder() if (self.at("\\") or self.at("lll")) else self.imp()
                return SNode(tag, (left, right), left.span)
        return left

    def pathapp(self):
        left = self.app()
        while self.at("@["):
            self.advance()
            m = self.expr()
            self.expect(",")
            n = self.expr()
            self.expect("]")
            q = self.app()
            left = SNode("PathApp", (left, m, n, q), left.span)
        return left

    def starts_atom(self):
        t = self.tok
        return t.kind == "id" or (t.kind == "kw" and t.text in ("bot", "ref", "univ")) or self.at("(")

    def app(self):
        head = self.postfix()
        while self.starts_atom():
            head = SNode("App", (head, self.postfix()), head.span)
        return head

    def postfix(self):
        node = self.atom()
        while self.at("^+") or self.at("^-"):
            t = self.advance()
            node = SNode("Plus" if t.text == "^+" else "Minus", (node,), node.span)
        return node

    def atom(self):
        t = self.tok
        if t.kind == "id":
            self.advance()
            return SNode("Name", (t.text,), t.span)
        if self.at("bot"):
            self.advance()
            return SNode("Bot", (), t.span)
        if self.at("ref"):
            self.advance()
            self.expect("(")
            m = self.expr()
            self.expect(")")
            return SNode("Ref", (m,), t.span)
        if self.at("univ"):
            self.advance()
            self.expect("(")
            parts = [self.expr()]
            for _ in range(3):
                self.expect(",")
                parts.append(self.expr())
            self.expect(")")
            return SNode("Univ", tuple(parts), t.span)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"expected an expression, found {t.text or 'end of input'!r}", t.span)

    def classifier(self, followers):
        """A type, a term, or an equation ``M =[A] N``."""
        ty = self.try_type(followers)
        if ty is not None:
            return ty
        lhs = self.expr()
        if self.at("=["):
            start = self.advance().span
            a = self.type_()
            self.expect("]")
            return SNode("Equation", (lhs, a, self.expr()), lhs.span if lhs else start)
        return lhs

    # scripts
    def script(self):
        stmts = []
        followers = STATEMENT_KEYWORDS | {""}
        while self.tok.kind != "eof":
            t = self.tok
            if self.at("assume"):
                self.advance()
                name = self.ident()
                self.expect(":")
                stmts.append(Statement("assume", t.span, name=name.text,
                                       classifier=self.classifier(followers)))
            elif self.at("def"):
                self.advance()
                name = self.ident()
                self.expect(":")
                sort = self.ident()
                if sort.text not in ("term", "proof", "path"):
                    raise ParseError("definition sort must be term, proof or path", sort.span)
                self.expect(":=")
                stmts.append(Statement("def", t.span, name=name.text, sort=sort.text, expr=self.expr()))
            elif self.at("check"):
                self.advance()
                e = self.expr()
                self.expect(":")
                stmts.append(Statement("check", t.span, expr=e, classifier=self.classifier(followers)))
            elif self.at("normalize"):
                self.advance()
                stmts.append(Statement("normalize", t.span, expr=self.expr()))
            else:
                raise ParseError(f"expected a declaration or directive, found {t.text!r}", t.span)
            if not (self.tok.kind == "eof" or self.tok.text in STATEMENT_KEYWORDS):
                raise ParseError(f"unexpected {self.tok.text!r} after statement", self.tok.span)
        return stmts


# -- elaboration -------------------------------------------------------------

_SORTS = {"term": Sort.TERM, "proof": Sort.PROOF, "path": Sort.PATH}


class Scope:
    """Identifier -> (sort, kernel expression); inner bindings shadow outer ones."""

    def __init__(self, table=None, parent=None):
        self.table = dict(table or {})
        self.parent = parent

    def lookup(self, name):
        s = self
        while s is not None:
            hit = s.table.get(name)
            if hit is not None:
                return hit
            s = s.parent
        return None

    def child(self, name, sort, expr):
        return Scope({name: (sort, expr)}, self)


@dataclass
class Elaborated:
    expr: object
    sort: Sort
    spans: dict = field(default_factory=dict)


class _Elaborator:
    def __init__(self):
        self.spans = {}

    def type_(self, n):
        if n.tag == "Omega":
            return OMEGA
        if n.tag == "Arrow":
            return Arrow(self.type_(n.args[0]), self.type_(n.args[1]))
        raise ParseError("expected a type", n.span)

    def want(self, n, scope, sort, pos):
        e, s = self.expr(n, scope, pos)
        if s is not sort:
            raise ParseError(f"expected a {sort.value}, found a {s.value}", n.span)
        return e

    def expr(self, n, scope, pos=()):
        self.spans.setdefault(pos, n.span)
        tag, a = n.tag, n.args
        if tag == "Name":
            hit = scope.lookup(a[0])
            if hit is None:
                raise ParseError(f"unknown identifier {a[0]!r}", n.span)
            return hit[1], hit[0]
        if tag == "Bot":
            return BOT, Sort.TERM
        if tag == "Imp":
            return Imp(self.want(a[0], scope, Sort.TERM, pos + ("lhs",)),
                       self.want(a[1], scope, Sort.TERM, pos + ("rhs",))), Sort.TERM
        if tag == "ImpStar":
            return ImpStar(self.want(a[0], scope, Sort.PATH, pos + ("lhs",)),
                           self.want(a[1], scope, Sort.PATH, pos + ("rhs",))), Sort.PATH
        if tag == "App":
            f, s = self.expr(a[0], scope, pos + ("fun",))
            if s is Sort.TERM:
                return App(f, self.want(a[1], scope, Sort.TERM, pos + ("arg",))), Sort.TERM
            if s is Sort.PROOF:
                return PApp(f, self.want(a[1], scope, Sort.PROOF, pos + ("arg",))), Sort.PROOF
            raise ParseError(f"cannot apply a {s.value} by juxtaposition", n.span)
        if tag in ("Plus", "Minus"):
            p = self.want(a[0], scope, Sort.PATH, pos + ("path",))
            return (Plus(p) if tag == "Plus" else Minus(p)), Sort.PROOF
        if tag == "Ref":
            return Ref(self.want(a[0], scope, Sort.TERM, pos + ("term",))), Sort.PATH
        if tag == "Univ":
            return Univ(self.want(a[0], scope, Sort.TERM, pos + ("src",)),
                        self.want(a[1], scope, Sort.TERM, pos + ("tgt",)),
                        self.want(a[2], scope, Sort.PROOF, pos + ("fwd",)),
                        self.want(a[3], scope, Sort.PROOF, pos + ("bwd",))), Sort.PATH
        if tag == "PathApp":
            return PathApp(self.want(a[0], scope, Sort.PATH, pos + ("fun",)),
                           self.want(a[1], scope, Sort.TERM, pos + ("left",)),
                           self.want(a[2], scope, Sort.TERM, pos + ("right",)),
                           self.want(a[3], scope, Sort.PATH, pos + ("arg",))), Sort.PATH
        if tag == "Lam":
            name, ann, body = a
            if ann.tag in ("Omega", "Arrow"):
                ty = self.type_(ann)
                v = fresh(name)
                inner = scope.child(name, Sort.TERM, Var(v))
                return lam(v, ty, self.want(body, inner, Sort.TERM, pos + ("body",))), Sort.TERM
            phi = self.want(ann, scope, Sort.TERM, pos + ("ann",))
            v = fresh(name)
            inner = scope.child(name, Sort.PROOF, PVar(v))
            return plam(v, phi, self.want(body, inner, Sort.PROOF, pos + ("body",))), Sort.PROOF
        if tag == "TriLam":
            e, x, ty, y, body = a
            ev, xv, yv = fresh(e), fresh(x), fresh(y)
            inner = Scope({x: (Sort.TERM, Var(xv)), y: (Sort.TERM, Var(yv)),
                           e: (Sort.PATH, EVar(ev))}, scope)
            return trilam(ev, xv, yv, self.type_(ty),
                          self.want(body, inner, Sort.PATH, pos + ("body",))), Sort.PATH
        if tag == "Equation":
            raise ParseError("an equation is not an expression", n.span)
        raise ParseError("expected an expression, found a type", n.span)

    def classifier(self, n, scope):
        if n.tag in ("Omega", "Arrow"):
            return self.type_(n), Sort.TYPE
        if n.tag == "Equation":
            lhs, ty, rhs = n.args
            return Equation(self.want(lhs, scope, Sort.TERM, ("lhs",)), self.type_(ty),
                            self.want(rhs, scope, Sort.TERM, ("rhs",))), Sort.EQUATION
        return self.want(n, scope, Sort.TERM, ()), Sort.TERM


def _free_scope(free):
    table = {}
    for name, sort in (free or {}).items():
        ctor = {Sort.TERM: Var, Sort.PROOF: PVar, Sort.PATH: EVar}[sort]
        table[name] = (sort, ctor(name))
    return Scope(table)


def parse_expr(text: str, free: dict | None = None, file: str = "<input>") -> Elaborated:
    """Parse one expression; ``free`` maps free identifiers to their sort."""
    p = _Parser(tokenize(text, file))
    node = p.expr()
    if p.tok.kind != "eof":
        raise ParseError(f"unexpected {p.tok.text!r}", p.tok.span)
    el = _Elaborator()
    e, s = el.expr(node, _free_scope(free))
    return Elaborated(e, s, el.spans)


def parse_classifier(text: str, free: dict | None = None, file: str = "<input>"):
    p = _Parser(tokenize(text, file))
    node = p.classifier({""})
    if p.tok.kind != "eof":
        raise ParseError(f"unexpected {p.tok.text!r}", p.tok.span)
    return _Elaborator().classifier(node, _free_scope(free))[0]


def parse_statements(text: str, file: str = "<input>") -> list[Statement]:
    return _Parser(tokenize(text, file)).script()


def term(text: str, **free) -> object:
    """Test helper: ``term("f x", f=Sort.TERM, x=Sort.TERM)``."""
    return parse_expr(text, free).expr
