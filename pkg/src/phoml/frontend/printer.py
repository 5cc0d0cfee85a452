"""Minimal-parenthesis printer, the inverse of the parser.

Binders print under their hint when it is free to use, otherwise the hint
gets a numeric suffix.  Names are kept distinct across all three variable
kinds so that the elaborator, which resolves identifiers by name alone,
reads every occurrence back the way it was meant.
"""

from __future__ import annotations

import re

from ..syntax import (
    App, Arrow, BVar, Bot, EBVar, EVar, Equation, Imp, ImpStar, Lam, Minus, Omega,
    PApp, PBVar, PLam, PVar, PathApp, Plus, Ref, TriLam, Univ, Var, base_name,
    free_vars,
)
from .parser import RESERVED

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

# binding strength of each constructor; higher binds tighter
_BINDER, _IMP, _PATHAPP, _APP, _POSTFIX, _ATOM = range(6)


def print_type(a) -> str:
    if type(a) is Omega:
        return "Omega"
    dom = print_type(a.dom)
    if type(a.dom) is Arrow:
        dom = f"({dom})"
    return f"{dom} -> {print_type(a.cod)}"


class _Printer:
    def __init__(self, e):
        fv = free_vars(e)
        self.used = set(fv.terms) | set(fv.proofs) | set(fv.paths)
        self.terms, self.proofs, self.paths = [], [], []

    def pick(self, hint):
        base = base_name(hint or "")
        if not _IDENT.match(base) or base in RESERVED:
            base = "v"
        name, k = base, 0
        while name in self.used:
            k += 1
            name = f"{base}{k}"
        self.used.add(name)
        return name

    def release(self, *names):
        self.used.difference_update(names)

    def go(self, e, prec=_BINDER, tail=True) -> str:
        cls = type(e)
        if cls is Lam or cls is PLam:
            name = self.pick(e.hint)
            ann = print_type(e.ann) if cls is Lam else self.go(e.ann)
            stack = self.terms if cls is Lam else self.proofs
            stack.append(name)
            body = self.go(e.body)
            stack.pop()
            self.release(name)
            return self.wrap(f"\\{name}:{ann}. {body}", _BINDER, prec, tail)
        if cls is TriLam:
            x, y, ev = self.pick(e.hint_x), self.pick(e.hint_y), self.pick(e.hint_e)
            self.terms += [x, y]
            self.paths.append(ev)
            body = self.go(e.body)
            del self.terms[-2:]
            self.paths.pop()
            self.release(x, y, ev)
            return self.wrap(f"lll {ev} : {x} =[{print_type(e.ann)}] {y} . {body}", _BINDER, prec, tail)
        if cls is Imp or cls is ImpStar:
            op = "=>" if cls is Imp else "=>*"
            text = f"{self.go(e.lhs, _PATHAPP, False)} {op} {self.go(e.rhs, _IMP, tail or _IMP < prec)}"
            return self.wrap(text, _IMP, prec, tail)
        if cls is PathApp:
            text = (f"{self.go(e.fun, _PATHAPP, False)} @[{self.go(e.left)}, {self.go(e.right)}] "
                    f"{self.go(e.arg, _APP, False)}")
            return self.wrap(text, _PATHAPP, prec, tail)
        if cls is App or cls is PApp:
            text = f"{self.go(e.fun, _APP, False)} {self.go(e.arg, _POSTFIX, False)}"
            return self.wrap(text, _APP, prec, tail)
        if cls is Plus or cls is Minus:
            text = self.go(e.path, _ATOM, False) + ("^+" if cls is Plus else "^-")
            return self.wrap(text, _POSTFIX, prec, tail)
        if cls is Ref:
            return f"ref({self.go(e.term)})"
        if cls is Univ:
            return f"univ({self.go(e.src)}, {self.go(e.tgt)}, {self.go(e.fwd)}, {self.go(e.bwd)})"
        if cls is Bot:
            return "bot"
        if cls is Var or cls is PVar or cls is EVar:
            return e.name
        if cls is BVar:
            return self.bound(self.terms, e.index)
        if cls is PBVar:
            return self.bound(self.proofs, e.index)
        if cls is EBVar:
            return self.bound(self.paths, e.index)
        if cls is Equation:
            return f"{self.go(e.lhs)} =[{print_type(e.type)}] {self.go(e.rhs)}"
        if cls is Omega or cls is Arrow:
            return print_type(e)
        raise TypeError(f"cannot print {e!r}")

    @staticmethod
    def bound(stack, i):
        if i >= len(stack):
            return f"<dangling {i}>"
        return stack[-1 - i]

    @staticmethod
    def wrap(text, level, prec, tail):
        if level == _BINDER:
            return f"({text})" if prec > _IMP or not tail else text
        if level < prec:
            return f"({text})"
        return text


def print_expr(e) -> str:
    """Render any expression, type or equation in concrete syntax."""
    return _Printer(e).go(e)


def free_sorts(e) -> dict:
    """The ``free`` argument that lets :func:`parse_expr` read ``print_expr(e)`` back."""
    from ..syntax import Sort
    fv = free_vars(e)
    out = {n: Sort.TERM for n in fv.terms}
    out.update({n: Sort.PROOF for n in fv.proofs})
    out.update({n: Sort.PATH for n in fv.paths})
    return out
