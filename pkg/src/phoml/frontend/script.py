"""Proof scripts: assumptions, definitions, and check / normalize directives.

Definitions are inlined at their use sites, so the reduction relation never
sees a definition constant.  Running a script threads one typing context
through the assumptions and yields one result per statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..reduction import DEFAULT_FUEL, ReductionOutcome, reduce
from ..syntax import EVar, Equation, PVar, Sort, TYPE_CLASSES, Var
from ..typecheck import (
    EMPTY, Checker, Context, PathDecl, ProofDecl, TermDecl, TypeCheckError, render_location,
)
from .parser import (
    ParseError, Scope, SourceSpan, _Elaborator, parse_statements,
)
from .printer import print_expr


@dataclass(frozen=True)
class Assume:
    name: str
    classifier: object
    sort: Sort          # TYPE, TERM or EQUATION: what kind of variable is declared
    span: SourceSpan
    spans: dict


@dataclass(frozen=True)
class Def:
    name: str
    sort: Sort
    expr: object
    span: SourceSpan
    spans: dict


@dataclass(frozen=True)
class CheckDirective:
    expr: object
    classifier: object
    span: SourceSpan
    spans: dict


@dataclass(frozen=True)
class NormalizeDirective:
    expr: object
    span: SourceSpan
    spans: dict


Item = Union[Assume, Def, CheckDirective, NormalizeDirective]


@dataclass(frozen=True)
class Script:
    file: str
    items: tuple

    def definition(self, name: str) -> Optional[Def]:
        for item in self.items:
            if isinstance(item, Def) and item.name == name:
                return item
        return None


_DECL_SORT = {Sort.TYPE: Sort.TERM, Sort.TERM: Sort.PROOF, Sort.EQUATION: Sort.PATH}
_VAR = {Sort.TERM: Var, Sort.PROOF: PVar, Sort.PATH: EVar}
_DEF_SORT = {"term": Sort.TERM, "proof": Sort.PROOF, "path": Sort.PATH}


def parse(text: str, file: str = "<input>") -> Script:
    """Parse and elaborate a whole script; identifiers resolve to earlier statements."""
    scope = Scope()
    items = []
    for st in parse_statements(text, file):
        el = _Elaborator()
        if st.name is not None and st.name in scope.table:
            raise ParseError(f"{st.name!r} is already declared", st.span)
        if st.keyword == "assume":
            cls, sort = el.classifier(st.classifier, scope)
            var_sort = _DECL_SORT[sort]
            scope.table[st.name] = (var_sort, _VAR[var_sort](st.name))
            items.append(Assume(st.name, cls, sort, st.span, _shift(el.spans, "classifier")))
        elif st.keyword == "def":
            e, sort = el.expr(st.expr, scope)
            if sort is not _DEF_SORT[st.sort]:
                raise ParseError(f"{st.name} is declared a {st.sort} but is a {sort.value}", st.expr.span)
            scope.table[st.name] = (sort, e)
            items.append(Def(st.name, sort, e, st.span, dict(el.spans)))
        elif st.keyword == "check":
            e, _ = el.expr(st.expr, scope)
            spans = dict(el.spans)
            el.spans = {}
            cls, _ = el.classifier(st.classifier, scope)
            spans.update(_shift(el.spans, "classifier"))
            items.append(CheckDirective(e, cls, st.span, spans))
        else:
            e, _ = el.expr(st.expr, scope)
            items.append(NormalizeDirective(e, st.span, dict(el.spans)))
    return Script(file, tuple(items))


def _shift(spans, slot):
    return {(slot,) + k: v for k, v in spans.items()}


def locate(spans: dict, location: tuple, default: SourceSpan) -> str:
    """Source position of the deepest parsed node on the error path."""
    loc = tuple(location)
    while loc and loc not in spans:
        loc = loc[:-1]
    span = spans.get(loc, default)
    return f"{span} ({render_location(tuple(location))})"


class ScriptError(Exception):
    def __init__(self, error: TypeCheckError, where: str, index: int):
        super().__init__(error.render(where))
        self.error = error
        self.where = where
        self.index = index

    def render(self) -> str:
        return self.error.render(self.where)


@dataclass(frozen=True)
class Result:
    index: int
    item: Item
    lines: tuple
    outcome: Optional[ReductionOutcome] = None

    @property
    def is_directive(self) -> bool:
        return isinstance(self.item, (CheckDirective, NormalizeDirective))


def _kind(item):
    return {Assume: "assume", Def: "def", CheckDirective: "check", NormalizeDirective: "normalize"}[type(item)]


def run(script: Script, fuel: int = DEFAULT_FUEL):
    """Check every statement in order, yielding a :class:`Result` per statement.

    Stops with :class:`ScriptError` at the first rejected statement.
    """
    checker = Checker(fuel)
    ctx: Context = EMPTY
    for i, item in enumerate(script.items):
        try:
            yield _run_one(checker, ctx, i, item, fuel)
        except TypeCheckError as exc:
            raise ScriptError(exc, locate(item.spans, exc.location, item.span), i) from None
        if isinstance(item, Assume):
            ctx = ctx.extend(_declaration(item))


def _declaration(item: Assume):
    if item.sort is Sort.TYPE:
        return TermDecl(item.name, item.classifier)
    if item.sort is Sort.TERM:
        return ProofDecl(item.name, item.classifier)
    return PathDecl(item.name, item.classifier)


def _run_one(checker, ctx, i, item, fuel):
    if isinstance(item, Assume):
        checker.check_context(ctx.extend(_declaration(item)))
        return Result(i, item, (f"assume {item.name} : {print_expr(item.classifier)}",))
    if isinstance(item, Def):
        cls = checker.infer(ctx, item.expr)
        return Result(i, item, (f"def {item.name} : {item.sort.value} : {print_expr(cls)}",))
    if isinstance(item, CheckDirective):
        cls = item.classifier
        if isinstance(cls, Equation):
            try:
                checker.check_equation(ctx, cls)
            except TypeCheckError as exc:
                raise TypeCheckError(exc.kind, ("classifier",) + exc.location, exc.detail) from None
        elif not isinstance(cls, TYPE_CLASSES):
            checker.expect_omega(ctx, cls, ("classifier",))
        checker.check(ctx, item.expr, cls)
        return Result(i, item, (f"OK {print_expr(item.expr)} : {print_expr(cls)}",))
    checker.infer(ctx, item.expr)
    out = reduce(item.expr, fuel, trace=True)
    lines = (f"NORMALIZE {out.status.value} steps={out.steps}", print_expr(out.result))
    return Result(i, item, lines, out)
