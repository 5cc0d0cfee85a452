"""Derivation trees: rebuilt from checker verdicts, validated rule by rule.

``reconstruct`` asks the checker for the classifier of every subexpression
and arranges the answers into a tree of deduction-rule instances, adding
conversion nodes where the checker compared up to conversion.  ``validate``
is independent of the checker: it knows only the rule schemas, and checks
that each node's conclusion is exactly what its rule builds from the
premises, that side conditions hold and that contexts are threaded right.
"""

from __future__ import annotations

from dataclasses import dataclass

from .reduction import DEFAULT_FUEL, Indeterminate, term_nf
from .syntax import (
    App, Arrow, Bot, EVar, Equation, Imp, ImpStar, Lam, Minus, OMEGA, PApp, PLam, PVar,
    PathApp, Plus, Ref, TriLam, Univ, Var, fresh, open_lam, open_plam, open_trilam,
)
from .typecheck import Checker, Context, PathDecl, ProofDecl, TermDecl


@dataclass(frozen=True)
class Derivation:
    rule: str
    ctx: Context
    subject: object       # None for context validity
    classifier: object
    premises: tuple = ()


class InvalidDerivation(Exception):
    def __init__(self, node: Derivation, reason: str):
        super().__init__(f"{node.rule}: {reason}")
        self.node = node
        self.reason = reason


# -- reconstruction ------------------------------------------------------------

class _Builder:
    def __init__(self, fuel):
        self.checker = Checker(fuel)
        self.fuel = fuel
        self.contexts = {}

    def nf(self, m):
        return term_nf(m, self.fuel)

    def valid(self, ctx: Context) -> Derivation:
        hit = self.contexts.get(ctx)
        if hit is not None:
            return hit
        if not len(ctx):
            d = Derivation("ctx-empty", ctx, None, None)
        else:
            prefix, last = Context(ctx.entries[:-1]), ctx.entries[-1]
            if isinstance(last, TermDecl):
                d = Derivation("ctx-term", ctx, None, None, (self.valid(prefix),))
            elif isinstance(last, ProofDecl):
                d = Derivation("ctx-proof", ctx, None, None, (self.at(prefix, last.prop, OMEGA),))
            else:
                eq = last.equation
                d = Derivation("ctx-path", ctx, None, None,
                               (self.at(prefix, eq.lhs, eq.type), self.at(prefix, eq.rhs, eq.type)))
        self.contexts[ctx] = d
        return d

    def at(self, ctx, e, cls) -> Derivation:
        """A derivation of ``ctx |- e : cls``, converting if inference differs."""
        d = self.build(ctx, e)
        if d.classifier == cls:
            return d
        if isinstance(cls, Equation):
            return Derivation("conv-path", ctx, e, cls,
                              (d, self.at(ctx, cls.lhs, cls.type), self.at(ctx, cls.rhs, cls.type)))
        if isinstance(cls, (Arrow, type(OMEGA))):
            raise ValueError(f"{e!r} has type {d.classifier!r}, not {cls!r}; types admit no conversion")
        return Derivation("conv-proof", ctx, e, cls, (d, self.at(ctx, cls, OMEGA)))

    def build(self, ctx, e) -> Derivation:
        cls = type(e)
        inferred = self.checker.infer(ctx, e)
        if cls is Var or cls is PVar or cls is EVar:
            rule = {Var: "var-term", PVar: "var-proof", EVar: "var-path"}[cls]
            return Derivation(rule, ctx, e, inferred, (self.valid(ctx),))
        if cls is Bot:
            return Derivation("bot", ctx, e, OMEGA, (self.valid(ctx),))
        if cls is Imp:
            return Derivation("imp", ctx, e, OMEGA, (self.at(ctx, e.lhs, OMEGA), self.at(ctx, e.rhs, OMEGA)))
        if cls is Lam:
            x = fresh(e.hint)
            inner = ctx.extend(TermDecl(x, e.ann))
            return Derivation("lam-term", ctx, e, inferred, (self.build(inner, open_lam(e, x)),))
        if cls is App:
            f = self.build(ctx, e.fun)
            return Derivation("app-term", ctx, e, inferred, (f, self.at(ctx, e.arg, f.classifier.dom)))
        if cls is PLam:
            p = fresh(e.hint)
            inner = ctx.extend(ProofDecl(p, e.ann))
            return Derivation("lam-proof", ctx, e, inferred, (self.build(inner, open_plam(e, p)),))
        if cls is PApp:
            f = self.build(ctx, e.fun)
            imp = self.nf(f.classifier)
            f = self.at(ctx, e.fun, imp)
            return Derivation("app-proof", ctx, e, imp.rhs, (f, self.at(ctx, e.arg, imp.lhs)))
        if cls is Plus or cls is Minus:
            p = self.build(ctx, e.path)
            return Derivation("plus" if cls is Plus else "minus", ctx, e, inferred, (p,))
        if cls is Ref:
            return Derivation("ref", ctx, e, inferred, (self.build(ctx, e.term),))
        if cls is ImpStar:
            return Derivation("impstar", ctx, e, inferred, (self.build(ctx, e.lhs), self.build(ctx, e.rhs)))
        if cls is Univ:
            return Derivation("univ", ctx, e, inferred,
                              (self.at(ctx, e.fwd, Imp(e.src, e.tgt)), self.at(ctx, e.bwd, Imp(e.tgt, e.src))))
        if cls is TriLam:
            x, y, v = fresh(e.hint_x), fresh(e.hint_y), fresh(e.hint_e)
            inner = ctx.extend(TermDecl(x, e.ann), TermDecl(y, e.ann), PathDecl(v, Equation(Var(x), e.ann, Var(y))))
            body = open_trilam(e, x, y, v)
            m, n = inferred.lhs, inferred.rhs
            want = Equation(App(m, Var(x)), inferred.type.cod, App(n, Var(y)))
            return Derivation("trilam", ctx, e, inferred,
                              (self.at(inner, body, want), self.at(ctx, m, inferred.type),
                               self.at(ctx, n, inferred.type)))
        if cls is PathApp:
            f = self.build(ctx, e.fun)
            a = f.classifier.type.dom
            return Derivation("app-path", ctx, e, inferred,
                              (f, self.at(ctx, e.arg, Equation(e.left, a, e.right)),
                               self.at(ctx, e.left, a), self.at(ctx, e.right, a)))
        raise TypeError(f"no rule for {e!r}")


def reconstruct(ctx: Context, expr, classifier=None, fuel: int = DEFAULT_FUEL) -> Derivation:
    """A derivation of the checker's verdict on ``expr`` (at ``classifier`` if given)."""
    b = _Builder(fuel)
    b.checker.check_context(ctx)
    return b.build(ctx, expr) if classifier is None else b.at(ctx, expr, classifier)


# -- validation ----------------------------------------------------------------

class _Validator:
    def __init__(self, fuel):
        self.fuel = fuel
        self.done = set()

    def convertible(self, m, n):
        try:
            return term_nf(m, self.fuel) == term_nf(n, self.fuel)
        except Indeterminate:
            return False

    def run(self, d: Derivation):
        key = id(d)
        if key in self.done:
            return
        self.check_node(d)
        for p in d.premises:
            self.run(p)
        self.done.add(key)

    def check_node(self, d: Derivation):
        def need(cond, reason):
            if not cond:
                raise InvalidDerivation(d, reason)

        def premise(i, ctx, subject, cls=None):
            need(i < len(d.premises), f"missing premise {i}")
            p = d.premises[i]
            need(p.ctx == ctx, f"premise {i} has the wrong context")
            need(p.subject == subject, f"premise {i} is about the wrong expression")
            if cls is not None:
                need(p.classifier == cls, f"premise {i} has the wrong classifier")
            return p

        def valid_premise(i, ctx):
            need(i < len(d.premises) and d.premises[i].subject is None and d.premises[i].ctx == ctx,
                 f"premise {i} must be validity of the same context")

        def arity(n):
            need(len(d.premises) == n, f"expected {n} premises")

        ctx, e, c, r = d.ctx, d.subject, d.classifier, d.rule
        if r == "ctx-empty":
            arity(0)
            need(not len(ctx) and e is None, "not the empty context")
        elif r in ("ctx-term", "ctx-proof", "ctx-path"):
            need(len(ctx) > 0 and e is None, "empty context")
            prefix, last = Context(ctx.entries[:-1]), ctx.entries[-1]
            need(all(x.name != last.name or type(x) is not type(last) for x in prefix), "name declared twice")
            if r == "ctx-term":
                arity(1)
                need(isinstance(last, TermDecl), "last entry is not a term declaration")
                valid_premise(0, prefix)
            elif r == "ctx-proof":
                arity(1)
                need(isinstance(last, ProofDecl), "last entry is not a proof declaration")
                premise(0, prefix, last.prop, OMEGA)
            else:
                arity(2)
                need(isinstance(last, PathDecl), "last entry is not a path declaration")
                eq = last.equation
                premise(0, prefix, eq.lhs, eq.type)
                premise(1, prefix, eq.rhs, eq.type)
        elif r in ("var-term", "var-proof", "var-path"):
            arity(1)
            valid_premise(0, ctx)
            decl = {"var-term": TermDecl, "var-proof": ProofDecl, "var-path": PathDecl}[r]
            var = {"var-term": Var, "var-proof": PVar, "var-path": EVar}[r]
            need(type(e) is var and decl(e.name, c) in ctx, "declaration not in the context")
        elif r == "bot":
            arity(1)
            valid_premise(0, ctx)
            need(type(e) is Bot and c == OMEGA, "bot : Omega")
        elif r == "imp":
            arity(2)
            need(type(e) is Imp and c == OMEGA, "conclusion shape")
            premise(0, ctx, e.lhs, OMEGA)
            premise(1, ctx, e.rhs, OMEGA)
        elif r == "lam-term":
            arity(1)
            need(type(e) is Lam and type(c) is Arrow and c.dom == e.ann, "conclusion shape")
            p = d.premises[0]
            self.bound_premise(d, p, 1)
            x = p.ctx.entries[-1].name
            need(p.ctx == ctx.extend(TermDecl(x, e.ann)), "premise context")
            need(p.subject == open_lam(e, x) and p.classifier == c.cod, "premise judgement")
        elif r == "app-term":
            arity(2)
            need(type(e) is App, "conclusion shape")
            f = premise(0, ctx, e.fun)
            need(type(f.classifier) is Arrow and f.classifier.cod == c, "function type")
            premise(1, ctx, e.arg, f.classifier.dom)
        elif r == "lam-proof":
            arity(1)
            need(type(e) is PLam and type(c) is Imp and c.lhs == e.ann, "conclusion shape")
            p = d.premises[0]
            self.bound_premise(d, p, 1)
            q = p.ctx.entries[-1].name
            need(p.ctx == ctx.extend(ProofDecl(q, e.ann)), "premise context")
            need(p.subject == open_plam(e, q) and p.classifier == c.rhs, "premise judgement")
        elif r == "app-proof":
            arity(2)
            need(type(e) is PApp, "conclusion shape")
            f = premise(0, ctx, e.fun)
            need(type(f.classifier) is Imp and f.classifier.rhs == c, "function proposition")
            premise(1, ctx, e.arg, f.classifier.lhs)
        elif r == "conv-proof":
            arity(2)
            p = premise(0, ctx, e)
            premise(1, ctx, c, OMEGA)
            need(not isinstance(c, Equation) and self.convertible(p.classifier, c), "propositions not convertible")
        elif r == "ref":
            arity(1)
            need(type(e) is Ref, "conclusion shape")
            p = premise(0, ctx, e.term)
            need(c == Equation(e.term, p.classifier, e.term), "ref equation")
        elif r == "impstar":
            arity(2)
            need(type(e) is ImpStar, "conclusion shape")
            l, rr = premise(0, ctx, e.lhs), premise(1, ctx, e.rhs)
            need(l.classifier.type == OMEGA and rr.classifier.type == OMEGA, "operands must be at Omega")
            need(c == Equation(Imp(l.classifier.lhs, rr.classifier.lhs), OMEGA,
                               Imp(l.classifier.rhs, rr.classifier.rhs)), "impstar equation")
        elif r == "univ":
            arity(2)
            need(type(e) is Univ and c == Equation(e.src, OMEGA, e.tgt), "conclusion shape")
            premise(0, ctx, e.fwd, Imp(e.src, e.tgt))
            premise(1, ctx, e.bwd, Imp(e.tgt, e.src))
        elif r in ("plus", "minus"):
            arity(1)
            need(type(e) is (Plus if r == "plus" else Minus), "conclusion shape")
            p = premise(0, ctx, e.path)
            eq = p.classifier
            need(isinstance(eq, Equation) and eq.type == OMEGA, "transport needs an equation at Omega")
            want = Imp(eq.lhs, eq.rhs) if r == "plus" else Imp(eq.rhs, eq.lhs)
            need(c == want, "transport proposition")
        elif r == "trilam":
            arity(3)
            need(type(e) is TriLam and isinstance(c, Equation) and type(c.type) is Arrow
                 and c.type.dom == e.ann, "conclusion shape")
            p = d.premises[0]
            self.bound_premise(d, p, 3)
            xd, yd, ed = p.ctx.entries[-3:]
            x, y, v = xd.name, yd.name, ed.name
            need(x != y, "endpoint variables must be distinct")
            need(p.ctx == ctx.extend(TermDecl(x, e.ann), TermDecl(y, e.ann),
                                     PathDecl(v, Equation(Var(x), e.ann, Var(y)))), "premise context")
            need(p.subject == open_trilam(e, x, y, v), "premise subject")
            need(p.classifier == Equation(App(c.lhs, Var(x)), c.type.cod, App(c.rhs, Var(y))), "body equation")
            premise(1, ctx, c.lhs, c.type)
            premise(2, ctx, c.rhs, c.type)
        elif r == "app-path":
            arity(4)
            need(type(e) is PathApp, "conclusion shape")
            f = premise(0, ctx, e.fun)
            fe = f.classifier
            need(isinstance(fe, Equation) and type(fe.type) is Arrow, "function path at an arrow type")
            a = fe.type.dom
            premise(1, ctx, e.arg, Equation(e.left, a, e.right))
            premise(2, ctx, e.left, a)
            premise(3, ctx, e.right, a)
            need(c == Equation(App(fe.lhs, e.left), fe.type.cod, App(fe.rhs, e.right)), "application equation")
        elif r == "conv-path":
            arity(3)
            p = premise(0, ctx, e)
            need(isinstance(c, Equation) and isinstance(p.classifier, Equation), "equations expected")
            need(p.classifier.type == c.type, "types must agree")
            premise(1, ctx, c.lhs, c.type)
            premise(2, ctx, c.rhs, c.type)
            need(self.convertible(p.classifier.lhs, c.lhs) and self.convertible(p.classifier.rhs, c.rhs),
                 "endpoints not convertible")
        else:
            raise InvalidDerivation(d, "unknown rule")

    @staticmethod
    def bound_premise(d, p, k):
        if len(p.ctx) != len(d.ctx) + k or p.ctx.entries[:len(d.ctx)] != d.ctx.entries:
            raise InvalidDerivation(d, "premise context must extend the conclusion's")
        for new in p.ctx.entries[len(d.ctx):]:
            if any(old.name == new.name and type(old) is type(new) for old in d.ctx):
                raise InvalidDerivation(d, f"bound name {new.name} is not fresh")


def validate(d: Derivation, fuel: int = DEFAULT_FUEL) -> None:
    """Raise :class:`InvalidDerivation` at the first node that is not a rule instance."""
    _Validator(fuel).run(d)


def rules_used(d: Derivation) -> set:
    out, stack = set(), [d]
    while stack:
        n = stack.pop()
        out.add(n.rule)
        stack.extend(n.premises)
    return out
