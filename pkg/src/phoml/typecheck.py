"""Syntax-directed checking of the four PHOML judgement forms.

Inference walks the expression once, inverting one deduction rule per node;
the two conversion rules are applied only where a premise's classifier has
to meet an expected one, by comparing term normal forms.

``lll e : x =[A] y . P`` is the one construct that is not syntax-directed:
in checking mode its body is checked against ``M x =[B] N y`` for the given
``M``, ``N``.  In inference mode each endpoint is ``\\x:A. L`` for the body's
side ``L`` as inferred, which is exactly what path substitution predicts.
Only when ``L`` mentions the opposite variable is it normalized first.  The
alternative ``endpoints="eta"`` instead reads ``M`` off a normal side of the
form ``M x``.  Neither choice is complete, since there is no conversion under
a binder, but the abstracting one agrees with path substitution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Union

from .reduction import DEFAULT_FUEL, Indeterminate, term_nf
from .syntax import (
    App, Arrow, BVar, Bot, EBVar, EVar, Equation, Imp, ImpStar, Lam, Minus,
    OMEGA, PApp, PBVar, PLam, PVar, PathApp, Plus, Ref, TriLam, Univ, Var,
    free_vars, fresh, lam, open_lam, open_plam, open_trilam,
    PATH_CLASSES, PROOF_CLASSES, TERM_CLASSES,
)


class ErrorKind(enum.Enum):
    UNBOUND_VARIABLE = "UnboundVariable"
    KIND_MISMATCH = "KindMismatch"
    NOT_AN_IMPLICATION = "NotAnImplication"
    NOT_AN_ARROW = "NotAnArrow"
    NOT_OMEGA_EQUATION = "NotOmegaEquation"
    ENDPOINT_MISMATCH = "EndpointMismatch"
    NOT_CONVERTIBLE = "NotConvertible"
    CONTEXT_ILL_FORMED = "ContextIllFormed"
    FUEL_EXHAUSTED = "FuelExhausted"
    TRILAM_SHAPE = "TriLamShapeError"


class TypeCheckError(Exception):
    def __init__(self, kind: ErrorKind, location: tuple, detail: str, inner=None):
        super().__init__(f"{kind.value} at {render_location(location)}: {detail}")
        self.kind = kind
        self.location = location
        self.detail = detail
        self.inner = inner

    def render(self, where: str | None = None) -> str:
        return f"ERROR {self.kind.value} at {where or render_location(self.location)}: {self.detail}"


def render_location(location: tuple) -> str:
    return ".".join(location) if location else "."


# -- contexts ----------------------------------------------------------------

class TermDecl(NamedTuple):
    name: str
    type: object


class ProofDecl(NamedTuple):
    name: str
    prop: object


class PathDecl(NamedTuple):
    name: str
    equation: Equation


Decl = Union[TermDecl, ProofDecl, PathDecl]


class Context:
    """An ordered, immutable list of declarations with per-kind lookup."""

    __slots__ = ("entries", "_terms", "_proofs", "_paths")

    def __init__(self, entries=()):
        self.entries = tuple(entries)
        self._terms, self._proofs, self._paths = {}, {}, {}
        for d in self.entries:
            self._table(d)[d.name] = d

    def _table(self, d):
        if isinstance(d, TermDecl):
            return self._terms
        if isinstance(d, ProofDecl):
            return self._proofs
        return self._paths

    def extend(self, *decls: Decl) -> "Context":
        new = Context.__new__(Context)
        new.entries = self.entries + decls
        new._terms, new._proofs, new._paths = dict(self._terms), dict(self._proofs), dict(self._paths)
        for d in decls:
            new._table(d)[d.name] = d
        return new

    def term_type(self, name):
        d = self._terms.get(name)
        return None if d is None else d.type

    def proof_prop(self, name):
        d = self._proofs.get(name)
        return None if d is None else d.prop

    def path_equation(self, name):
        d = self._paths.get(name)
        return None if d is None else d.equation

    def term_vars(self):
        return [d for d in self.entries if isinstance(d, TermDecl)]

    def __contains__(self, decl):
        return self._table(decl).get(decl.name) == decl

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, Context) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"Context({list(self.entries)!r})"


EMPTY = Context()


# -- the checker -------------------------------------------------------------

class Checker:
    def __init__(self, fuel: int = DEFAULT_FUEL, endpoints: str = "abstract"):
        if endpoints not in ("abstract", "eta"):
            raise ValueError(f"unknown endpoint rule {endpoints!r}")
        self.fuel = fuel
        self.endpoints = endpoints

    # conversion
    def nf(self, m, loc):
        try:
            return term_nf(m, self.fuel)
        except Indeterminate as exc:
            raise TypeCheckError(ErrorKind.FUEL_EXHAUSTED, loc, str(exc)) from None

    def conv(self, m, n, loc) -> bool:
        return m == n or self.nf(m, loc) == self.nf(n, loc)

    # contexts
    def check_context(self, ctx: Context) -> None:
        seen = {TermDecl: set(), ProofDecl: set(), PathDecl: set()}
        prefix = EMPTY
        for i, d in enumerate(ctx.entries):
            loc = (f"ctx[{i}]",)
            if d.name in seen[type(d)]:
                raise TypeCheckError(ErrorKind.CONTEXT_ILL_FORMED, loc,
                                     f"{d.name} is declared twice")
            try:
                if isinstance(d, ProofDecl):
                    self.expect_omega(prefix, d.prop, loc)
                elif isinstance(d, PathDecl):
                    self.check_equation(prefix, d.equation, loc)
            except TypeCheckError as exc:
                raise TypeCheckError(ErrorKind.CONTEXT_ILL_FORMED, loc,
                                     f"declaration of {d.name}: {exc.detail}", inner=exc) from None
            seen[type(d)].add(d.name)
            prefix = prefix.extend(d)

    def check_equation(self, ctx, eq: Equation, loc=()):
        for side, where in ((eq.lhs, "lhs"), (eq.rhs, "rhs")):
            a = self.infer_type(ctx, side, loc + (where,))
            if a != eq.type:
                raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc + (where,),
                                     f"endpoint has type {a!r}, equation is at {eq.type!r}")

    def expect_omega(self, ctx, phi, loc):
        a = self.infer_type(ctx, phi, loc)
        if a != OMEGA:
            raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc, f"expected a proposition, got type {a!r}")

    # terms
    def infer_type(self, ctx: Context, m, loc=()):
        cls = type(m)
        if cls is Var:
            a = ctx.term_type(m.name)
            if a is None:
                raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, loc, f"term variable {m.name}")
            return a
        if cls is Bot:
            return OMEGA
        if cls is Imp:
            self.expect_omega(ctx, m.lhs, loc + ("lhs",))
            self.expect_omega(ctx, m.rhs, loc + ("rhs",))
            return OMEGA
        if cls is Lam:
            x = fresh(m.hint)
            b = self.infer_type(ctx.extend(TermDecl(x, m.ann)), open_lam(m, x), loc + ("body",))
            return Arrow(m.ann, b)
        if cls is App:
            f = self.infer_type(ctx, m.fun, loc + ("fun",))
            if type(f) is not Arrow:
                raise TypeCheckError(ErrorKind.NOT_AN_ARROW, loc + ("fun",), f"applied a term of type {f!r}")
            a = self.infer_type(ctx, m.arg, loc + ("arg",))
            if a != f.dom:
                raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc + ("arg",),
                                     f"argument has type {a!r}, expected {f.dom!r}")
            return f.cod
        if cls is BVar:
            raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, loc, "dangling bound variable")
        raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc, f"expected a term, got {cls.__name__}")

    # proofs
    def infer_prop(self, ctx: Context, d, loc=()):
        cls = type(d)
        if cls is PVar:
            phi = ctx.proof_prop(d.name)
            if phi is None:
                raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, loc, f"proof variable {d.name}")
            return phi
        if cls is PLam:
            self.expect_omega(ctx, d.ann, loc + ("ann",))
            p = fresh(d.hint)
            psi = self.infer_prop(ctx.extend(ProofDecl(p, d.ann)), open_plam(d, p), loc + ("body",))
            return Imp(d.ann, psi)
        if cls is PApp:
            f = self.nf(self.infer_prop(ctx, d.fun, loc + ("fun",)), loc + ("fun",))
            if type(f) is not Imp:
                raise TypeCheckError(ErrorKind.NOT_AN_IMPLICATION, loc + ("fun",),
                                     "function proof does not prove an implication")
            self.check_proof(ctx, d.arg, f.lhs, loc + ("arg",), _pre=False)
            return f.rhs
        if cls is Plus or cls is Minus:
            eq = self.infer_equation(ctx, d.path, loc + ("path",))
            if eq.type != OMEGA:
                raise TypeCheckError(ErrorKind.NOT_OMEGA_EQUATION, loc + ("path",),
                                     f"transport along an equation at {eq.type!r}")
            return Imp(eq.lhs, eq.rhs) if cls is Plus else Imp(eq.rhs, eq.lhs)
        if cls is PBVar:
            raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, loc, "dangling bound variable")
        raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc, f"expected a proof, got {cls.__name__}")

    def check_proof(self, ctx: Context, d, phi, loc=(), _pre=True):
        if _pre:
            self.expect_omega(ctx, phi, loc)
        psi = self.infer_prop(ctx, d, loc)
        if not self.conv(psi, phi, loc):
            raise TypeCheckError(ErrorKind.NOT_CONVERTIBLE, loc,
                                 "proved proposition is not convertible to the expected one")

    # paths
    def infer_equation(self, ctx: Context, p, loc=()):
        cls = type(p)
        if cls is EVar:
            eq = ctx.path_equation(p.name)
            if eq is None:
                raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, loc, f"path variable {p.name}")
            return eq
        if cls is Ref:
            return Equation(p.term, self.infer_type(ctx, p.term, loc + ("term",)), p.term)
        if cls is ImpStar:
            l = self._omega_equation(ctx, p.lhs, loc + ("lhs",))
            r = self._omega_equation(ctx, p.rhs, loc + ("rhs",))
            return Equation(Imp(l.lhs, r.lhs), OMEGA, Imp(l.rhs, r.rhs))
        if cls is Univ:
            self.expect_omega(ctx, p.src, loc + ("src",))
            self.expect_omega(ctx, p.tgt, loc + ("tgt",))
            self.check_proof(ctx, p.fwd, Imp(p.src, p.tgt), loc + ("fwd",), _pre=False)
            self.check_proof(ctx, p.bwd, Imp(p.tgt, p.src), loc + ("bwd",), _pre=False)
            return Equation(p.src, OMEGA, p.tgt)
        if cls is TriLam:
            return self._infer_trilam(ctx, p, loc)
        if cls is PathApp:
            eq = self.infer_equation(ctx, p.fun, loc + ("fun",))
            if type(eq.type) is not Arrow:
                raise TypeCheckError(ErrorKind.NOT_AN_ARROW, loc + ("fun",),
                                     f"applied a path at type {eq.type!r}")
            a = eq.type.dom
            for side in ("left", "right"):
                t = self.infer_type(ctx, getattr(p, side), loc + (side,))
                if t != a:
                    raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc + (side,),
                                         f"endpoint has type {t!r}, expected {a!r}")
            self._check_path(ctx, p.arg, Equation(p.left, a, p.right), loc + ("arg",),
                             ErrorKind.ENDPOINT_MISMATCH)
            return Equation(App(eq.lhs, p.left), eq.type.cod, App(eq.rhs, p.right))
        if cls is EBVar:
            raise TypeCheckError(ErrorKind.UNBOUND_VARIABLE, loc, "dangling bound variable")
        raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc, f"expected a path, got {cls.__name__}")

    def _omega_equation(self, ctx, p, loc):
        eq = self.infer_equation(ctx, p, loc)
        if eq.type != OMEGA:
            raise TypeCheckError(ErrorKind.NOT_OMEGA_EQUATION, loc, f"equation at {eq.type!r}")
        return eq

    def _open_trilam(self, ctx, p):
        x, y, e = fresh(p.hint_x), fresh(p.hint_y), fresh(p.hint_e)
        inner = ctx.extend(TermDecl(x, p.ann), TermDecl(y, p.ann),
                           PathDecl(e, Equation(Var(x), p.ann, Var(y))))
        return x, y, inner, open_trilam(p, x, y, e)

    def _infer_trilam(self, ctx, p, loc):
        x, y, inner, body = self._open_trilam(ctx, p)
        eq = self.infer_equation(inner, body, loc + ("body",))
        return Equation(self._endpoint(eq.lhs, x, y, p.ann, loc),
                        Arrow(p.ann, eq.type),
                        self._endpoint(eq.rhs, y, x, p.ann, loc))

    def _endpoint(self, side, own, other, ann, loc):
        if self.endpoints == "abstract" and other not in free_vars(side).terms:
            return lam(own, ann, side)
        side = self.nf(side, loc + ("body",))
        if other in free_vars(side).terms:
            raise TypeCheckError(ErrorKind.TRILAM_SHAPE, loc + ("body",),
                                 "an endpoint of the body depends on the opposite bound variable")
        if (self.endpoints == "eta" and type(side) is App and side.arg == Var(own)
                and own not in free_vars(side.fun).terms):
            return side.fun
        return lam(own, ann, side)

    def check_path(self, ctx: Context, p, eq: Equation, loc=()):
        self.check_equation(ctx, eq, loc)
        self._check_path(ctx, p, eq, loc, ErrorKind.NOT_CONVERTIBLE)

    def _check_path(self, ctx, p, eq, loc, mismatch):
        if type(p) is TriLam:
            if type(eq.type) is not Arrow:
                raise TypeCheckError(ErrorKind.NOT_AN_ARROW, loc,
                                     f"a lll-path proves equations at function types, not {eq.type!r}")
            if eq.type.dom != p.ann:
                raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc,
                                     f"binder annotation {p.ann!r} does not match {eq.type.dom!r}")
            x, y, inner, body = self._open_trilam(ctx, p)
            self._check_path(inner, body,
                             Equation(App(eq.lhs, Var(x)), eq.type.cod, App(eq.rhs, Var(y))),
                             loc + ("body",), mismatch)
            return
        got = self.infer_equation(ctx, p, loc)
        if got.type != eq.type:
            raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc,
                                 f"path is at type {got.type!r}, expected {eq.type!r}")
        if not (self.conv(got.lhs, eq.lhs, loc) and self.conv(got.rhs, eq.rhs, loc)):
            raise TypeCheckError(mismatch, loc, "endpoints are not convertible to the expected ones")

    # dispatch on the classifier's sort
    def check(self, ctx: Context, expr, classifier, loc=()):
        if isinstance(expr, TERM_CLASSES):
            a = self.infer_type(ctx, expr, loc)
            if a != classifier:
                raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc,
                                     f"term has type {a!r}, expected {classifier!r}")
        elif isinstance(expr, PROOF_CLASSES):
            self.check_proof(ctx, expr, classifier, loc)
        elif isinstance(expr, PATH_CLASSES):
            if not isinstance(classifier, Equation):
                raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc, "a path is classified by an equation")
            self.check_path(ctx, expr, classifier, loc)
        else:
            raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc, f"cannot check {type(expr).__name__}")

    def infer(self, ctx: Context, expr, loc=()):
        if isinstance(expr, TERM_CLASSES):
            return self.infer_type(ctx, expr, loc)
        if isinstance(expr, PROOF_CLASSES):
            return self.infer_prop(ctx, expr, loc)
        if isinstance(expr, PATH_CLASSES):
            return self.infer_equation(ctx, expr, loc)
        raise TypeCheckError(ErrorKind.KIND_MISMATCH, loc, f"cannot infer {type(expr).__name__}")


_default = Checker()


def check_context(ctx: Context) -> None:
    _default.check_context(ctx)


def infer_type(ctx: Context, m):
    return _default.infer_type(ctx, m)


def infer_prop(ctx: Context, d):
    return _default.infer_prop(ctx, d)


def infer_equation(ctx: Context, p):
    return _default.infer_equation(ctx, p)


def check_proof(ctx: Context, d, phi) -> None:
    _default.check_proof(ctx, d, phi)


def check_path(ctx: Context, p, eq: Equation) -> None:
    _default.check_path(ctx, p, eq)


def check(ctx: Context, expr, classifier) -> None:
    _default.check(ctx, expr, classifier)


def infer(ctx: Context, expr):
    return _default.infer(ctx, expr)


def well_typed(ctx: Context, expr, classifier, fuel: int = DEFAULT_FUEL) -> bool:
    try:
        Checker(fuel).check(ctx, expr, classifier)
    except TypeCheckError:
        return False
    return True
