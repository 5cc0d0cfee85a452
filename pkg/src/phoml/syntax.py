"""Abstract syntax of PHOML.

Expressions are immutable trees in locally nameless form: free variables
carry names, bound variables carry per-kind de Bruijn indices.  Term, proof
and path variables live in three separate namespaces, both for names and for
indices.  Binder names survive only as display hints and never take part in
equality, so ``==`` on expressions *is* alpha-equivalence.

Inside a ``TriLam`` body the two term variables are numbered like a pair of
nested lambdas: index 1 is the left endpoint ``x``, index 0 the right
endpoint ``y``; the path variable ``e`` is path index 0.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Union


# -- types -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Omega:
    def __repr__(self):
        return "Omega"


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "Type"
    cod: "Type"


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class BVar:
    index: int


@dataclass(frozen=True, slots=True)
class Bot:
    def __repr__(self):
        return "Bot"


@dataclass(frozen=True, slots=True)
class Imp:
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True, slots=True)
class Lam:
    ann: "Type"
    body: "Term"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


# -- proofs ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class PVar:
    name: str


@dataclass(frozen=True, slots=True)
class PBVar:
    index: int


@dataclass(frozen=True, slots=True)
class PLam:
    ann: "Term"
    body: "Proof"
    hint: str = field(default="p", compare=False)


@dataclass(frozen=True, slots=True)
class PApp:
    fun: "Proof"
    arg: "Proof"


@dataclass(frozen=True, slots=True)
class Plus:
    path: "Path"


@dataclass(frozen=True, slots=True)
class Minus:
    path: "Path"


# -- paths -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class EVar:
    name: str


@dataclass(frozen=True, slots=True)
class EBVar:
    index: int


@dataclass(frozen=True, slots=True)
class Ref:
    term: "Term"


@dataclass(frozen=True, slots=True)
class ImpStar:
    lhs: "Path"
    rhs: "Path"


@dataclass(frozen=True, slots=True)
class Univ:
    src: "Term"
    tgt: "Term"
    fwd: "Proof"
    bwd: "Proof"


@dataclass(frozen=True, slots=True)
class TriLam:
    ann: "Type"
    body: "Path"
    hint_e: str = field(default="e", compare=False)
    hint_x: str = field(default="x", compare=False)
    hint_y: str = field(default="y", compare=False)


@dataclass(frozen=True, slots=True)
class PathApp:
    fun: "Path"
    left: "Term"
    right: "Term"
    arg: "Path"


@dataclass(frozen=True, slots=True)
class Equation:
    lhs: "Term"
    type: "Type"
    rhs: "Term"


Type = Union[Omega, Arrow]
Term = Union[Var, BVar, Bot, Imp, Lam, App]
Proof = Union[PVar, PBVar, PLam, PApp, Plus, Minus]
Path = Union[EVar, EBVar, Ref, ImpStar, Univ, TriLam, PathApp]
Expr = Union[Type, Term, Proof, Path, Equation]

OMEGA = Omega()
BOT = Bot()

TYPE_CLASSES = (Omega, Arrow)
TERM_CLASSES = (Var, BVar, Bot, Imp, Lam, App)
PROOF_CLASSES = (PVar, PBVar, PLam, PApp, Plus, Minus)
PATH_CLASSES = (EVar, EBVar, Ref, ImpStar, Univ, TriLam, PathApp)

# child slots of every constructor, in display order; used for positions
FIELDS = {
    Omega: (), Bot: (), Var: (), BVar: (), PVar: (), PBVar: (), EVar: (), EBVar: (),
    Arrow: ("dom", "cod"),
    Imp: ("lhs", "rhs"), Lam: ("ann", "body"), App: ("fun", "arg"),
    PLam: ("ann", "body"), PApp: ("fun", "arg"), Plus: ("path",), Minus: ("path",),
    Ref: ("term",), ImpStar: ("lhs", "rhs"), Univ: ("src", "tgt", "fwd", "bwd"),
    TriLam: ("ann", "body"), PathApp: ("fun", "left", "right", "arg"),
    Equation: ("lhs", "type", "rhs"),
}


class Sort(enum.Enum):
    TYPE = "type"
    TERM = "term"
    PROOF = "proof"
    PATH = "path"
    EQUATION = "equation"


def sort_of(e) -> Sort:
    if isinstance(e, TERM_CLASSES):
        return Sort.TERM
    if isinstance(e, PROOF_CLASSES):
        return Sort.PROOF
    if isinstance(e, PATH_CLASSES):
        return Sort.PATH
    if isinstance(e, TYPE_CLASSES):
        return Sort.TYPE
    if isinstance(e, Equation):
        return Sort.EQUATION
    raise TypeError(f"not a PHOML expression: {e!r}")


# -- binder plumbing ---------------------------------------------------------

from . import kernel  # noqa: E402  (kernel needs the classes above)

_counter = itertools.count()


def fresh(hint: str) -> str:
    """A name no parser-produced identifier can collide with."""
    return f"{base_name(hint)}#{next(_counter)}"


def base_name(name: str) -> str:
    return name.split("#")[0]


def lam(x: str, ann: Type, body: Term) -> Lam:
    return Lam(ann, kernel.abstract(body, (x,), (), ()), base_name(x))


def plam(p: str, ann: Term, body: Proof) -> PLam:
    return PLam(ann, kernel.abstract(body, (), (p,), ()), base_name(p))


def trilam(e: str, x: str, y: str, ann: Type, body: Path) -> TriLam:
    if x == y:
        raise ValueError("the endpoint variables of a TriLam must be distinct")
    return TriLam(ann, kernel.abstract(body, (y, x), (), (e,)), base_name(e), base_name(x), base_name(y))


def open_lam(t: Lam, x: str) -> Term:
    return kernel.instantiate(t.body, (Var(x),), (), ())


def open_plam(d: PLam, p: str) -> Proof:
    return kernel.instantiate(d.body, (), (PVar(p),), ())


def open_trilam(t: TriLam, x: str, y: str, e: str) -> Path:
    return kernel.instantiate(t.body, (Var(y), Var(x)), (), (EVar(e),))


def arrows(*types: Type) -> Type:
    """``arrows(A, B, C)`` is ``A -> B -> C``."""
    result = types[-1]
    for a in reversed(types[:-1]):
        result = Arrow(a, result)
    return result


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


# -- variables and equality --------------------------------------------------

class FreeVars(NamedTuple):
    terms: frozenset
    proofs: frozenset
    paths: frozenset


def free_vars(e) -> FreeVars:
    t, p, q = kernel.free_names(e)
    return FreeVars(frozenset(t), frozenset(p), frozenset(q))


def alpha_equal(e, f) -> bool:
    return e == f


def size(e) -> int:
    return kernel.size(e)


def is_locally_closed(e) -> bool:
    return kernel.locally_closed(e)


# -- classifiers -------------------------------------------------------------

class Canonicity(enum.Enum):
    CANONICAL_PROP = "CanonicalProp"
    CANONICAL_PROOF = "CanonicalProof"
    CANONICAL_PATH = "CanonicalPath"
    NOT_CANONICAL = "NotCanonical"


def is_canonical_prop(t) -> bool:
    while type(t) is Imp:
        if not is_canonical_prop(t.lhs):
            return False
        t = t.rhs
    return type(t) is Bot


def classify_canonical(e) -> Canonicity:
    cls = type(e)
    if cls is PLam:
        return Canonicity.CANONICAL_PROOF
    if cls is Ref or cls is Univ or cls is TriLam:
        return Canonicity.CANONICAL_PATH
    if (cls is Bot or cls is Imp) and is_canonical_prop(e):
        return Canonicity.CANONICAL_PROP
    return Canonicity.NOT_CANONICAL


def is_canonical(e) -> bool:
    return classify_canonical(e) is not Canonicity.NOT_CANONICAL


def classify_neutral(e) -> bool:
    cls = type(e)
    if cls is Var or cls is BVar or cls is PVar or cls is PBVar or cls is EVar or cls is EBVar:
        return True
    if cls is App or cls is PApp:
        return classify_neutral(e.fun)
    if cls is Plus or cls is Minus:
        return type(e.path) in PATH_CLASSES and classify_neutral(e.path)
    if cls is ImpStar:
        return classify_neutral(e.lhs) or classify_neutral(e.rhs)
    if cls is PathApp:
        return classify_neutral(e.fun)
    return False
