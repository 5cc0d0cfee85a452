"""Call-by-name reduction: one-step reducts, a deterministic strategy, conversion.

Rule names are stable and appear in traces and the CLI output.  A position is
a tuple of congruence slots leading from the root to the contracted redex,
e.g. ``("minus", "pathapp-fun")``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import kernel
from .subst import path_subst
from .syntax import (
    App, Canonicity, EVar, Imp, ImpStar, Lam, Minus, PApp, PBVar, PLam, PathApp,
    Plus, Ref, TriLam, Univ, Var, classify_canonical, classify_neutral, fresh,
    TERM_CLASSES,
)

DEFAULT_FUEL = 10_000
PROPERTY_FUEL = 1_000

RULES = (
    "beta", "beta-proof", "ref-plus", "ref-minus", "univ-plus", "univ-minus",
    "beta-tri", "ref-lam-app", "impstar-ref-ref", "impstar-ref-univ",
    "impstar-univ-ref", "impstar-univ-univ",
)


class Step(NamedTuple):
    rule: str
    position: tuple
    result: object


def _transport_lams(a_ann, b_ann, body):
    # \p:a_ann. \q:b_ann. body, where body mentions p as index 1 and q as index 0
    return PLam(a_ann, PLam(b_ann, body, "q"), "p")


P1, Q0 = PBVar(1), PBVar(0)


def contract(e) -> Optional[tuple]:
    """The top-level redex rule matching ``e``, as ``(rule, contractum)``."""
    cls = type(e)
    if cls is App:
        f = e.fun
        if type(f) is Lam:
            return "beta", kernel.instantiate(f.body, (e.arg,), (), ())
        return None
    if cls is PApp:
        f = e.fun
        if type(f) is PLam:
            return "beta-proof", kernel.instantiate(f.body, (), (e.arg,), ())
        return None
    if cls is Plus or cls is Minus:
        p = e.path
        if type(p) is Ref:
            return ("ref-plus" if cls is Plus else "ref-minus"), PLam(p.term, PBVar(0), "p")
        if type(p) is Univ:
            return ("univ-plus", p.fwd) if cls is Plus else ("univ-minus", p.bwd)
        return None
    if cls is PathApp:
        f = e.fun
        if type(f) is TriLam:
            return "beta-tri", kernel.instantiate(f.body, (e.right, e.left), (), (e.arg,))
        if type(f) is Ref and type(f.term) is Lam:
            x = fresh(f.term.hint)
            body = kernel.instantiate(f.term.body, (Var(x),), (), ())
            return "ref-lam-app", path_subst(body, {x: (e.arg, e.left, e.right)})
        return None
    if cls is ImpStar:
        l, r = e.lhs, e.rhs
        lc, rc = type(l), type(r)
        if lc is Ref and rc is Ref:
            return "impstar-ref-ref", Ref(Imp(l.term, r.term))
        if lc is Ref and rc is Univ:
            phi, psi, chi, d, eps = l.term, r.src, r.tgt, r.fwd, r.bwd
            return "impstar-ref-univ", Univ(
                Imp(phi, psi), Imp(phi, chi),
                _transport_lams(Imp(phi, psi), phi, PApp(d, PApp(P1, Q0))),
                _transport_lams(Imp(phi, chi), phi, PApp(eps, PApp(P1, Q0))),
            )
        if lc is Univ and rc is Ref:
            phi, psi, d, eps, chi = l.src, l.tgt, l.fwd, l.bwd, r.term
            return "impstar-univ-ref", Univ(
                Imp(phi, chi), Imp(psi, chi),
                _transport_lams(Imp(phi, chi), psi, PApp(P1, PApp(eps, Q0))),
                _transport_lams(Imp(psi, chi), phi, PApp(P1, PApp(d, Q0))),
            )
        if lc is Univ and rc is Univ:
            phi, psi, d, eps = l.src, l.tgt, l.fwd, l.bwd
            phi2, psi2, d2, eps2 = r.src, r.tgt, r.fwd, r.bwd
            return "impstar-univ-univ", Univ(
                Imp(phi, phi2), Imp(psi, psi2),
                _transport_lams(Imp(phi, phi2), psi, PApp(d2, PApp(P1, PApp(eps, Q0)))),
                _transport_lams(Imp(psi, psi2), phi, PApp(eps2, PApp(P1, PApp(d, Q0)))),
            )
        return None
    return None


def step_all_labeled(e) -> list:
    """Every one-step reduct of ``e`` with the rule and position that produced it."""
    out = []
    top = contract(e)
    if top is not None:
        out.append(Step(top[0], (), top[1]))
    cls = type(e)
    if cls is App:
        for s in step_all_labeled(e.fun):
            out.append(Step(s.rule, ("app-fun",) + s.position, App(s.result, e.arg)))
    elif cls is Imp:
        for s in step_all_labeled(e.lhs):
            out.append(Step(s.rule, ("imp-left",) + s.position, Imp(s.result, e.rhs)))
        for s in step_all_labeled(e.rhs):
            out.append(Step(s.rule, ("imp-right",) + s.position, Imp(e.lhs, s.result)))
    elif cls is PApp:
        for s in step_all_labeled(e.fun):
            out.append(Step(s.rule, ("papp-fun",) + s.position, PApp(s.result, e.arg)))
    elif cls is Plus:
        for s in step_all_labeled(e.path):
            out.append(Step(s.rule, ("plus",) + s.position, Plus(s.result)))
    elif cls is Minus:
        for s in step_all_labeled(e.path):
            out.append(Step(s.rule, ("minus",) + s.position, Minus(s.result)))
    elif cls is PathApp:
        for s in step_all_labeled(e.fun):
            out.append(Step(s.rule, ("pathapp-fun",) + s.position,
                            PathApp(s.result, e.left, e.right, e.arg)))
        if type(e.fun) is Ref:
            for s in step_all_labeled(e.fun.term):
                out.append(Step(s.rule, ("ref-app",) + s.position,
                                PathApp(Ref(s.result), e.left, e.right, e.arg)))
    elif cls is ImpStar:
        for s in step_all_labeled(e.lhs):
            out.append(Step(s.rule, ("impstar-left",) + s.position, ImpStar(s.result, e.rhs)))
        for s in step_all_labeled(e.rhs):
            out.append(Step(s.rule, ("impstar-right",) + s.position, ImpStar(e.lhs, s.result)))
    return out


def step_all(e) -> frozenset:
    return frozenset(s.result for s in step_all_labeled(e))


def step_cbn(e) -> Optional[Step]:
    """One step of the fixed leftmost-outermost strategy, or None at a normal form."""
    top = contract(e)
    if top is not None:
        return Step(top[0], (), top[1])
    cls = type(e)
    if cls is App:
        s = step_cbn(e.fun)
        return s and Step(s.rule, ("app-fun",) + s.position, App(s.result, e.arg))
    if cls is Imp:
        s = step_cbn(e.lhs)
        if s is not None:
            return Step(s.rule, ("imp-left",) + s.position, Imp(s.result, e.rhs))
        s = step_cbn(e.rhs)
        return s and Step(s.rule, ("imp-right",) + s.position, Imp(e.lhs, s.result))
    if cls is PApp:
        s = step_cbn(e.fun)
        return s and Step(s.rule, ("papp-fun",) + s.position, PApp(s.result, e.arg))
    if cls is Plus:
        s = step_cbn(e.path)
        return s and Step(s.rule, ("plus",) + s.position, Plus(s.result))
    if cls is Minus:
        s = step_cbn(e.path)
        return s and Step(s.rule, ("minus",) + s.position, Minus(s.result))
    if cls is PathApp:
        if type(e.fun) is Ref:
            s = step_cbn(e.fun.term)
            return s and Step(s.rule, ("ref-app",) + s.position,
                              PathApp(Ref(s.result), e.left, e.right, e.arg))
        s = step_cbn(e.fun)
        return s and Step(s.rule, ("pathapp-fun",) + s.position,
                          PathApp(s.result, e.left, e.right, e.arg))
    if cls is ImpStar:
        s = step_cbn(e.lhs)
        if s is not None:
            return Step(s.rule, ("impstar-left",) + s.position, ImpStar(s.result, e.rhs))
        s = step_cbn(e.rhs)
        return s and Step(s.rule, ("impstar-right",) + s.position, ImpStar(e.lhs, s.result))
    return None


# -- normalization -----------------------------------------------------------

class Status(enum.Enum):
    NORMAL_CANONICAL = "normal-canonical"
    NORMAL_NEUTRAL = "normal-neutral"
    NORMAL_OTHER = "normal-other"
    FUEL_EXHAUSTED = "fuel-exhausted"


@dataclass
class ReductionOutcome:
    result: object
    steps: int
    status: Status
    trace: list = field(default_factory=list)

    @property
    def normal(self) -> bool:
        return self.status is not Status.FUEL_EXHAUSTED


def classify_normal(e) -> Status:
    if classify_canonical(e) is not Canonicity.NOT_CANONICAL:
        return Status.NORMAL_CANONICAL
    if classify_neutral(e):
        return Status.NORMAL_NEUTRAL
    return Status.NORMAL_OTHER


def reduce(e, fuel: int = DEFAULT_FUEL, trace: bool = False) -> ReductionOutcome:
    if fuel < 1:
        raise ValueError("fuel must be positive")
    steps = []
    n = 0
    while True:
        s = step_cbn(e)
        if s is None:
            return ReductionOutcome(e, n, classify_normal(e), steps)
        if n == fuel:
            return ReductionOutcome(e, n, Status.FUEL_EXHAUSTED, steps)
        e = s.result
        n += 1
        if trace:
            steps.append(s)


def normalize_term(m, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    if not isinstance(m, TERM_CLASSES):
        raise TypeError(f"normalize_term expects a term, got {type(m).__name__}")
    return reduce(m, fuel)


class Indeterminate(Exception):
    """Conversion could not be decided within the fuel budget."""


def term_nf(m, fuel: int = DEFAULT_FUEL):
    out = normalize_term(m, fuel)
    if not out.normal:
        raise Indeterminate(f"no normal form within {fuel} steps")
    return out.result


def convertible(m, n, fuel: int = DEFAULT_FUEL) -> bool:
    if m == n:
        return True
    return term_nf(m, fuel) == term_nf(n, fuel)
