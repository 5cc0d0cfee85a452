"""Substitution, path substitution, trivial loops and canonical inhabitants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import kernel
from .syntax import (
    App, Arrow, BOT, Bot, BVar, EVar, Imp, ImpStar, Lam, OMEGA, PathApp, Ref,
    TriLam, Var, fresh, open_lam, PATH_CLASSES, PROOF_CLASSES, TERM_CLASSES,
)


@dataclass(frozen=True)
class Substitution:
    """Finite maps from each variable kind to expressions of that kind."""

    terms: Mapping[str, object] = field(default_factory=dict)
    proofs: Mapping[str, object] = field(default_factory=dict)
    paths: Mapping[str, object] = field(default_factory=dict)

    @classmethod
    def of(cls, mapping: Mapping[str, object]) -> "Substitution":
        """Split a name->expression map by the class of each image."""
        ts, ps, es = {}, {}, {}
        for name, img in mapping.items():
            if isinstance(img, TERM_CLASSES):
                ts[name] = img
            elif isinstance(img, PROOF_CLASSES):
                ps[name] = img
            elif isinstance(img, PATH_CLASSES):
                es[name] = img
            else:
                raise TypeError(f"cannot substitute {img!r} for {name}")
        return cls(ts, ps, es)

    def __bool__(self):
        return bool(self.terms or self.proofs or self.paths)


def subst(e, s: Substitution | Mapping[str, object]):
    if not isinstance(s, Substitution):
        s = Substitution.of(s)
    return kernel.substitute(e, s.terms, s.proofs, s.paths)


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """The substitution equal to applying ``s1`` and then ``s2``."""
    def merge(m1, m2):
        out = {z: subst(img, s2) for z, img in m1.items()}
        for z, img in m2.items():
            out.setdefault(z, img)
        return out

    return Substitution(merge(s1.terms, s2.terms), merge(s1.proofs, s2.proofs),
                        merge(s1.paths, s2.paths))


@dataclass(frozen=True)
class PathSubstitution:
    """Term variable -> (path, left endpoint, right endpoint)."""

    entries: Mapping[str, tuple] = field(default_factory=dict)

    def extend(self, name: str, path, left, right) -> "PathSubstitution":
        d = dict(self.entries)
        d[name] = (path, left, right)
        return PathSubstitution(d)

    def left(self) -> dict:
        return {x: l for x, (_, l, _) in self.entries.items()}

    def right(self) -> dict:
        return {x: r for x, (_, _, r) in self.entries.items()}

    def paths(self) -> dict:
        return {x: p for x, (p, _, _) in self.entries.items()}


def path_subst(term, tau: PathSubstitution | Mapping[str, tuple] | None = None):
    """The path ``term{tau}`` from ``term[left(tau)]`` to ``term[right(tau)]``."""
    if tau is None:
        tau = PathSubstitution()
    elif not isinstance(tau, PathSubstitution):
        tau = PathSubstitution(dict(tau))
    if not isinstance(term, TERM_CLASSES):
        raise TypeError(f"path substitution applies to terms only, got {type(term).__name__}")
    return _path_subst(term, tau.entries, tau.left(), tau.right())


def _path_subst(t, entries, left, right):
    cls = type(t)
    if cls is Var:
        hit = entries.get(t.name)
        return hit[0] if hit is not None else Ref(t)
    if cls is Bot:
        return Ref(BOT)
    if cls is App:
        return PathApp(
            _path_subst(t.fun, entries, left, right),
            kernel.substitute(t.arg, left, {}, {}),
            kernel.substitute(t.arg, right, {}, {}),
            _path_subst(t.arg, entries, left, right),
        )
    if cls is Imp:
        return ImpStar(_path_subst(t.lhs, entries, left, right),
                       _path_subst(t.rhs, entries, left, right))
    if cls is Lam:
        y = fresh(t.hint)
        a, a2, e = fresh(t.hint), fresh(t.hint + "'"), fresh("e")
        inner_entries = dict(entries)
        inner_entries[y] = (EVar(e), Var(a), Var(a2))
        inner_left = dict(left)
        inner_left[y] = Var(a)
        inner_right = dict(right)
        inner_right[y] = Var(a2)
        body = _path_subst(open_lam(t, y), inner_entries, inner_left, inner_right)
        return TriLam(t.ann, kernel.abstract(body, (a2, a), (), (e,)), "e", t.hint, t.hint + "'")
    if cls is BVar:
        raise ValueError("path substitution needs a locally closed term")
    raise TypeError(f"not a term: {t!r}")


def trivial_loop(term):
    """``M{}``: the path substitution with empty domain."""
    return path_subst(term, PathSubstitution())


def canonical_inhabitant(ty):
    """``c_Omega = bot`` and ``c_(A->B) = \\x:A. c_B``."""
    if ty == OMEGA:
        return BOT
    if isinstance(ty, Arrow):
        return Lam(ty.dom, canonical_inhabitant(ty.cod), "x")
    raise TypeError(f"not a type: {ty!r}")
