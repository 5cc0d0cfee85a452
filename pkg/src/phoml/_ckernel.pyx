# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled binder kernel, a drop-in for ``_pykernel``.

One typed traversal serves every operation; the per-operation behaviour at
variable leaves is selected by an integer mode instead of a Python callback.
"""

from .syntax import (
    App, Arrow, BVar, Bot, EBVar, EVar, Equation, Imp, ImpStar, Lam, Omega,
    PApp, PBVar, PLam, PVar, PathApp, Plus, Minus, Ref, TriLam, Univ, Var,
)

BACKEND = "cython"

cdef enum:
    INST, ABST, SUBST, FREE, CLOSED


cdef class _Walk:
    cdef int mode
    cdef tuple terms, proofs, paths
    cdef dict tmap, pmap, emap
    cdef set ts, ps, es
    cdef bint ok

    cdef object leaf(self, object v, type cls, int dt, int dp, int de):
        cdef int k
        cdef object hit
        if self.mode == INST:
            if cls is BVar:
                k = v.index - dt
                if 0 <= k < len(self.terms):
                    return self.terms[k]
            elif cls is PBVar:
                k = v.index - dp
                if 0 <= k < len(self.proofs):
                    return self.proofs[k]
            elif cls is EBVar:
                k = v.index - de
                if 0 <= k < len(self.paths):
                    return self.paths[k]
            return v
        if self.mode == ABST:
            if cls is Var:
                hit = self.tmap.get(v.name)
                if hit is not None:
                    return BVar(dt + <int>hit)
            elif cls is PVar:
                hit = self.pmap.get(v.name)
                if hit is not None:
                    return PBVar(dp + <int>hit)
            elif cls is EVar:
                hit = self.emap.get(v.name)
                if hit is not None:
                    return EBVar(de + <int>hit)
            return v
        if self.mode == SUBST:
            if cls is Var:
                hit = self.tmap.get(v.name)
            elif cls is PVar:
                hit = self.pmap.get(v.name)
            elif cls is EVar:
                hit = self.emap.get(v.name)
            else:
                return v
            return v if hit is None else hit
        if self.mode == FREE:
            if cls is Var:
                self.ts.add(v.name)
            elif cls is PVar:
                self.ps.add(v.name)
            elif cls is EVar:
                self.es.add(v.name)
            return v
        if (cls is BVar and v.index >= dt) or (cls is PBVar and v.index >= dp) \
                or (cls is EBVar and v.index >= de):
            self.ok = False
        return v

    cdef object go(self, object e, int dt, int dp, int de):
        cdef type cls = type(e)
        cdef object a, b, c, d
        if cls is Var or cls is BVar or cls is PVar or cls is PBVar or cls is EVar or cls is EBVar:
            return self.leaf(e, cls, dt, dp, de)
        if cls is Bot or cls is Omega or cls is Arrow:
            return e
        if cls is App:
            a = self.go(e.fun, dt, dp, de)
            b = self.go(e.arg, dt, dp, de)
            return e if (a is e.fun and b is e.arg) else App(a, b)
        if cls is Imp:
            a = self.go(e.lhs, dt, dp, de)
            b = self.go(e.rhs, dt, dp, de)
            return e if (a is e.lhs and b is e.rhs) else Imp(a, b)
        if cls is Lam:
            b = self.go(e.body, dt + 1, dp, de)
            return e if b is e.body else Lam(e.ann, b, e.hint)
        if cls is PLam:
            a = self.go(e.ann, dt, dp, de)
            b = self.go(e.body, dt, dp + 1, de)
            return e if (a is e.ann and b is e.body) else PLam(a, b, e.hint)
        if cls is PApp:
            a = self.go(e.fun, dt, dp, de)
            b = self.go(e.arg, dt, dp, de)
            return e if (a is e.fun and b is e.arg) else PApp(a, b)
        if cls is Plus:
            a = self.go(e.path, dt, dp, de)
            return e if a is e.path else Plus(a)
        if cls is Minus:
            a = self.go(e.path, dt, dp, de)
            return e if a is e.path else Minus(a)
        if cls is Ref:
            a = self.go(e.term, dt, dp, de)
            return e if a is e.term else Ref(a)
        if cls is ImpStar:
            a = self.go(e.lhs, dt, dp, de)
            b = self.go(e.rhs, dt, dp, de)
            return e if (a is e.lhs and b is e.rhs) else ImpStar(a, b)
        if cls is Univ:
            a = self.go(e.src, dt, dp, de)
            b = self.go(e.tgt, dt, dp, de)
            c = self.go(e.fwd, dt, dp, de)
            d = self.go(e.bwd, dt, dp, de)
            if a is e.src and b is e.tgt and c is e.fwd and d is e.bwd:
                return e
            return Univ(a, b, c, d)
        if cls is TriLam:
            b = self.go(e.body, dt + 2, dp, de + 1)
            return e if b is e.body else TriLam(e.ann, b, e.hint_e, e.hint_x, e.hint_y)
        if cls is PathApp:
            a = self.go(e.fun, dt, dp, de)
            b = self.go(e.left, dt, dp, de)
            c = self.go(e.right, dt, dp, de)
            d = self.go(e.arg, dt, dp, de)
            if a is e.fun and b is e.left and c is e.right and d is e.arg:
                return e
            return PathApp(a, b, c, d)
        if cls is Equation:
            a = self.go(e.lhs, dt, dp, de)
            b = self.go(e.rhs, dt, dp, de)
            return e if (a is e.lhs and b is e.rhs) else Equation(a, e.type, b)
        raise TypeError(f"not a PHOML expression: {e!r}")


def instantiate(e, terms, proofs, paths):
    """Replace loose index ``i`` of each kind by the i-th image."""
    cdef _Walk w = _Walk()
    w.mode = INST
    w.terms, w.proofs, w.paths = tuple(terms), tuple(proofs), tuple(paths)
    return w.go(e, 0, 0, 0)


def abstract(e, term_names, proof_names, path_names):
    """Turn the named free variables into loose indices (inverse of instantiate)."""
    cdef _Walk w = _Walk()
    w.mode = ABST
    w.tmap = {n: i for i, n in enumerate(term_names)}
    w.pmap = {n: i for i, n in enumerate(proof_names)}
    w.emap = {n: i for i, n in enumerate(path_names)}
    return w.go(e, 0, 0, 0)


def substitute(e, tmap, pmap, emap):
    """Simultaneous replacement of free variables; images must be locally closed."""
    if not (tmap or pmap or emap):
        return e
    cdef _Walk w = _Walk()
    w.mode = SUBST
    w.tmap, w.pmap, w.emap = dict(tmap), dict(pmap), dict(emap)
    return w.go(e, 0, 0, 0)


def free_names(e):
    cdef _Walk w = _Walk()
    w.mode = FREE
    w.ts, w.ps, w.es = set(), set(), set()
    w.go(e, 0, 0, 0)
    return w.ts, w.ps, w.es


def locally_closed(e):
    cdef _Walk w = _Walk()
    w.mode = CLOSED
    w.ok = True
    w.go(e, 0, 0, 0)
    return w.ok


cpdef long size(object e) except -1:
    cdef type cls = type(e)
    if cls is Var or cls is BVar or cls is PVar or cls is PBVar or cls is EVar or cls is EBVar \
            or cls is Bot or cls is Omega:
        return 1
    if cls is Arrow:
        return 1 + size(e.dom) + size(e.cod)
    if cls is App or cls is PApp:
        return 1 + size(e.fun) + size(e.arg)
    if cls is Imp or cls is ImpStar:
        return 1 + size(e.lhs) + size(e.rhs)
    if cls is Lam or cls is PLam or cls is TriLam:
        return 1 + size(e.ann) + size(e.body)
    if cls is Plus or cls is Minus:
        return 1 + size(e.path)
    if cls is Ref:
        return 1 + size(e.term)
    if cls is Univ:
        return 1 + size(e.src) + size(e.tgt) + size(e.fwd) + size(e.bwd)
    if cls is PathApp:
        return 1 + size(e.fun) + size(e.left) + size(e.right) + size(e.arg)
    if cls is Equation:
        return 1 + size(e.lhs) + size(e.type) + size(e.rhs)
    raise TypeError(f"not a PHOML expression: {e!r}")
