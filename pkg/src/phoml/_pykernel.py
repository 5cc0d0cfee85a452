"""Pure-Python binder kernel: opening, closing, substitution, free names.

Every operation walks the tree once, tracking how many binders of each
kind it has passed (``dt`` terms, ``dp`` proofs, ``de`` paths), and returns
the original object for untouched subtrees so sharing is preserved.
"""

from .syntax import (
    App, Arrow, BVar, Bot, EBVar, EVar, Equation, Imp, ImpStar, Lam, Omega,
    PApp, PBVar, PLam, PVar, PathApp, Plus, Minus, Ref, TriLam, Univ, Var,
)

BACKEND = "python"


def _map(e, leaf, dt, dp, de):
    cls = type(e)
    if cls is Var or cls is BVar or cls is PVar or cls is PBVar or cls is EVar or cls is EBVar:
        r = leaf(e, dt, dp, de)
        return e if r is None else r
    if cls is Bot or cls is Omega or cls is Arrow:
        return e
    if cls is App:
        f = _map(e.fun, leaf, dt, dp, de)
        a = _map(e.arg, leaf, dt, dp, de)
        return e if (f is e.fun and a is e.arg) else App(f, a)
    if cls is Imp:
        l = _map(e.lhs, leaf, dt, dp, de)
        r = _map(e.rhs, leaf, dt, dp, de)
        return e if (l is e.lhs and r is e.rhs) else Imp(l, r)
    if cls is Lam:
        b = _map(e.body, leaf, dt + 1, dp, de)
        return e if b is e.body else Lam(e.ann, b, e.hint)
    if cls is PLam:
        a = _map(e.ann, leaf, dt, dp, de)
        b = _map(e.body, leaf, dt, dp + 1, de)
        return e if (a is e.ann and b is e.body) else PLam(a, b, e.hint)
    if cls is PApp:
        f = _map(e.fun, leaf, dt, dp, de)
        a = _map(e.arg, leaf, dt, dp, de)
        return e if (f is e.fun and a is e.arg) else PApp(f, a)
    if cls is Plus:
        p = _map(e.path, leaf, dt, dp, de)
        return e if p is e.path else Plus(p)
    if cls is Minus:
        p = _map(e.path, leaf, dt, dp, de)
        return e if p is e.path else Minus(p)
    if cls is Ref:
        t = _map(e.term, leaf, dt, dp, de)
        return e if t is e.term else Ref(t)
    if cls is ImpStar:
        l = _map(e.lhs, leaf, dt, dp, de)
        r = _map(e.rhs, leaf, dt, dp, de)
        return e if (l is e.lhs and r is e.rhs) else ImpStar(l, r)
    if cls is Univ:
        s = _map(e.src, leaf, dt, dp, de)
        t = _map(e.tgt, leaf, dt, dp, de)
        f = _map(e.fwd, leaf, dt, dp, de)
        b = _map(e.bwd, leaf, dt, dp, de)
        if s is e.src and t is e.tgt and f is e.fwd and b is e.bwd:
            return e
        return Univ(s, t, f, b)
    if cls is TriLam:
        b = _map(e.body, leaf, dt + 2, dp, de + 1)
        return e if b is e.body else TriLam(e.ann, b, e.hint_e, e.hint_x, e.hint_y)
    if cls is PathApp:
        f = _map(e.fun, leaf, dt, dp, de)
        l = _map(e.left, leaf, dt, dp, de)
        r = _map(e.right, leaf, dt, dp, de)
        a = _map(e.arg, leaf, dt, dp, de)
        if f is e.fun and l is e.left and r is e.right and a is e.arg:
            return e
        return PathApp(f, l, r, a)
    if cls is Equation:
        l = _map(e.lhs, leaf, dt, dp, de)
        r = _map(e.rhs, leaf, dt, dp, de)
        return e if (l is e.lhs and r is e.rhs) else Equation(l, e.type, r)
    raise TypeError(f"not a PHOML expression: {e!r}")


def instantiate(e, terms, proofs, paths):
    """Replace loose index ``i`` of each kind by the i-th image."""
    nt, np_, ne = len(terms), len(proofs), len(paths)

    def leaf(v, dt, dp, de):
        cls = type(v)
        if cls is BVar:
            k = v.index - dt
            if 0 <= k < nt:
                return terms[k]
        elif cls is PBVar:
            k = v.index - dp
            if 0 <= k < np_:
                return proofs[k]
        elif cls is EBVar:
            k = v.index - de
            if 0 <= k < ne:
                return paths[k]
        return None

    return _map(e, leaf, 0, 0, 0)


def abstract(e, term_names, proof_names, path_names):
    """Turn the named free variables into loose indices (inverse of instantiate)."""
    tpos = {n: i for i, n in enumerate(term_names)}
    ppos = {n: i for i, n in enumerate(proof_names)}
    epos = {n: i for i, n in enumerate(path_names)}

    def leaf(v, dt, dp, de):
        cls = type(v)
        if cls is Var:
            k = tpos.get(v.name)
            if k is not None:
                return BVar(dt + k)
        elif cls is PVar:
            k = ppos.get(v.name)
            if k is not None:
                return PBVar(dp + k)
        elif cls is EVar:
            k = epos.get(v.name)
            if k is not None:
                return EBVar(de + k)
        return None

    return _map(e, leaf, 0, 0, 0)


def substitute(e, tmap, pmap, emap):
    """Simultaneous replacement of free variables; images must be locally closed."""
    if not (tmap or pmap or emap):
        return e

    def leaf(v, dt, dp, de):
        cls = type(v)
        if cls is Var:
            return tmap.get(v.name)
        if cls is PVar:
            return pmap.get(v.name)
        if cls is EVar:
            return emap.get(v.name)
        return None

    return _map(e, leaf, 0, 0, 0)


def free_names(e):
    ts, ps, es = set(), set(), set()

    def leaf(v, dt, dp, de):
        cls = type(v)
        if cls is Var:
            ts.add(v.name)
        elif cls is PVar:
            ps.add(v.name)
        elif cls is EVar:
            es.add(v.name)
        return None

    _map(e, leaf, 0, 0, 0)
    return ts, ps, es


def locally_closed(e):
    ok = [True]

    def leaf(v, dt, dp, de):
        cls = type(v)
        if (cls is BVar and v.index >= dt) or (cls is PBVar and v.index >= dp) \
                or (cls is EBVar and v.index >= de):
            ok[0] = False
        return None

    _map(e, leaf, 0, 0, 0)
    return ok[0]


def size(e):
    cls = type(e)
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
