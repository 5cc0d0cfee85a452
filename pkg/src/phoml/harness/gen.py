"""Random expressions: a typed generator that inverts the deduction rules, and
an untyped one biased towards redexes.

The typed generator works in two directions.  ``gen_term`` and ``prove`` are
goal-directed (they are told the type or proposition to hit), while
``syn_proof`` and ``gen_path`` synthesize an expression together with the
classifier they claim for it.  Claimed classifiers are computed by the
generator's own bookkeeping, never by asking the typechecker, so checking them
afterwards is a real test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..reduction import PROPERTY_FUEL, Indeterminate, term_nf
from ..subst import PathSubstitution, canonical_inhabitant, path_subst, subst
from ..syntax import (
    App, Arrow, BOT, BVar, EBVar, EVar, Equation, Imp, ImpStar, Lam, Minus, OMEGA,
    PApp, PBVar, PLam, PVar, PathApp, Plus, Ref, Sort, TriLam, Univ, Var,
    free_vars, fresh, lam, open_lam, plam, trilam,
)
from ..typecheck import EMPTY, Context, PathDecl, ProofDecl, TermDecl

DEFAULT_WEIGHTS = {
    "leaf": 2.0,       # variables, bot, c_A, ref of a leaf
    "binder": 1.0,     # \x, \p, lll
    "app": 1.0,        # applications of every sort
    "connective": 1.0, # => and =>*
    "redex": 1.0,      # deliberately built redexes
    "transport": 1.0,  # ^+ / ^- and univ
    "pathsub": 0.5,    # paths built by path substitution
}


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    size: int = 24
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    context_depth: int = 3

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("size must be at least 1")
        merged = dict(DEFAULT_WEIGHTS, **self.weights)   # partial maps override the defaults
        if any(w < 0 for w in merged.values()) or not any(merged.values()):
            raise ValueError("weights must be nonnegative and not all zero")
        if self.context_depth < 0:
            raise ValueError("context_depth must be nonnegative")


class GenerationFailure(Exception):
    pass


T = Imp(BOT, BOT)
IOTA = PLam(BOT, PBVar(0), "p")


def _shape(ty):
    """Argument types and final codomain of ``A1 -> ... -> An -> B``."""
    args = []
    while type(ty) is Arrow:
        args.append(ty.dom)
        ty = ty.cod
    return args, ty


def trilam_endpoint(side, own: str, ann, nf, other: str):
    """The endpoint a ``lll`` body side determines, per the checker's rule."""
    if other in free_vars(side).terms:
        side = nf(side)
    return lam(own, ann, side)


class TypedGen:
    def __init__(self, rng: random.Random, cfg: GenConfig = GenConfig()):
        self.rng = rng
        self.cfg = cfg
        self.w = dict(DEFAULT_WEIGHTS, **cfg.weights)
        self._work = None

    # -- helpers -------------------------------------------------------------
    def choose(self, options):
        """Pick from ``[(weight-key, thunk)]`` by weight."""
        options = [(k, f) for k, f in options if self.w.get(k, 0) > 0]
        weights = [self.w[k] for k, _ in options]
        return self.rng.choices([f for _, f in options], weights)[0]

    def split(self, budget, parts):
        """Divide ``budget - 1`` among ``parts`` children, each at least 1."""
        budget = max(budget - 1, parts)
        cuts = sorted(self.rng.randint(0, budget - parts) for _ in range(parts - 1))
        sizes, prev = [], 0
        for c in cuts + [budget - parts]:
            sizes.append(c - prev + 1)
            prev = c
        return sizes

    def rand_type(self, depth=2):
        if depth == 0 or self.rng.random() < 0.6:
            return OMEGA
        return Arrow(self.rand_type(depth - 1), self.rand_type(depth - 1))

    def nf(self, m):
        try:
            return term_nf(m, PROPERTY_FUEL)
        except Indeterminate:
            return None

    # -- contexts ------------------------------------------------------------
    def gen_context(self, depth=None, term_vars=True) -> Context:
        depth = self.cfg.context_depth if depth is None else depth
        ctx = EMPTY
        counts = {"x": 0, "p": 0, "e": 0}
        for _ in range(depth):
            kinds = ["x", "p", "e"] if term_vars else ["p", "e"]
            k = self.rng.choice(kinds)
            name = f"{k}{counts[k]}"
            counts[k] += 1
            if k == "x":
                ctx = ctx.extend(TermDecl(name, self.rand_type()))
            elif k == "p":
                ctx = ctx.extend(ProofDecl(name, self.gen_term(ctx, OMEGA, 4)))
            else:
                a = self.rand_type(1)
                ctx = ctx.extend(PathDecl(name, Equation(self.gen_term(ctx, a, 3), a,
                                                         self.gen_term(ctx, a, 3))))
        return ctx

    # -- terms ---------------------------------------------------------------
    def gen_term(self, ctx: Context, a, budget: int):
        same = [Var(d.name) for d in ctx.term_vars() if d.type == a]
        heads = [d for d in ctx.term_vars() if type(d.type) is Arrow and _shape(d.type)[1] == a]

        def leaf():
            pool = same + ([BOT] if a == OMEGA else [canonical_inhabitant(a)])
            return self.rng.choice(pool)

        if budget <= 1:
            return leaf()
        options = [("leaf", leaf)]
        if a == OMEGA:
            def imp():
                l, r = self.split(budget, 2)
                return Imp(self.gen_term(ctx, OMEGA, l), self.gen_term(ctx, OMEGA, r))
            options.append(("connective", imp))
        else:
            def abstraction():
                x = fresh("x")
                body = self.gen_term(ctx.extend(TermDecl(x, a.dom)), a.cod, budget - 1)
                return lam(x, a.dom, body)
            options.append(("binder", abstraction))
        if heads:
            def head_app():
                d = self.rng.choice(heads)
                args, _ = _shape(d.type)
                m = Var(d.name)
                sizes = self.split(budget, max(len(args), 1))
                for t, s in zip(args, sizes):
                    m = App(m, self.gen_term(ctx, t, s))
                return m
            options.append(("app", head_app))

        def redex():
            b = self.rand_type(1)
            f, n = self.split(budget, 2)
            x = fresh("x")
            body = self.gen_term(ctx.extend(TermDecl(x, b)), a, f)
            return App(lam(x, b, body), self.gen_term(ctx, b, n))
        options.append(("redex", redex))

        def app():
            b = self.rand_type(1)
            f, n = self.split(budget, 2)
            return App(self.gen_term(ctx, Arrow(b, a), f), self.gen_term(ctx, b, n))
        options.append(("app", app))
        return self.choose(options)()

    # -- proofs --------------------------------------------------------------
    def hypotheses(self, ctx):
        out = []
        for d in ctx.entries:
            if type(d) is ProofDecl:
                n = self.nf(d.prop)
                if n is not None:
                    out.append((d.name, n))
        return out

    SEARCH_WORK = 40

    def prove(self, ctx: Context, phi, budget: int) -> Optional[object]:
        """Some proof of ``phi`` in ``ctx``, or None when the search gives up.

        Nested calls share one work allowance, so a failing search stays cheap.
        """
        outer = self._work is None
        if outer:
            self._work = self.SEARCH_WORK
        try:
            return self._prove(ctx, phi, budget)
        finally:
            if outer:
                self._work = None

    def _prove(self, ctx, phi, budget):
        self._work -= 1
        if self._work < 0 or budget <= 0:
            return None
        target = self.nf(phi)
        if target is None:
            return None
        hyps = self.hypotheses(ctx)
        direct = [PVar(name) for name, p in hyps if p == target]
        attempts = []
        if direct:
            attempts.append(lambda: self.rng.choice(direct))
        if type(target) is Imp:
            def intro():
                ann = phi.lhs if type(phi) is Imp else target.lhs
                p = fresh("p")
                body = self._prove(ctx.extend(ProofDecl(p, ann)), target.rhs, budget - 1)
                return None if body is None else plam(p, ann, body)
            attempts.append(intro)
        for name, p in hyps:
            premises = []
            while type(p) is Imp and p != target:
                premises.append(p.lhs)
                p = self.nf(p.rhs)
                if p is None:
                    break
            if p == target and premises:
                def elim(name=name, premises=premises):
                    d = PVar(name)
                    for prem in premises:
                        arg = self._prove(ctx, prem, budget - 1)
                        if arg is None:
                            return None
                        d = PApp(d, arg)
                    return d
                attempts.append(elim)
        for d in ctx.entries:
            if type(d) is PathDecl and d.equation.type == OMEGA:
                eq = d.equation
                if self.nf(eq.rhs) == target:
                    attempts.append(lambda eq=eq, n=d.name: self._transport(ctx, Plus(EVar(n)), eq.lhs, budget))
                if self.nf(eq.lhs) == target:
                    attempts.append(lambda eq=eq, n=d.name: self._transport(ctx, Minus(EVar(n)), eq.rhs, budget))

        def via_ref():
            kind = self.rng.choice((Plus, Minus))
            return self._transport(ctx, kind(Ref(phi)), phi, budget)

        def via_univ():
            ident = PLam(phi, PBVar(0), "p")
            kind = self.rng.choice((Plus, Minus))
            return self._transport(ctx, kind(Univ(phi, phi, ident, ident)), phi, budget)

        def via_beta():
            p = fresh("p")
            psi, arg = (T, IOTA)
            if hyps and self.rng.random() < 0.5:
                name, psi = self.rng.choice(hyps)
                arg = PVar(name)
            body = self._prove(ctx.extend(ProofDecl(p, psi)), phi, budget - 1)
            return None if body is None else PApp(plam(p, psi, body), arg)

        if budget > 2:
            attempts += [via_ref, via_univ, via_beta]
        self.rng.shuffle(attempts)
        # cheap, certain moves first half of the time, to keep proofs small
        if direct and self.rng.random() < 0.5:
            attempts.insert(0, lambda: self.rng.choice(direct))
        for attempt in attempts[:4]:
            d = attempt()
            if d is not None:
                return d
        return None

    def _transport(self, ctx, transport, premise, budget):
        arg = self._prove(ctx, premise, budget - 2)
        return None if arg is None else PApp(transport, arg)

    def syn_proof(self, ctx: Context, budget: int):
        """``(proof, proposition)`` with the proof deriving the proposition."""
        pvars = [(PVar(d.name), d.prop) for d in ctx.entries if type(d) is ProofDecl]

        def fallback():
            return IOTA, T

        def var():
            return self.rng.choice(pvars) if pvars else fallback()

        if budget <= 1:
            return var()

        def abstraction():
            phi = self.gen_term(ctx, OMEGA, max(1, budget // 3))
            p = fresh("p")
            body, psi = self.syn_proof(ctx.extend(ProofDecl(p, phi)), budget - 1)
            return plam(p, phi, body), Imp(phi, psi)

        def transport():
            path, l, r = self.gen_path(ctx, OMEGA, budget - 1)
            if self.rng.random() < 0.5:
                return Plus(path), Imp(l, r)
            return Minus(path), Imp(r, l)

        def application():
            f, phi = self.syn_proof(ctx, budget - 1)
            n = self.nf(phi)
            if type(n) is not Imp:
                return f, phi
            arg = self.prove(ctx, n.lhs, max(budget // 2, 2))
            if arg is None:
                return f, phi
            return PApp(f, arg), n.rhs

        def goal():
            phi = self.gen_term(ctx, OMEGA, max(1, budget // 2))
            d = self.prove(ctx, phi, budget)
            return (d, phi) if d is not None else fallback()

        options = [("leaf", var), ("binder", abstraction), ("transport", transport),
                   ("app", application), ("redex", goal)]
        return self.choose(options)()

    # -- paths ---------------------------------------------------------------
    def gen_path(self, ctx: Context, a, budget: int):
        """``(path, left, right)`` with ``path : left =[a] right``."""
        evars = [(EVar(d.name), d.equation) for d in ctx.entries
                 if type(d) is PathDecl and d.equation.type == a]

        def refl():
            m = self.gen_term(ctx, a, max(1, budget - 1))
            return Ref(m), m, m

        def var():
            if not evars:
                return refl()
            e, eq = self.rng.choice(evars)
            return e, eq.lhs, eq.rhs

        if budget <= 2:
            return self.rng.choice((refl, var))()
        options = [("leaf", refl), ("leaf", var)]
        if a == OMEGA:
            def impstar():
                l, r = self.split(budget, 2)
                p, pl, pr = self.gen_path(ctx, OMEGA, l)
                q, ql, qr = self.gen_path(ctx, OMEGA, r)
                return ImpStar(p, q), Imp(pl, ql), Imp(pr, qr)

            def univ():
                s = max(1, budget // 4)
                phi = self.gen_term(ctx, OMEGA, s)
                psi = self.gen_term(ctx, OMEGA, s)
                fwd = self.prove(ctx, Imp(phi, psi), budget // 2)
                bwd = fwd and self.prove(ctx, Imp(psi, phi), budget // 2)
                if fwd is None or bwd is None:
                    ident = PLam(phi, PBVar(0), "p")
                    psi, fwd, bwd = phi, ident, ident
                return Univ(phi, psi, fwd, bwd), phi, psi
            options += [("connective", impstar), ("transport", univ)]
        else:
            options.append(("binder", lambda: self.gen_trilam(ctx, a, budget)))

        def pathapp():
            b = self.rand_type(1)
            f, q = self.split(budget, 2)
            fun, fl, fr = self.gen_path(ctx, Arrow(b, a), f)
            arg, l, r = self.gen_path(ctx, b, q)
            return PathApp(fun, l, r, arg), App(fl, l), App(fr, r)

        def pathsub():
            b = self.rand_type(1)
            z = fresh("z")
            m = self.gen_term(ctx.extend(TermDecl(z, b)), a, max(1, budget // 2))
            p, l, r = self.gen_path(ctx, b, max(1, budget // 2))
            l2, r2 = self.pathsub_claim(m, {z: (l, r)})
            return path_subst(m, {z: (p, l, r)}), l2, r2
        options += [("app", pathapp), ("pathsub", pathsub), ("redex", pathapp)]
        return self.choose(options)()

    def pathsub_claim(self, m, ends):
        """Endpoints of ``m{tau}`` obtained by inverting one rule per clause.

        Agrees with the lemma's ``m[left] / m[right]`` up to conversion, but
        under a binder it records the endpoint the lll rule actually derives.
        """
        cls = type(m)
        if cls is Var:
            return ends.get(m.name, (m, m))
        if cls is Imp:
            (l1, r1), (l2, r2) = self.pathsub_claim(m.lhs, ends), self.pathsub_claim(m.rhs, ends)
            return Imp(l1, l2), Imp(r1, r2)
        if cls is App:
            lf, rf = self.pathsub_claim(m.fun, ends)
            left = {x: l for x, (l, _) in ends.items()}
            right = {x: r for x, (_, r) in ends.items()}
            return App(lf, subst(m.arg, left)), App(rf, subst(m.arg, right))
        if cls is Lam:
            y, a, a2 = fresh("y"), fresh("a"), fresh("a")
            inner = dict(ends)
            inner[y] = (Var(a), Var(a2))
            l, r = self.pathsub_claim(open_lam(m, y), inner)
            return trilam_endpoint(l, a, m.ann, self.nf, a2), trilam_endpoint(r, a2, m.ann, self.nf, a)
        return m, m

    def gen_trilam(self, ctx, a, budget, tries=3):
        for _ in range(tries):
            x, y, e = fresh("x"), fresh("y"), fresh("e")
            inner = ctx.extend(TermDecl(x, a.dom), TermDecl(y, a.dom),
                               PathDecl(e, Equation(Var(x), a.dom, Var(y))))
            body, l, r = self.gen_path(inner, a.cod, budget - 1)
            nl, nr = self.nf(l), self.nf(r)
            if nl is None or nr is None:
                continue
            if y in free_vars(nl).terms or x in free_vars(nr).terms:
                continue
            return trilam(e, x, y, a.dom, body), trilam_endpoint(l, x, a.dom, self.nf, y), trilam_endpoint(r, y, a.dom, self.nf, x)
        m = canonical_inhabitant(a)
        return Ref(m), m, m


def gen_typed(sort: Sort, ctx: Context, cfg: GenConfig, rng: random.Random | None = None):
    """A random expression of the given sort that is well typed in ``ctx``,
    paired with the classifier the generator claims for it."""
    rng = rng or random.Random(cfg.seed)
    g = TypedGen(rng, cfg)
    if sort is Sort.TERM:
        a = g.rand_type()
        return g.gen_term(ctx, a, cfg.size), a
    if sort is Sort.PROOF:
        return g.syn_proof(ctx, cfg.size)
    if sort is Sort.PATH:
        a = g.rand_type(1)
        p, l, r = g.gen_path(ctx, a, cfg.size)
        return p, Equation(l, a, r)
    raise GenerationFailure(f"cannot generate a {sort.value}")


# -- untyped, redex-biased ---------------------------------------------------

class RawGen:
    """Locally closed expressions of all three sorts, not necessarily typable.

    Roughly half the constructors chosen are the head of some redex, so the
    branching of both reduction relations gets exercised at small sizes.
    """

    FREE_TERMS = ("x", "y")
    FREE_PROOFS = ("p",)
    FREE_PATHS = ("e",)

    def __init__(self, rng: random.Random):
        self.rng = rng

    def type_(self, budget):
        if budget <= 2 or self.rng.random() < 0.6:
            return OMEGA
        return Arrow(OMEGA, self.type_(budget - 2))

    def term(self, budget, nt=0, np=0, ne=0):
        r = self.rng
        if budget <= 1 or r.random() < 0.2:
            pool = [BOT] + [Var(n) for n in self.FREE_TERMS] + [BVar(i) for i in range(nt)]
            return r.choice(pool)
        k = r.choice(("imp", "lam", "app", "beta", "beta", "fork"))
        if k == "fork" and budget >= 9:
            half = (budget - 1) // 2
            return Imp(self.beta(half, nt, np, ne), self.beta(budget - 1 - half, nt, np, ne))
        if k in ("imp", "fork"):
            return Imp(self.term(budget // 2, nt, np, ne), self.term(budget - 1 - budget // 2, nt, np, ne))
        if k == "lam":
            return Lam(self.type_(2), self.term(budget - 2, nt + 1, np, ne), r.choice("xyz"))
        if k == "app":
            return App(self.term(budget // 2, nt, np, ne), self.term(budget - 1 - budget // 2, nt, np, ne))
        return self.beta(budget, nt, np, ne)

    def beta(self, budget, nt=0, np=0, ne=0):
        f = budget // 2
        return App(Lam(OMEGA, self.term(f - 2, nt + 1, np, ne), "x"), self.term(budget - 1 - f, nt, np, ne))

    def proof(self, budget, nt=0, np=0, ne=0):
        r = self.rng
        if budget <= 1 or r.random() < 0.2:
            pool = [PVar(n) for n in self.FREE_PROOFS] + [PBVar(i) for i in range(np)]
            return r.choice(pool)
        k = r.choice(("lam", "app", "beta", "plus", "minus", "transport"))
        if k == "lam":
            a = self.term(min(3, budget // 3), nt, np, ne)
            return PLam(a, self.proof(budget - 1 - min(3, budget // 3), nt, np + 1, ne), "p")
        if k == "app":
            return PApp(self.proof(budget // 2, nt, np, ne), self.proof(budget - 1 - budget // 2, nt, np, ne))
        if k == "beta":
            f = budget // 2
            return PApp(PLam(BOT, self.proof(f - 2, nt, np + 1, ne), "q"), self.proof(budget - 1 - f, nt, np, ne))
        if k == "transport":
            head = self.rng.choice((Plus, Minus))
            canonical = self.canonical_path(budget - 1, nt, np, ne)
            return head(canonical)
        head = Plus if k == "plus" else Minus
        return head(self.path(budget - 1, nt, np, ne))

    def canonical_path(self, budget, nt, np, ne):
        if budget >= 5 and self.rng.random() < 0.5:
            s = (budget - 1) // 4
            return Univ(self.term(s, nt, np, ne), self.term(s, nt, np, ne),
                        self.proof(s, nt, np, ne), self.proof(budget - 1 - 3 * s, nt, np, ne))
        return Ref(self.term(budget - 1, nt, np, ne))

    def path(self, budget, nt=0, np=0, ne=0):
        r = self.rng
        if budget <= 1 or r.random() < 0.15:
            pool = [EVar(n) for n in self.FREE_PATHS] + [EBVar(i) for i in range(ne)]
            return r.choice(pool)
        k = r.choice(("ref", "univ", "impstar", "impstar-redex", "trilam", "pathapp", "beta-tri", "ref-lam",
                      "fork"))
        if k == "fork" and budget >= 9:
            half = (budget - 1) // 2
            return ImpStar(self.path(half, nt, np, ne), self.path(budget - 1 - half, nt, np, ne))
        if k in ("ref", "univ", "fork"):
            return self.canonical_path(budget, nt, np, ne)
        if k == "impstar":
            return ImpStar(self.path(budget // 2, nt, np, ne), self.path(budget - 1 - budget // 2, nt, np, ne))
        if k == "impstar-redex":
            return ImpStar(self.canonical_path(budget // 2, nt, np, ne),
                           self.canonical_path(budget - 1 - budget // 2, nt, np, ne))
        if k == "trilam":
            return TriLam(OMEGA, self.path(budget - 2, nt + 2, np, ne + 1))
        s = max(1, (budget - 1) // 4)
        rest = max(1, budget - 1 - 3 * s)
        if k == "pathapp":
            fun = self.path(rest, nt, np, ne)
        elif k == "beta-tri":
            fun = TriLam(OMEGA, self.path(rest - 2, nt + 2, np, ne + 1))
        else:
            fun = Ref(Lam(OMEGA, self.term(rest - 3, nt + 1, np, ne), "x"))
        return PathApp(fun, self.term(s, nt, np, ne), self.term(s, nt, np, ne), self.path(s, nt, np, ne))

    def any(self, budget):
        return self.rng.choice((self.term, self.proof, self.path))(budget)

    def reducible_path(self, budget):
        if budget >= 8 and self.rng.random() < 0.3:
            return PathApp(Ref(Lam(OMEGA, self.term(budget - 7, 1), "x")), self.term(1), self.term(1), self.path(1))
        half = (budget - 1) // 2
        return ImpStar(self.canonical_path(half, 0, 0, 0), self.canonical_path(budget - 1 - half, 0, 0, 0))

    def forked(self, budget):
        """A connective with a redex on both sides, sometimes under a congruence."""
        r = self.rng
        wrap = r.choice(("none", "none", "app", "minus"))
        if wrap != "none":
            budget -= 2
        half = (budget - 1) // 2
        if wrap == "minus" or r.random() < 0.5:
            inner = ImpStar(self.reducible_path(half), self.reducible_path(budget - 1 - half))
            return Minus(inner) if wrap == "minus" else inner
        inner = Imp(self.beta(half), self.beta(budget - 1 - half))
        return App(inner, self.term(1)) if wrap == "app" else inner


def gen_raw(rng: random.Random, max_size: int = 12, tries: int = 50):
    """An untyped expression of at most ``max_size`` nodes."""
    from ..syntax import size
    g = RawGen(rng)
    for _ in range(tries):
        budget = rng.randint(max(2, max_size // 2), max_size)
        e = g.forked(budget) if rng.random() < 1 / 3 else g.any(budget)
        if max_size // 3 <= size(e) <= max_size:
            return e
    return BOT
