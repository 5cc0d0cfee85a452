"""Executable metatheory: one registered property per lemma, run over seeds.

Case ``i`` of a run started at ``seed`` is generated from seed ``seed + i``
alone, so ``run_property(name, 1, seed=s)`` replays any reported failure.
A failing case is shrunk greedily before it is reported: subexpressions are
replaced by ``bot``, ``ref(bot)`` or one of their own children of the same
sort, and a replacement is kept only when the case stays well typed (for
typed properties) and still fails.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..frontend.parser import parse_expr
from ..frontend.printer import free_sorts, print_expr
from ..parallel import Overflow, Verdict, check_diamond, joinable, relate_relations
from ..reduction import DEFAULT_FUEL, PROPERTY_FUEL, Indeterminate, Status, reduce, step_all, step_cbn, term_nf
from ..subst import canonical_inhabitant, path_subst, subst
from ..syntax import (
    Arrow, BOT, Equation, FIELDS, Imp, OMEGA, PLam, Ref, Sort, TYPE_CLASSES, Var,
    classify_neutral, fresh, is_canonical, is_canonical_prop, is_locally_closed, size, sort_of,
)
from ..typecheck import EMPTY, Checker, Context, PathDecl, ProofDecl, TermDecl, TypeCheckError
from .gen import GenConfig, GenerationFailure, RawGen, TypedGen, gen_raw

PROFILES = {"ci": 1_000, "full": 10_000}
RAW_SIZE = 12
SR_STEPS = 20
JOIN_DEPTH = 8
SHRINK_BUDGET = 400

_checker = Checker(PROPERTY_FUEL)


@dataclass(frozen=True)
class Case:
    """One instance.  ``expr`` is what shrinking rewrites; ``ctx`` and ``cls``
    say where and at what it is typed (``cls`` is None for untyped cases)."""

    expr: object
    ctx: Context = EMPTY
    cls: object = None
    extra: tuple = ()

    def show(self) -> str:
        text = print_expr(self.expr)
        if self.cls is not None:
            text += f" : {print_expr(self.cls)}"
        if len(self.ctx):
            text = f"{show_context(self.ctx)} |- {text}"
        return text


def show_context(ctx) -> str:
    parts = []
    for d in ctx:
        cls = d.type if isinstance(d, TermDecl) else d.prop if isinstance(d, ProofDecl) else d.equation
        parts.append(f"{d.name} : {print_expr(cls)}")
    return ", ".join(parts)


@dataclass(frozen=True)
class Failure:
    seed: int
    detail: str
    counterexample: Case

    def line(self) -> str:
        return f"FAIL seed={self.seed} {self.detail} :: {self.counterexample.show()}"


@dataclass
class PropertyVerdict:
    name: str
    cases: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list:
        head = f"PROP {self.name} cases={self.cases} failures={len(self.failures)}"
        return [head] + [f.line() for f in self.failures]


@dataclass(frozen=True)
class Property:
    name: str
    make: Callable[[int], Case]
    check: Callable[[Case], Optional[str]]
    typing_ctx: Optional[Callable[[Case], Context]] = None  # None: untyped


REGISTRY: dict = {}


def register(name, make, check, typed=True, typing_ctx=None):
    if typed and typing_ctx is None:
        typing_ctx = _own_ctx
    REGISTRY[name] = Property(name, make, check, typing_ctx if typed else None)


def _own_ctx(case):
    return case.ctx


# -- case builders -------------------------------------------------------------

def _typed_gen(seed, size):
    rng = random.Random(seed)
    return rng, TypedGen(rng, GenConfig(seed=seed, size=size))


def typed_case(seed: int, sorts=(Sort.TERM, Sort.PROOF, Sort.PATH), term_vars=True,
               empty=False, size=24) -> Case:
    """A generated expression with the classifier the generator claims for it."""
    rng, g = _typed_gen(seed, size)
    ctx = EMPTY if empty else g.gen_context(term_vars=term_vars)
    sort = rng.choice(sorts)
    if sort is Sort.TERM:
        a = g.rand_type()
        return Case(g.gen_term(ctx, a, size), ctx, a)
    if sort is Sort.PROOF:
        d, phi = g.syn_proof(ctx, size)
        return Case(d, ctx, phi)
    a = g.rand_type(1)
    p, l, r = g.gen_path(ctx, a, size)
    return Case(p, ctx, Equation(l, a, r))


def raw_case(seed: int) -> Case:
    return Case(gen_raw(random.Random(seed), RAW_SIZE))


def typed_ok(ctx, expr, cls) -> bool:
    try:
        _checker.check(ctx, expr, cls)
        return True
    except TypeCheckError:
        return False


def _classifier_valid(ctx, cls):
    if isinstance(cls, TYPE_CLASSES):
        return
    if isinstance(cls, Equation):
        _checker.check_equation(ctx, cls)
    else:
        _checker.expect_omega(ctx, cls, ())


def _rejected(case):
    try:
        _checker.check(case.ctx, case.expr, case.cls)
    except TypeCheckError as exc:
        return f"generated case rejected: {exc}"
    return None


# -- typing --------------------------------------------------------------------

def _subject_reduction(case: Case):
    """Every reduct along the call-by-name path, and every one-step reduct of
    each expression on it, keeps the classifier, which stays well formed."""
    if (bad := _rejected(case)) is not None:
        return bad
    ctx, cls = case.ctx, case.cls
    cur = case.expr
    for i in range(SR_STEPS):
        for r in step_all(cur):
            try:
                _checker.check(ctx, r, cls)
            except TypeCheckError as exc:
                return f"reduct at step {i + 1} loses its classifier: {exc}"
            try:
                _classifier_valid(ctx, _checker.infer(ctx, r))
            except TypeCheckError as exc:
                return f"type validity fails at step {i + 1}: {exc}"
        nxt = step_cbn(cur)
        if nxt is None:
            break
        cur = nxt.result
    return None


def _generator_soundness(case: Case):
    try:
        _checker.check_context(case.ctx)
    except TypeCheckError as exc:
        return f"generated context rejected: {exc}"
    return _rejected(case)


SMALL_TYPES = (OMEGA, Arrow(OMEGA, OMEGA))


def _weakening_make(seed):
    case = typed_case(seed)
    rng = random.Random(seed ^ 0x5EED)
    entries = list(case.ctx.entries)
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice("xpe")
        if kind == "x":
            d = TermDecl(fresh("w"), rng.choice(SMALL_TYPES))
        elif kind == "p":
            d = ProofDecl(fresh("w"), rng.choice((BOT, Imp(BOT, BOT))))
        else:
            d = PathDecl(fresh("w"), Equation(BOT, OMEGA, BOT))
        entries.insert(rng.randint(0, len(entries)), d)
    return Case(case.expr, Context(entries), case.cls, (case.ctx,))


def _weakening(case: Case):
    (small,) = case.extra
    try:
        _checker.check(small, case.expr, case.cls)
    except TypeCheckError as exc:
        return f"generated case rejected: {exc}"
    try:
        _checker.check_context(case.ctx)
        _checker.check(case.ctx, case.expr, case.cls)
    except TypeCheckError as exc:
        return f"lost under weakening: {exc}"
    return None


def _well_typed_subst_make(seed):
    rng, g = _typed_gen(seed, 16)
    outer = g.gen_context()
    a = g.rand_type(1)
    x = fresh("z")
    inner = outer.extend(TermDecl(x, a))
    sort = rng.choice((Sort.TERM, Sort.PROOF, Sort.PATH))
    if sort is Sort.TERM:
        b = g.rand_type()
        e, cls = g.gen_term(inner, b, 16), b
    elif sort is Sort.PROOF:
        e, cls = g.syn_proof(inner, 16)
    else:
        b = g.rand_type(1)
        p, l, r = g.gen_path(inner, b, 16)
        e, cls = p, Equation(l, b, r)
    n = g.gen_term(outer, a, 8)
    return Case(e, inner, cls, (outer, x, n))


def _well_typed_subst(case: Case):
    if (bad := _rejected(case)) is not None:
        return bad
    outer, x, n = case.extra
    s = {x: n}
    cls = case.cls if isinstance(case.cls, TYPE_CLASSES) else subst(case.cls, s)
    try:
        _checker.check(outer, subst(case.expr, s), cls)
    except TypeCheckError as exc:
        return f"substitution instance ill typed: {exc}"
    return None


def _typed_pathsub_make(seed):
    rng, g = _typed_gen(seed, 16)
    delta = g.gen_context()
    names, entries, gamma = [], {}, delta
    for _ in range(rng.randint(1, 2)):
        a = g.rand_type(1)
        x = fresh("z")
        p, l, r = g.gen_path(delta, a, 8)
        entries[x] = (p, l, r)
        gamma = gamma.extend(TermDecl(x, a))
    b = g.rand_type()
    m = g.gen_term(gamma, b, 16)
    return Case(m, gamma, b, (delta, entries))


def _typed_pathsub(case: Case):
    if (bad := _rejected(case)) is not None:
        return bad
    delta, entries = case.extra
    left = {x: l for x, (_, l, _) in entries.items()}
    right = {x: r for x, (_, _, r) in entries.items()}
    eq = Equation(subst(case.expr, left), case.cls, subst(case.expr, right))
    try:
        _checker.check_path(delta, path_subst(case.expr, entries), eq)
    except TypeCheckError as exc:
        return f"path substitution ill typed: {exc}"
    return None


# -- reduction -----------------------------------------------------------------

def _confluence(case: Case):
    reducts = sorted(step_all(case.expr), key=lambda h: (size(h), repr(h)))
    for i, f in enumerate(reducts):
        for g in reducts[i + 1:]:
            try:
                if not joinable(f, g, step_all, JOIN_DEPTH):
                    return f"no common reduct within {JOIN_DEPTH} steps of {print_expr(f)} and {print_expr(g)}"
            except Overflow as exc:
                return f"search overflow: {exc}"
    return None


def _diamond(case: Case):
    try:
        reports = check_diamond(case.expr)
    except Overflow as exc:
        return f"enumeration overflow: {exc}"
    for rep in reports:
        if rep.verdict is Verdict.COUNTEREXAMPLE:
            return f"no one-step join of {print_expr(rep.branch1)} and {print_expr(rep.branch2)}"
    return None


def _step_in_parallel(case: Case):
    try:
        verdict = relate_relations(case.expr, JOIN_DEPTH)
    except Overflow as exc:
        return f"enumeration overflow: {exc}"
    if verdict is not Verdict.HOLDS:
        return "one-step reduction not inside parallel reduction, or parallel not inside many-step"
    return None


def _normal_form(case: Case, fuel=DEFAULT_FUEL):
    out = reduce(case.expr, fuel)
    if out.status is Status.FUEL_EXHAUSTED:
        return out, f"no normal form within {fuel} steps"
    return out, None


def _canonicity_make(seed):
    # even seeds: empty context; odd seeds: proof and path variables only
    return typed_case(seed, (Sort.PROOF, Sort.PATH), term_vars=False, empty=seed % 2 == 0)


def _canonicity(case: Case):
    if (bad := _rejected(case)) is not None:
        return bad
    out, bad = _normal_form(case)
    if bad:
        return bad
    nf = out.result
    if not len(case.ctx):
        if not is_canonical(nf):
            return f"closed normal form is not canonical: {print_expr(nf)}"
        if sort_of(nf) is Sort.PROOF and type(nf) is not PLam:
            return f"closed proof normal form is not a lambda: {print_expr(nf)}"
        if sort_of(nf) is Sort.PROOF:
            try:
                prop = term_nf(case.cls, PROPERTY_FUEL)
            except Indeterminate:
                return "proposition has no normal form"
            if is_canonical_prop(prop) and type(nf) is not PLam:
                return f"proof of a canonical proposition is not a lambda: {print_expr(nf)}"
        return None
    if not (is_canonical(nf) or classify_neutral(nf)):
        return f"normal form is neither canonical nor neutral: {print_expr(nf)}"
    return None


def _weak_normalization(case: Case):
    if (bad := _rejected(case)) is not None:
        return bad
    out, bad = _normal_form(case)
    if bad:
        return bad
    if step_cbn(out.result) is not None:
        return "reduction stopped at a reducible expression"
    return None


def _pathsub_instance(seed):
    """Random ``M``, ``N``, ``P``, ``L``, ``L'`` over free names ``x``, ``y``."""
    rng = random.Random(seed)
    g = RawGen(rng)
    return (g.term(rng.randint(2, 10)), g.term(rng.randint(1, 6)), g.path(rng.randint(1, 6)),
            g.term(rng.randint(1, 4)), g.term(rng.randint(1, 4)))


def _subst_pathsubst_make(seed):
    m, n, p, l, l2 = _pathsub_instance(seed)
    return Case(m, extra=(n, p, l, l2))


def _subst_pathsubst_i(case: Case):
    n, p, l, l2 = case.extra
    tau = {"y": (p, l, l2)}
    lhs = path_subst(subst(case.expr, {"x": n}), tau)
    n_path = (path_subst(n, tau), subst(n, {"y": l}), subst(n, {"y": l2}))
    rhs = path_subst(case.expr, {"x": n_path, "y": (p, l, l2)})
    return None if lhs == rhs else f"sides differ: {print_expr(lhs)} vs {print_expr(rhs)}"


def _subst_pathsubst_ii(case: Case):
    n, p, l, l2 = case.extra
    s = {"x": n}
    lhs = subst(path_subst(case.expr, {"y": (p, l, l2)}), s)
    rhs = path_subst(case.expr, {"y": (subst(p, s), subst(l, s), subst(l2, s)), "x": (Ref(n), n, n)})
    return None if lhs == rhs else f"sides differ: {print_expr(lhs)} vs {print_expr(rhs)}"


def _resp_pathsub(case: Case):
    n, p, l, l2 = case.extra
    tau = {"y": (p, l, l2)}
    before = path_subst(case.expr, tau)
    after_one = step_all(before)
    for reduct in step_all(case.expr):
        target = path_subst(reduct, tau)
        if target in after_one:
            continue
        try:
            if not joinable(before, target, step_all, JOIN_DEPTH):
                return f"{print_expr(reduct)} gives a path not reachable from {print_expr(before)}"
        except Overflow as exc:
            return f"search overflow: {exc}"
    return None


# -- concrete syntax -----------------------------------------------------------

def _roundtrip_make(seed):
    return typed_case(seed) if seed % 2 else raw_case(seed)


def _roundtrip(case: Case):
    text = print_expr(case.expr)
    back = parse_expr(text, free_sorts(case.expr)).expr
    return None if back == case.expr else f"reads back differently: {text}"


register("subject-reduction", typed_case, _subject_reduction)
register("confluence-step", raw_case, _confluence, typed=False)
register("diamond", raw_case, _diamond, typed=False)
register("subst-pathsubst-i", _subst_pathsubst_make, _subst_pathsubst_i, typed=False)
register("subst-pathsubst-ii", _subst_pathsubst_make, _subst_pathsubst_ii, typed=False)
register("resp-pathsub", _subst_pathsubst_make, _resp_pathsub, typed=False)
register("typed-pathsub", _typed_pathsub_make, _typed_pathsub)
register("weakening", _weakening_make, _weakening, typing_ctx=lambda c: c.extra[0])
register("canonicity-closed", _canonicity_make, _canonicity)
register("weak-normalization", typed_case, _weak_normalization)
register("generator-soundness", typed_case, _generator_soundness)
register("well-typed-subst", _well_typed_subst_make, _well_typed_subst)
register("step-in-parallel", raw_case, _step_in_parallel, typed=False)
register("roundtrip", _roundtrip_make, _roundtrip, typed=False)


# -- running and shrinking -----------------------------------------------------

def _evaluate(prop: Property, case: Case) -> Optional[str]:
    try:
        return prop.check(case)
    except Exception as exc:  # a crash is a failure, reported like any other
        return f"crash {type(exc).__name__}: {exc}"


def positions(e, path=()):
    """Preorder ``(path, subexpression)`` pairs, skipping types."""
    yield path, e
    for slot in FIELDS[type(e)]:
        child = getattr(e, slot)
        if not isinstance(child, TYPE_CLASSES):
            yield from positions(child, path + (slot,))


def replace_at(e, path, new):
    if not path:
        return new
    slot = path[0]
    return dataclasses.replace(e, **{slot: replace_at(getattr(e, slot), path[1:], new)})


def _candidates(sub):
    try:
        sort = sort_of(sub)
    except TypeError:
        return []
    out = []
    if sort is Sort.TERM:
        out.append(BOT)
    elif sort is Sort.PATH:
        out.append(Ref(BOT))
    for slot in FIELDS[type(sub)]:
        child = getattr(sub, slot)
        if not isinstance(child, TYPE_CLASSES) and not isinstance(child, Equation):
            try:
                if sort_of(child) is sort:
                    out.append(child)
            except TypeError:
                pass
    if sort is Sort.TERM and is_locally_closed(sub):
        try:
            out.append(canonical_inhabitant(_checker.infer_type(EMPTY, sub)))
        except TypeCheckError:
            pass
    here = size(sub)
    return [c for c in out if size(c) < here]


def shrink(prop: Property, case: Case, detail: str, budget: int = SHRINK_BUDGET):
    """Greedy replacement of subexpressions while the property keeps failing."""
    progress = True
    while progress and budget > 0:
        progress = False
        for path, sub in list(positions(case.expr)):
            for cand in _candidates(sub):
                budget -= 1
                if budget <= 0:
                    return case, detail
                expr = replace_at(case.expr, path, cand)
                if not is_locally_closed(expr):
                    continue
                trial = dataclasses.replace(case, expr=expr)
                if prop.typing_ctx is not None and not typed_ok(prop.typing_ctx(trial), expr, case.cls):
                    continue
                d = _evaluate(prop, trial)
                if d is not None and not d.startswith("generated case rejected"):
                    case, detail, progress = trial, d, True
                    break
            if progress:
                break
    return case, detail


def run_case(name: str, seed: int) -> tuple:
    """``(case, failure detail or None)`` for one seed, unshrunk."""
    prop = REGISTRY[name]
    try:
        case = prop.make(seed)
    except GenerationFailure as exc:
        return Case(BOT), f"generation failed: {exc}"
    return case, _evaluate(prop, case)


def run_property(name: str, cases: int, seed: int = 0, minimize: bool = True) -> PropertyVerdict:
    if name not in REGISTRY:
        raise KeyError(f"unknown property {name!r}")
    prop = REGISTRY[name]
    verdict = PropertyVerdict(name, cases)
    for i in range(cases):
        s = seed + i
        case, detail = run_case(name, s)
        if detail is None:
            continue
        if minimize and not detail.startswith(("generation failed", "generated case rejected")):
            case, detail = shrink(prop, case, detail)
        verdict.failures.append(Failure(s, detail, case))
    return verdict
