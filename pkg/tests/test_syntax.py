import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import read
from phoml.harness.gen import RawGen
from phoml.syntax import (
    App, Arrow, BOT, Canonicity, EVar, Imp, ImpStar, Lam, OMEGA, PathApp, Ref, Sort,
    TriLam, Var, alpha_equal, classify_canonical, classify_neutral, free_vars, fresh,
    is_canonical, is_canonical_prop, is_locally_closed, lam, size, sort_of, trilam,
)


# -- a named syntax and a brute-force renamer, used as an alpha oracle ----------
#
# Named trees are tuples.  Terms: ("v", n) ("bot",) ("imp", a, b) ("lam", x, body)
# ("app", f, a).  Paths: ("ev", n) ("ref", m) ("star", p, q) ("lll", e, x, y, body)
# ("papp", p, m, n, q).  Binder annotations are always Omega.

NAMES = ["a", "b", "c"]


def canon(t, tenv=(), penv=()):
    """Rename every binder to its binding depth, per namespace."""
    k = t[0]
    if k == "v":
        return ("v", _look(t[1], tenv))
    if k == "ev":
        return ("ev", _look(t[1], penv))
    if k == "bot":
        return t
    if k in ("imp", "app", "star"):
        return (k, canon(t[1], tenv, penv), canon(t[2], tenv, penv))
    if k == "ref":
        return (k, canon(t[1], tenv, penv))
    if k == "lam":
        return ("lam", canon(t[2], ((t[1], len(tenv)),) + tenv, penv))
    if k == "lll":
        _, e, x, y, body = t
        tenv2 = ((y, len(tenv) + 1), (x, len(tenv))) + tenv
        return ("lll", canon(body, tenv2, ((e, len(penv)),) + penv))
    return ("papp",) + tuple(canon(c, tenv, penv) for c in t[1:])


def _look(name, env):
    for n, depth in env:
        if n == name:
            return ("bound", depth)
    return ("free", name)


def build(t):
    k = t[0]
    if k == "v":
        return Var(t[1])
    if k == "ev":
        return EVar(t[1])
    if k == "bot":
        return BOT
    if k == "imp":
        return Imp(build(t[1]), build(t[2]))
    if k == "app":
        return App(build(t[1]), build(t[2]))
    if k == "lam":
        return lam(t[1], OMEGA, build(t[2]))
    if k == "ref":
        return Ref(build(t[1]))
    if k == "star":
        return ImpStar(build(t[1]), build(t[2]))
    if k == "lll":
        return trilam(t[1], t[2], t[3], OMEGA, build(t[4]))
    return PathApp(build(t[1]), build(t[2]), build(t[3]), build(t[4]))


def named_terms():
    name = st.sampled_from(NAMES)
    leaf = st.one_of(st.builds(lambda n: ("v", n), name), st.just(("bot",)))
    return st.recursive(leaf, lambda kid: st.one_of(
        st.tuples(st.just("imp"), kid, kid),
        st.tuples(st.just("app"), kid, kid),
        st.tuples(st.just("lam"), name, kid),
    ), max_leaves=6)


@st.composite
def named_paths(draw, depth=2):
    name = st.sampled_from(NAMES)
    if depth == 0 or draw(st.booleans()):
        return draw(st.one_of(st.builds(lambda n: ("ev", n), name),
                              st.builds(lambda m: ("ref", m), named_terms())))
    k = draw(st.sampled_from(["star", "lll", "papp"]))
    if k == "star":
        return ("star", draw(named_paths(depth - 1)), draw(named_paths(depth - 1)))
    if k == "lll":
        x, y = draw(st.lists(name, min_size=2, max_size=2, unique=True))
        return ("lll", draw(name), x, y, draw(named_paths(depth - 1)))
    return ("papp", draw(named_paths(depth - 1)), draw(named_terms()), draw(named_terms()),
            draw(named_paths(depth - 1)))


named = st.one_of(named_terms(), named_paths())


@settings(max_examples=200, deadline=None)
@given(named, named)
def test_alpha_equality_agrees_with_renamer(s, t):
    assert (build(s) == build(t)) == (canon(s) == canon(t))


def rename(t, rng):
    """Rename binders (consistently) to fresh names; result is alpha-equivalent."""
    def go(t, tmap, pmap):
        k = t[0]
        if k == "v":
            return ("v", tmap.get(t[1], t[1]))
        if k == "ev":
            return ("ev", pmap.get(t[1], t[1]))
        if k == "bot":
            return t
        if k == "lam":
            x2 = f"r{rng.randrange(10**6)}"
            return ("lam", x2, go(t[2], {**tmap, t[1]: x2}, pmap))
        if k == "lll":
            _, e, x, y, body = t
            e2, x2, y2 = (f"r{rng.randrange(10**6)}" for _ in range(3))
            if x2 == y2:
                y2 += "'"
            return ("lll", e2, x2, y2, go(body, {**tmap, x: x2, y: y2}, {**pmap, e: e2}))
        return (k,) + tuple(go(c, tmap, pmap) for c in t[1:])
    return go(t, {}, {})


@settings(max_examples=300, deadline=None)
@given(named, st.integers(0, 2**32))
def test_alpha_renaming_preserves_equality_and_free_vars(t, seed):
    r = rename(t, random.Random(seed))
    assert canon(r) == canon(t)
    assert build(r) == build(t)
    assert free_vars(build(r)) == free_vars(build(t))


def test_alpha_equality_is_an_equivalence_on_random_expressions():
    rng = random.Random(7)
    g = RawGen(rng)
    pool = [g.any(rng.randint(1, 10)) for _ in range(300)]
    for e in pool:
        assert alpha_equal(e, e)
    for e, f in zip(pool, pool[1:]):
        assert alpha_equal(e, f) == alpha_equal(f, e)
    # transitivity via copies differing only in hints
    for e in pool[:50]:
        assert alpha_equal(e, _rehint(e)) and alpha_equal(_rehint(e), _rehint(_rehint(e)))


def _rehint(e):
    import dataclasses
    from phoml.syntax import FIELDS, PLam
    kids = {s: _rehint(getattr(e, s)) for s in FIELDS[type(e)]}
    if type(e) in (Lam, PLam):
        kids["hint"] = fresh("h")
    if type(e) is TriLam:
        kids.update(hint_e="q", hint_x="u", hint_y="v")
    return dataclasses.replace(e, **kids) if kids else e


def test_alpha_examples():
    assert alpha_equal(read(r"\x:Omega. x"), read(r"\y:Omega. y"))
    assert not alpha_equal(read(r"\x:Omega. x"), read(r"\x:Omega. bot"))
    assert read("lll e : x =[Omega -> Omega] y . e") == read("lll f : u =[Omega -> Omega] v . f")
    # the endpoint order matters
    assert read("lll e : x =[Omega] y . ref(x)") != read("lll e : x =[Omega] y . ref(y)")


def test_free_vars_examples():
    assert free_vars(read(r"\x:Omega. x")) == (frozenset(), frozenset(), frozenset())
    assert free_vars(read("lll e : x =[Omega] y . e")) == (frozenset(), frozenset(), frozenset())
    body = read(r"univ((bot => bot) => x, y, \p:(bot => bot) => x. e^+ (p (\i:bot. i)), "
                r"\m:y. \n:bot => bot. e^- m)", x="t", y="t", e="e")
    fv = free_vars(body)
    assert fv.terms == {"x", "y"} and fv.paths == {"e"} and not fv.proofs


def test_free_vars_keep_namespaces_apart():
    d = read(r"\p:x. q", x="t", q="p")
    assert free_vars(d) == ({"x"}, {"q"}, set())


def test_classify_canonical_examples():
    assert classify_canonical(read("bot => (bot => bot)")) is Canonicity.CANONICAL_PROP
    assert classify_canonical(read("x => bot", x="t")) is Canonicity.NOT_CANONICAL
    u = read("univ(phi, psi, d, e)", phi="t", psi="t", d="p", e="p")
    assert classify_canonical(u) is Canonicity.CANONICAL_PATH
    assert classify_canonical(read(r"\p:bot. p")) is Canonicity.CANONICAL_PROOF
    assert classify_canonical(read("lll e : x =[Omega] y . e")) is Canonicity.CANONICAL_PATH
    assert classify_canonical(read(r"\x:Omega. x")) is Canonicity.NOT_CANONICAL


def test_classify_neutral_examples():
    assert classify_neutral(read("x bot", x="t"))
    assert not classify_neutral(read("ref(bot)^+"))
    assert classify_neutral(read("ref(phi) =>* e", phi="t", e="e"))
    assert classify_neutral(read("e =>* ref(phi)", phi="t", e="e"))
    assert classify_neutral(read("e @[bot, bot] ref(bot)", e="e"))
    assert classify_neutral(read("e^- d", e="e", d="p"))
    assert not classify_neutral(read("ref(bot) =>* ref(bot)"))


def test_canonical_and_neutral_are_exclusive():
    rng = random.Random(11)
    g = RawGen(rng)
    for _ in range(10_000):
        e = g.any(rng.randint(1, 12))
        assert not (is_canonical(e) and classify_neutral(e)), e


@settings(max_examples=300, deadline=None)
@given(named_terms())
def test_canonical_propositions_are_closed(t):
    m = build(t)
    if is_canonical_prop(m):
        assert not any(free_vars(m))


def test_size_and_sorts():
    m = read(r"(\x:Omega. x) bot")
    assert size(m) == 5  # app, lam, Omega, var, bot
    assert sort_of(m) is Sort.TERM
    assert sort_of(Arrow(OMEGA, OMEGA)) is Sort.TYPE
    assert sort_of(read("ref(bot)")) is Sort.PATH
    with pytest.raises(TypeError):
        sort_of(42)


def test_binders_produce_locally_closed_expressions():
    m = lam("x", OMEGA, App(Var("x"), Var("z")))
    assert is_locally_closed(m)
    assert not is_locally_closed(m.body)
    assert free_vars(m).terms == {"z"}


def test_trilam_rejects_equal_endpoints():
    with pytest.raises(ValueError):
        trilam("e", "x", "x", OMEGA, EVar("e"))
