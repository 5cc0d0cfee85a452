import random

import pytest

from conftest import read
from phoml.harness.gen import RawGen
from phoml.subst import (
    PathSubstitution, Substitution, canonical_inhabitant, compose, path_subst, subst, trivial_loop,
)
from phoml.syntax import (
    App, Arrow, BOT, Bot, EVar, Imp, ImpStar, Lam, OMEGA, PathApp, Ref, Var,
    free_vars, fresh, open_lam, trilam,
)
from phoml.typecheck import EMPTY, infer_type


def test_subst_examples():
    assert subst(read(r"(\x:Omega. x) y", y="t"), {"y": BOT}) == read(r"(\x:Omega. x) bot")
    assert subst(read("ref(y')", **{"y'": "t"}), {"y'": read(r"\x:Omega. x")}) == read(r"ref(\x:Omega. x)")


def test_subst_avoids_capture():
    out = subst(read(r"\x:Omega. y", y="t"), {"y": Var("x")})
    assert out == read(r"\z:Omega. x", x="t")
    assert out != read(r"\x:Omega. x")


def test_subst_is_simultaneous():
    m = read("x => y", x="t", y="t")
    assert subst(m, {"x": Var("y"), "y": Var("x")}) == read("y => x", x="t", y="t")


def test_substitution_splits_by_sort():
    s = Substitution.of({"x": BOT, "p": read(r"\q:bot. q"), "e": Ref(BOT)})
    assert set(s.terms) == {"x"} and set(s.proofs) == {"p"} and set(s.paths) == {"e"}
    with pytest.raises(TypeError):
        Substitution.of({"x": OMEGA})


def test_substitution_lemma_on_random_terms():
    rng = random.Random(21)
    g = RawGen(rng)
    for _ in range(3000):
        t = g.any(rng.randint(1, 12))
        s1 = Substitution({"x": g.term(rng.randint(1, 5))}, {"p": g.proof(3)}, {})
        s2 = Substitution({"y": g.term(rng.randint(1, 5)), "x": BOT}, {}, {"e": g.path(3)})
        assert subst(subst(t, s1), s2) == subst(t, compose(s1, s2))


# -- path substitution ---------------------------------------------------------

def oracle(t, tau):
    """The six defining clauses, written with named binders."""
    if type(t) is Var:
        return tau[t.name][0] if t.name in tau else Ref(t)
    if type(t) is Bot:
        return Ref(BOT)
    if type(t) is Imp:
        return ImpStar(oracle(t.lhs, tau), oracle(t.rhs, tau))
    if type(t) is App:
        left = {x: l for x, (_, l, _) in tau.items()}
        right = {x: r for x, (_, _, r) in tau.items()}
        return PathApp(oracle(t.fun, tau), subst(t.arg, left), subst(t.arg, right), oracle(t.arg, tau))
    assert type(t) is Lam
    x, a, a2, e = fresh("x"), fresh("a"), fresh("a"), fresh("e")
    inner = dict(tau)
    inner[x] = (EVar(e), Var(a), Var(a2))
    return trilam(e, a, a2, t.ann, oracle(open_lam(t, x), inner))


def test_path_subst_matches_clause_oracle():
    rng = random.Random(4)
    g = RawGen(rng)
    for _ in range(3000):
        m = g.term(rng.randint(1, 14))
        tau = {"x": (g.path(4), g.term(3), g.term(3))}
        assert path_subst(m, tau) == oracle(m, tau)
        assert trivial_loop(m) == oracle(m, {})


def test_path_subst_examples():
    q, n, n2 = EVar("q"), Var("n"), Var("n2")
    assert path_subst(Var("x"), {"x": (q, n, n2)}) == q
    assert trivial_loop(read(r"\x:Omega. x")) == read("lll e : a =[Omega] a' . e")
    assert path_subst(Var("y'"), {"y": (Ref(BOT), BOT, BOT)}) == Ref(Var("y'"))
    fx = read("f x", f="t", x="t")
    assert path_subst(fx, {"x": (q, n, n2)}) == read("ref(f) @[n, n2] q", f="t", n="t", n2="t", q="e")


def test_path_substitution_record():
    tau = PathSubstitution().extend("x", EVar("e"), BOT, Var("z"))
    assert tau.left() == {"x": BOT} and tau.right() == {"x": Var("z")}
    assert tau.paths() == {"x": EVar("e")}


def test_path_subst_wants_a_term():
    with pytest.raises(TypeError):
        path_subst(Ref(BOT), {})


def test_trivial_loop_examples():
    assert trivial_loop(BOT) == Ref(BOT)
    assert trivial_loop(Var("x")) == Ref(Var("x"))
    assert trivial_loop(read(r"\x:Omega -> Omega. x")) == read("lll e : a =[Omega -> Omega] a' . e")
    # distinct from ref in general
    assert trivial_loop(read(r"\x:Omega. x")) != read(r"ref(\x:Omega. x)")


def test_path_subst_endpoints_are_the_substitution_instances():
    rng = random.Random(8)
    g = RawGen(rng)
    for _ in range(500):
        m = g.term(rng.randint(1, 10))
        p = path_subst(m, {"x": (EVar("e"), BOT, Var("z"))})
        assert "x" not in free_vars(p).terms


@pytest.mark.parametrize("ty, expected", [
    (OMEGA, "bot"),
    (Arrow(OMEGA, OMEGA), r"\x:Omega. bot"),
    (Arrow(Arrow(OMEGA, OMEGA), OMEGA), r"\f:Omega -> Omega. bot"),
    (Arrow(OMEGA, Arrow(OMEGA, OMEGA)), r"\x:Omega. \y:Omega. bot"),
])
def test_canonical_inhabitant(ty, expected):
    c = canonical_inhabitant(ty)
    assert c == read(expected)
    assert infer_type(EMPTY, c) == ty
    assert not any(free_vars(c))


def test_canonical_inhabitant_types_at_random_types():
    rng = random.Random(2)

    def rand_type(d):
        if d == 0 or rng.random() < 0.4:
            return OMEGA
        return Arrow(rand_type(d - 1), rand_type(d - 1))

    for _ in range(300):
        a = rand_type(4)
        assert infer_type(EMPTY, canonical_inhabitant(a)) == a
