import random

import pytest

from conftest import read
from phoml.harness import consistency
from phoml.harness.consistency import bounded_consistency_search, closed_proofs
from phoml.harness.gen import DEFAULT_WEIGHTS, GenConfig, RawGen, gen_raw, gen_typed
from phoml.harness.properties import (
    PROFILES, REGISTRY, Case, Failure, PropertyVerdict, positions, register, run_case,
    run_property, shrink, typed_case, typed_ok,
)
from phoml.subst import canonical_inhabitant
from phoml.syntax import (
    App, BOT, Equation, OMEGA, PApp, PVar, PathApp, Ref, Sort, is_locally_closed, size,
)
from phoml.typecheck import EMPTY, Context, ProofDecl, check, check_context, infer

# closed proofs of exactly n nodes, alpha-classes, from an independent counting recurrence
PROOF_COUNTS = {1: 0, 2: 0, 3: 3, 4: 2, 5: 23, 6: 12, 7: 233, 8: 146, 9: 2883, 10: 2598}


def test_gen_examples():
    for seed in range(20):
        e, a = gen_typed(Sort.TERM, EMPTY, GenConfig(seed=seed, size=1))
        assert e == (BOT if a == OMEGA else canonical_inhabitant(a))
        d, phi = gen_typed(Sort.PROOF, Context([ProofDecl("p", BOT)]), GenConfig(seed=seed, size=1))
        assert (d, phi) == (PVar("p"), BOT)


def test_generated_ref_paths_type_as_claimed():
    seen = 0
    for seed in range(300):
        p, eq = gen_typed(Sort.PATH, EMPTY, GenConfig(seed=seed, size=6))
        if type(p) is Ref:
            seen += 1
            assert eq == Equation(p.term, eq.type, p.term)
            assert infer(EMPTY, p) == eq
    assert seen > 10


def test_gen_config_validation():
    with pytest.raises(ValueError):
        GenConfig(size=0)
    with pytest.raises(ValueError):
        GenConfig(weights={k: 0.0 for k in DEFAULT_WEIGHTS})
    with pytest.raises(ValueError):
        GenConfig(weights={"leaf": -1.0})
    with pytest.raises(ValueError):
        GenConfig(context_depth=-1)


def test_reweighted_generation_stays_sound():
    weights = {"redex": 0.0, "pathsub": 0.0, "transport": 0.0}
    for seed in range(100):
        for sort in (Sort.TERM, Sort.PROOF, Sort.PATH):
            e, cls = gen_typed(sort, EMPTY, GenConfig(seed=seed, size=20, weights=weights))
            check(EMPTY, e, cls)


def test_generator_soundness():
    for seed in range(3000):
        case = typed_case(seed)
        check_context(case.ctx)
        check(case.ctx, case.expr, case.cls)


def test_generation_is_deterministic():
    assert typed_case(77) == typed_case(77)
    assert gen_raw(random.Random(5)) == gen_raw(random.Random(5))


def test_raw_corpus_is_bounded_and_closed():
    rng = random.Random(3)
    for _ in range(3000):
        e = gen_raw(rng, 12)
        assert size(e) <= 12 and is_locally_closed(e)


def test_raw_generator_builds_every_sort():
    g = RawGen(random.Random(1))
    assert {type(g.path(6)) for _ in range(200)} >= {Ref, PathApp}


# -- verdicts and shrinking ------------------------------------------------------

def test_verdict_lines():
    v = run_property("diamond", 20)
    assert v.ok and v.lines() == ["PROP diamond cases=20 failures=0"]
    f = Failure(12, "broken", Case(BOT))
    bad = PropertyVerdict("x", 3, [f])
    assert not bad.ok
    assert bad.lines() == ["PROP x cases=3 failures=1", "FAIL seed=12 broken :: bot"]


def test_unknown_property():
    with pytest.raises(KeyError):
        run_property("no-such-property", 1)


def test_profiles():
    assert PROFILES == {"ci": 1000, "full": 10000}


@pytest.fixture
def failing_property():
    def has_application(case):
        for _, sub in positions(case.expr):
            if type(sub) in (App, PApp, PathApp):
                return "contains an application"
        return None

    register("test-has-application", typed_case, has_application)
    yield REGISTRY["test-has-application"]
    del REGISTRY["test-has-application"]


def test_shrinking_keeps_failure_and_typing(failing_property):
    v = run_property("test-has-application", 60)
    assert v.failures
    shrunk_some = False
    for f in v.failures:
        original, detail = run_case("test-has-application", f.seed)
        assert detail is not None
        small = f.counterexample
        assert failing_property.check(small) is not None
        assert typed_ok(small.ctx, small.expr, small.cls)
        assert size(small.expr) <= size(original.expr)
        shrunk_some |= size(small.expr) < size(original.expr)
    assert shrunk_some


def test_failures_replay_from_their_seed(failing_property):
    v = run_property("test-has-application", 30, seed=1000, minimize=False)
    for f in v.failures:
        case, detail = run_case("test-has-application", f.seed)
        assert case == f.counterexample and detail == f.detail


def test_shrink_respects_budget(failing_property):
    case = Case(read(r"(\p:bot. p) q", q="p"), Context([ProofDecl("q", BOT)]), BOT)
    same, _ = shrink(failing_property, case, "x", budget=0)
    assert same == case


def test_registered_properties():
    assert {"subject-reduction", "confluence-step", "diamond", "subst-pathsubst-i", "subst-pathsubst-ii",
            "resp-pathsub", "typed-pathsub", "weakening", "canonicity-closed",
            "weak-normalization"} <= set(REGISTRY)


@pytest.mark.parametrize("name", sorted(
    ["subject-reduction", "confluence-step", "diamond", "subst-pathsubst-i", "subst-pathsubst-ii",
     "resp-pathsub", "typed-pathsub", "weakening", "canonicity-closed", "weak-normalization",
     "generator-soundness", "well-typed-subst", "step-in-parallel", "roundtrip"]))
def test_property_ci_slice(name):
    v = run_property(name, 300)
    assert v.ok, "\n".join(v.lines())


# -- bounded consistency ---------------------------------------------------------

def test_consistency_counts_match_the_recurrence():
    for n, count in PROOF_COUNTS.items():
        assert sum(1 for _ in closed_proofs(n)) == count, n


def test_smallest_proofs():
    assert set(closed_proofs(3)) == {read(r"\p:bot. p"), read("ref(bot)^+"), read("ref(bot)^-")}


@pytest.mark.parametrize("n", [1, 3, 8])
def test_no_closed_proof_of_bot(n):
    report = bounded_consistency_search(n)
    assert report.hits == []
    assert report.lines()[-1] == f"CONSISTENCY max-size={n} hits=0"
    assert report.enumerated[n] == PROOF_COUNTS[n]


def test_consistency_bounds():
    with pytest.raises(ValueError):
        bounded_consistency_search(0)
    with pytest.raises(ValueError):
        bounded_consistency_search(consistency.MAX_SIZE + 1)
