import random

import pytest

from conftest import read
from phoml.harness.gen import gen_raw
from phoml.parallel import (
    Overflow, Verdict, check_diamond, joinable, parallel_reducts, reachable, relate_relations,
)
from phoml.reduction import step_all
from phoml.syntax import BOT


def test_parallel_reducts_examples():
    assert parallel_reducts(BOT) == ({BOT}, False)
    beta = read(r"(\x:Omega. x) bot")
    assert parallel_reducts(beta) == ({beta, BOT}, False)
    e = read("ref(phi) =>* ref(psi)", phi="t", psi="t")
    assert parallel_reducts(e)[0] == {e, read("ref(phi => psi)", phi="t", psi="t")}


def test_parallel_step_contracts_disjoint_redexes_at_once():
    e = read(r"(\x:Omega. x) bot => (\x:Omega. x) bot")
    reducts, _ = parallel_reducts(e)
    assert read("bot => bot") in reducts
    assert read("bot => bot") not in step_all(e)


def test_overflow_flag():
    e = read(r"(\x:Omega. x) bot => (\x:Omega. x) bot")
    assert parallel_reducts(e, cap=2) == (frozenset(), True)
    with pytest.raises(ValueError):
        parallel_reducts(e, cap=0)
    with pytest.raises(Overflow):
        check_diamond(e, cap=2)


def test_check_diamond_examples():
    assert check_diamond(BOT) == []
    e = read("ref(bot => bot) =>* ref(bot)")
    reports = check_diamond(e)
    assert all(r.verdict is Verdict.JOINED for r in reports)
    # ref admits no reduction under it unless applied, so the worked case
    # only has the top contraction to join with
    e = read(r"ref((\x:Omega. x) bot) =>* ref(bot)")
    (r,) = check_diamond(e)
    assert r.join == read(r"ref((\x:Omega. x) bot => bot)")
    assert r.join in parallel_reducts(r.branch1)[0] and r.join in parallel_reducts(r.branch2)[0]


def test_diamond_joins_two_nontrivial_branches():
    e = read(r"((\x:Omega. x) bot => (\x:Omega. x) bot) => bot")
    reports = check_diamond(e)
    assert len(reports) == 6 and all(r.verdict is Verdict.JOINED for r in reports)
    for r in reports:
        assert r.join in parallel_reducts(r.branch1)[0] & parallel_reducts(r.branch2)[0]


def test_relate_relations_examples():
    assert relate_relations(read(r"(\x:Omega. x) bot")) is Verdict.HOLDS
    assert relate_relations(read("ref(phi)^+", phi="t")) is Verdict.HOLDS
    assert read(r"\p:phi. p", phi="t") in parallel_reducts(read("ref(phi)^+", phi="t"))[0]


def test_reflexivity_and_inclusion_on_random_expressions():
    rng = random.Random(12)
    for _ in range(2000):
        e = gen_raw(rng)
        reducts, over = parallel_reducts(e)
        assert not over
        assert e in reducts
        assert step_all(e) <= reducts


def test_diamond_agrees_with_bfs_over_parallel_graph():
    rng = random.Random(13)
    relation = lambda h: parallel_reducts(h)[0]
    for _ in range(300):
        e = gen_raw(rng)
        for r in check_diamond(e):
            assert r.verdict is Verdict.JOINED
            assert joinable(r.branch1, r.branch2, relation, depth=1)


def test_reachable_and_joinable():
    e = read(r"(\x:Omega. x) ((\x:Omega. x) bot)")
    assert reachable(e, step_all, 0) == {e}
    assert BOT in reachable(e, step_all, 2)
    assert joinable(e, read(r"(\x:Omega. x) bot"))
    assert not joinable(BOT, read("bot => bot"))
    with pytest.raises(Overflow):
        reachable(e, step_all, 5, cap=1)
