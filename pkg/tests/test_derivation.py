import dataclasses

import pytest

from conftest import read
from phoml.derivation import InvalidDerivation, reconstruct, rules_used, validate
from phoml.harness.properties import typed_case
from phoml.syntax import BOT, Equation, Imp, OMEGA, Var
from phoml.typecheck import EMPTY, Context, ProofDecl
from test_typecheck import TRANSPORT_CTX

ALL_RULES = {
    "ctx-empty", "ctx-term", "ctx-proof", "ctx-path", "var-term", "var-proof", "var-path", "bot",
    "imp", "lam-term", "app-term", "lam-proof", "app-proof", "conv-proof", "ref", "impstar",
    "univ", "plus", "minus", "trilam", "app-path", "conv-path",
}


def test_transport_derivation():
    d = read("(ref(f) @[x, y] univ(x, y, p, q))^+", f="t", x="t", y="t", p="p", q="p")
    tree = reconstruct(TRANSPORT_CTX, d)
    validate(tree)
    assert tree.rule == "plus"
    assert tree.classifier == read("f x => f y", f="t", x="t", y="t")
    assert {"app-path", "univ", "ref", "var-proof"} <= rules_used(tree)


def test_checking_mode_adds_conversion():
    tree = reconstruct(EMPTY, read(r"\p:bot. p"), read(r"(\x:Omega. x) bot => bot"))
    validate(tree)
    assert tree.rule == "conv-proof"


def test_generated_derivations_are_valid_and_cover_every_rule():
    seen = set()
    for seed in range(1500):
        case = typed_case(seed)
        tree = reconstruct(case.ctx, case.expr, case.cls)
        validate(tree)
        seen |= rules_used(tree)
    assert seen == ALL_RULES


def _swap(tree, rule, **change):
    """Rebuild ``tree`` with the first node using ``rule`` altered."""
    done = []

    def go(n):
        if not done and n.rule == rule:
            done.append(n)
            return dataclasses.replace(n, **change)
        return dataclasses.replace(n, premises=tuple(go(p) for p in n.premises))
    out = go(tree)
    assert done, f"no {rule} node"
    return out


def test_tampered_conclusion_is_rejected():
    tree = reconstruct(EMPTY, read(r"\p:bot. p"))
    validate(tree)
    with pytest.raises(InvalidDerivation):
        validate(dataclasses.replace(tree, classifier=BOT))


def test_tampered_premise_is_rejected():
    ctx = Context([ProofDecl("p", BOT)])
    tree = reconstruct(ctx, read(r"(\q:bot. q) p", p="p"))
    with pytest.raises(InvalidDerivation):
        validate(_swap(tree, "var-proof", classifier=Imp(BOT, BOT)))


def test_bad_conversion_is_rejected():
    tree = reconstruct(EMPTY, read("ref(bot)"), Equation(read(r"(\x:Omega. x) bot"), OMEGA, BOT))
    validate(tree)
    assert tree.rule == "conv-path"
    with pytest.raises(InvalidDerivation):
        validate(dataclasses.replace(tree, classifier=Equation(Var("z"), OMEGA, BOT)))


def test_wrong_rule_name_is_rejected():
    tree = reconstruct(EMPTY, BOT)
    with pytest.raises(InvalidDerivation):
        validate(dataclasses.replace(tree, rule="imp"))
    with pytest.raises(InvalidDerivation):
        validate(dataclasses.replace(tree, rule="no-such-rule"))
