import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import read
from phoml.cli import bundled_dir
from phoml.frontend.parser import RESERVED, ParseError, parse_classifier, parse_expr, tokenize
from phoml.frontend.printer import free_sorts, print_expr, print_type
from phoml.frontend.script import (
    Assume, CheckDirective, Def, NormalizeDirective, ScriptError, parse, run,
)
from phoml.harness.gen import gen_raw
from phoml.harness.properties import typed_case
from phoml.syntax import (
    App, Arrow, BOT, Equation, Imp, ImpStar, OMEGA, PathApp, Ref, Sort, TriLam, Var, sort_of,
)


def test_parse_examples():
    assert read("ref(bot) =>* ref(bot)") == ImpStar(Ref(BOT), Ref(BOT))
    t = read("lll e : x =[Omega] y . e")
    assert type(t) is TriLam and t.ann == OMEGA
    h, f, i = Var("H"), Var("F"), Var("I")
    assert read("ref(H) @[F, I] Q", H="t", F="t", I="t", Q="e") == PathApp(Ref(h), f, i, read("Q", Q="e"))


def test_associativity():
    x, y, z = Var("x"), Var("y"), Var("z")
    assert read("x => y => z", x="t", y="t", z="t") == Imp(x, Imp(y, z))
    assert read("x y z", x="t", y="t", z="t") == App(App(x, y), z)
    assert read("x y => z", x="t", y="t", z="t") == Imp(App(x, y), z)
    assert parse_classifier("Omega -> Omega -> Omega") == Arrow(OMEGA, Arrow(OMEGA, OMEGA))


def test_print_examples():
    assert print_expr(Imp(BOT, Imp(BOT, BOT))) == "bot => bot => bot"
    assert print_expr(App(App(Var("x"), Var("y")), Var("z"))) == "x y z"
    assert print_expr(Imp(Imp(BOT, BOT), BOT)) == "(bot => bot) => bot"
    assert print_type(Arrow(Arrow(OMEGA, OMEGA), OMEGA)) == "(Omega -> Omega) -> Omega"
    nf = read(r"\m:bot => bot. \n:bot => bot. ref(bot => bot)^- m")
    assert print_expr(nf) == r"\m:bot => bot. \n:bot => bot. ref(bot => bot)^- m"


def test_printer_avoids_capture_of_free_names():
    m = read(r"\x:Omega. x", x="t")
    m = App(m, Var("x"))
    text = print_expr(read(r"\y:Omega. x", x="t"))
    assert read(text, x="t") == read(r"\y:Omega. x", x="t")
    assert read(print_expr(m), x="t") == m


def test_classifiers():
    eq = parse_classifier("x =[Omega] bot", {"x": Sort.TERM})
    assert eq == Equation(Var("x"), OMEGA, BOT)
    assert print_expr(eq) == "x =[Omega] bot"


@pytest.mark.parametrize("text, where", [
    ("ref(bot", "1:8"),
    (r"\bot:Omega. bot", "1:2"),
    ("lll e : x =[Omega] x . e", "1:20"),
    ("x", "1:1"),
    ("bot =>", "1:7"),
    ("univ(bot, bot)", "1:14"),
    (r"\p:bot. p bot", None),
])
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    if where:
        assert str(info.value).startswith(f"<input>:{where}:")


@pytest.mark.parametrize("word", sorted(RESERVED))
def test_reserved_words_are_not_identifiers(word):
    with pytest.raises(ParseError):
        parse_expr(rf"\{word}:Omega. bot")
    with pytest.raises(ParseError):
        parse(f"assume {word} : Omega\n")


def test_comments_and_spans():
    toks = tokenize("bot -- a comment\n  => bot", "f")
    assert [t.text for t in toks if t.kind != "eof"] == ["bot", "=>", "bot"]
    assert (toks[1].span.line, toks[1].span.column) == (2, 3)


def test_script_structure():
    script = parse((bundled_dir() / "sec3_1.phoml").read_text(), "sec3_1.phoml")
    kinds = [type(i) for i in script.items]
    assert kinds.count(Assume) == 5 and kinds.count(Def) == 2 and kinds.count(CheckDirective) == 2
    assert script.definition("delta").sort is Sort.PROOF
    assert script.definition("nothing") is None


def test_script_duplicate_and_sort_errors():
    with pytest.raises(ParseError, match="already declared"):
        parse("assume x : Omega\nassume x : Omega\n")
    with pytest.raises(ParseError, match="declared a proof"):
        parse("def d : proof := bot\n")


def test_script_type_error_points_at_source():
    src = "assume x : Omega\ndef d : proof := \\p:x. p\ncheck d : x => bot\n"
    with pytest.raises(ScriptError) as info:
        list(run(parse(src, "f.phoml")))
    assert info.value.index == 2
    assert info.value.render().startswith("ERROR NotConvertible at f.phoml:3:7")


def test_definitions_are_inlined():
    script = parse("def t : term := bot => bot\nnormalize t\n")
    (directive,) = [i for i in script.items if isinstance(i, NormalizeDirective)]
    assert directive.expr == read("bot => bot")


def test_roundtrip_on_typed_and_raw_expressions():
    rng = random.Random(0)
    for seed in range(1500):
        e = typed_case(seed).expr if seed % 2 else gen_raw(rng)
        text = print_expr(e)
        back = parse_expr(text, free_sorts(e))
        assert back.expr == e, text
        assert back.sort is sort_of(e)
        assert print_expr(back.expr) == text


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31))
def test_roundtrip_hypothesis(seed):
    e = gen_raw(random.Random(seed))
    assert parse_expr(print_expr(e), free_sorts(e)).expr == e
