import random

import pytest

from phoml import _pykernel as py
from phoml import kernel
from phoml.harness.gen import RawGen
from phoml.harness.properties import positions
from phoml.syntax import BOT, EVar, Lam, PLam, PVar, Ref, TriLam, Var

ck = pytest.importorskip("phoml._ckernel", reason="compiled kernel not built")


def corpus(n=2000, seed=3):
    rng = random.Random(seed)
    g = RawGen(rng)
    return [g.any(rng.randint(1, 14)) for _ in range(n)]


def bodies(e):
    for _, sub in positions(e):
        if type(sub) in (Lam, PLam, TriLam):
            yield sub.body


def test_selected_backend_is_reported():
    assert kernel.BACKEND in ("cython", "python")
    assert ck.BACKEND == "cython" and py.BACKEND == "python"


def test_backends_agree_on_queries():
    for e in corpus():
        assert ck.size(e) == py.size(e)
        assert ck.free_names(e) == py.free_names(e)
        assert ck.locally_closed(e) == py.locally_closed(e)


def test_backends_agree_on_opening_and_closing():
    imgs = ((Var("u"), BOT), (PVar("d"),), (EVar("k"), Ref(BOT)))
    for e in corpus(seed=5):
        for body in bodies(e):
            assert ck.locally_closed(body) == py.locally_closed(body)
            opened = ck.instantiate(body, *imgs)
            assert opened == py.instantiate(body, *imgs)
            back = (("u",), ("d",), ("k",))
            assert ck.abstract(opened, *back) == py.abstract(opened, *back)


def test_backends_agree_on_substitution():
    tmap = {"x": Var("z"), "y": BOT}
    pmap = {"d": PVar("d2")}
    emap = {"k": Ref(Var("z"))}
    rng = random.Random(9)
    g = RawGen(rng)
    for _ in range(2000):
        e = g.any(rng.randint(1, 14))
        opened = e
        if type(e) in (Lam, PLam, TriLam):
            opened = py.instantiate(e.body, (Var("x"), Var("y")), (PVar("d"),), (EVar("k"),))
        assert ck.substitute(opened, tmap, pmap, emap) == py.substitute(opened, tmap, pmap, emap)


def test_untouched_subtrees_are_shared():
    e = corpus(1, seed=1)[0]
    assert ck.substitute(e, {"nowhere": BOT}, {}, {}) is e
    assert ck.instantiate(e, (), (), ()) is e


def test_size_rejects_foreign_objects():
    with pytest.raises(TypeError):
        ck.size(42)
    with pytest.raises(TypeError):
        py.size(42)
