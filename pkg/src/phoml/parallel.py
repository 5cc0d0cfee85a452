"""Parallel one-step reduction and empirical diamond / inclusion checks."""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .reduction import contract, step_all
from .syntax import (
    App, Imp, ImpStar, Minus, PApp, PathApp, Plus, Ref, size,
)

DEFAULT_CAP = 10_000


class Overflow(Exception):
    """The reduct set grew past the cap."""


class Verdict(enum.Enum):
    JOINED = "Joined"
    COUNTEREXAMPLE = "CounterexampleCandidate"
    HOLDS = "Holds"


@dataclass(frozen=True)
class DiamondReport:
    source: object
    branch1: object
    branch2: object
    join: Optional[object]
    verdict: Verdict


class _Enumerator:
    def __init__(self, cap):
        self.cap = cap
        self.memo = {}

    def __call__(self, e) -> frozenset:
        hit = self.memo.get(e)
        if hit is not None:
            return hit
        out = {e}
        top = contract(e)
        if top is not None:
            out.add(top[1])
        cls = type(e)
        if cls is App:
            out.update(App(f, e.arg) for f in self(e.fun))
        elif cls is Imp:
            out.update(Imp(l, r) for l, r in itertools.product(self(e.lhs), self(e.rhs)))
        elif cls is PApp:
            out.update(PApp(f, e.arg) for f in self(e.fun))
        elif cls is Plus:
            out.update(Plus(p) for p in self(e.path))
        elif cls is Minus:
            out.update(Minus(p) for p in self(e.path))
        elif cls is PathApp:
            out.update(PathApp(f, e.left, e.right, e.arg) for f in self(e.fun))
            if type(e.fun) is Ref:
                out.update(PathApp(Ref(m), e.left, e.right, e.arg) for m in self(e.fun.term))
        elif cls is ImpStar:
            out.update(ImpStar(l, r) for l, r in itertools.product(self(e.lhs), self(e.rhs)))
        if len(out) > self.cap:
            raise Overflow(f"more than {self.cap} parallel reducts")
        result = frozenset(out)
        self.memo[e] = result
        return result


def parallel_reducts(e, cap: int = DEFAULT_CAP) -> tuple[frozenset, bool]:
    """All ``F`` with ``e |> F``; the flag is True when the cap was hit."""
    if cap < 1:
        raise ValueError("cap must be positive")
    try:
        return _Enumerator(cap)(e), False
    except Overflow:
        return frozenset(), True


def _pick(candidates):
    return min(candidates, key=lambda h: (size(h), repr(h)))


def check_diamond(e, cap: int = DEFAULT_CAP) -> list[DiamondReport]:
    enum_ = _Enumerator(cap)
    reducts = sorted(enum_(e), key=lambda h: (size(h), repr(h)))
    reports = []
    for f, g in itertools.combinations(reducts, 2):
        common = enum_(f) & enum_(g)
        if common:
            reports.append(DiamondReport(e, f, g, _pick(common), Verdict.JOINED))
        else:
            reports.append(DiamondReport(e, f, g, None, Verdict.COUNTEREXAMPLE))
    return reports


def reachable(e, relation, depth: int, cap: int = DEFAULT_CAP) -> set:
    """Everything reachable from ``e`` in at most ``depth`` relation steps."""
    seen = {e}
    frontier = deque([(e, 0)])
    while frontier:
        x, d = frontier.popleft()
        if d == depth:
            continue
        for y in relation(x):
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise Overflow(f"more than {cap} nodes reachable")
                frontier.append((y, d + 1))
    return seen


def joinable(f, g, relation=step_all, depth: int = 8, cap: int = DEFAULT_CAP) -> bool:
    """Bounded breadth-first search for a common reduct."""
    if f == g:
        return True
    return bool(reachable(f, relation, depth, cap) & reachable(g, relation, depth, cap))


def relate_relations(e, depth: int = 8, cap: int = DEFAULT_CAP) -> Verdict:
    """Check that one-step reduction sits inside |> and |> inside ->>."""
    par, overflow = parallel_reducts(e, cap)
    if overflow:
        raise Overflow(f"more than {cap} parallel reducts")
    if not step_all(e) <= par:
        return Verdict.COUNTEREXAMPLE
    reach = reachable(e, step_all, depth, cap)
    if not par <= reach:
        return Verdict.COUNTEREXAMPLE
    return Verdict.HOLDS
