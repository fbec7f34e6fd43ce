"""Re-establishing an architectural style by wpre-gated production search."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .contracts import AssertedProduction
from .graph import EdgeType, Graph, Match, apply_production, find_matches
from .logic import Formula, free_vars, satisfies
from .wp import wpre


@dataclass(frozen=True)
class Style:
    alphabet: frozenset[EdgeType]
    productions: tuple[AssertedProduction, ...]
    invariant: Formula
    name: str = "style"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "productions", tuple(self.productions))
        if free_vars(self.invariant):
            raise ValueError(f"style {self.name}: invariant must be closed")

    def guard(self, index: int) -> Formula:
        """Weakest pre-condition gating production ``index`` (memoized)."""
        cache = self.__dict__.setdefault("_guards", {})
        if index not in cache:
            ap = self.productions[index]
            cache[index] = wpre(ap.production, ap.post, ap.h, ap.hbar)
        return cache[index]


@dataclass(frozen=True)
class Plan:
    steps: tuple[tuple[int, Match], ...]
    final: Graph
    trace: tuple[Graph, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.steps)


def check_style(g: Graph, s: Style) -> bool:
    return satisfies(g, {}, s.invariant)


def applicable_productions(g: Graph, s: Style) -> list[tuple[int, Match]]:
    """Matches of abstract-typed LHS edges whose production guard holds on ``g``."""
    out = []
    for i, ap in enumerate(s.productions):
        if not ap.production.lhs_type.abstract:
            continue
        matches = find_matches(g, ap.production)
        if matches and satisfies(g, {}, s.guard(i)):
            out.extend((i, m) for m in matches)
    return out


def replay(g: Graph, s: Style, steps: Sequence[tuple[int, Match]], seed: int = 1) -> list[Graph]:
    graphs = [g]
    for i, m in steps:
        graphs.append(apply_production(graphs[-1], m, s.productions[i].production, seed))
    return graphs


def recover(g: Graph, s: Style, max_depth: int, seed: int = 1) -> Plan | None:
    """Shortest wpre-gated plan reaching a graph that satisfies the style
    invariant; among shortest plans the lexicographically least wins.
    Returns None when no plan of length ``<= max_depth`` exists."""
    if check_style(g, s):
        return Plan((), g, (g,))
    frontier = deque([((), g, (g,))])
    seen = {g}
    while frontier:
        steps, graph, trace = frontier.popleft()
        if len(steps) >= max_depth:
            continue
        for i, m in applicable_productions(graph, s):
            nxt = apply_production(graph, m, s.productions[i].production, seed)
            plan_steps = steps + ((i, m),)
            if check_style(nxt, s):
                return Plan(plan_steps, nxt, trace + (nxt,))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((plan_steps, nxt, trace + (nxt,)))
    return None
