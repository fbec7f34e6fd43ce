"""Asserted productions and bounded (small-scope) checks of their validity."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import EdgeType, Graph, Match, Production, apply_production, find_matches
from .logic import Formula, edge_types, enumerate_graphs, free_vars, satisfies, wellformedness_errors
from .wp import Mode, canonical_hbar, wpre


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class Counterexample:
    graph: Graph
    match: Match | None
    result: Graph | None


@dataclass(frozen=True)
class Verdict:
    status: Status
    graphs_checked: int
    counterexample: Counterexample | None = None

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS


@dataclass(frozen=True)
class Bounds:
    max_nodes: int = 3
    max_edges: int = 3


@dataclass(frozen=True, eq=True)
class AssertedProduction:
    """``{pre} production {post}``.

    ``h`` maps free post-condition variables to RHS nodes, ``hbar`` maps
    each interface variable to a 0-based LHS position. ``h_prime`` is kept
    for the pre-condition side but not interpreted.
    """

    pre: Formula
    production: Production
    post: Formula
    h: Mapping[str, str] = field(default_factory=dict)
    hbar: Mapping[str, int] | None = None
    h_prime: Mapping[str, str] = field(default_factory=dict)
    name: str = "ap"

    def __post_init__(self):
        if self.hbar is None:
            object.__setattr__(self, "hbar", canonical_hbar(self.production))

    @property
    def interface_vars(self) -> tuple[str, ...]:
        return tuple(sorted(self.hbar, key=self.hbar.get))

    def problems(self) -> list[str]:
        out = [f"pre: {m}" for m in wellformedness_errors(self.pre)]
        out += [f"post: {m}" for m in wellformedness_errors(self.post)]
        if free_vars(self.pre):
            out.append("pre-condition must be closed")
        if free_vars(self.post):
            out.append("post-condition must be closed")
        if sorted(self.hbar.values()) != list(range(self.production.lhs_type.arity)):
            out.append("hbar must be a bijection onto the LHS positions")
        if len(set(self.h.values())) != len(self.h):
            out.append("h must be injective")
        return out


def default_alphabet(p: Production, *formulas: Formula) -> set[EdgeType]:
    types = {p.lhs_type} | p.rhs.edge_types()
    for f in formulas:
        types |= edge_types(f)
    return types


def postcondition_holds_for_match(p: Production, post: Formula, g: Graph, m: Match,
                                  seed: int = 1) -> bool:
    return satisfies(apply_production(g, m, p, seed), {}, post)


def semantic_precondition_oracle(p: Production, post: Formula, g: Graph) -> bool:
    """True iff every application of ``p`` to ``g`` yields a graph
    satisfying ``post`` (vacuously true without matches)."""
    return all(postcondition_holds_for_match(p, post, g, m) for m in find_matches(g, p))


def _first_failing_match(p, post, g):
    for m in find_matches(g, p):
        after = apply_production(g, m, p)
        if not satisfies(after, {}, post):
            return Counterexample(g, m, after)
    return None


def check_triple(pre: Formula, p: Production, post: Formula, bounds: Bounds = Bounds(),
                 alphabet: Iterable[EdgeType] | None = None) -> Verdict:
    """Bounded validity of ``{pre} p {post}``; the reported counterexample
    is the first one in enumeration order."""
    types = set(alphabet) if alphabet is not None else default_alphabet(p, pre, post)
    n = 0
    for g in enumerate_graphs(types, bounds.max_nodes, bounds.max_edges):
        n += 1
        if not g.has_type(p.lhs_type) or not satisfies(g, {}, pre):
            continue
        cex = _first_failing_match(p, post, g)
        if cex is not None:
            return Verdict(Status.FAILS, n, cex)
    return Verdict(Status.HOLDS, n)


def check_soundness(p: Production, post: Formula, h: Mapping[str, str] | None = None,
                    hbar: Mapping[str, int] | None = None, bounds: Bounds = Bounds(),
                    alphabet: Iterable[EdgeType] | None = None,
                    mode: Mode = "literal", pre: Formula | None = None) -> Verdict:
    """Every enumerated graph satisfying the computed weakest pre-condition
    is turned into a graph satisfying ``post``. ``pre`` overrides the
    computed pre-condition (useful for testing the check itself)."""
    if pre is None:
        pre = wpre(p, post, h, hbar, mode)
    types = set(alphabet) if alphabet is not None else default_alphabet(p, post)
    return check_triple(pre, p, post, bounds, types | edge_types(pre))


def check_weakest(psi: Formula, p: Production, post: Formula,
                  h: Mapping[str, str] | None = None, hbar: Mapping[str, int] | None = None,
                  bounds: Bounds = Bounds(), alphabet: Iterable[EdgeType] | None = None,
                  mode: Mode = "literal") -> Verdict:
    """If ``{psi} p {post}`` is valid at the bound, ``psi`` must imply the
    weakest pre-condition on every enumerated graph."""
    pre = wpre(p, post, h, hbar, mode)
    types = set(alphabet) if alphabet is not None else default_alphabet(p, post, psi)
    types |= edge_types(pre)
    validity = check_triple(psi, p, post, bounds, types)
    if not validity.holds:
        return Verdict(Status.NOT_APPLICABLE, validity.graphs_checked, validity.counterexample)
    n = 0
    for g in enumerate_graphs(types, bounds.max_nodes, bounds.max_edges):
        n += 1
        if satisfies(g, {}, psi) and not satisfies(g, {}, pre):
            return Verdict(Status.FAILS, n, Counterexample(g, None, None))
    return Verdict(Status.HOLDS, n)


def check_validity(ap: AssertedProduction, bounds: Bounds = Bounds(),
                   alphabet: Iterable[EdgeType] | None = None) -> Verdict:
    return check_triple(ap.pre, ap.production, ap.post, bounds, alphabet)
