"""Formulas over typed hypergraphs: syntax, NNF, evaluation and bounded checks.

Quantifiers range over edges: ``Forall(D, (x1, ..., xn), body)`` holds when
``body`` holds with ``x1..xn`` bound to the attachment of every ``D``-edge,
``Exists`` when it holds for some ``D``-edge.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .graph import Edge, EdgeType, Graph


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Neq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...] = ()


@dataclass(frozen=True)
class Forall:
    etype: EdgeType
    vars: tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    etype: EdgeType
    vars: tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class NoEdge:
    etype: EdgeType


@dataclass(frozen=True)
class NoEdge2:
    etype: EdgeType
    other: EdgeType


Formula = Union[Top, Bot, Eq, Neq, Not, And, Or, Forall, Exists, NoEdge, NoEdge2]
Quantifier = (Forall, Exists)
TRUE = Top()
FALSE = Bot()


def conj(*args: Formula) -> And:
    return And(tuple(args))


def disj(*args: Formula) -> Or:
    return Or(tuple(args))


def forall(etype: EdgeType, vars: Iterable[str], body: Formula) -> Forall:
    return Forall(etype, tuple(vars), body)


def exists(etype: EdgeType, vars: Iterable[str], body: Formula) -> Exists:
    return Exists(etype, tuple(vars), body)


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Eq, Neq)):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_vars(a) for a in f.args))
    if isinstance(f, Quantifier):
        return free_vars(f.body) - set(f.vars)
    return frozenset()


def all_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Eq, Neq)):
        return frozenset((f.left, f.right))
    if isinstance(f, Not):
        return all_vars(f.arg)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(all_vars(a) for a in f.args))
    if isinstance(f, Quantifier):
        return all_vars(f.body) | set(f.vars)
    return frozenset()


def edge_types(f: Formula) -> set[EdgeType]:
    if isinstance(f, Not):
        return edge_types(f.arg)
    if isinstance(f, (And, Or)):
        return set().union(*(edge_types(a) for a in f.args))
    if isinstance(f, Quantifier):
        return {f.etype} | edge_types(f.body)
    if isinstance(f, NoEdge):
        return {f.etype}
    if isinstance(f, NoEdge2):
        return {f.etype, f.other}
    return set()


def depth(f: Formula) -> int:
    if isinstance(f, Not):
        return 1 + depth(f.arg)
    if isinstance(f, (And, Or)):
        return 1 + max((depth(a) for a in f.args), default=0)
    if isinstance(f, Quantifier):
        return 1 + depth(f.body)
    return 0


def wellformedness_errors(f: Formula) -> list[str]:
    """Arity, distinct quantified variables, and no rebinding of an enclosing
    or free variable. Sibling subformulas may reuse variable names."""
    problems: list[str] = []
    free = free_vars(f)

    def walk(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, Not):
            walk(g.arg, bound)
        elif isinstance(g, (And, Or)):
            for a in g.args:
                walk(a, bound)
        elif isinstance(g, Quantifier):
            if len(g.vars) != g.etype.arity:
                problems.append(
                    f"quantifier over {g.etype.name} binds {len(g.vars)} variables, "
                    f"arity is {g.etype.arity}"
                )
            if len(set(g.vars)) != len(g.vars):
                problems.append(f"quantifier over {g.etype.name} repeats a variable")
            for v in g.vars:
                if v in bound:
                    problems.append(f"variable {v} is bound twice")
                elif v in free:
                    problems.append(f"variable {v} is both free and bound")
            walk(g.body, bound | set(g.vars))

    walk(f, frozenset())
    return problems


# -- canonical ordering ---------------------------------------------------

_RANK = {Top: 0, Bot: 1, NoEdge: 2, NoEdge2: 3, Eq: 4, Neq: 5, And: 6, Or: 7,
         Forall: 8, Exists: 9, Not: 10}


def sort_key(f: Formula) -> tuple:
    r = _RANK[type(f)]
    if isinstance(f, (Eq, Neq)):
        return (r, f.left, f.right)
    if isinstance(f, NoEdge):
        return (r, f.etype.name)
    if isinstance(f, NoEdge2):
        return (r, f.etype.name, f.other.name)
    if isinstance(f, Not):
        return (r, sort_key(f.arg))
    if isinstance(f, (And, Or)):
        return (r, tuple(sort_key(a) for a in f.args))
    if isinstance(f, Quantifier):
        return (r, f.etype.name, f.vars, sort_key(f.body))
    return (r,)


# -- negation normal form -------------------------------------------------

def _fresh_vars(n: int, avoid: set[str]) -> tuple[str, ...]:
    out = []
    for k in itertools.count(1):
        if len(out) == n:
            break
        name = f"w{k}"
        if name not in avoid:
            out.append(name)
            avoid.add(name)
    return tuple(out)


def nnf(f: Formula) -> Formula:
    """Push negations down to (in)equalities; ``f`` must be closed."""
    if free_vars(f):
        raise FormulaError(f"nnf needs a closed formula, free: {sorted(free_vars(f))}")
    return _nnf(f, False, set(all_vars(f)))


def _nnf(f: Formula, neg: bool, avoid: set[str]) -> Formula:
    if isinstance(f, Not):
        return _nnf(f.arg, not neg, avoid)
    if isinstance(f, Top):
        return FALSE if neg else TRUE
    if isinstance(f, Bot):
        return TRUE if neg else FALSE
    if isinstance(f, Eq):
        return Neq(f.left, f.right) if neg else f
    if isinstance(f, Neq):
        return Eq(f.left, f.right) if neg else f
    if isinstance(f, And):
        args = tuple(_nnf(a, neg, avoid) for a in f.args)
        return Or(args) if neg else And(args)
    if isinstance(f, Or):
        args = tuple(_nnf(a, neg, avoid) for a in f.args)
        return And(args) if neg else Or(args)
    if isinstance(f, Forall):
        body = _nnf(f.body, neg, avoid)
        return Exists(f.etype, f.vars, body) if neg else Forall(f.etype, f.vars, body)
    if isinstance(f, Exists):
        body = _nnf(f.body, neg, avoid)
        return Forall(f.etype, f.vars, body) if neg else Exists(f.etype, f.vars, body)
    if isinstance(f, NoEdge):
        if not neg:
            return f
        return Exists(f.etype, _fresh_vars(f.etype.arity, avoid), TRUE)
    if isinstance(f, NoEdge2):
        if not neg:
            return f
        return Or((
            Exists(f.etype, _fresh_vars(f.etype.arity, avoid), TRUE),
            Exists(f.other, _fresh_vars(f.other.arity, avoid), TRUE),
        ))
    raise FormulaError(f"not a formula: {f!r}")


def negate(f: Formula) -> Formula:
    """NNF of the negation of an NNF formula (free variables allowed)."""
    return _nnf(f, True, set(all_vars(f)))


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Not):
        return False
    if isinstance(f, (And, Or)):
        return all(is_nnf(a) for a in f.args)
    if isinstance(f, Quantifier):
        return is_nnf(f.body)
    return True


# -- satisfaction ---------------------------------------------------------

def satisfies(g: Graph, h: Mapping[str, str] | None, f: Formula) -> bool:
    h = dict(h or {})
    missing = free_vars(f) - h.keys()
    if missing:
        raise FormulaError(f"assignment does not cover {sorted(missing)}")
    return _sat(g, h, f)


def _bind(h: dict, vars: tuple[str, ...], e: Edge) -> dict:
    h2 = dict(h)
    h2.update(zip(vars, e.attachment))
    return h2


def _sat(g: Graph, h: dict, f: Formula) -> bool:
    t = type(f)
    if t is Eq:
        return h[f.left] == h[f.right]
    if t is Neq:
        return h[f.left] != h[f.right]
    if t is And:
        return all(_sat(g, h, a) for a in f.args)
    if t is Or:
        return any(_sat(g, h, a) for a in f.args)
    if t is Forall:
        return all(_sat(g, _bind(h, f.vars, e), f.body) for e in g.edges_of(f.etype))
    if t is Exists:
        return any(_sat(g, _bind(h, f.vars, e), f.body) for e in g.edges_of(f.etype))
    if t is Top:
        return True
    if t is Bot:
        return False
    if t is Not:
        return not _sat(g, h, f.arg)
    if t is NoEdge:
        return not g.has_type(f.etype)
    if t is NoEdge2:
        return not g.has_type(f.etype) and not g.has_type(f.other)
    raise FormulaError(f"not a formula: {f!r}")


# -- bounded enumeration --------------------------------------------------

def enumerate_graphs(alphabet: Iterable[EdgeType], max_nodes: int, max_edges: int) -> Iterator[Graph]:
    """Every graph on nodes ``n1..nk`` (k <= max_nodes) with at most
    ``max_edges`` edges, each exactly once up to edge naming.

    Edges form a multiset of (type, attachment) labels; parallel edges are
    distinct graphs. Edge ids are ``e1..em`` in label order.
    """
    types = sorted(set(alphabet), key=lambda t: t.name)
    for k in range(max_nodes + 1):
        nodes = tuple(f"n{i}" for i in range(1, k + 1))
        labels = [(t, att) for t in types for att in itertools.product(nodes, repeat=t.arity)]
        for m in range(max_edges + 1):
            for combo in itertools.combinations_with_replacement(labels, m):
                yield Graph(
                    frozenset(nodes),
                    tuple(Edge(f"e{j}", t, att) for j, (t, att) in enumerate(combo, 1)),
                )


def count_graphs(alphabet: Iterable[EdgeType], max_nodes: int, max_edges: int) -> int:
    """Closed-form count matching :func:`enumerate_graphs`."""
    from math import comb

    types = set(alphabet)
    total = 0
    for k in range(max_nodes + 1):
        labels = sum(k ** t.arity for t in types)
        total += sum(comb(labels + m - 1, m) if labels else int(m == 0) for m in range(max_edges + 1))
    return total


def find_distinguishing(f1: Formula, f2: Formula, alphabet: Iterable[EdgeType],
                        max_nodes: int, max_edges: int) -> Graph | None:
    for g in enumerate_graphs(alphabet, max_nodes, max_edges):
        if _sat(g, {}, f1) != _sat(g, {}, f2):
            return g
    return None


def equivalent(f1: Formula, f2: Formula, alphabet: Iterable[EdgeType],
               max_nodes: int, max_edges: int) -> bool:
    for f in (f1, f2):
        if free_vars(f):
            raise FormulaError("bounded equivalence needs closed formulas")
    return find_distinguishing(f1, f2, alphabet, max_nodes, max_edges) is None


# -- simplification -------------------------------------------------------

def simplify(f: Formula) -> Formula:
    """Normalize to a fixed point.

    Constant folding, flattening, dedup and canonical child order for
    And/Or; ``x = x`` and ``x != x`` fold; ``Eq``/``Neq`` operands are
    sorted; a universal distributes over a conjunctive body and an
    existential over a disjunctive one.
    """
    while True:
        g = _simp(f)
        if g == f:
            return g
        f = g


def _simp(f: Formula) -> Formula:
    if isinstance(f, (Eq, Neq)):
        if f.left == f.right:
            return TRUE if isinstance(f, Eq) else FALSE
        if f.right < f.left:
            return type(f)(f.right, f.left)
        return f
    if isinstance(f, Not):
        return Not(_simp(f.arg))
    if isinstance(f, (And, Or)):
        unit, zero = (Top, Bot) if isinstance(f, And) else (Bot, Top)
        kids: list[Formula] = []
        for a in f.args:
            a = _simp(a)
            if isinstance(a, type(f)):
                kids.extend(a.args)
            else:
                kids.append(a)
        if any(isinstance(a, zero) for a in kids):
            return zero()
        uniq = {sort_key(a): a for a in kids if not isinstance(a, unit)}
        kids = [uniq[k] for k in sorted(uniq)]
        if not kids:
            return unit()
        if len(kids) == 1:
            return kids[0]
        return type(f)(tuple(kids))
    if isinstance(f, Quantifier):
        body = _simp(f.body)
        q = type(f)
        if q is Forall and isinstance(body, Top):
            return TRUE
        if q is Exists and isinstance(body, Bot):
            return FALSE
        if q is Forall and isinstance(body, And):
            return And(tuple(Forall(f.etype, f.vars, b) for b in body.args))
        if q is Exists and isinstance(body, Or):
            return Or(tuple(Exists(f.etype, f.vars, b) for b in body.args))
        return q(f.etype, f.vars, body)
    return f
