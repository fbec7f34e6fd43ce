"""Typed hypergraphs, single-edge productions and hyperedge replacement."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class EdgeType:
    name: str
    arity: int
    abstract: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.arity < 0:
            raise GraphError(f"edge type {self.name}: negative arity {self.arity}")

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class Edge:
    id: str
    etype: EdgeType
    attachment: tuple[str, ...]


def _natural_key(s: str):
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s))


def node_key(n: str):
    """Total order on node and edge identifiers (numeric runs compare as numbers)."""
    return _natural_key(n)


@dataclass(frozen=True)
class Graph:
    nodes: frozenset[str] = frozenset()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(
            self, "edges", tuple(sorted(self.edges, key=lambda e: node_key(e.id)))
        )

    @classmethod
    def build(cls, nodes: Iterable[str], edges: Iterable[tuple[str, EdgeType, Sequence[str]]]) -> Graph:
        return cls(frozenset(nodes), tuple(Edge(i, t, tuple(a)) for i, t, a in edges))

    @cached_property
    def by_type(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {}
        for e in self.edges:
            out.setdefault(e.etype.name, []).append(e)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def edge_index(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    def edges_of(self, etype: EdgeType | str) -> tuple[Edge, ...]:
        name = etype if isinstance(etype, str) else etype.name
        return self.by_type.get(name, ())

    def has_type(self, etype: EdgeType | str) -> bool:
        return bool(self.edges_of(etype))

    def sorted_nodes(self) -> list[str]:
        return sorted(self.nodes, key=node_key)

    def edge_types(self) -> set[EdgeType]:
        return {e.etype for e in self.edges}

    def rename_nodes(self, mapping: Mapping[str, str]) -> Graph:
        return Graph(
            frozenset(mapping.get(n, n) for n in self.nodes),
            tuple(
                Edge(e.id, e.etype, tuple(mapping.get(n, n) for n in e.attachment))
                for e in self.edges
            ),
        )


def validate_graph(g: Graph, alphabet: Iterable[EdgeType] | None = None) -> list[str]:
    """Return the list of invariant violations of ``g``; empty means valid."""
    problems = []
    known = None if alphabet is None else {t.name: t for t in alphabet}
    seen: set[str] = set()
    for e in g.edges:
        if e.id in seen:
            problems.append(f"edge {e.id}: duplicate edge id")
        seen.add(e.id)
        if len(e.attachment) != e.etype.arity:
            problems.append(
                f"edge {e.id}: arity mismatch ({e.etype.name} expects {e.etype.arity}, "
                f"got {len(e.attachment)})"
            )
        for n in e.attachment:
            if n not in g.nodes:
                problems.append(f"edge {e.id}: attachment node {n} not in graph")
        if known is not None:
            t = known.get(e.etype.name)
            if t is None:
                problems.append(f"edge {e.id}: unknown edge type {e.etype.name}")
            elif t.arity != e.etype.arity:
                problems.append(f"edge {e.id}: type {e.etype.name} arity differs from alphabet")
    return problems


@dataclass(frozen=True)
class Production:
    """A refinement rule replacing one ``lhs_type`` edge by ``rhs``.

    ``interface[j]`` is the RHS node glued to the j-th tentacle of the
    replaced edge (positions are 0-based).
    """

    lhs_type: EdgeType
    rhs: Graph
    interface: tuple[str, ...]
    name: str = "p"

    def __post_init__(self):
        object.__setattr__(self, "interface", tuple(self.interface))
        if len(self.interface) != self.lhs_type.arity:
            raise GraphError(
                f"production {self.name}: interface has {len(self.interface)} nodes, "
                f"{self.lhs_type.name} has arity {self.lhs_type.arity}"
            )
        if len(set(self.interface)) != len(self.interface):
            raise GraphError(f"production {self.name}: interface nodes must be distinct")
        missing = [n for n in self.interface if n not in self.rhs.nodes]
        if missing:
            raise GraphError(f"production {self.name}: interface nodes {missing} not in rhs")

    @cached_property
    def internal(self) -> frozenset[str]:
        return self.rhs.nodes - set(self.interface)

    def position(self, node: str) -> int:
        return self.interface.index(node)


@dataclass(frozen=True)
class Match:
    edge_id: str
    node_map: tuple[str, ...]


def find_matches(g: Graph, p: Production) -> list[Match]:
    return [Match(e.id, e.attachment) for e in g.edges_of(p.lhs_type)]


def _fresh(base: str, taken: set[str], counter: int) -> tuple[str, int]:
    while f"{base}_{counter}" in taken:
        counter += 1
    return f"{base}_{counter}", counter + 1


def apply_production(g: Graph, m: Match, p: Production, seed: int = 1) -> Graph:
    """Replace the matched edge by a copy of ``p.rhs``.

    Interface nodes are glued onto the attachment of the matched edge; each
    internal node ``u`` becomes ``u_<k>`` for the smallest counter ``k >= seed``
    not already taken, and RHS edges are renamed the same way.
    """
    target = g.edge_index.get(m.edge_id)
    if target is None:
        raise GraphError(f"no edge {m.edge_id} in graph")
    if target.etype != p.lhs_type or target.etype.arity != p.lhs_type.arity:
        raise GraphError(
            f"edge {m.edge_id} has type {target.etype.name}, production expects {p.lhs_type.name}"
        )
    mapping = dict(zip(p.interface, target.attachment))
    taken = set(g.nodes)
    counter = seed
    for u in sorted(p.internal, key=node_key):
        mapping[u], counter = _fresh(u, taken, counter)
        taken.add(mapping[u])
    edge_ids = {e.id for e in g.edges if e.id != m.edge_id} | {m.edge_id}
    new_edges = [e for e in g.edges if e.id != m.edge_id]
    counter = seed
    for e in p.rhs.edges:
        eid, counter = _fresh(e.id, edge_ids, counter)
        edge_ids.add(eid)
        new_edges.append(Edge(eid, e.etype, tuple(mapping[n] for n in e.attachment)))
    return Graph(g.nodes | frozenset(mapping[u] for u in p.internal), tuple(new_edges))
