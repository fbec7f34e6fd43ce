"""Weakest pre-conditions of single-edge productions.

The computation is two predicate transformers run over an NNF
post-condition: :func:`wdef` checks what the right-hand side guarantees on
its own, :func:`wp_transform` rewrites the post-condition into a condition
on the host graph. Quantified variables are tracked in an environment
recording, per variable, its quantifier, the edge type it is attached to,
and the node it was assigned to (a node of the RHS or a representative
external node).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Mapping, Sequence

from .graph import EdgeType, Graph, Production
from .logic import (
    FALSE, TRUE, And, Bot, Eq, Exists, Forall, Formula, FormulaError, Neq, NoEdge, NoEdge2,
    Not, Or, Top, free_vars, nnf, simplify,
)

ALL = "forall"
SOME = "exists"
Mode = Literal["literal", "feasible"]


class FragmentError(FormulaError):
    """Post-condition uses a construct the transformers do not handle."""


@dataclass(frozen=True)
class Binding:
    quant: str
    etype: EdgeType
    node: str


Environment = Mapping[str, Binding]


@dataclass(frozen=True)
class FwpCase:
    tag: Literal["top", "bot", "case1", "case2", "case3"]
    types: tuple[EdgeType, ...] = ()


CASE_TOP = FwpCase("top")
CASE_BOT = FwpCase("bot")
CASE_3 = FwpCase("case3")


# -- auxiliary map --------------------------------------------------------
# Each rule looks at one orientation (a, b) of the two bindings and returns a
# case or None. fwp_case tries the rules in order, both orientations each.

def _rule_both_exists_same_internal(p, a, b):
    if (a and b and a.quant == SOME and b.quant == SOME
            and a.node == b.node and a.node in p.internal):
        return CASE_TOP


def _rule_internal_vs_external_exists(p, a, b):
    if (a and b and a.quant == ALL and a.node in p.internal and b.quant == SOME
            and (b.node not in p.rhs.nodes or b.node in p.interface)):
        return CASE_BOT


def _rule_distinct_internals(p, a, b):
    if (a and b and a.quant == ALL and a.node in p.internal
            and b.node in p.internal and a.node != b.node):
        return CASE_BOT


def _rule_internal_vs_external_forall(p, a, b):
    if (a and b and a.quant == ALL and a.node in p.internal
            and b.quant == ALL and b.node not in p.rhs.nodes):
        return FwpCase("case1", (b.etype,))


def _rule_same_internal_forall(p, a, b):
    if (a and b and a.quant == ALL and b.quant == ALL
            and a.node == b.node and a.node in p.internal):
        return FwpCase("case2", (a.etype, b.etype))


FWP_RULES: tuple[Callable, ...] = (
    _rule_both_exists_same_internal,
    _rule_internal_vs_external_exists,
    _rule_distinct_internals,
    _rule_internal_vs_external_forall,
    _rule_same_internal_forall,
)


def fwp_case(p: Production, x1: str, x2: str, env: Environment) -> FwpCase:
    """Classify the equality ``x1 = x2`` under ``env``.

    Variables missing from ``env`` fall through to ``case3``.
    """
    b1, b2 = env.get(x1), env.get(x2)
    for rule in FWP_RULES:
        for a, b in ((b1, b2), (b2, b1)):
            case = rule(p, a, b)
            if case is not None:
                return case
    return CASE_3


def _edge_absence(case: FwpCase) -> Formula:
    if case.tag == "case1":
        return NoEdge(case.types[0])
    return NoEdge2(*case.types)


# -- quantifier assignments -----------------------------------------------

def external_nodes(p: Production, env: Environment, n: int) -> tuple[str, ...]:
    """``n`` representative nodes outside the RHS, named ``v1, v2, ...``,
    skipping names already used by the RHS or by ``env``."""
    taken = set(p.rhs.nodes) | {b.node for b in env.values()}
    out = []
    for k in itertools.count(1):
        if len(out) == n:
            break
        if f"v{k}" not in taken:
            out.append(f"v{k}")
    return tuple(out)


def choose_filter(rhs: Graph, internal: Iterable[str], etype: EdgeType,
                  tuples: Iterable[tuple[str, ...]]) -> list[tuple[str, ...]]:
    """Tuples touching internal nodes are dropped when the RHS has no edge
    of the quantified type."""
    if rhs.has_type(etype):
        return list(tuples)
    internal = set(internal)
    return [t for t in tuples if not internal.intersection(t)]


def choose_assignments(rhs: Graph, interface: Sequence[str], etype: EdgeType, n: int,
                       externals: Sequence[str], mode: Mode = "literal") -> list[tuple[str, ...]]:
    internal = rhs.nodes - set(interface)
    pool = rhs.sorted_nodes() + [v for v in externals if v not in rhs.nodes]
    candidates = itertools.product(pool, repeat=n)
    if mode == "feasible":
        # attachments of the RHS's own edges, plus tuples avoiding internal nodes
        own = [e.attachment for e in rhs.edges_of(etype)]
        rest = [t for t in candidates if not internal.intersection(t)]
        seen, out = set(), []
        for t in own + rest:
            if t not in seen:
                seen.add(t)
                out.append(t)
        return out
    return choose_filter(rhs, internal, etype, candidates)


def _assignments(p: Production, env: Environment, etype: EdgeType,
                 vars: tuple[str, ...], mode: Mode) -> list[tuple[str, ...]]:
    ext = external_nodes(p, env, len(vars))
    return choose_assignments(p.rhs, p.interface, etype, len(vars), ext, mode)


def _extend(env: Environment, quant: str, etype: EdgeType, vars, nodes) -> dict:
    env2 = dict(env)
    for x, u in zip(vars, nodes):
        env2[x] = Binding(quant, etype, u)
    return env2


def _check_fragment(f: Formula) -> None:
    if isinstance(f, (Not, Bot, NoEdge, NoEdge2)):
        raise FragmentError(
            f"{type(f).__name__} is outside the transformable fragment "
            "(=, !=, true, &, |, forall, exists)"
        )


# -- transformers ---------------------------------------------------------

def wdef(p: Production, psi: Formula, env: Environment, phi: Formula,
         mode: Mode = "literal") -> Formula:
    """What the RHS alone contributes; ``psi`` fills the otherwise case."""
    return simplify(_wdef(p, psi, env, phi, mode))


def _wdef(p, psi, env, phi, mode) -> Formula:
    _check_fragment(phi)
    if isinstance(phi, Top):
        return TRUE
    if isinstance(phi, Eq):
        case = fwp_case(p, phi.left, phi.right, env)
        if case.tag == "top":
            return TRUE
        if case.tag == "bot":
            return FALSE
        if case.tag == "case3":
            return psi
        return _edge_absence(case)
    if isinstance(phi, Neq):
        # complement of fwp with templates (bot, top, not psi)
        case = fwp_case(p, phi.left, phi.right, env)
        return {"top": FALSE, "bot": TRUE, "case1": TRUE, "case2": FALSE}.get(case.tag, psi)
    if isinstance(phi, And):
        return And(tuple(_wdef(p, psi, env, a, mode) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(_wdef(p, psi, env, a, mode) for a in phi.args))
    quant = ALL if isinstance(phi, Forall) else SOME
    parts = tuple(
        _wdef(p, psi, _extend(env, quant, phi.etype, phi.vars, u), phi.body, mode)
        for u in _assignments(p, env, phi.etype, phi.vars, mode)
    )
    return simplify(And(parts) if quant == ALL else Or(parts))


def translate_var(x: str, h: Mapping[str, str], p: Production,
                  hbar: Mapping[str, int]) -> str:
    """Rename a variable sitting on an interface node to the interface
    variable of the matching LHS position; other variables are unchanged."""
    node = h.get(x)
    if node is None or node not in p.interface:
        return x
    pos = p.position(node)
    for z, q in hbar.items():
        if q == pos:
            return z
    raise FormulaError(f"no interface variable for position {pos}")


def exists_rhs_witness(p: Production, env: Environment, phi: Formula, mode: Mode) -> Formula:
    """Existential clause: the RHS itself may provide the witness."""
    return _wdef(p, FALSE, env, phi, mode)


def wp_transform(p: Production, hbar: Mapping[str, int], h: Mapping[str, str],
                 env: Environment, phi: Formula, mode: Mode = "literal") -> Formula:
    return simplify(_wp(p, hbar, h, env, phi, mode))


def _wp(p, hbar, h, env, phi, mode) -> Formula:
    _check_fragment(phi)
    if isinstance(phi, Top):
        return TRUE
    if isinstance(phi, (Eq, Neq)):
        case = fwp_case(p, phi.left, phi.right, env)
        y1 = translate_var(phi.left, h, p, hbar)
        y2 = translate_var(phi.right, h, p, hbar)
        if isinstance(phi, Eq):
            if case.tag in ("case1", "case2"):
                return _edge_absence(case)
            return {"top": TRUE, "bot": FALSE}.get(case.tag, Eq(y1, y2))
        # complement of fwp with templates (y1 = y2, top, y1 = y2)
        return {"top": FALSE, "bot": TRUE, "case2": FALSE}.get(case.tag, Neq(y1, y2))
    if isinstance(phi, And):
        return And(tuple(_wp(p, hbar, h, env, a, mode) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(_wp(p, hbar, h, env, a, mode) for a in phi.args))
    if isinstance(phi, Forall):
        parts = tuple(
            Forall(phi.etype, phi.vars,
                   _wp(p, hbar, h, _extend(env, ALL, phi.etype, phi.vars, u), phi.body, mode))
            for u in _assignments(p, env, phi.etype, phi.vars, mode)
        )
        return simplify(And(parts))
    parts = []
    for u in _assignments(p, env, phi.etype, phi.vars, mode):
        env2 = _extend(env, SOME, phi.etype, phi.vars, u)
        parts.append(Or((
            Exists(phi.etype, phi.vars, _wp(p, hbar, h, env2, phi.body, mode)),
            exists_rhs_witness(p, env2, phi.body, mode),
        )))
    return simplify(Or(tuple(parts)))


def canonical_hbar(p: Production) -> dict[str, int]:
    return {f"z{j + 1}": j for j in range(p.lhs_type.arity)}


def _check_maps(p: Production, phi: Formula, h: Mapping[str, str],
                hbar: Mapping[str, int]) -> None:
    if set(h) - free_vars(phi):
        raise FormulaError(f"h maps non-free variables {sorted(set(h) - free_vars(phi))}")
    if len(set(h.values())) != len(h):
        raise FormulaError("h must be injective")
    if any(n not in p.rhs.nodes for n in h.values()):
        raise FormulaError("h must map into the RHS nodes")
    if sorted(hbar.values()) != list(range(p.lhs_type.arity)):
        raise FormulaError(
            f"hbar must be a bijection onto the {p.lhs_type.arity} positions of the LHS"
        )


def wpre(p: Production, phi: Formula, h: Mapping[str, str] | None = None,
         hbar: Mapping[str, int] | None = None, mode: Mode = "literal") -> Formula:
    """Weakest pre-condition of ``p`` for the closed post-condition ``phi``."""
    h = dict(h or {})
    hbar = canonical_hbar(p) if hbar is None else dict(hbar)
    if free_vars(phi):
        raise FormulaError(
            f"post-condition must be closed (free: {', '.join(sorted(free_vars(phi)))})"
        )
    _check_maps(p, phi, h, hbar)
    phi = nnf(phi)
    return simplify(And((
        wdef(p, TRUE, {}, phi, mode),
        wp_transform(p, hbar, h, {}, phi, mode),
    )))
