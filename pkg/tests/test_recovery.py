import pytest

from adrdbc.dsl import parse
from adrdbc.logic import TRUE, NoEdge, satisfies
from adrdbc.recovery import Style, applicable_productions, check_style, recover, replay

from conftest import FIXTURES, C


@pytest.fixture(scope="module")
def doc():
    return parse((FIXTURES / "style.adr").read_text())


def test_check_style(doc):
    s = doc.styles["refined"]
    assert check_style(doc.graphs["conformant"], s)
    assert not check_style(doc.graphs["pending"], s)
    top = Style(s.alphabet, s.productions, TRUE)
    assert all(check_style(g, top) for g in doc.graphs.values())
    no_c = Style(s.alphabet, (), NoEdge(C))
    assert not check_style(doc.graphs["blocked"], no_c)


def test_applicable_productions_gated_by_wpre(doc):
    s = doc.styles["refined"]
    assert applicable_productions(doc.graphs["conformant"], s) == []
    pending = applicable_productions(doc.graphs["pending"], s)
    assert [i for i, _ in pending] == [0, 1]
    blocked = applicable_productions(doc.graphs["blocked"], s)
    assert [i for i, _ in blocked] == [1]


def test_recover_scenarios(doc):
    s = doc.styles["refined"]
    assert recover(doc.graphs["conformant"], s, 2).steps == ()
    plan = recover(doc.graphs["pending"], s, 2)
    assert len(plan) == 1 and plan.steps[0][0] == 0
    assert recover(doc.graphs["blocked"], s, 2) is None
    assert recover(doc.graphs["pending"], s, 0) is None


def test_plans_replay_and_respect_guards(doc):
    s = doc.styles["refined"]
    g = doc.graphs["pending"]
    plan = recover(g, s, 3)
    graphs = replay(g, s, plan.steps)
    assert graphs[-1] == plan.final and check_style(plan.final, s)
    for (i, _), before in zip(plan.steps, graphs):
        assert satisfies(before, {}, s.guard(i))
    assert recover(g, s, 3) == plan


def test_abstract_only_targets(doc):
    s = doc.styles["refined"]
    concrete = [ap for ap in s.productions]
    assert all(ap.production.lhs_type.abstract for ap in concrete)
    from dataclasses import replace
    from adrdbc.graph import EdgeType, Production

    conc_a = EdgeType("A", 1, abstract=False)
    ap0 = s.productions[0]
    p = Production(conc_a, ap0.production.rhs, ap0.production.interface, "refine")
    s2 = Style(s.alphabet, (replace(ap0, production=p),), s.invariant)
    assert applicable_productions(doc.graphs["pending"], s2) == []
