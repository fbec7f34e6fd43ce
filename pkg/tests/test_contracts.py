from adrdbc.contracts import (
    AssertedProduction, Bounds, Status, check_soundness, check_triple, check_validity,
    check_weakest, semantic_precondition_oracle,
)
from adrdbc.graph import Graph
from adrdbc.logic import FALSE, TRUE, And, NoEdge, satisfies
from adrdbc.wp import wpre

from conftest import ALPHABET, A, C, EX1_P, EX1_PHI


def test_oracle_vacuous_without_matches():
    g = Graph.build(["n"], [("c", C, ["n"])])
    assert semantic_precondition_oracle(EX1_P, FALSE, g)


def test_oracle_example1():
    with_c = Graph.build(["n", "m"], [("e", A, ["n"]), ("c", C, ["m"])])
    assert not semantic_precondition_oracle(EX1_P, EX1_PHI, with_c)
    plain = Graph.build(["n"], [("e", A, ["n"])])
    assert semantic_precondition_oracle(EX1_P, EX1_PHI, plain)


def test_soundness_example1():
    v = check_soundness(EX1_P, EX1_PHI, bounds=Bounds(3, 3), alphabet=ALPHABET)
    assert v.status is Status.HOLDS and v.graphs_checked > 0


def test_soundness_top():
    for n in range(3):
        assert check_soundness(EX1_P, TRUE, bounds=Bounds(n, n), alphabet=ALPHABET).holds


def test_soundness_detects_corrupted_precondition():
    pre = wpre(EX1_P, EX1_PHI)
    corrupted = And(tuple(a for a in pre.args if a != NoEdge(C)))
    v = check_soundness(EX1_P, EX1_PHI, bounds=Bounds(3, 3), alphabet=ALPHABET, pre=corrupted)
    assert v.status is Status.FAILS
    cex = v.counterexample
    assert cex.graph.has_type(C) and satisfies(cex.graph, {}, corrupted)
    assert not satisfies(cex.result, {}, EX1_PHI)


def test_weakest_bot_and_reflexive():
    assert check_weakest(FALSE, EX1_P, EX1_PHI, alphabet=ALPHABET).holds
    pre = wpre(EX1_P, EX1_PHI)
    assert check_weakest(pre, EX1_P, EX1_PHI, alphabet=ALPHABET).holds


def test_weakest_not_applicable_for_invalid_psi():
    v = check_weakest(TRUE, EX1_P, EX1_PHI, alphabet=ALPHABET)
    assert v.status is Status.NOT_APPLICABLE


def test_validity():
    ap = AssertedProduction(wpre(EX1_P, EX1_PHI), EX1_P, EX1_PHI)
    assert check_validity(ap, Bounds(3, 3), ALPHABET).holds
    v = check_validity(AssertedProduction(TRUE, EX1_P, FALSE), Bounds(1, 1), ALPHABET)
    assert v.status is Status.FAILS and v.counterexample.match is not None
    assert check_validity(AssertedProduction(FALSE, EX1_P, FALSE), Bounds(2, 2), ALPHABET).holds


def test_counterexample_is_first_in_enumeration_order():
    v = check_triple(TRUE, EX1_P, FALSE, Bounds(2, 2), ALPHABET)
    assert v.counterexample.graph == Graph.build(["n1"], [("e1", A, ["n1"])])


def test_oracle_monotone_for_top_only():
    g = Graph.build(["n", "m"], [("e", A, ["n"]), ("f", A, ["m"])])
    smaller = Graph(g.nodes, g.edges[:1])
    assert semantic_precondition_oracle(EX1_P, TRUE, g)
    assert semantic_precondition_oracle(EX1_P, TRUE, smaller)


def test_asserted_production_problems():
    ap = AssertedProduction(TRUE, EX1_P, EX1_PHI)
    assert ap.problems() == [] and ap.interface_vars == ("z1",)
    bad = AssertedProduction(TRUE, EX1_P, EX1_PHI, hbar={"z1": 3})
    assert any("bijection" in m for m in bad.problems())
