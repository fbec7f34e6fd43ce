from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from adrdbc.graph import EdgeType, Graph, Production  # noqa: E402
from adrdbc.logic import Eq, forall  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

A = EdgeType("A", 1, abstract=True)
B = EdgeType("B", 2)
C = EdgeType("C", 1)
ALPHABET = (A, B, C)

# RHS of the running example: interface u1, fresh internal u, one B-edge (u1, u)
EX1_RHS = Graph.build(["u", "u1"], [("b", B, ("u1", "u"))])
EX1_P = Production(A, EX1_RHS, ("u1",), name="p")
EX1_PHI = forall(B, ("x", "y"), forall(C, ("z",), Eq("y", "z")))


@pytest.fixture
def example1():
    return EX1_P, EX1_PHI


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
