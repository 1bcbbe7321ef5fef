from __future__ import annotations

import pytest

from tccert.builders import AssertionSet, GroupPresentation, presentation_complex
from tccert.field_linalg import FieldSpec

Q = FieldSpec(0)
F2, F3, F5 = FieldSpec(2), FieldSpec(3), FieldSpec(5)

FULL_FLAGS = AssertionSet(aspherical_space=True, pi1_no_Z2=True, pi1_torsion_free=True,
                          provenance=(("aspherical_space", "test fixture"),))


def genus2_presentation(assertions=FULL_FLAGS):
    return presentation_complex(GroupPresentation(tuple("abcd"), ("abABcdCD",)), "genus2-pres", assertions)


def a5b5_presentation(assertions=FULL_FLAGS):
    return presentation_complex(GroupPresentation(("a", "b"), ("aaaaabbbbb",)), "a5b5", assertions)


@pytest.fixture
def g2pres():
    return genus2_presentation()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
