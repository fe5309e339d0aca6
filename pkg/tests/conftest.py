from pathlib import Path

import pytest

from malcevlab.algebra import FiniteAlgebra

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def make_zoo():
    return {
        "sl2": FiniteAlgebra.from_functions("sl2", 2, {"join": (2, max)}),
        "l2": FiniteAlgebra.from_functions("l2", 2, {"meet": (2, min), "join": (2, max)}),
        "m2": FiniteAlgebra.from_functions("m2", 2, {"m": (3, lambda x, y, z: x ^ y ^ z)}),
        "maj2": FiniteAlgebra.from_functions(
            "maj2", 2, {"maj": (3, lambda x, y, z: int(x + y + z >= 2))}
        ),
    }


@pytest.fixture(scope="session")
def zoo():
    return make_zoo()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
