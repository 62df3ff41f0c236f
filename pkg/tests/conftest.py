import random

import pytest

from folproof.corpus import SIGNATURE, DeductionGen, FormulaGen
from folproof.syntax import Signature


@pytest.fixture
def sig():
    return Signature(constants=("c",), functions=(("f", 1),),
                     relations=(("P", 0), ("Q", 1), ("R", 1), ("S", 2), ("A", 0), ("B", 0)))


@pytest.fixture
def prop_sig():
    return Signature(relations=(("P", 0), ("Q", 0), ("A", 0)))


@pytest.fixture
def corpus_sig():
    return SIGNATURE


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture
def dgen(rng):
    return DeductionGen(rng)


@pytest.fixture
def fgen(rng):
    return FormulaGen(rng)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
