from __future__ import annotations

import functools
import sys

import pytest

from aara import corpus
from aara.frontend import load_file
from aara.potential import BasisConfig

STIRLING1 = BasisConfig("stirling", exp_degree=1)
STIRLING2 = BasisConfig("stirling", exp_degree=2)
BINOMIAL1 = BasisConfig("binomial", poly_degree=1)
MIXED = BasisConfig("mixed", poly_degree=1, exp_degree=1)
MIXED_DEMOTED = BasisConfig("mixed", poly_degree=1, exp_degree=1, demotion=True)


@functools.lru_cache(maxsize=None)
def program(name: str):
    return load_file(corpus.path(name))


@pytest.fixture
def load():
    return program


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
