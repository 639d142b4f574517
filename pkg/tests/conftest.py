from __future__ import annotations

from pathlib import Path

import pytest

from pcm.dsl import load_spec
from pcm.exact import Scalar
from pcm.model import make_spec

ROOT = Path(__file__).resolve().parents[1]
SPECS = ROOT / "specs"
GOLDEN = Path(__file__).resolve().parent / "golden"

PHI = {0: [0, 1, 0], 1: [1, 0, 0]}


def f1(alpha=None, beta=None):
    """F1 with symbolic alpha/beta unless given; substituted params are dropped."""
    spec = load_spec(str(SPECS / "ss_example.pcm"))
    sub = {k: v for k, v in (("alpha", alpha), ("beta", beta)) if v is not None}
    return spec.substitute(sub) if sub else spec


def f2(b=None, c=None):
    if b is None and c is None:
        return load_spec(str(SPECS / "f2.pcm"))
    return make_spec("f2", 3, (), {(0, 1): [0, 0, -2], (0, 2): [0, b, 0], (1, 2): [c, 0, 0]},
                     [1, -1, 1], PHI, [0, 0, 1])


def x_branch(r=-2):
    """Paracontact spec with [E1,E2] = E1 - 2E3, [E2,E3] = r E1 (outside the F2 shape)."""
    return make_spec("x-branch", 3, (), {(0, 1): [1, 0, -2], (1, 2): [r, 0, 0]}, [1, -1, 1], PHI, [0, 0, 1])


@pytest.fixture
def F1():
    return f1()


@pytest.fixture
def F1m2():
    """F1(-2, beta), beta symbolic."""
    return f1(alpha=-2)


@pytest.fixture
def F1_0():
    return f1(-2, 0)


@pytest.fixture
def F2star():
    return load_spec(str(SPECS / "f2_star.pcm"))


@pytest.fixture
def F2sym():
    return f2()


@pytest.fixture
def abelian():
    return load_spec(str(SPECS / "abelian.pcm"))


@pytest.fixture
def heis5():
    return load_spec(str(SPECS / "heisenberg5.pcm"))


def sym(name, params):
    return Scalar.var(name, params)


# -- acceptance summary -------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
