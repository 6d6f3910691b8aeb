import pytest

from conifold.corpus import corpus
from conifold.lattice import CycleConfig, IntersectionLattice, qvec

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def sympl4():
    return IntersectionLattice.standard_symplectic(2)


@pytest.fixture(scope="session")
def a2(sympl4):
    # <e1, e3> = 1
    return CycleConfig(sympl4, (qvec([1, 0, 0, 0]), qvec([0, 0, 1, 0])))


@pytest.fixture(scope="session")
def a1xa1(sympl4):
    return CycleConfig(sympl4, (qvec([1, 0, 0, 0]), qvec([0, 1, 0, 0])))


@pytest.fixture(scope="session")
def single_node(sympl4):
    return CycleConfig(sympl4, (qvec([1, 0, 0, 0]),))


@pytest.fixture(scope="session")
def lambda2(sympl4):
    return CycleConfig(sympl4, (qvec([1, 0, 0, 0]), qvec([0, 0, 2, 0])))


@pytest.fixture(scope="session")
def random_corpus():
    return corpus(seed=20261018, size=200)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
