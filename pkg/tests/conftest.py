import pytest

from sturmspec import (BoundaryParams, CoefficientSet, ConstantFunction,
                       SolverSettings, make_problem)
from sturmspec import heleshaw


@pytest.fixture(scope="session")
def settings():
    return SolverSettings()


@pytest.fixture(scope="session")
def tight():
    return SolverSettings(rel_tol=1e-13, abs_tol=1e-15)


@pytest.fixture(scope="session")
def table1_k1():
    return heleshaw.build_slp(heleshaw.TABLE1, 1.0)


def constant_problem(p=1.0, q=1.0, r=1.0, L=1.0, bc=(1.0, 1.0, -1.0, 1.0)):
    coeffs = CoefficientSet(ConstantFunction(p), ConstantFunction(q),
                            ConstantFunction(r), L)
    return make_problem(coeffs, BoundaryParams(*bc))


@pytest.fixture(scope="session")
def unit_problem():
    return constant_problem()



def pytest_terminal_summary(terminalreporter):
    from _acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
