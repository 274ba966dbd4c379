import numpy as np
import pytest

from metriclie import catalog


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def h3():
    return catalog.build(catalog.heisenberg())


@pytest.fixture
def affine1():
    return catalog.build(catalog.affine())


@pytest.fixture
def ex1():
    return catalog.build(catalog.indecomp5p2k(0))


@pytest.fixture
def ex2():
    return catalog.build(catalog.indecomp6p2k_type1(0))


@pytest.fixture
def ex3():
    return catalog.build(catalog.indecomp6p2k_type2(0))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
