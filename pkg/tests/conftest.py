import pytest

from ordercomplex.fields import gf_make
from ordercomplex.groups import build_pgl2, build_psl2, build_psl2_8_ext3, quaternion, symmetric4
from ordercomplex.lattice import all_subgroups


@pytest.fixture(scope="session")
def a5():
    g = build_psl2(gf_make(2, 2))
    return g, all_subgroups(g)


@pytest.fixture(scope="session")
def s4():
    g = symmetric4()
    return g, all_subgroups(g)


@pytest.fixture(scope="session")
def q8():
    g = quaternion()
    return g, all_subgroups(g)


@pytest.fixture(scope="session")
def pgl2_9():
    g = build_pgl2(gf_make(3, 2))
    return g, all_subgroups(g)


@pytest.fixture(scope="session")
def psl2_8_ext3():
    g = build_psl2_8_ext3()
    return g, all_subgroups(g)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
