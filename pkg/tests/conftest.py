import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tgf import formats
from tgf.ladder import case1, case2


@pytest.fixture(scope="session")
def table1():
    return formats.load_fixture_table(1)


@pytest.fixture(scope="session")
def table2():
    return formats.load_fixture_table(2)


@pytest.fixture(scope="session")
def bounds1():
    return formats.load_fixture_bounds(1)


@pytest.fixture(scope="session")
def bounds2():
    return formats.load_fixture_bounds(2)


@pytest.fixture(scope="session")
def gen_case1():
    return case1()


@pytest.fixture(scope="session")
def gen_case2():
    return case2()
