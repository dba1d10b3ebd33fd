import sys
import os.path as osp
sys.path.insert(0, osp.dirname(osp.dirname(osp.abspath(__file__))))

import pytest

from lib.geometry.bundle import build_geometry
from lib.scheme.idempotents import build_scheme


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: q=4 constructions and long searches')


@pytest.fixture(scope='session')
def bundle2():
    return build_geometry(2)


@pytest.fixture(scope='session')
def bundle3():
    return build_geometry(3)


@pytest.fixture(scope='session')
def scheme2(bundle2):
    return build_scheme(bundle2)


@pytest.fixture(scope='session')
def scheme3(bundle3):
    return build_scheme(bundle3)
