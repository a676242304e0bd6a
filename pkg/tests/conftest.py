import logging

import pytest

from app.lattice import OrderService
from app.theta import NewformService


@pytest.fixture(autouse=True)
def reset_logging():
    """The CLI installs its own stream handler; drop it once a test is done."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)


@pytest.fixture
def split_order():
    return OrderService.build_order(1, 1)


@pytest.fixture
def hurwitz_order():
    return OrderService.build_order(2, 1)


@pytest.fixture(scope="session")
def delta():
    return NewformService.delta_qexp()
