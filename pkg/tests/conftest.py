import numpy as np
import pytest

from dsfprobe import solve_eos


@pytest.fixture(scope="session")
def point_bcs():
    return solve_eos(-0.5)


@pytest.fixture(scope="session")
def point_uni():
    return solve_eos(0.0)


@pytest.fixture(scope="session")
def point_bec():
    return solve_eos(1.0)
