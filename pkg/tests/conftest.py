import sys
from pathlib import Path

import pytest

from kemeny_mrp import make_spec
from kemeny_mrp.ctmc import BirthDeathParams, bd_generator, mrp_from_generator, validate_generator

# lets test modules import the sibling helpers (oracles, strategies)
sys.path.insert(0, str(Path(__file__).parent))

EX1_P = [[0.5, 0.5], [0.25, 0.75]]
EX1_MU = [2.0, 4.0]


@pytest.fixture
def mrp2():
    return make_spec(EX1_P, mu=EX1_MU)


@pytest.fixture
def ctmc2_gen():
    return validate_generator([[-1.0, 1.0], [2.0, -2.0]])


@pytest.fixture
def bd3_gen():
    return bd_generator(BirthDeathParams((1, 2), (1, 2)))


@pytest.fixture
def bd3(bd3_gen):
    return mrp_from_generator(bd3_gen)
