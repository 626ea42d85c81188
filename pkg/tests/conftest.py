import os
import random

import pytest

from torictate.linalg import GF, QQ
from torictate import toric


def seed():
    return int(os.environ.get("TATE_SEED", "20240601"))


@pytest.fixture
def rng():
    return random.Random(seed())


@pytest.fixture
def gf():
    return GF()


@pytest.fixture
def qq():
    return QQ()


@pytest.fixture
def p1():
    return toric.projective_space(1)


@pytest.fixture
def p2():
    return toric.projective_space(2)


@pytest.fixture
def p12():
    return toric.weighted_projective(1, 2)


@pytest.fixture
def p112():
    return toric.weighted_projective(1, 1, 2)


@pytest.fixture
def p156():
    return toric.weighted_projective(1, 5, 6)


@pytest.fixture
def hirz3():
    return toric.hirzebruch(3)


@pytest.fixture
def hirz1():
    return toric.hirzebruch(1)


@pytest.fixture
def p1p1():
    return toric.p1xp1()
