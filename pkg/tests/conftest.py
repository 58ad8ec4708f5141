import random

import pytest

from qbic.fields import field_make
from qbic.forms import QBicForm
from qbic.linalg import MatrixF


@pytest.fixture(scope="session")
def gf4():
    return field_make(2, 1, 2)


@pytest.fixture(scope="session")
def gf9():
    return field_make(3, 1, 2)


def random_gram(field, n, rng):
    return MatrixF(field, [[field.random_element(rng) for _ in range(n)]
                           for _ in range(n)])


def random_form(field, n, rng):
    return QBicForm(field, random_gram(field, n, rng))


def random_invertible(field, n, rng):
    while True:
        A = random_gram(field, n, rng)
        if A.is_invertible():
            return A


def rng_for(name):
    return random.Random(name)
