import random
from fractions import Fraction

import pytest

from ayscale.field import FieldElement, ONE


@pytest.fixture
def rng():
    return random.Random(0xA11CE)


def random_element(rng, max_den=20, span=6):
    """A random field element with smallish rational coefficients."""
    def coeff():
        den = rng.randint(1, max_den)
        return Fraction(rng.randint(-span * den, span * den), den)

    return FieldElement(coeff(), coeff(), coeff())


def random_unit_point(rng, max_den=20):
    """A random element of [0, 1) with coefficient denominators <= max_den."""
    while True:
        den = rng.randint(1, max_den)
        x = FieldElement(
            Fraction(rng.randrange(den), den),
            Fraction(rng.randrange(den), den),
            Fraction(rng.randrange(den), den),
        )
        if x.sign() >= 0 and (x - ONE).sign() < 0:
            return x
