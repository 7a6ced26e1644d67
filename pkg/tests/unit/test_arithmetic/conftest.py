import random

import pytest

from zi_core import GaussianInt, enumerate_primary, primary_primes


@pytest.fixture
def rng():
    return random.Random(20260101)


@pytest.fixture(scope="session")
def small_primary():
    """Primary elements of norm <= 200."""
    return list(enumerate_primary(200))


@pytest.fixture(scope="session")
def small_primes():
    """Primary primes of norm <= 500."""
    return primary_primes(500)


@pytest.fixture
def random_primary(rng):
    """Draw primary elements of norm <= max_norm from the seeded generator."""

    def draw(max_norm):
        radius = int(max_norm**0.5)
        while True:
            a = rng.randrange(-radius, radius + 1)
            b = rng.randrange(-radius, radius + 1)
            n = GaussianInt(a, b)
            if n.norm() <= max_norm and ((a % 4, b % 4) in ((1, 0), (3, 2))):
                return n

    return draw
