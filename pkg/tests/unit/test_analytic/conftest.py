import random

import mpmath
import pytest

from asymptotics import weight
from characters import primitive_inducing
from zi_core import GaussianInt


@pytest.fixture
def rng():
    return random.Random(20260102)


@pytest.fixture
def exp_decay():
    return weight("exp_decay")


@pytest.fixture(params=["1", "i", "1+i", "i(1+i)"])
def small_character(request):
    """Primitive characters psi_j (./(-1+2i)) of small conductor."""
    return primitive_inducing(GaussianInt(-1, 2), request.param)


@pytest.fixture
def zeta_oracle():
    """zeta_K(s) = zeta(s) L(s, chi_-4) through Hurwitz zeta values."""

    def evaluate(s):
        with mpmath.workdps(30):
            s = mpmath.mpmathify(s)
            hurwitz = mpmath.zeta(s, 0.25) - mpmath.zeta(s, 0.75)
            return complex(mpmath.zeta(s) * hurwitz / mpmath.power(4, s))

    return evaluate
