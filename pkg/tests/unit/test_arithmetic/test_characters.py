# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Unit tests for residue symbols and quadratic Hecke characters."""

import numpy as np
import pytest

from characters import (
    PSI_LABELS,
    QuadraticCharacter,
    SymbolTable,
    chi_m,
    conductor_bruteforce,
    decompose_twist,
    primitive_inducing,
    psi,
    psi_product,
    quad_symbol,
    quad_symbol_naive,
    symbol_i,
    symbol_one_plus_i,
    twist_character,
)
from zi_core import (
    I_UNIT,
    ONE,
    ONE_PLUS_I,
    UNITS,
    EvenArgumentError,
    GaussianInt,
    NotPrimaryError,
    gcd,
    is_squarefree,
)


@pytest.mark.parametrize(
    "a, n, expected",
    [
        (I_UNIT, GaussianInt(-1, 2), -1),
        (I_UNIT, GaussianInt(3, 2), -1),
        (ONE_PLUS_I, GaussianInt(3, 2), -1),
        (GaussianInt(-1, 2), GaussianInt(-1, 2), 0),
        (GaussianInt(7, 3), ONE, 1),
    ],
)
def test_symbol_examples(a, n, expected):
    """Known symbols agree under both evaluations."""
    assert quad_symbol(a, n) == expected
    assert quad_symbol_naive(a, n) == expected


def test_even_lower_argument_is_rejected():
    """The symbol needs an odd lower argument."""
    with pytest.raises(EvenArgumentError):
        quad_symbol(GaussianInt(3), GaussianInt(2))
    with pytest.raises(EvenArgumentError):
        quad_symbol_naive(GaussianInt(3), ONE_PLUS_I)


def test_squares_are_residues(rng, random_primary):
    """Squares coprime to n have symbol 1."""
    for _ in range(200):
        n = random_primary(10**4)
        x = GaussianInt(rng.randrange(-100, 100), rng.randrange(-100, 100))
        if gcd(x, n) != ONE or not x:
            continue
        assert quad_symbol(x * x, n) == 1


def test_fast_symbol_matches_euler_criterion(rng, random_primary):
    """The reciprocity algorithm agrees with Euler's criterion."""
    for _ in range(1000):
        n = random_primary(5000)
        a = GaussianInt(rng.randrange(-10**4, 10**4), rng.randrange(-10**4, 10**4))
        assert quad_symbol(a, n) == quad_symbol_naive(a, n)


def test_reciprocity_exhaustive(small_primary):
    """Coprime primary pairs of small norm satisfy reciprocity."""
    for m in small_primary:
        for n in small_primary:
            if gcd(m, n) == ONE:
                assert quad_symbol(m, n) == quad_symbol(n, m)


def test_reciprocity_random(random_primary):
    """Random coprime primary pairs satisfy reciprocity."""
    for _ in range(500):
        m, n = random_primary(10**6), random_primary(10**6)
        if gcd(m, n) == ONE:
            assert quad_symbol(m, n) == quad_symbol(n, m)


def test_periodicity(rng, random_primary):
    """The symbol depends on the upper argument mod n only."""
    for _ in range(200):
        n = random_primary(2000)
        a = GaussianInt(rng.randrange(-50, 50), rng.randrange(-50, 50))
        t = GaussianInt(rng.randrange(-50, 50), rng.randrange(-50, 50))
        assert quad_symbol(a, n) == quad_symbol(a + n * t, n)


def test_supplementary_laws(small_primes):
    """Closed forms for (i/p) and ((1+i)/p)."""
    for prime in small_primes:
        assert symbol_i(prime) == quad_symbol_naive(I_UNIT, prime)
        assert symbol_one_plus_i(prime) == quad_symbol_naive(ONE_PLUS_I, prime)


def test_chi_m_is_multiplicative(rng, random_primary):
    """chi_m is multiplicative in its argument."""
    m = GaussianInt(-7, 10)
    assert chi_m(m, ONE) == 1
    for _ in range(100):
        a, b = random_primary(500), random_primary(500)
        assert chi_m(m, a) * chi_m(m, b) == chi_m(m, a * b)
    n = GaussianInt(3, 2)
    for _ in range(50):
        a = random_primary(500)
        assert chi_m(ONE_PLUS_I**2 * n, a) == quad_symbol(2 * I_UNIT, a) * quad_symbol(n, a)


def test_symbol_table_matches_scalar(rng, random_primary):
    """Vectorised symbols agree with quad_symbol."""
    for _ in range(20):
        c = random_primary(3000)
        table = SymbolTable(c)
        re = np.array([rng.randrange(-300, 300) for _ in range(40)])
        im = np.array([rng.randrange(-300, 300) for _ in range(40)])
        values = table(re, im)
        expected = [quad_symbol(GaussianInt(a, b), c) for a, b in zip(re.tolist(), im.tolist())]
        assert values.tolist() == expected


def test_psi_group_law():
    """The psi labels form a group of exponent two."""
    assert psi_product("i", "i(1+i)") == "1+i"
    assert psi_product("1+i", "i(1+i)") == "i"
    for label in PSI_LABELS:
        assert psi_product(label, label) == "1"
        assert psi_product("1", label) == label


def test_psi_one_plus_i_witnesses_its_modulus():
    """psi_(1+i) has conductor (1+i)**5."""
    assert psi("1+i", GaussianInt(5)) == -1
    assert conductor_bruteforce(lambda x: psi("1+i", x), ONE_PLUS_I**5) == 32


def test_psi_i_has_modulus_four():
    """psi_i has conductor 4."""
    modulus = GaussianInt(4)
    assert conductor_bruteforce(lambda x: psi("i", x), modulus) == 16


def test_psi_rejects_unknown_label():
    """Unknown psi labels raise ValueError."""
    with pytest.raises(ValueError):
        psi("2", GaussianInt(1))


def test_trivial_character():
    """The twist 1 gives the principal character."""
    character = primitive_inducing(ONE)
    assert character.is_trivial
    assert character.modulus == ONE


@pytest.mark.parametrize(
    "n, j, modulus_norm",
    [
        (GaussianInt(-1, 2), "1", 20),
        (GaussianInt(-1, 2), "i", 80),
        (GaussianInt(-3), "1", 9),
        (GaussianInt(-3), "i", 144),
        (GaussianInt(-3), "1+i", 288),
        (GaussianInt(3, 2), "i(1+i)", 416),
    ],
)
def test_primitive_inducing_modulus(n, j, modulus_norm):
    """Conductor norms by kernel type and psi component."""
    character = primitive_inducing(n, j)
    assert character.modulus.norm() == modulus_norm
    assert character.is_primitive


def test_primitive_inducing_rejects_non_primary():
    """Twists must be primary."""
    with pytest.raises(NotPrimaryError):
        primitive_inducing(GaussianInt(1, -2))


def test_primitive_inducing_agrees_with_twist(rng, random_primary):
    """The primitive character agrees with chi_n psi_j away from the modulus."""
    for _ in range(20):
        n = random_primary(2000)
        j = rng.choice(PSI_LABELS)
        character = primitive_inducing(n, j)
        for _ in range(30):
            x = GaussianInt(rng.randrange(-200, 200), rng.randrange(-200, 200))
            if not x.is_odd() or gcd(x, n) != ONE:
                continue
            assert character(x) == psi(j, x) * quad_symbol(n, x)


def test_character_is_trivial_on_units(random_primary):
    """Characters are trivial on the units."""
    for _ in range(30):
        n = random_primary(3000)
        for j in PSI_LABELS:
            character = primitive_inducing(n, j)
            assert all(character(u) == 1 for u in UNITS)


def test_character_is_multiplicative(rng, random_primary):
    """chi(ab) = chi(a) chi(b)."""
    character = primitive_inducing(GaussianInt(-1, 2) * GaussianInt(-3), "i")
    for _ in range(100):
        a, b = random_primary(400), random_primary(400)
        assert character(a) * character(b) == character(a * b)


def test_character_vanishes_off_the_modulus():
    """Elements sharing a factor with the modulus map to 0."""
    character = primitive_inducing(GaussianInt(-1, 2))
    assert character(GaussianInt(-1, 2)) == 0
    assert character.value_at_one_plus_i() == 0


def test_primitive_characters_are_primitive(random_primary):
    """Brute-force conductors match the computed moduli."""
    for _ in range(4):
        n = random_primary(30)
        character = primitive_inducing(n, "i")
        if not is_squarefree(n):
            continue
        assert conductor_bruteforce(character, character.modulus) == character.conductor_norm


def test_character_json_round_trip():
    """to_json and from_json are inverse."""
    character = primitive_inducing(GaussianInt(3, 2) * GaussianInt(-3), "1+i")
    data = character.to_json()
    assert data["psi"] == "1+i"
    assert QuadraticCharacter.from_json(data) == character


def test_decompose_twist():
    """A twist splits into unit, (1+i)-power and odd primary part."""
    m = I_UNIT * ONE_PLUS_I**3 * GaussianInt(-1, 2)
    parts = decompose_twist(m)
    assert parts.two_exp == 3
    assert parts.odd == GaussianInt(-1, 2)
    with pytest.raises(ValueError):
        decompose_twist(GaussianInt(0))


def test_twist_character_of_family_member():
    """Twists (1+i)**2 n of the family induce chi_n."""
    n = GaussianInt(3, 2)
    character = twist_character(ONE_PLUS_I**2 * n)
    assert character.kernel == n
    assert character.twist_label == ONE_PLUS_I**2 * n
