# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Quadratic residue symbols and quadratic Hecke characters of Q(i).

Provides the Euler-criterion oracle and the reciprocity algorithm for (a/n), the
characters psi_j of the group generated by (i/.), ((1+i)/.) and the mod 2 character
psi_2, the primitive character inducing chi_n * psi_j, and :class:`SymbolTable`, the
vectorised evaluation of (x/c) that batches character values over many x.
"""

import functools
import logging
import typing
from dataclasses import dataclass

import numpy as np

from zi_core import (
    ONE,
    ONE_PLUS_I,
    UNITS,
    EvenArgumentError,
    GaussianInt,
    GaussianLike,
    NotPrimaryError,
    classify_type,
    factor,
    gcd,
    is_primary,
    normalize_primary,
    residue_index,
    residue_representatives,
    squarefree_decompose,
)

logger = logging.getLogger(__name__)

PSI_LABELS = ("1", "i", "1+i", "i(1+i)")
# psi_i ** e_i * psi_{1+i} ** e_t for each label
_PSI_EXPONENTS = {"1": (0, 0), "i": (1, 0), "1+i": (0, 1), "i(1+i)": (1, 1)}
_MODULUS_TWO_EXP = {
    # (kernel type, psi label) -> exponent k of (1+i) in the modulus (1+i)**k * c1
    (1, "1"): 0,
    (1, "i"): 4,
    (1, "1+i"): 5,
    (1, "i(1+i)"): 5,
    (2, "1"): 2,
    (2, "i"): 4,
    (2, "1+i"): 5,
    (2, "i(1+i)"): 5,
}


class SymbolRecursionError(RuntimeError):
    """The reciprocity loop exceeded its depth cap (an internal invariant failed)."""


class ImprimitiveCharacterError(ValueError):
    """An operation that needs a primitive character received an imprimitive one."""


def _require_odd(n: GaussianInt) -> None:
    if not n or not n.is_odd():
        raise EvenArgumentError(f"lower argument {n} is not odd")


def _residue_power(base: GaussianInt, exponent: int, modulus: GaussianInt) -> GaussianInt:
    result = ONE
    base = base % modulus
    while exponent:
        if exponent & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        exponent >>= 1
    return result


def quad_symbol_naive(a: GaussianLike, n: GaussianLike) -> int:
    """(a/n) by Euler's criterion at every prime power dividing n.

    This is the slow reference evaluation.
    """
    a, n = GaussianInt.coerce(a), GaussianInt.coerce(n)
    _require_odd(n)
    result = 1
    for prime, exponent in factor(n).factors:
        power = _residue_power(a, (prime.norm() - 1) // 2, prime)
        if not power:
            return 0
        if power == ONE:
            continue
        # the only other possibility is -1 modulo the prime
        if exponent % 2:
            result = -result
    return result


def symbol_i(n: GaussianInt) -> int:
    """(i/n) for primary n = a+bi: (-1)**((1-a)/2)."""
    return -1 if ((1 - n.re) // 2) % 2 else 1


def symbol_one_plus_i(n: GaussianInt) -> int:
    """((1+i)/n) for primary n = a+bi: (-1)**((a-b-1-b**2)/4)."""
    a, b = n.re, n.im
    return -1 if ((a - b - 1 - b * b) // 4) % 2 else 1


def quad_symbol(a: GaussianLike, n: GaussianLike) -> int:
    """(a/n) by quadratic reciprocity and the supplementary laws."""
    a, n = GaussianInt.coerce(a), GaussianInt.coerce(n)
    _require_odd(n)
    n = normalize_primary(n)[1]
    depth_cap = 10 * max(1, n.norm().bit_length()) + 10
    result = 1
    for _ in range(depth_cap):
        if n == ONE:
            return result
        a = a % n
        if not a:
            return 0
        two_exp = 0
        while not a.is_odd():
            a = a * GaussianInt(1, -1)
            a = GaussianInt(a.re // 2, a.im // 2)
            two_exp += 1
        if two_exp % 2 and symbol_one_plus_i(n) < 0:
            result = -result
        unit, a = normalize_primary(a)
        if UNITS.index(unit) % 2 and symbol_i(n) < 0:
            result = -result
        a, n = n, a
    raise SymbolRecursionError(f"reciprocity recursion exceeded {depth_cap} steps")


def chi_m(m: GaussianLike, a: GaussianLike) -> int:
    """chi_m(a) = (m/a), the quadratic character of twist m at an odd argument a."""
    return quad_symbol(m, a)


def psi_2(x: GaussianInt) -> int:
    """The character modulo 2 with psi_2(x) = -1 exactly when x = i (mod 2)."""
    _require_odd(x)
    return -1 if x.re % 2 == 0 else 1


def psi(label: str, x: GaussianLike) -> int:
    """Evaluate psi_j, j in {1, i, 1+i, i(1+i)}, at an odd element."""
    x = GaussianInt.coerce(x)
    _require_odd(x)
    e_i, e_t = _psi_exponents(label)
    primary = normalize_primary(x)[1]
    value = 1
    if e_i:
        value *= symbol_i(primary)
    if e_t:
        value *= symbol_one_plus_i(primary)
    return value


def psi_product(first: str, second: str) -> str:
    """Group law of the psi_j: the label of psi_first * psi_second."""
    e1, e2 = _psi_exponents(first), _psi_exponents(second)
    combined = ((e1[0] + e2[0]) % 2, (e1[1] + e2[1]) % 2)
    return next(label for label, exps in _PSI_EXPONENTS.items() if exps == combined)


def _psi_exponents(label: str) -> typing.Tuple[int, int]:
    try:
        return _PSI_EXPONENTS[label]
    except KeyError:
        raise ValueError(f"unknown psi index {label!r}, expected one of {PSI_LABELS}") from None


def psi_label(unit_exp: int, two_exp: int) -> str:
    """Label of psi_i**unit_exp * psi_{1+i}**two_exp."""
    combined = (unit_exp % 2, two_exp % 2)
    return next(label for label, exps in _PSI_EXPONENTS.items() if exps == combined)


def psi_primary_array(label: str, re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """psi_j at arrays of primary elements (int8 values)."""
    e_i, e_t = _psi_exponents(label)
    values = np.ones(np.shape(re), dtype=np.int8)
    if e_i:
        values *= np.where(((1 - re) // 2) % 2 == 1, -1, 1).astype(np.int8)
    if e_t:
        values *= np.where(((re - im - 1 - im * im) // 4) % 2 == 1, -1, 1).astype(np.int8)
    return values


@functools.lru_cache(maxsize=4096)
def _legendre_table(p: int) -> np.ndarray:
    table = -np.ones(p, dtype=np.int8)
    squares = (np.arange(1, p, dtype=np.int64) ** 2) % p
    table[squares] = 1
    table[0] = 0
    table.flags.writeable = False
    return table


@functools.lru_cache(maxsize=8192)
def prime_symbol_table(prime: GaussianInt) -> np.ndarray:
    """(x/prime) for x running over the lattice residue classes of a primary prime."""
    if prime.im == 0:
        q = -prime.re
        re, im = residue_representatives(prime)
        values = _legendre_table(q)[(re * re + im * im) % q]
    else:
        p = prime.norm()
        re, _ = residue_representatives(prime)
        values = _legendre_table(p)[re % p]
    values = np.ascontiguousarray(values, dtype=np.int8)
    values.flags.writeable = False
    return values


def prime_symbol(prime: GaussianInt, re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Vectorised (x/prime) for a primary prime."""
    return prime_symbol_table(prime)[residue_index(re, im, prime)]


class SymbolTable:
    """Vectorised (x/c) for arrays of Gaussian integers x and a fixed odd c."""

    def __init__(self, c: GaussianLike):
        c = GaussianInt.coerce(c)
        _require_odd(c)
        self.modulus = normalize_primary(c)[1]
        self._factors = factor(self.modulus).factors

    def __call__(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """Symbol values at arrays of real and imaginary parts."""
        re = np.asarray(re, dtype=np.int64)
        values = np.ones(re.shape, dtype=np.int8)
        for prime, exponent in self._factors:
            local = prime_symbol(prime, re, im)
            if exponent % 2:
                values *= local
            else:
                values *= local * local
        return values

    def at(self, x: GaussianLike) -> int:
        """(x/c) at a single element."""
        x = GaussianInt.coerce(x)
        return int(self(np.array([x.re]), np.array([x.im]))[0])


@dataclass(frozen=True)
class QuadraticCharacter:
    """psi_j * [psi_2] * (./kernel), a real Hecke character of trivial infinite type.

    ``kernel`` is the squarefree part c1 of the twist, ``psi_component`` the label of
    psi_j, and the psi_2 factor is present exactly when the kernel is of type 2.
    """

    kernel: GaussianInt
    psi_component: str
    modulus: GaussianInt
    is_primitive: bool
    twist_label: GaussianInt

    @property
    def kernel_type(self) -> int:
        """Type 1 or 2 of the kernel, read off its coordinates mod 4."""
        return classify_type(self.kernel)

    @property
    def uses_psi_2(self) -> bool:
        """True when the kernel is of type 2 and the psi_2 factor is present."""
        return self.kernel_type == 2

    @property
    def modulus_two_exp(self) -> int:
        """Exponent of 1+i in the modulus."""
        return _MODULUS_TWO_EXP[(self.kernel_type, self.psi_component)]

    @property
    def conductor_norm(self) -> int:
        """N(modulus), the norm of the conductor for a primitive character."""
        return self.modulus.norm()

    @property
    def is_trivial(self) -> bool:
        """True for the principal character."""
        return self.kernel == ONE and self.psi_component == "1"

    def __call__(self, x: GaussianLike) -> int:
        """Value at an odd element; even arguments are rejected."""
        x = GaussianInt.coerce(x)
        return self.psi_part(x) * quad_symbol(x, self.kernel)

    def psi_part(self, x: GaussianLike) -> int:
        """The 2-adic part psi_j * [psi_2] at an odd element."""
        x = GaussianInt.coerce(x)
        value = psi(self.psi_component, x)
        if self.uses_psi_2:
            value *= psi_2(x)
        return value

    def value_at_one_plus_i(self) -> int:
        """Value on the prime ideal (1+i): zero unless the modulus is odd."""
        if self.modulus_two_exp:
            return 0
        return quad_symbol(ONE_PLUS_I, self.kernel)

    def value_at_prime(self, prime: GaussianInt) -> int:
        """Value on the ideal of a primary prime (or of 1+i)."""
        if prime == ONE_PLUS_I:
            return self.value_at_one_plus_i()
        return self(prime)

    def values_at_primary(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """Vectorised values at arrays of primary elements."""
        values = psi_primary_array(self.psi_component, re, im)
        if self.kernel != ONE:
            values = values * SymbolTable(self.kernel)(re, im)
        return values

    def to_json(self) -> typing.Dict[str, typing.Any]:
        """JSON object with kernel, psi, modulus, primitive and twist."""
        return {
            "kernel": self.kernel.to_json(),
            "psi": self.psi_component,
            "modulus": self.modulus.to_json(),
            "primitive": self.is_primitive,
            "twist": self.twist_label.to_json(),
        }

    @classmethod
    def from_json(cls, data: typing.Dict[str, typing.Any]) -> "QuadraticCharacter":
        """Inverse of to_json; a missing twist defaults to the kernel."""
        return cls(
            kernel=GaussianInt.from_json(data["kernel"]),
            psi_component=data["psi"],
            modulus=GaussianInt.from_json(data["modulus"]),
            is_primitive=bool(data["primitive"]),
            twist_label=GaussianInt.from_json(data.get("twist", data["kernel"])),
        )


def primitive_inducing(n: GaussianLike, j: str = "1") -> QuadraticCharacter:
    """The primitive character inducing chi_n * psi_j for primary n."""
    n = GaussianInt.coerce(n)
    if not is_primary(n):
        raise NotPrimaryError(f"{n} is not primary")
    _psi_exponents(j)
    c1, _ = squarefree_decompose(n)
    two_exp = _MODULUS_TWO_EXP[(classify_type(c1), j)]
    character = QuadraticCharacter(
        kernel=c1,
        psi_component=j,
        modulus=ONE_PLUS_I**two_exp * c1,
        is_primitive=True,
        twist_label=n,
    )
    logger.debug(f"primitive character for chi_{n} * psi_{j}: modulus {character.modulus}")
    return character


@dataclass(frozen=True)
class TwistDecomposition:
    """m = i**unit_exp * (1+i)**two_exp * odd with odd primary."""

    unit_exp: int
    two_exp: int
    odd: GaussianInt

    @property
    def psi_component(self) -> str:
        """Label of psi_j for the unit and (1+i)-power of the twist."""
        return psi_label(self.unit_exp, self.two_exp)


def decompose_twist(m: GaussianLike) -> TwistDecomposition:
    """Split a nonzero twist into its unit, (1+i)-power and primary odd part."""
    m = GaussianInt.coerce(m)
    if not m:
        raise ValueError("the zero twist defines no character")
    two_exp = 0
    while not m.is_odd():
        m = m * GaussianInt(1, -1)
        m = GaussianInt(m.re // 2, m.im // 2)
        two_exp += 1
    unit, odd = normalize_primary(m)
    return TwistDecomposition(UNITS.index(unit), two_exp, odd)


def twist_character(m: GaussianLike) -> QuadraticCharacter:
    """The primitive character agreeing with chi_m at primary arguments coprime to m."""
    parts = decompose_twist(m)
    character = primitive_inducing(parts.odd, parts.psi_component)
    return QuadraticCharacter(
        kernel=character.kernel,
        psi_component=character.psi_component,
        modulus=character.modulus,
        is_primitive=True,
        twist_label=GaussianInt.coerce(m),
    )


def conductor_bruteforce(values: typing.Callable[[GaussianInt], int], modulus: GaussianInt) -> int:
    """Norm of the smallest modulus dividing ``modulus`` through which a character factors.

    The character (given on odd elements coprime to ``modulus``) factors through a
    divisor d when it takes equal values on classes congruent modulo d. Exhaustive over
    the divisors of the form (1+i)**k * (primary divisor).
    """
    re, im = residue_representatives(modulus)
    residues = [GaussianInt(a, b) for a, b in zip(re.tolist(), im.tolist())]
    table = {}
    for x in residues:
        if x.is_odd() and _coprime(x, modulus):
            table[x] = values(x)
    best = modulus.norm()
    for divisor in _divisors(modulus):
        if divisor.norm() >= best:
            continue
        if _factors_through(table, divisor):
            best = divisor.norm()
    return best


def _coprime(x: GaussianInt, modulus: GaussianInt) -> bool:
    return gcd(x, modulus).norm() == 1


def _divisors(modulus: GaussianInt) -> typing.List[GaussianInt]:
    parts = factor(modulus)
    divisors = [ONE_PLUS_I**k for k in range(parts.two_exp + 1)]
    for prime, exponent in parts.factors:
        divisors = [d * prime**e for d in divisors for e in range(exponent + 1)]
    return divisors


def _factors_through(table: typing.Dict[GaussianInt, int], divisor: GaussianInt) -> bool:
    seen: typing.Dict[GaussianInt, int] = {}
    for x, value in table.items():
        key = x % divisor if divisor.norm() > 1 else GaussianInt(0)
        if seen.setdefault(key, value) != value:
            return False
    return True

