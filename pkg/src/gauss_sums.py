# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Quadratic Gauss sums over Z[i].

g(r, n) = sum over x mod n of (x/n) e~(r x / n), with e~(z) = exp(2 pi i Im z). The
direct sums are the reference evaluation; :func:`gauss_sum_exact` evaluates the
closed form prime power by prime power and keeps the result as an exact pair
(integer coefficient, square-root radicand).
"""

import functools
import logging
import math
import typing
from dataclasses import dataclass

import numpy as np

from characters import QuadraticCharacter, SymbolTable, prime_symbol, quad_symbol
from zi_core import (
    I_UNIT,
    ONE,
    ONE_PLUS_I,
    CapExceededError,
    EvenArgumentError,
    GaussianInt,
    GaussianLike,
    NotPrimaryError,
    factor,
    is_primary,
    residue_index,
    residue_representatives,
)

logger = logging.getLogger(__name__)

MAX_RESIDUE_NORM = 10**6

CASE_VANISHING = "l<=h odd"
CASE_PHI = "l<=h even"
CASE_MINUS_NORM = "l=h+1 even"
CASE_QUADRATIC = "l=h+1 odd"
CASE_DEEP = "l>=h+2"
PRIME_POWER_CASES = (CASE_VANISHING, CASE_PHI, CASE_MINUS_NORM, CASE_QUADRATIC, CASE_DEEP)


def e_tilde(z: typing.Union[complex, np.ndarray]) -> typing.Union[complex, np.ndarray]:
    """exp(2 pi i (z/(2i) - conj(z)/(2i))) = exp(2 pi i Im z)."""
    return np.exp(2j * np.pi * np.imag(z))


@dataclass(frozen=True)
class ResidueSystem:
    """Canonical residues modulo the lattice (q, iq): divmod remainders by q."""

    modulus: GaussianInt
    re: np.ndarray
    im: np.ndarray

    def __len__(self) -> int:
        """Number of residues, N(modulus)."""
        return len(self.re)

    @property
    def representatives(self) -> typing.List[GaussianInt]:
        """Residues as GaussianInt values."""
        return [GaussianInt(a, b) for a, b in zip(self.re.tolist(), self.im.tolist())]


def _check_cap(q: GaussianInt, cap: int = MAX_RESIDUE_NORM) -> None:
    if not q:
        raise ZeroDivisionError("residues modulo 0 are not finite")
    if q.norm() > cap:
        raise CapExceededError(f"N({q}) = {q.norm()} exceeds the residue cap {cap}")


def _reduce_arrays(
    re: np.ndarray, im: np.ndarray, q: GaussianInt
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Vectorised divmod remainder by q, ties rounded towards negative infinity."""
    c = q.norm()
    x = re * q.re + im * q.im
    y = im * q.re - re * q.im
    qx = -((c - 2 * x) // (2 * c))
    qy = -((c - 2 * y) // (2 * c))
    return re - (qx * q.re - qy * q.im), im - (qx * q.im + qy * q.re)


@functools.lru_cache(maxsize=256)
def residue_system(q: GaussianInt) -> ResidueSystem:
    """Every residue class modulo q, represented by its own divmod remainder."""
    _check_cap(q)
    radius = math.isqrt(q.norm()) + 1
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    re, im = np.meshgrid(axis, axis, indexing="ij")
    re, im = _reduce_arrays(re.ravel(), im.ravel(), q)
    pairs = np.unique(np.stack([re, im], axis=1), axis=0)
    if len(pairs) != q.norm():
        raise AssertionError(f"found {len(pairs)} residues modulo {q}, expected {q.norm()}")
    re_out = np.ascontiguousarray(pairs[:, 0])
    im_out = np.ascontiguousarray(pairs[:, 1])
    re_out.flags.writeable = False
    im_out.flags.writeable = False
    return ResidueSystem(q, re_out, im_out)


def _phase_sum(weights: np.ndarray, numerators: np.ndarray, denominator: int) -> complex:
    """Compensated sum of weights * exp(2 pi i numerators / denominator)."""
    angle = 2.0 * np.pi * (numerators % denominator) / denominator
    real = math.fsum((weights * np.cos(angle)).tolist())
    imag = math.fsum((weights * np.sin(angle)).tolist())
    return complex(real, imag)


def _require_primary(n: GaussianInt) -> None:
    if not n or not n.is_odd():
        raise EvenArgumentError(f"{n} is not odd")
    if not is_primary(n):
        raise NotPrimaryError(f"{n} is not primary")


def gauss_sum_direct(r: GaussianLike, n: GaussianLike) -> complex:
    """g(r, n) by summation over a complete residue system modulo n."""
    r, n = GaussianInt.coerce(r), GaussianInt.coerce(n)
    _require_primary(n)
    system = residue_system(n)
    weights = SymbolTable(n)(system.re, system.im).astype(np.float64)
    # Im(r x / n) = Im(r x conj(n)) / N(n)
    rx_re = r.re * system.re - r.im * system.im
    rx_im = r.re * system.im + r.im * system.re
    numerators = rx_im * n.re - rx_re * n.im
    return _phase_sum(weights, numerators, n.norm())


@dataclass(frozen=True)
class GaussSumValue:
    """coefficient * sqrt(radicand), the exact value of g(r, n) for primary n."""

    coefficient: int
    radicand: int = 1

    def __float__(self) -> float:
        """Numeric value."""
        return self.coefficient * math.sqrt(self.radicand)

    def __complex__(self) -> complex:
        """Numeric value as a complex number."""
        return complex(float(self))

    def __mul__(self, other: "GaussSumValue") -> "GaussSumValue":
        """Product of two exact values, with square factors pulled out of the radicand."""
        return _simplified(self.coefficient * other.coefficient, self.radicand * other.radicand)


def _simplified(coefficient: int, radicand: int) -> GaussSumValue:
    if coefficient == 0:
        return GaussSumValue(0, 1)
    root = math.isqrt(radicand)
    if root * root == radicand:
        return GaussSumValue(coefficient * root, 1)
    return GaussSumValue(coefficient, radicand)


@functools.lru_cache(maxsize=16384)
def _prime_powers(n: GaussianInt) -> typing.Tuple[typing.Tuple[GaussianInt, int], ...]:
    return factor(n).factors


def _valuation(r: GaussianInt, prime: GaussianInt, cap: int) -> typing.Tuple[int, GaussianInt]:
    """(min(v_prime(r), cap), r / prime**that)."""
    h = 0
    while h < cap:
        q, rem = divmod(r, prime)
        if rem:
            break
        r = q
        h += 1
    return h, r


def _prime_power_case(
    r: GaussianInt, prime: GaussianInt, depth: int
) -> typing.Tuple[str, GaussianInt, int]:
    """Case label, r / prime**h and h (capped at depth + 1) for g(r, prime**depth)."""
    if not r:
        return (CASE_PHI if depth % 2 == 0 else CASE_VANISHING), r, depth + 1
    h, rest = _valuation(r, prime, depth + 1)
    if depth <= h:
        return (CASE_PHI if depth % 2 == 0 else CASE_VANISHING), rest, h
    if depth == h + 1:
        return (CASE_MINUS_NORM if depth % 2 == 0 else CASE_QUADRATIC), rest, h
    return CASE_DEEP, rest, h


def gauss_sum_cases(r: GaussianLike, n: GaussianLike) -> typing.List[str]:
    """The prime-power case hit by each prime power of n."""
    r, n = GaussianInt.coerce(r), GaussianInt.coerce(n)
    _require_primary(n)
    return [_prime_power_case(r, prime, depth)[0] for prime, depth in _prime_powers(n)]


def gauss_sum_exact(r: GaussianLike, n: GaussianLike) -> GaussSumValue:
    """g(r, n) from the prime-power evaluations and multiplicativity in n."""
    r, n = GaussianInt.coerce(r), GaussianInt.coerce(n)
    _require_primary(n)
    coefficient, radicand = 1, 1
    for prime, depth in _prime_powers(n):
        norm = prime.norm()
        case, rest, _ = _prime_power_case(r, prime, depth)
        if case in (CASE_VANISHING, CASE_DEEP):
            return GaussSumValue(0, 1)
        if case == CASE_PHI:
            coefficient *= norm ** (depth - 1) * (norm - 1)
        elif case == CASE_MINUS_NORM:
            coefficient *= -(norm ** (depth - 1))
        else:
            coefficient *= quad_symbol(I_UNIT * rest, prime) * norm ** (depth - 1)
            radicand *= norm
    return _simplified(coefficient, radicand)


def gauss_sum_fast(r: GaussianLike, n: GaussianLike) -> complex:
    """g(r, n) in closed form, materialised as a complex number."""
    return complex(gauss_sum_exact(r, n))


def _twist_prefactor(r: GaussianInt, j: int, c: GaussianInt) -> int:
    if j not in (1, 2):
        raise ValueError(f"psi index must be 1 or 2, got {j}")
    sign_im = -1 if r.im % 2 else 1
    sign_re = -1 if (r.re + j - 1) % 2 else 1
    return quad_symbol(I_UNIT, c) * (sign_im + sign_re)


def gauss_sum_twisted(r: GaussianLike, j: int, c: GaussianLike) -> complex:
    """g(r, psi_j (./c)) over residues mod 2c, for j in {1, 2}."""
    r, c = GaussianInt.coerce(r), GaussianInt.coerce(c)
    _require_primary(c)
    prefactor = _twist_prefactor(r, j, c)
    if not prefactor:
        return 0j
    return prefactor * gauss_sum_fast(r, c)


def gauss_sum_twisted_direct(r: GaussianLike, j: int, c: GaussianLike) -> complex:
    """g(r, psi_j (./c)) by direct summation over residue_system(2c)."""
    r, c = GaussianInt.coerce(r), GaussianInt.coerce(c)
    _require_primary(c)
    if j not in (1, 2):
        raise ValueError(f"psi index must be 1 or 2, got {j}")
    q = 2 * c
    system = residue_system(q)
    odd = (system.re - system.im) % 2 == 1
    weights = SymbolTable(c)(system.re, system.im).astype(np.float64)
    weights = np.where(odd, weights, 0.0)
    if j == 2:
        weights = np.where(system.re % 2 == 0, -weights, weights)
    rx_re = r.re * system.re - r.im * system.im
    rx_im = r.re * system.im + r.im * system.re
    numerators = rx_im * q.re - rx_re * q.im
    return _phase_sum(weights, numerators, q.norm())


def gauss_sum_array(k_re: np.ndarray, k_im: np.ndarray, n: GaussianInt) -> np.ndarray:
    """Vectorised g(k, n) (float64) for arrays of k and a fixed primary n."""
    _require_primary(n)
    k_re = np.asarray(k_re, dtype=np.int64)
    k_im = np.asarray(k_im, dtype=np.int64)
    values = np.ones(k_re.shape, dtype=np.float64)
    for prime, depth in _prime_powers(n):
        norm = prime.norm()
        rest_re, rest_im = k_re.copy(), k_im.copy()
        h = np.zeros(k_re.shape, dtype=np.int64)
        alive = (rest_re != 0) | (rest_im != 0)
        for _ in range(depth + 1):
            divisible = alive & (residue_index(rest_re, rest_im, prime) == 0)
            if not divisible.any():
                break
            # exact division by prime: x * conj(prime) / N(prime)
            q_re = (rest_re * prime.re + rest_im * prime.im) // norm
            q_im = (rest_im * prime.re - rest_re * prime.im) // norm
            rest_re = np.where(divisible, q_re, rest_re)
            rest_im = np.where(divisible, q_im, rest_im)
            h += divisible
            alive = divisible
        h = np.where((k_re == 0) & (k_im == 0), depth + 1, h)
        local = np.zeros(k_re.shape, dtype=np.float64)
        if depth % 2 == 0:
            local = np.where(h >= depth, float(norm ** (depth - 1) * (norm - 1)), local)
            local = np.where(h == depth - 1, -float(norm ** (depth - 1)), local)
        else:
            # (i k prime**-h / prime) for the odd case depth = h + 1
            symbol = prime_symbol(prime, -rest_im, rest_re).astype(np.float64)
            local = np.where(h == depth - 1, symbol * norm ** (depth - 1) * math.sqrt(norm), local)
        values *= local
    return values


@functools.lru_cache(maxsize=64)
def twisted_gauss_table(j: int, n: GaussianInt) -> np.ndarray:
    """g(k, psi_j (./n)) for k over the residue classes modulo 2n, by residue index."""
    q = 2 * n
    k_re, k_im = residue_representatives(q)
    sign_im = np.where(k_im % 2 == 1, -1.0, 1.0)
    sign_re = np.where((k_re + j - 1) % 2 == 1, -1.0, 1.0)
    table = quad_symbol(I_UNIT, n) * (sign_im + sign_re) * gauss_sum_array(k_re, k_im, n)
    table.flags.writeable = False
    logger.debug(f"twisted Gauss sum table modulo {q}: {len(table)} classes")
    return table


def twisted_gauss_lookup(j: int, n: GaussianInt, k_re: np.ndarray, k_im: np.ndarray) -> np.ndarray:
    """g(k, psi_j (./n)) at arrays of k, through the periodic table modulo 2n."""
    return twisted_gauss_table(j, n)[residue_index(k_re, k_im, 2 * n)]


def _two_part_gauss_sum(character: QuadraticCharacter, d: GaussianInt) -> complex:
    """sum over odd y mod d of (psi_j [psi_2])(y) e~(y / d)."""
    if d == ONE:
        return 1 + 0j
    re, im = residue_representatives(d)
    total = 0j
    for a, b in zip(re.tolist(), im.tolist()):
        y = GaussianInt(a, b)
        if not y.is_odd():
            continue
        total += character.psi_part(y) * complex(e_tilde(complex(y) / complex(d)))
    return total


def character_gauss_sum(character: QuadraticCharacter) -> complex:
    """g(1, chi) for a character from primitive_inducing.

    With modulus d * c1, d a power of 1+i, the Chinese remainder theorem gives
    g(1, chi) = (psi-part)(c1) * (d/c1) * g(1, c1) * g(1, psi-part mod d).
    """
    c1 = character.kernel
    d = ONE_PLUS_I**character.modulus_two_exp
    two_part = _two_part_gauss_sum(character, d)
    if c1 == ONE:
        return two_part
    odd_part = gauss_sum_fast(1, c1)
    return character.psi_part(c1) * quad_symbol(d, c1) * odd_part * two_part


def character_gauss_sum_direct(character: QuadraticCharacter) -> complex:
    """g(1, chi) by summation over residue_system(modulus); the reference value.

    An odd modulus makes even residues units too; chi is then the symbol (x/kernel).
    """
    q = character.modulus
    system = residue_system(q)
    total: typing.List[complex] = []
    qc = complex(q)
    for x in system.representatives:
        if x.is_odd():
            value = character(x)
        elif character.modulus_two_exp:
            continue
        else:
            value = quad_symbol(x, character.kernel)
        if value:
            total.append(value * complex(e_tilde(complex(x) / qc)))
    return complex(math.fsum(z.real for z in total), math.fsum(z.imag for z in total))

