# Copyright 2026 gaussian-moments contributors
# See LICENSE file for licensing details.

"""Exact arithmetic in Z[i]: division, gcd, primary normalisation, factorisation.

Elements are :class:`GaussianInt` values with unbounded integer coordinates. The
multiplicative structure (primary primes, factorisations, the Moebius and Euler
functions) is built on top of a cached table of prime ideals ordered by norm.
"""

import functools
import logging
import math
import re
import typing
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

# JSON pairs switch to decimal strings beyond the exactly representable float range.
_JSON_SAFE_BOUND = 2**53
_GAUSSIAN_PATTERN = re.compile(
    r"^\s*(?P<re>[+-]?\d+)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d*)\s*i)?\s*$"
)
_PURE_IMAGINARY_PATTERN = re.compile(r"^\s*(?P<im>[+-]?\d*)\s*i\s*$")


class NotPrimaryError(ValueError):
    """An operation that requires a primary element received something else."""


class EvenArgumentError(ValueError):
    """An operation that requires an odd element received a multiple of 1+i (or zero)."""


class CapExceededError(ValueError):
    """A desk-scale size cap was exceeded."""


@dataclass(frozen=True, slots=True)
class GaussianInt:
    """An element re + im*i of Z[i]."""

    re: int
    im: int = 0

    @classmethod
    def coerce(cls, value: "GaussianLike") -> "GaussianInt":
        """Accept GaussianInt, int or an (re, im) pair."""
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a Gaussian integer")
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, tuple) and len(value) == 2:
            return cls(int(value[0]), int(value[1]))
        raise TypeError(f"cannot interpret {value!r} as a Gaussian integer")

    def __add__(self, other: "GaussianLike") -> "GaussianInt":
        """Sum, coercing ints and pairs."""
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: "GaussianLike") -> "GaussianInt":
        """Difference, coercing ints and pairs."""
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: "GaussianLike") -> "GaussianInt":
        """Reflected difference other - self."""
        return GaussianInt.coerce(other) - self

    def __mul__(self, other: "GaussianLike") -> "GaussianInt":
        """Product, coercing ints and pairs."""
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> "GaussianInt":
        """Additive inverse."""
        return GaussianInt(-self.re, -self.im)

    def __pos__(self) -> "GaussianInt":
        """The element itself."""
        return self

    def __bool__(self) -> bool:
        """False only for zero."""
        return bool(self.re) or bool(self.im)

    def __pow__(self, exponent: int) -> "GaussianInt":
        """Non-negative power by repeated squaring."""
        if exponent < 0:
            raise ValueError("negative powers are not Gaussian integers")
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other: "GaussianLike") -> typing.Tuple["GaussianInt", "GaussianInt"]:
        """Nearest-integer quotient and remainder with N(r) <= N(b)/2; ties round down."""
        b = GaussianInt.coerce(other)
        if not b:
            raise ZeroDivisionError(f"divmod({self}, 0)")
        # self / b = (x + yi) / c with c = N(b)
        x = self.re * b.re + self.im * b.im
        y = self.im * b.re - self.re * b.im
        c = b.re * b.re + b.im * b.im
        q = GaussianInt(_round_half_down(x, c), _round_half_down(y, c))
        return q, self - q * b

    def __floordiv__(self, other: "GaussianLike") -> "GaussianInt":
        """Quotient part of divmod."""
        return divmod(self, other)[0]

    def __mod__(self, other: "GaussianLike") -> "GaussianInt":
        """Remainder part of divmod."""
        return divmod(self, other)[1]

    def conjugate(self) -> "GaussianInt":
        """Complex conjugate."""
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        """N(a+bi) = a^2 + b^2."""
        return self.re * self.re + self.im * self.im

    def is_odd(self) -> bool:
        """Coprime to 1+i, i.e. re and im of different parity."""
        return (self.re - self.im) % 2 == 1

    def is_unit(self) -> bool:
        """True for 1, i, -1 and -i."""
        return self.norm() == 1

    def __complex__(self) -> complex:
        """The element as a Python complex."""
        return complex(self.re, self.im)

    def __str__(self) -> str:
        """Compact form such as 3+2i, -i or 7."""
        if self.im == 0:
            return str(self.re)
        imag = "i" if abs(self.im) == 1 else f"{abs(self.im)}i"
        if self.re == 0:
            return imag if self.im > 0 else f"-{imag}"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{imag}"

    def __repr__(self) -> str:
        """Constructor form."""
        return f"GaussianInt({self.re}, {self.im})"

    def to_json(self) -> typing.List[typing.Union[int, str]]:
        """JSON pair [re, im]; coordinates beyond 2**53 become decimal strings."""
        return [_json_coordinate(self.re), _json_coordinate(self.im)]

    @classmethod
    def from_json(cls, pair: typing.Sequence[typing.Union[int, str]]) -> "GaussianInt":
        """Inverse of to_json; accepts ints or decimal strings."""
        if len(pair) != 2:
            raise ValueError(f"expected a pair [re, im], got {pair!r}")
        return cls(int(pair[0]), int(pair[1]))


GaussianLike = typing.Union[GaussianInt, int, typing.Tuple[int, int]]

ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I_UNIT = GaussianInt(0, 1)
ONE_PLUS_I = GaussianInt(1, 1)
UNITS = (ONE, I_UNIT, GaussianInt(-1, 0), GaussianInt(0, -1))


def _round_half_down(x: int, c: int) -> int:
    """Nearest integer to x/c (c > 0), ties towards negative infinity."""
    return -((c - 2 * x) // (2 * c))


def _json_coordinate(value: int) -> typing.Union[int, str]:
    return value if abs(value) < _JSON_SAFE_BOUND else str(value)


def parse_gaussian(text: str) -> GaussianInt:
    """Parse "a+bi", "a-bi", "a", "bi", "-i" and friends."""
    match = _PURE_IMAGINARY_PATTERN.match(text)
    if match:
        digits = match.group("im")
        if digits in ("", "+"):
            return GaussianInt(0, 1)
        if digits == "-":
            return GaussianInt(0, -1)
        return GaussianInt(0, int(digits))
    match = _GAUSSIAN_PATTERN.match(text)
    if not match or match.group("re") is None:
        raise ValueError(f"Invalid Gaussian integer literal: {text!r}")
    real = int(match.group("re"))
    if match.group("sign") is None:
        return GaussianInt(real, 0)
    imag = int(match.group("im") or 1)
    return GaussianInt(real, imag if match.group("sign") == "+" else -imag)


def exact_quotient(a: GaussianInt, b: GaussianInt) -> typing.Optional[GaussianInt]:
    """Return a/b when b divides a, else None."""
    q, r = divmod(a, b)
    return q if not r else None


def divides(d: GaussianInt, a: GaussianInt) -> bool:
    """Whether d | a (0 divides only 0)."""
    if not d:
        return not a
    return not (a % d)


def is_primary(n: GaussianInt) -> bool:
    """n = a+bi with (a, b) = (1, 0) or (3, 2) modulo 4."""
    a, b = n.re % 4, n.im % 4
    return (a == 1 and b == 0) or (a == 3 and b == 2)


def classify_type(n: GaussianInt) -> int:
    """Type 1 (a = 1, b = 0 mod 4) or type 2 (a = 3, b = 2 mod 4) of a primary element."""
    a, b = n.re % 4, n.im % 4
    if a == 1 and b == 0:
        return 1
    if a == 3 and b == 2:
        return 2
    raise NotPrimaryError(f"{n} is not primary")


def normalize_primary(n: GaussianInt) -> typing.Tuple[GaussianInt, GaussianInt]:
    """Split an odd n as u*m with u a unit and m primary."""
    if not n or not n.is_odd():
        raise EvenArgumentError(f"{n} is not odd")
    for unit in UNITS:
        candidate = n * unit.conjugate()
        if is_primary(candidate):
            return unit, candidate
    raise AssertionError(f"no primary associate found for {n}")  # pragma: nocover


def primary_associate(n: GaussianInt) -> GaussianInt:
    """The primary generator of the ideal (n), n odd."""
    return normalize_primary(n)[1]


def gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """Normalised greatest common divisor.

    The result is (1+i)^k times a primary element; for odd results k = 0.
    """
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    x, y = a, b
    while y:
        x, y = y, x % y
    return _normalize_divisor(x)


def _normalize_divisor(g: GaussianInt) -> GaussianInt:
    power = ONE
    while not g.is_odd():
        g = g * GaussianInt(1, -1)
        g = GaussianInt(g.re // 2, g.im // 2)
        power = power * ONE_PLUS_I
    return power * primary_associate(g)


def sqrt_minus_one(p: int) -> int:
    """A square root of -1 modulo a rational prime p = 1 mod 4."""
    if p % 4 != 1:
        raise ValueError(f"-1 is not a square modulo {p}")
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return pow(c, (p - 1) // 4, p)
    raise AssertionError(f"no quadratic non-residue modulo {p}")  # pragma: nocover


@functools.lru_cache(maxsize=8)
def rational_primes(bound: int) -> np.ndarray:
    """Rational primes up to bound (read-only array)."""
    bound = max(int(bound), 2)
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    primes = np.flatnonzero(sieve).astype(np.int64)
    primes.flags.writeable = False
    return primes


def _rational_factor(n: int) -> typing.Dict[int, int]:
    """Trial-division factorisation of a positive rational integer."""
    factors: typing.Dict[int, int] = {}
    for p in rational_primes(math.isqrt(n) + 1).tolist():
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


@functools.lru_cache(maxsize=65536)
def split_prime(p: int) -> typing.Tuple[GaussianInt, GaussianInt]:
    """The two primary primes above p = 1 mod 4, ordered by real part."""
    t = sqrt_minus_one(p)
    first = gcd(GaussianInt(p), GaussianInt(t, 1))
    second = primary_associate(first.conjugate())
    return tuple(sorted((first, second), key=lambda w: (w.re, w.im)))  # type: ignore[return-value]


def primes_above(p: int) -> typing.Tuple[GaussianInt, ...]:
    """Primary primes above a rational prime (empty for p = 2, whose prime is 1+i)."""
    if p == 2:
        return ()
    if p % 4 == 3:
        return (GaussianInt(-p),)
    return split_prime(p)


@dataclass(frozen=True)
class PrimaryFactorization:
    """n = i**unit_exp * (1+i)**two_exp * prod(p**e for p, e in factors)."""

    unit_exp: int
    two_exp: int
    factors: typing.Tuple[typing.Tuple[GaussianInt, int], ...]

    def reassemble(self) -> GaussianInt:
        """Multiply the factorisation back out; equals the factored element."""
        value = I_UNIT**self.unit_exp * ONE_PLUS_I**self.two_exp
        for prime, exponent in self.factors:
            value = value * prime**exponent
        return value

    @property
    def odd_primes(self) -> typing.Tuple[GaussianInt, ...]:
        """The distinct primary primes, in norm order."""
        return tuple(p for p, _ in self.factors)


def factor(n: GaussianInt) -> PrimaryFactorization:
    """Factor n into a unit, a power of 1+i and primary primes."""
    if not n:
        raise ValueError("cannot factor 0")
    two_exp = 0
    rest = n
    while not rest.is_odd():
        rest = rest * GaussianInt(1, -1)
        rest = GaussianInt(rest.re // 2, rest.im // 2)
        two_exp += 1
    found: typing.List[typing.Tuple[GaussianInt, int]] = []
    for p, e in sorted(_rational_factor(rest.norm()).items()):
        if p % 4 == 3:
            exponent = e // 2
            rest = exact_quotient(rest, GaussianInt(-p) ** exponent)  # type: ignore[assignment]
            found.append((GaussianInt(-p), exponent))
            continue
        for prime in split_prime(p):
            exponent = 0
            while (q := exact_quotient(rest, prime)) is not None:
                rest = q
                exponent += 1
            if exponent:
                found.append((prime, exponent))
    if not rest.is_unit():
        raise AssertionError(f"factorisation of {n} left cofactor {rest}")  # pragma: nocover
    found.sort(key=lambda item: (item[0].norm(), item[0].re))
    return PrimaryFactorization(UNITS.index(rest), two_exp, tuple(found))


def _require_primary(n: GaussianInt) -> None:
    if not is_primary(n):
        raise NotPrimaryError(f"{n} is not primary")


def mobius(n: GaussianInt) -> int:
    """Moebius function of a primary element."""
    _require_primary(n)
    exponents = [e for _, e in factor(n).factors]
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def is_squarefree(n: GaussianInt) -> bool:
    """True when no prime divides n twice."""
    return mobius(n) != 0


def euler_phi(n: GaussianInt) -> int:
    """Order of (Z[i]/(n))^* for primary n."""
    _require_primary(n)
    result = 1
    for prime, e in factor(n).factors:
        q = prime.norm()
        result *= q ** (e - 1) * (q - 1)
    return result


def squarefree_decompose(c: GaussianInt) -> typing.Tuple[GaussianInt, GaussianInt]:
    """Write primary c as c1 * c2**2 with c1 squarefree, both primary."""
    _require_primary(c)
    c1, c2 = ONE, ONE
    for prime, e in factor(c).factors:
        c1 = c1 * prime ** (e % 2)
        c2 = c2 * prime ** (e // 2)
    return c1, c2


def is_square(n: GaussianInt) -> bool:
    """Whether a primary n is a perfect square in Z[i]."""
    return squarefree_decompose(n)[0] == ONE


@functools.lru_cache(maxsize=16)
def primary_lattice(max_norm: int) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arrays (re, im, norm) of every primary element with norm <= max_norm.

    Sorted by (norm, re, im); the arrays are read-only.
    """
    if max_norm < 1:
        raise ValueError("max_norm must be at least 1")
    radius = math.isqrt(max_norm)
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    re, im = np.meshgrid(axis, axis, indexing="ij")
    re, im = re.ravel(), im.ravel()
    norm = re * re + im * im
    a, b = re % 4, im % 4
    keep = (norm <= max_norm) & (((a == 1) & (b == 0)) | ((a == 3) & (b == 2)))
    re, im, norm = re[keep], im[keep], norm[keep]
    order = np.lexsort((im, re, norm))
    arrays = (re[order], im[order], norm[order])
    for arr in arrays:
        arr.flags.writeable = False
    logger.debug(f"primary lattice up to norm {max_norm}: {len(arrays[0])} elements")
    return arrays


def enumerate_primary(max_norm: int) -> typing.Iterator[GaussianInt]:
    """Every primary element of norm <= max_norm, ordered by (norm, re, im)."""
    re, im, _ = primary_lattice(max_norm)
    for a, b in zip(re.tolist(), im.tolist()):
        yield GaussianInt(a, b)


@functools.lru_cache(maxsize=8)
def prime_norm_table(bound: int) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Norms of all prime ideals with norm <= bound, with their multiplicities.

    Norm 2 (the prime 1+i) appears once, p = 1 mod 4 twice (two split primes) and
    p**2 once for p = 3 mod 4.
    """
    primes = rational_primes(bound)
    split = primes[primes % 4 == 1]
    inert = primes[primes % 4 == 3]
    inert = inert[inert * inert <= bound]
    norms = np.concatenate(([2] if bound >= 2 else [], split, inert * inert)).astype(np.int64)
    mult = np.concatenate(
        ([1] if bound >= 2 else [], np.full(len(split), 2), np.ones(len(inert)))
    ).astype(np.int64)
    order = np.argsort(norms, kind="stable")
    norms, mult = norms[order], mult[order]
    norms.flags.writeable = False
    mult.flags.writeable = False
    return norms, mult


@functools.lru_cache(maxsize=8)
def primary_primes(max_norm: int) -> typing.Tuple[GaussianInt, ...]:
    """Primary primes of norm <= max_norm, sorted by (norm, re)."""
    found: typing.List[GaussianInt] = []
    for p in rational_primes(max_norm).tolist():
        if p == 2:
            continue
        if p % 4 == 3:
            if p * p <= max_norm:
                found.append(GaussianInt(-p))
        else:
            found.extend(split_prime(p))
    found.sort(key=lambda w: (w.norm(), w.re))
    logger.debug(f"primary prime table up to norm {max_norm}: {len(found)} primes")
    return tuple(found)


@functools.lru_cache(maxsize=4096)
def lattice_basis(modulus: GaussianInt) -> typing.Tuple[int, int, int]:
    """Hermite normal form (d1, h, g) of the lattice modulus*Z[i].

    The lattice is spanned by (d1, 0) and (h, g) with d1 * g = N(modulus); every
    residue class has exactly one representative x + y*i with 0 <= x < d1, 0 <= y < g.
    """
    if not modulus:
        raise ZeroDivisionError("the zero ideal has no residue lattice")
    a, b = modulus.re, modulus.im
    g, u, v = _extended_gcd(b, a)
    if g < 0:
        g, u, v = -g, -u, -v
    d1 = modulus.norm() // g
    h = (a * u - b * v) % d1
    return d1, h, g


def _extended_gcd(x: int, y: int) -> typing.Tuple[int, int, int]:
    """(g, u, v) with x*u + y*v = g = gcd(x, y)."""
    u0, u1, v0, v1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    return x, u0, v0


def residue_index(re: np.ndarray, im: np.ndarray, modulus: GaussianInt) -> np.ndarray:
    """Index in [0, N(modulus)) of the residue class of each re + im*i."""
    d1, h, g = lattice_basis(modulus)
    re = np.asarray(re, dtype=np.int64)
    im = np.asarray(im, dtype=np.int64)
    y0 = im % g
    k = (im - y0) // g
    x0 = (re - k * h) % d1
    return y0 * d1 + x0


def residue_representatives(modulus: GaussianInt) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Representatives (re, im) of every class, position i holding the class of index i."""
    d1, _, g = lattice_basis(modulus)
    index = np.arange(d1 * g, dtype=np.int64)
    return index % d1, index // d1
