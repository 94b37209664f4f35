"""Modular arithmetic over arbitrary-precision integers.

Python ints already give us canonical big integers, so ``mod_pow`` and
``mod_inv`` are thin checked wrappers over ``pow`` (gmpy2's when it is
installed).  The Jacobi
symbol, the (p+1)/4 square root, Miller-Rabin and safe-prime generation are
implemented here.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

try:
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None

from .errors import NonResidueError, NotInvertibleError, ParameterError

RandomSource = random.Random

DEFAULT_MR_ROUNDS = 64
MIN_SAFE_PRIME_BITS = 5
MAX_SAFE_PRIME_BITS = 4096


def _powmod(base: int, exp: int, modulus: int) -> int:
    # gmpy2 is several times faster than builtin pow at 1024+ bits
    if gmpy2 is not None:
        return int(gmpy2.powmod(base, exp, modulus))
    return pow(base, exp, modulus)


def make_rng(seed: int | None = None) -> RandomSource:
    """Seeded deterministic generator, or OS entropy when ``seed`` is None."""
    if seed is None:
        return random.SystemRandom()
    return random.Random(seed)


def mod_pow(base: int, exp: int, modulus: int) -> int:
    if modulus < 2:
        raise ParameterError(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise ParameterError("negative exponent; use mod_inv")
    return _powmod(base, exp, modulus)


def mod_inv(a: int, modulus: int) -> int:
    if modulus < 2:
        raise ParameterError(f"modulus must be >= 2, got {modulus}")
    if gcd(a, modulus) != 1:
        raise NotInvertibleError(f"{a} is not invertible modulo {modulus}")
    return pow(a, -1, modulus)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) by the binary reciprocity algorithm.

    Runs in O(log^2 n) bit operations without factoring ``n``.  For prime
    ``n`` this is the Legendre symbol.
    """
    if n < 3 or n % 2 == 0:
        raise ParameterError(f"jacobi needs an odd modulus >= 3, got {n}")
    a %= n
    sign = 1
    while a:
        # strip factors of two: (2/n) = -1 iff n = 3, 5 mod 8
        tz = (a & -a).bit_length() - 1
        if tz:
            a >>= tz
            if tz & 1 and (n & 7) in (3, 5):
                sign = -sign
        # reciprocity: flip sign iff both are 3 mod 4
        if a & n & 2:
            sign = -sign
        a, n = n % a, a
    return sign if n == 1 else 0


def sqrt_mod(a: int, p: int) -> int:
    """Square root modulo a prime p = 3 (mod 4), as a^((p+1)/4).

    The caller picks between the returned root and ``p - root``.
    """
    if p % 4 != 3:
        raise ParameterError(f"sqrt_mod only supports p = 3 (mod 4), got p mod 4 = {p % 4}")
    a %= p
    r = _powmod(a, (p + 1) // 4, p)
    if r * r % p != a:
        raise NonResidueError(f"{a} is not a quadratic residue modulo p")
    return r


_SMALL_PRIMES = tuple(n for n in range(2, 256) if all(n % d for d in range(2, int(n**0.5) + 1)))
_FIXED_BASES = _SMALL_PRIMES[:12]  # 2..37: deterministic below 3.3e24


@lru_cache(maxsize=4096)
def is_probable_prime(n: int, rounds: int = DEFAULT_MR_ROUNDS) -> bool:
    """Miller-Rabin with ``rounds`` bases; error probability at most 4**-rounds.

    Values below 2**16 are decided exactly by trial division.  Bases are
    drawn from a generator seeded by ``n`` so answers are reproducible.
    """
    if rounds < 1:
        raise ParameterError("rounds must be >= 1")
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    if n < 256 * 256:
        return True

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    bases = list(_FIXED_BASES[:rounds])
    if rounds > len(bases):
        base_rng = random.Random(n)
        bases += [base_rng.randrange(2, n - 1) for _ in range(rounds - len(bases))]

    for base in bases:
        x = _powmod(base, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = _powmod(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


class GroupOrder(enum.Enum):
    """Order of the chosen generator inside F_p^* for a safe prime p = 2q + 1."""

    FULL_GROUP = "2q"
    QR_SUBGROUP = "q"


def generator_order_class(p: int, g: int) -> str:
    """Classify ord(g) as 'q', '2q' or 'other', assuming p = 2q + 1."""
    if not 1 < g < p:
        return "other"
    q = (p - 1) // 2
    t = pow(g, q, p)
    if t == 1:
        return "q"
    if t == p - 1 and pow(g, 2, p) != 1:
        return "2q"
    return "other"


@dataclass(frozen=True)
class GroupParams:
    """A safe prime p = 2q + 1 with a generator of order q or 2q."""

    p: int
    q: int
    g: int
    g_order: GroupOrder

    def __post_init__(self):
        if self.p != 2 * self.q + 1:
            raise ParameterError("p must equal 2q + 1")
        if not (is_probable_prime(self.p) and is_probable_prime(self.q)):
            raise ParameterError("p is not a safe prime")
        if not 1 < self.g < self.p:
            raise ParameterError("generator out of range")
        expected = "q" if self.g_order is GroupOrder.QR_SUBGROUP else "2q"
        if generator_order_class(self.p, self.g) != expected:
            raise ParameterError(f"generator does not have order {expected}")

    @classmethod
    def from_p_g(cls, p: int, g: int) -> GroupParams:
        cls_ = generator_order_class(p, g)
        if cls_ == "other":
            raise ParameterError("generator has neither order q nor 2q")
        order = GroupOrder.QR_SUBGROUP if cls_ == "q" else GroupOrder.FULL_GROUP
        return cls(p, (p - 1) // 2, g, order)

    @property
    def order(self) -> int:
        return self.q if self.g_order is GroupOrder.QR_SUBGROUP else 2 * self.q

    @property
    def bits(self) -> int:
        return self.p.bit_length()


def smallest_non_residue(p: int) -> int:
    g = 2
    while jacobi(g, p) != -1:
        g += 1
    return g


def params_for_prime(p: int, g_order: GroupOrder) -> GroupParams:
    """Deterministic generator choice: smallest non-residue, or its square."""
    g = smallest_non_residue(p)
    if g_order is GroupOrder.QR_SUBGROUP:
        g = g * g % p
    return GroupParams(p, (p - 1) // 2, g, g_order)


def _odd_primes_below(n: int) -> list[int]:
    is_p = np.ones(n, dtype=bool)
    is_p[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    return np.flatnonzero(is_p)[1:].tolist()


_SIEVE_PRIMES = _odd_primes_below(1 << 16)
_SIEVE_WINDOW = 1 << 15


def _sieve_window(q0: int) -> np.ndarray:
    """Mask over k in [0, window) of candidates q = q0 + 2k surviving the sieve.

    Removes k where a small prime divides q or 2q + 1.
    """
    keep = np.ones(_SIEVE_WINDOW, dtype=bool)
    for s in _SIEVE_PRIMES:
        inv2 = (s + 1) // 2
        r = q0 % s
        keep[(-r * inv2) % s :: s] = False
        keep[(((s - 1) // 2 - r) * inv2) % s :: s] = False
    return keep


def _safe_prime_small(bits: int, rng: RandomSource) -> int:
    lo, hi = 1 << (bits - 2), 1 << (bits - 1)
    odd = list(range(lo | 1, hi, 2))
    start = rng.randrange(len(odd))
    for q in odd[start:] + odd[:start]:
        if is_probable_prime(q) and is_probable_prime(2 * q + 1):
            return 2 * q + 1
    raise ParameterError(f"no safe prime of {bits} bits")


def _safe_prime_sieved(bits: int, rng: RandomSource) -> int:
    lo, hi = 1 << (bits - 2), 1 << (bits - 1)
    while True:
        q0 = rng.getrandbits(bits - 1) | lo | 1
        for k in np.flatnonzero(_sieve_window(q0)).tolist():
            q = q0 + 2 * k
            if q >= hi:
                break
            p = 2 * q + 1
            # cheap Fermat filters before the full tests
            if _powmod(2, q - 1, q) != 1 or _powmod(2, p - 1, p) != 1:
                continue
            if is_probable_prime(q) and is_probable_prime(p):
                return p


def gen_safe_prime(
    bits: int, rng: RandomSource, g_order: GroupOrder = GroupOrder.QR_SUBGROUP
) -> GroupParams:
    """Random safe prime of exactly ``bits`` bits with a deterministic generator."""
    if not MIN_SAFE_PRIME_BITS <= bits <= MAX_SAFE_PRIME_BITS:
        raise ParameterError(
            f"bits must be in [{MIN_SAFE_PRIME_BITS}, {MAX_SAFE_PRIME_BITS}], got {bits}"
        )
    p = _safe_prime_small(bits, rng) if bits <= 20 else _safe_prime_sieved(bits, rng)
    return params_for_prime(p, g_order)
