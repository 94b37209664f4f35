"""ElGamal as deployed in the three revisions of the Moscow voting code.

* original: three chained ElGamal levels over sub-256-bit safe primes with
  full-group generators (``multi_encrypt`` / ``multi_decrypt``);
* modified: a single 1024-bit level, QR-subgroup generator, but messages
  still taken from all of [1, p-1];
* final: same group, message squared before encryption and recovered with
  the (p+1)/4 square root (``encode_qr`` / ``decode_qr``).

The scheme functions themselves are version agnostic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import CorruptionError, NonResidueError, ParameterError
from .modmath import GroupParams, RandomSource, jacobi, mod_inv, mod_pow, sqrt_mod


class Version(enum.Enum):
    ORIGINAL = "original"
    MODIFIED = "modified"
    FINAL = "final"


@dataclass(frozen=True)
class KeyPair:
    sk: int
    pk: int


@dataclass(frozen=True)
class Ciphertext:
    a: int
    b: int


@dataclass(frozen=True)
class MultiParams:
    levels: tuple[GroupParams, GroupParams, GroupParams]

    def __post_init__(self):
        if len(self.levels) != 3:
            raise ParameterError("multilevel ElGamal uses exactly three levels")
        p1, p2, p3 = (lv.p for lv in self.levels)
        if not p1 < p2 < p3:
            raise ParameterError("level moduli must satisfy p1 < p2 < p3")

    def __iter__(self):
        return iter(self.levels)


@dataclass(frozen=True)
class MultiCiphertext:
    b1: int
    b2: int
    a3: int
    b3: int


def keygen(params: GroupParams, rng: RandomSource) -> KeyPair:
    sk = rng.randrange(params.q)
    return KeyPair(sk, mod_pow(params.g, sk, params.p))


def encrypt(
    params: GroupParams, pk: int, m: int, rng: RandomSource, r: int | None = None
) -> Ciphertext:
    """Textbook ElGamal (g^r, pk^r * m) with r uniform in [0, q).

    ``r`` may be pinned for known-randomness experiments.
    """
    p = params.p
    if not 1 <= m <= p - 1:
        raise ParameterError("message must lie in [1, p-1]")
    if r is None:
        r = rng.randrange(params.q)
    return Ciphertext(mod_pow(params.g, r, p), mod_pow(pk, r, p) * m % p)


def decrypt(params: GroupParams, sk: int, ct: Ciphertext) -> int:
    p = params.p
    if not (1 <= ct.a <= p - 1 and 1 <= ct.b <= p - 1):
        raise ParameterError("ciphertext component out of range")
    return ct.b * mod_inv(mod_pow(ct.a, sk, p), p) % p


def multi_encrypt(
    mp: MultiParams,
    pks: tuple[int, int, int],
    m: int,
    rng: RandomSource,
    rs: tuple[int, int, int] | None = None,
) -> MultiCiphertext:
    """Chain three encryptions, feeding each level's ``a`` to the next level.

    Lifting is the identity on integers; p1 < p2 < p3 makes it lossless.
    The intermediate a1 and a2 are dropped.
    """
    l1, l2, l3 = mp.levels
    if not 1 <= m <= l1.p - 1:
        raise ParameterError("message must lie in [1, p1-1]")
    r1, r2, r3 = rs if rs is not None else (None, None, None)
    a1, b1 = _pair(encrypt(l1, pks[0], m, rng, r1))
    a2, b2 = _pair(encrypt(l2, pks[1], a1, rng, r2))
    a3, b3 = _pair(encrypt(l3, pks[2], a2, rng, r3))
    return MultiCiphertext(b1, b2, a3, b3)


def multi_decrypt(mp: MultiParams, sks: tuple[int, int, int], mct: MultiCiphertext) -> int:
    l1, l2, l3 = mp.levels
    bounds = {"b1": (mct.b1, l1.p), "b2": (mct.b2, l2.p), "a3": (mct.a3, l3.p), "b3": (mct.b3, l3.p)}
    for name, (value, bound) in bounds.items():
        if not 1 <= value <= bound - 1:
            raise ParameterError(f"{name} out of range")
    a2 = decrypt(l3, sks[2], Ciphertext(mct.a3, mct.b3))
    if a2 >= l2.p:
        raise CorruptionError("level-3 plaintext does not fit level 2")
    a1 = decrypt(l2, sks[1], Ciphertext(a2, mct.b2))
    if a1 >= l1.p:
        raise CorruptionError("level-2 plaintext does not fit level 1")
    return decrypt(l1, sks[0], Ciphertext(a1, mct.b1))


def _pair(ct: Ciphertext) -> tuple[int, int]:
    return ct.a, ct.b


def encode_qr(m: int, p: int) -> int:
    """Square the message so the encrypted value always lies in Q_p."""
    if not 1 <= m <= (p - 1) // 2:
        raise ParameterError("squared encoding needs 1 <= m <= (p-1)/2")
    return m * m % p


def decode_qr(c: int, p: int) -> int:
    """Invert ``encode_qr``: take the root and keep the smaller of r, p - r."""
    if jacobi(c, p) != 1:
        raise NonResidueError("decode_qr input is not a quadratic residue")
    r = sqrt_mod(c, p)
    return min(r, p - r)


def encode_message(version: Version, m: int, p: int) -> int:
    return encode_qr(m, p) if version is Version.FINAL else m


def decode_message(version: Version, c: int, p: int) -> int:
    return decode_qr(c, p) if version is Version.FINAL else c
