"""Quadratic-residuosity leak of the modified version, and vote counting with it.

With g in Q_p, pk = g^sk is a square too, so b = pk^r * m is a square exactly
when m is.  One Jacobi symbol per ballot reveals the residuosity class of the
encrypted deputy id; with two leading candidates in different classes that
is the whole vote.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .elgamal import Ciphertext, Version, encode_qr, encrypt, keygen
from .errors import AmbiguityError, AttackInapplicableError, ParameterError
from .modmath import GroupOrder, GroupParams, RandomSource, jacobi

DEPUTY_ID_MAX = (1 << 32) - 1


class QrClass(enum.Enum):
    RESIDUE = "residue"
    NON_RESIDUE = "non-residue"

    @classmethod
    def of(cls, value: int, p: int) -> QrClass:
        s = jacobi(value, p)
        if s == 0:
            raise ParameterError("value is divisible by p")
        return cls.RESIDUE if s == 1 else cls.NON_RESIDUE


def plaintext_class(ct: Ciphertext, params: GroupParams) -> QrClass:
    """Residuosity of the hidden plaintext, read from ``b`` alone."""
    if params.g_order is not GroupOrder.QR_SUBGROUP:
        # with a full-group generator (b/p) also carries the parity of r*sk
        raise AttackInapplicableError("plaintext_class needs a generator of the QR subgroup")
    return QrClass.of(ct.b, params.p)


def full_group_plaintext_class(ct: Ciphertext, params: GroupParams, pk: int) -> QrClass:
    """The older subgroup leak for order-2q generators.

    (a/p) gives the parity of r and (pk/p) that of sk, so
    (m/p) = (b/p) * (pk/p)^(r mod 2).
    """
    if params.g_order is not GroupOrder.FULL_GROUP:
        raise AttackInapplicableError("expected a generator of order 2q")
    p = params.p
    r_odd = jacobi(ct.a, p) == -1
    sign = jacobi(ct.b, p) * (jacobi(pk, p) if r_odd else 1)
    return QrClass.RESIDUE if sign == 1 else QrClass.NON_RESIDUE


@dataclass(frozen=True)
class GameResult:
    trials: int
    wins: int

    @property
    def advantage(self) -> float:
        if self.trials == 0:
            return 0.0
        return abs(self.wins / self.trials - 0.5) * 2


def _sample_class(rng: RandomSource, hi: int, p: int, want: QrClass) -> int:
    while True:
        m = rng.randint(1, hi)
        if QrClass.of(m, p) is want:
            return m


def distinguisher_game(
    params: GroupParams,
    trials: int,
    rng: RandomSource,
    version: Version = Version.MODIFIED,
) -> GameResult:
    """IND-CPA style game won by guessing from the residuosity of ``b``.

    Each trial draws a residue m0 and a non-residue m1, encrypts m_bit under a
    fresh key and guesses bit = 0 iff ``b`` is a residue.  Under the final
    version both messages are squared first, which leaves a coin flip.
    """
    if params.g_order is not GroupOrder.QR_SUBGROUP:
        raise AttackInapplicableError("the game is defined for QR-subgroup generators")
    p = params.p
    hi = (p - 1) // 2 if version is Version.FINAL else p - 1
    keys = keygen(params, rng)
    wins = 0
    for _ in range(trials):
        m0 = _sample_class(rng, hi, p, QrClass.RESIDUE)
        m1 = _sample_class(rng, hi, p, QrClass.NON_RESIDUE)
        bit = rng.getrandbits(1)
        m = m1 if bit else m0
        if version is Version.FINAL:
            m = encode_qr(m, p)
        guess = 0 if plaintext_class(encrypt(params, keys.pk, m, rng), params) is QrClass.RESIDUE else 1
        wins += guess == bit
    return GameResult(trials, wins)


def classify_ids(ids: Iterable[int], p: int) -> dict[int, QrClass]:
    out = {}
    for i in ids:
        if not 0 < i <= DEPUTY_ID_MAX:
            raise ParameterError(f"deputy id {i} does not fit in 32 bits")
        out[i] = QrClass.of(i, p)
    return out


@dataclass
class DecodeResult:
    """Per-ballot decisions and the tally they add up to."""

    decisions: list[int]
    counts: dict[int, int] = field(default_factory=dict)

    def prefix_tallies(self) -> list[dict[int, int]]:
        running = Counter({cid: 0 for cid in self.counts})
        out = []
        for d in self.decisions:
            running[d] += 1
            out.append(dict(running))
        return out


def two_candidate_decode(
    ballots: Sequence[Ciphertext], id_a: int, id_b: int, params: GroupParams
) -> DecodeResult:
    """Attribute every ballot to ``id_a`` or ``id_b`` from its residuosity class."""
    classes = classify_ids((id_a, id_b), params.p)
    if classes[id_a] is classes[id_b]:
        raise AmbiguityError("both deputy ids are in the same residuosity class")
    by_class = {classes[id_a]: id_a, classes[id_b]: id_b}
    decisions = [by_class[plaintext_class(ct, params)] for ct in ballots]
    counts = Counter({id_a: 0, id_b: 0})
    counts.update(decisions)
    return DecodeResult(decisions, dict(counts))
