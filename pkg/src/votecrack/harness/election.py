"""Simulated elections under each revision of the encryption code."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Sequence

from ..audit import KeyFileV1
from ..elgamal import (
    Ciphertext,
    KeyPair,
    MultiCiphertext,
    MultiParams,
    Version,
    decode_message,
    decrypt,
    encode_message,
    encrypt,
    keygen,
    multi_decrypt,
    multi_encrypt,
)
from ..errors import ParameterError
from ..modmath import GroupOrder, GroupParams, RandomSource, gen_safe_prime
from .ledger import BallotLedger, SealedTruth

POLLS_OPEN = datetime(2019, 9, 8, 8, 0, tzinfo=timezone.utc)
DEFAULT_GENERATOR = 4  # 2^2: a square for every p, so it generates Q_p of a safe prime


@dataclass(frozen=True)
class Candidate:
    name: str
    deputy_id: int


@dataclass
class Election:
    """Public parameters plus the authority's secret keys.

    Ballots carry nothing but the encrypted deputy id.
    """

    version: Version
    candidates: list[Candidate]
    params: GroupParams | MultiParams
    keys: KeyPair | tuple[KeyPair, KeyPair, KeyPair]

    def __post_init__(self):
        if len(self.candidates) < 2:
            raise ParameterError("an election needs at least two candidates")
        ids = [c.deputy_id for c in self.candidates]
        if len(set(ids)) != len(ids):
            raise ParameterError("deputy ids must be distinct")
        multi = isinstance(self.params, MultiParams)
        if multi != (self.version is Version.ORIGINAL):
            raise ParameterError("only the original version uses multilevel parameters")
        top = self.params.levels[0].p - 1 if multi else self.params.p - 1
        if self.version is Version.FINAL:
            top = (self.params.p - 1) // 2
        if any(not 1 <= i <= top for i in ids):
            raise ParameterError("deputy id does not fit the message space")

    @property
    def ids(self) -> list[int]:
        return [c.deputy_id for c in self.candidates]

    @property
    def public_keys(self) -> tuple[int, ...]:
        if isinstance(self.keys, KeyPair):
            return (self.keys.pk,)
        return tuple(k.pk for k in self.keys)

    @property
    def secret_keys(self) -> tuple[int, ...]:
        if isinstance(self.keys, KeyPair):
            return (self.keys.sk,)
        return tuple(k.sk for k in self.keys)

    def keyfile(self) -> KeyFileV1:
        levels = self.params.levels if isinstance(self.params, MultiParams) else (self.params,)
        return KeyFileV1(
            tuple(lv.p for lv in levels), tuple(lv.g for lv in levels), self.public_keys
        )

    def public_metadata(self) -> str:
        doc = {
            "version": self.version.value,
            "candidates": [{"name": c.name, "deputyId": c.deputy_id} for c in self.candidates],
        }
        return json.dumps(doc, indent=2) + "\n"

    def encrypt_vote(self, deputy_id: int, rng: RandomSource) -> Ciphertext | MultiCiphertext:
        if isinstance(self.params, MultiParams):
            return multi_encrypt(self.params, self.public_keys, deputy_id, rng)
        m = encode_message(self.version, deputy_id, self.params.p)
        return encrypt(self.params, self.keys.pk, m, rng)

    def decrypt_ballot(self, ct: Ciphertext | MultiCiphertext) -> int:
        if isinstance(self.params, MultiParams):
            return multi_decrypt(self.params, self.secret_keys, ct)
        return decode_message(self.version, decrypt(self.params, self.keys.sk, ct), self.params.p)


def synthetic_ids(n: int, bound: int, rng: RandomSource) -> list[int]:
    """``n`` distinct random deputy ids below min(2^32, bound)."""
    hi = min((1 << 32) - 1, bound)
    if hi < n:
        raise ParameterError("message space too small for that many candidates")
    return rng.sample(range(1, hi + 1), n)


def multi_params(bits: int, rng: RandomSource) -> MultiParams:
    """Three distinct full-group safe primes of ``bits`` bits, ascending."""
    levels: dict[int, GroupParams] = {}
    while len(levels) < 3:
        gp = gen_safe_prime(bits, rng, GroupOrder.FULL_GROUP)
        levels[gp.p] = gp
    return MultiParams(tuple(levels[p] for p in sorted(levels)))


def create_election(
    version: Version,
    rng: RandomSource,
    bits: int | None = None,
    candidate_ids: Sequence[int] | None = None,
    n_candidates: int = 2,
    params: GroupParams | None = None,
) -> Election:
    """Fresh parameters and keys for ``version``.

    Defaults follow the deployed systems: three levels for the original
    version, one QR-subgroup level otherwise.
    """
    if version is Version.ORIGINAL:
        mp = multi_params(bits or 40, rng)
        keys = tuple(keygen(lv, rng) for lv in mp.levels)
        bound = mp.levels[0].p - 1
        group: GroupParams | MultiParams = mp
    else:
        gp = params or gen_safe_prime(bits or 1024, rng, GroupOrder.QR_SUBGROUP)
        if gp.g_order is not GroupOrder.QR_SUBGROUP:
            raise ParameterError("modified and final versions use a QR-subgroup generator")
        keys = keygen(gp, rng)
        bound = (gp.p - 1) // 2 if version is Version.FINAL else gp.p - 1
        group = gp
    ids = list(candidate_ids) if candidate_ids is not None else synthetic_ids(n_candidates, bound, rng)
    cands = [Candidate(f"candidate-{i + 1}", d) for i, d in enumerate(ids)]
    return Election(version, cands, group, keys)


def cast_ballots(
    e: Election, choices: Sequence[int], rng: RandomSource, ledger: BallotLedger | None = None
) -> tuple[BallotLedger, SealedTruth]:
    """Encrypt each chosen deputy id in order and append it to the ledger."""
    ledger = ledger if ledger is not None else BallotLedger()
    valid = set(e.ids)
    clock = POLLS_OPEN
    for choice in choices:
        if choice not in valid:
            raise ParameterError(f"{choice} is not a candidate id")
        clock += timedelta(seconds=rng.randint(1, 90))
        ledger.append(e.encrypt_vote(choice, rng), clock.isoformat())
    return ledger, SealedTruth(tuple(choices))


def run_election(
    e: Election,
    n_voters: int,
    weights: Sequence[float],
    rng: RandomSource,
    ledger: BallotLedger | None = None,
) -> tuple[BallotLedger, SealedTruth]:
    if len(weights) != len(e.candidates):
        raise ParameterError("one weight per candidate")
    if any(w < 0 for w in weights) or not math.isclose(sum(weights), 1.0, abs_tol=1e-9):
        raise ParameterError("weights must be non-negative and sum to 1")
    choices = rng.choices(e.ids, weights=weights, k=n_voters) if n_voters else []
    return cast_ballots(e, choices, rng, ledger)
