"""End-to-end attack scenarios.

Each scenario has three phases kept apart on purpose: the authority runs an
election, the attacker works from the public view only (key file, candidate
list, ledger), and a final scoring step opens the sealed ground truth.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from ..audit import KeyFileV1
from ..dlp import recover_multi_keys
from ..elgamal import MultiParams, Version, encrypt, multi_decrypt
from ..errors import AmbiguityError, CorruptionError, ParameterError
from ..modmath import GroupParams, RandomSource, make_rng
from ..qrattack import (
    DecodeResult,
    QrClass,
    classify_ids,
    full_group_plaintext_class,
    plaintext_class,
    two_candidate_decode,
)
from .election import DEFAULT_GENERATOR, Election, create_election, run_election
from .fixtures import load_fixture
from .ledger import BallotLedger, SealedTruth

MAX_ATTACK1_BITS = 56
APPENDIX_C_IDS = (3247602110, 667396531)


def params_from_keyfile(kf: KeyFileV1) -> list[GroupParams]:
    return [GroupParams.from_p_g(p, g) for p, g in zip(kf.modulos, kf.generators)]


@dataclass
class Attack1Report:
    bits: int
    n_voters: int
    key_seconds: list[float]
    recovered_keys: list[int | None]
    keys_match: bool
    recovered_tally: dict[int, int]
    true_tally: dict[int, int]
    flagged: list[int]
    seconds: float
    errors: list[str] = field(default_factory=list)

    @property
    def tally_match(self) -> bool:
        return self.recovered_tally == self.true_tally

    @property
    def ok(self) -> bool:
        return self.keys_match and self.tally_match and not self.flagged and not self.errors


def break_original(
    kf: KeyFileV1, ledger: BallotLedger, candidate_ids: list[int], workers: int = 3, seed: int = 0
) -> tuple[list, dict[int, int], list[int], list[int | None], list[float], list[str]]:
    """Attacker side of attack 1: keys from the key file, then decrypt the ledger."""
    mp = MultiParams(tuple(params_from_keyfile(kf)))
    rec = recover_multi_keys(mp, kf.public_keys, workers=workers, seed=seed)
    keys = [lv.sk for lv in rec.levels]
    seconds = [lv.seconds for lv in rec.levels]
    errors = [f"level {lv.level}: {lv.error}" for lv in rec.levels if not lv.ok]
    decisions: list[int | None] = []
    flagged: list[int] = []
    if rec.ok:
        valid = set(candidate_ids)
        for record in ledger:
            try:
                m = multi_decrypt(mp, rec.keys, record.ciphertext)
            except (CorruptionError, ParameterError):
                m = None
            if m not in valid:
                flagged.append(record.index)
                m = None
            decisions.append(m)
    tally = Counter({i: 0 for i in candidate_ids})
    tally.update(d for d in decisions if d is not None)
    return decisions, dict(tally), flagged, keys, seconds, errors


def attack1_scenario(
    bits: int = 40,
    n_voters: int = 200,
    seed: int = 0,
    workers: int = 3,
    n_candidates: int = 3,
    tamper_index: int | None = None,
) -> Attack1Report:
    """Original version: recover all three keys, decrypt every ballot, compare tallies."""
    if bits > MAX_ATTACK1_BITS:
        raise ParameterError(f"generic solvers stop at {MAX_ATTACK1_BITS}-bit primes")
    start = time.perf_counter()
    rng = make_rng(seed)
    e = create_election(Version.ORIGINAL, rng, bits=bits, n_candidates=n_candidates)
    weights = _weights(n_candidates)
    ledger, truth = run_election(e, n_voters, weights, rng)
    if tamper_index is not None:
        ct = ledger.records[tamper_index].ciphertext
        p1 = e.params.levels[0].p
        ledger = ledger.with_replaced(tamper_index, type(ct)(ct.b1 % (p1 - 1) + 1, ct.b2, ct.a3, ct.b3))

    # attacker: public data only
    _, tally, flagged, keys, seconds, errors = break_original(
        e.keyfile(), ledger, e.ids, workers=workers, seed=seed
    )
    # scoring
    true_keys = [sk % lv.order for sk, lv in zip(e.secret_keys, e.params.levels)]
    return Attack1Report(
        bits=bits,
        n_voters=n_voters,
        key_seconds=seconds,
        recovered_keys=keys,
        keys_match=keys == true_keys,
        recovered_tally=tally,
        true_tally=_full_counts(truth, e.ids),
        flagged=flagged,
        seconds=time.perf_counter() - start,
        errors=errors,
    )


def _weights(n: int) -> list[float]:
    raw = [n - i for i in range(n)]
    return [w / sum(raw) for w in raw]


def _full_counts(truth: SealedTruth, ids: list[int]) -> dict[int, int]:
    counts = {i: 0 for i in ids}
    counts.update(truth.counts())
    return counts


@dataclass
class Attack2Report:
    status: str  # decoded | ambiguous | uninformative
    n_voters: int
    classes: dict[int, str]
    ballot_classes: list[str]
    decisions: list[int]
    prefix_tallies: list[dict[int, int]]
    recovered_tally: dict[int, int]
    true_tally: dict[int, int]
    correct: int
    prefix_exact: bool
    seconds: float

    @property
    def accuracy(self) -> float:
        return self.correct / self.n_voters if self.n_voters else 1.0

    @property
    def ok(self) -> bool:
        return (
            self.status == "decoded"
            and self.correct == self.n_voters
            and self.prefix_exact
            and self.recovered_tally == self.true_tally
        )


def appendix_c_group() -> GroupParams:
    """The 28 August test modulus; its generator was not published, so use 4."""
    return GroupParams.from_p_g(int(load_fixture("appendix_c")["p"]), DEFAULT_GENERATOR)


def break_modified(
    params: GroupParams, version: Version, ledger: BallotLedger, id_a: int, id_b: int
) -> tuple[str, list[str], DecodeResult]:
    """Attacker side of attack 2: one Jacobi symbol per ballot, no key."""
    cts = ledger.ciphertexts()
    ballot_classes = [plaintext_class(ct, params).value for ct in cts]
    empty = DecodeResult([], {id_a: 0, id_b: 0})
    if version is Version.FINAL:
        # squared encoding: every b is a residue, the symbol carries nothing
        return "uninformative", ballot_classes, empty
    try:
        result = two_candidate_decode(cts, id_a, id_b, params)
    except AmbiguityError:
        return "ambiguous", ballot_classes, empty
    return "decoded", ballot_classes, result


def attack2_scenario(
    n_voters: int = 500,
    seed: int = 0,
    version: Version = Version.MODIFIED,
    ids: tuple[int, int] = APPENDIX_C_IDS,
    params: GroupParams | None = None,
    weights: tuple[float, float] = (0.55, 0.45),
) -> Attack2Report:
    """Two-candidate election decoded from residuosity alone."""
    start = time.perf_counter()
    rng = make_rng(seed)
    params = params or appendix_c_group()
    e = create_election(version, rng, candidate_ids=ids, params=params)
    ledger, truth = run_election(e, n_voters, list(weights), rng)

    status, ballot_classes, result = break_modified(params, version, ledger, *ids)
    classes = {i: c.value for i, c in classify_ids(ids, params.p).items()}
    prefixes = result.prefix_tallies()

    # scoring
    truth_prefixes = DecodeResult(list(truth.choices), _full_counts(truth, list(ids))).prefix_tallies()
    correct = sum(d == t for d, t in zip(result.decisions, truth.choices))
    return Attack2Report(
        status=status,
        n_voters=n_voters,
        classes=classes,
        ballot_classes=ballot_classes,
        decisions=result.decisions,
        prefix_tallies=prefixes,
        recovered_tally=result.counts,
        true_tally=_full_counts(truth, list(ids)),
        correct=correct,
        prefix_exact=prefixes == truth_prefixes,
        seconds=time.perf_counter() - start,
    )


def original_leak_rate(e: Election, rng: RandomSource, trials: int = 50) -> float:
    """Share of level-1 ciphertexts whose plaintext class is recovered from
    public data under the original full-group generator.
    """
    lv = e.params.levels[0]
    pk = e.keys[0].pk
    hits = 0
    for _ in range(trials):
        m = rng.randrange(1, lv.p)
        ct = encrypt(lv, pk, m, rng)
        hits += full_group_plaintext_class(ct, lv, pk) is QrClass.of(m, lv.p)
    return hits / trials
