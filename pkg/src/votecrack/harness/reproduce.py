"""Recompute the residuosity checks on the published test data."""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..modmath import jacobi
from ..qrattack import QrClass, classify_ids
from .fixtures import load_fixture
from .scenarios import Attack2Report, appendix_c_group, attack2_scenario


@dataclass
class AppendixBReport:
    p_bits: int
    symbols: list[int]
    euler: list[int]
    seconds: float

    @property
    def residues(self) -> int:
        return self.symbols.count(1)

    @property
    def consistent(self) -> bool:
        # Euler's criterion b^q is 1 for residues and p-1 (shown as -1) otherwise
        return self.symbols == self.euler

    @property
    def ok(self) -> bool:
        return self.consistent and self.residues == 5 and len(self.symbols) == 10


def reproduce_appendix_b(fixture_text: str | None = None) -> AppendixBReport:
    """Classify the ten published b-components of the modified version."""
    start = time.perf_counter()
    data = load_fixture("appendix_b", fixture_text)
    p = int(data["p"])
    q = (p - 1) // 2
    bs = [int(b) for b in data["b"]]
    symbols = [jacobi(b, p) for b in bs]
    euler = [1 if pow(b, q, p) == 1 else -1 for b in bs]
    return AppendixBReport(p.bit_length(), symbols, euler, time.perf_counter() - start)


@dataclass
class AppendixCReport:
    p_bits: int
    classes: dict[int, QrClass]
    euler: dict[int, int]
    attack: Attack2Report | None
    seconds: float

    @property
    def distinct(self) -> bool:
        return len(set(self.classes.values())) == 2

    @property
    def residue_id(self) -> int | None:
        return next((i for i, c in self.classes.items() if c is QrClass.RESIDUE), None)

    @property
    def ok(self) -> bool:
        consistent = all(
            (self.euler[i] == 1) == (c is QrClass.RESIDUE) for i, c in self.classes.items()
        )
        return self.distinct and consistent and (self.attack is None or self.attack.ok)


def reproduce_appendix_c(n_voters: int = 100, seed: int = 0, fixture_text: str | None = None) -> AppendixCReport:
    """Classify the two test ids, then decode a simulated election that uses them."""
    start = time.perf_counter()
    data = load_fixture("appendix_c", fixture_text)
    p = int(data["p"])
    q = (p - 1) // 2
    ids = [int(i) for i in data["ids"]]
    classes = classify_ids(ids, p)
    euler = {i: pow(i, q, p) for i in ids}
    euler = {i: (1 if v == 1 else -1) for i, v in euler.items()}
    attack = None
    if n_voters and len(set(classes.values())) == 2:
        attack = attack2_scenario(n_voters=n_voters, seed=seed, ids=tuple(ids), params=appendix_c_group())
    return AppendixCReport(p.bit_length(), classes, euler, attack, time.perf_counter() - start)
