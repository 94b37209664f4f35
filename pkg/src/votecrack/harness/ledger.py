"""Append-only ballot ledger standing in for the permissioned blockchain.

One JSON object per line, one line per ballot, ciphertext fields as decimal
strings in a fixed key order so a replay is byte-identical.  The mapping
from ballot index to candidate lives in a separate ``SealedTruth`` that the
attack code never receives.
"""

from __future__ import annotations

import json
import os
import threading
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from ..elgamal import Ciphertext, MultiCiphertext
from ..errors import ParameterError

SINGLE_FIELDS = ("a", "b")
MULTI_FIELDS = ("b1", "b2", "a3", "b3")

Ballot = Ciphertext | MultiCiphertext


def _fields(ct: Ballot) -> tuple[str, ...]:
    return MULTI_FIELDS if isinstance(ct, MultiCiphertext) else SINGLE_FIELDS


@dataclass(frozen=True)
class LedgerRecord:
    index: int
    timestamp: str
    ciphertext: Ballot

    def to_line(self) -> str:
        doc = {"index": self.index, "timestamp": self.timestamp}
        for name in _fields(self.ciphertext):
            doc[name] = str(getattr(self.ciphertext, name))
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str) -> LedgerRecord:
        doc = json.loads(line)
        try:
            if all(k in doc for k in MULTI_FIELDS):
                ct = MultiCiphertext(*(int(doc[k]) for k in MULTI_FIELDS))
            else:
                ct = Ciphertext(*(int(doc[k]) for k in SINGLE_FIELDS))
            return cls(int(doc["index"]), str(doc["timestamp"]), ct)
        except (KeyError, ValueError) as exc:
            raise ParameterError(f"malformed ledger record: {exc}") from None


class BallotLedger:
    """Ordered, append-only list of ballots, optionally mirrored to a file.

    Appends are serialized by a lock; existing lines are never rewritten.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = os.fspath(path) if path is not None else None
        self._records: list[LedgerRecord] = []
        self._lock = threading.Lock()
        if self.path is not None and os.path.exists(self.path):
            with open(self.path, encoding="utf-8") as fh:
                self._records = [LedgerRecord.from_line(ln) for ln in fh if ln.strip()]
            self._check_order()

    @classmethod
    def load(cls, path: str | os.PathLike) -> BallotLedger:
        if not os.path.exists(path):
            raise ParameterError(f"no ledger at {path}")
        return cls(path)

    def _check_order(self):
        for prev, cur in zip(self._records, self._records[1:]):
            if cur.index <= prev.index:
                raise ParameterError(f"ledger indices not increasing at {cur.index}")

    def append(self, ct: Ballot, timestamp: str) -> LedgerRecord:
        with self._lock:
            index = self._records[-1].index + 1 if self._records else 0
            rec = LedgerRecord(index, timestamp, ct)
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(rec.to_line() + "\n")
            self._records.append(rec)
            return rec

    def __len__(self):
        return len(self._records)

    def __iter__(self) -> Iterator[LedgerRecord]:
        return iter(tuple(self._records))

    @property
    def records(self) -> tuple[LedgerRecord, ...]:
        return tuple(self._records)

    def ciphertexts(self) -> list[Ballot]:
        return [r.ciphertext for r in self._records]

    def to_bytes(self) -> bytes:
        return "".join(r.to_line() + "\n" for r in self._records).encode("utf-8")

    def with_replaced(self, index: int, ct: Ballot) -> BallotLedger:
        """In-memory copy with one ballot swapped, for tampering experiments."""
        copy = BallotLedger()
        copy._records = [
            LedgerRecord(r.index, r.timestamp, ct) if r.index == index else r for r in self._records
        ]
        return copy


@dataclass(frozen=True)
class SealedTruth:
    """Ground-truth choice per ballot index; used only to score an attack."""

    choices: tuple[int, ...]

    def counts(self) -> dict[int, int]:
        return dict(Counter(self.choices))

    def to_json(self) -> str:
        return json.dumps({"choices": list(self.choices)}) + "\n"

    @classmethod
    def from_json(cls, text: str) -> SealedTruth:
        return cls(tuple(int(c) for c in json.loads(text)["choices"]))
