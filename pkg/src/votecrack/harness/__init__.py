from .election import Candidate, Election, cast_ballots, create_election, run_election
from .ledger import BallotLedger, LedgerRecord, SealedTruth
from .reproduce import reproduce_appendix_b, reproduce_appendix_c
from .scenarios import attack1_scenario, attack2_scenario

__all__ = [
    "BallotLedger",
    "Candidate",
    "Election",
    "LedgerRecord",
    "SealedTruth",
    "attack1_scenario",
    "attack2_scenario",
    "cast_ballots",
    "create_election",
    "reproduce_appendix_b",
    "reproduce_appendix_c",
    "run_election",
]
