"""Exception hierarchy shared by every votecrack module."""


class VotecrackError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(VotecrackError, ValueError):
    """An argument is outside the domain an operation accepts."""


class NotInvertibleError(ParameterError):
    pass


class NonResidueError(ParameterError):
    """A square root was requested for a quadratic non-residue."""


class CorruptionError(VotecrackError):
    """A decrypted intermediate value cannot have come from a valid ciphertext."""


class NotFoundError(VotecrackError, LookupError):
    """A discrete-log search exhausted its space without a match."""


class BudgetExceededError(VotecrackError):
    def __init__(self, message: str, iterations: int):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class InconsistencyError(VotecrackError):
    """A solver produced an answer that fails re-exponentiation."""


class AttackInapplicableError(VotecrackError):
    pass


class AmbiguityError(VotecrackError):
    """The two candidate ids share a residuosity class."""


class UninformativeError(VotecrackError):
    """The ballots carry no residuosity signal (squared encoding)."""


class KeyFileError(ParameterError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class FixtureError(VotecrackError):
    """Bundled reproduction data is missing or fails its digest."""
