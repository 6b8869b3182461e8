"""Exception hierarchy. Every domain failure derives from ``DostabError``."""


class DostabError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


# core
class InvalidChoiceError(DostabError, ValueError):
    pass


# ledger
class NotEAError(DostabError):
    pass


class WrongPhaseError(DostabError):
    pass


class IllegalTransitionError(DostabError):
    pass


class DuplicateStakeholderError(DostabError):
    pass


class UnknownStakeholderError(DostabError):
    pass


class DuplicateProposalError(DostabError):
    pass


class UnknownProposalError(DostabError):
    pass


class InvalidWeightError(DostabError, ValueError):
    pass


class EmptyRegistryError(DostabError):
    pass


class ZeroBoothsError(DostabError, ValueError):
    pass


class UnknownBoothError(DostabError):
    pass


class NoBoothAssignmentError(DostabError):
    pass


class StaleIntervalError(DostabError):
    pass


class InvalidIdentityError(DostabError):
    pass


class IntervalNotExistingError(DostabError):
    pass


class MixedKeysError(DostabError):
    pass


class InvalidProofError(DostabError):
    pass


# triggers
class HeightRegressionError(DostabError):
    pass


# metrics
class EmptyTallyError(DostabError):
    def __init__(self, proposal=None, interval=None):
        self.proposal = proposal
        self.interval = interval
        where = ""
        if interval is not None:
            where = f" (proposal {proposal}, interval {interval})"
        super().__init__("no votes in interval" + where)


class IntervalMismatchError(DostabError):
    pass


# charts
class SeriesTooShortError(DostabError):
    pass


class BadLambdaError(DostabError, ValueError):
    pass


# io
class ParseError(DostabError):
    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        loc = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(msg + loc)


class InvariantViolationError(DostabError):
    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class ConfigError(DostabError):
    pass
