"""Value types shared across the package.

All types here are frozen dataclasses or enums; they are safe to copy and
share. Stakeholder ids are strings (an opaque, wallet-address-like handle).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import total_ordering
from typing import Optional, Tuple

from .errors import InvalidChoiceError, InvalidWeightError

NUM_CHOICES = 5

StakeholderId = str


class ProposalKind(enum.Enum):
    OWN_GROUP = "OwnGroup"      # distance stakeholder -> own group majority
    OTHER_GROUP = "OtherGroup"  # distance stakeholder -> another core group
    EXIT = "Exit"               # distance stakeholder -> exit
    GENERIC = "Generic"


class ElectionPhase(enum.Enum):
    REGISTRATION = "Registration"
    VOTING = "Voting"
    TALLYING = "Tallying"


@dataclass(frozen=True)
class Stakeholder:
    id: StakeholderId
    weight: int = 1
    credential: str = ""
    booth: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.weight, bool) or not isinstance(self.weight, int) or self.weight < 1:
            raise InvalidWeightError(f"weight must be a positive integer, got {self.weight!r}")


@dataclass(frozen=True)
class Proposal:
    id: int
    question: str = ""
    kind: ProposalKind = ProposalKind.GENERIC


@dataclass(frozen=True, order=True)
class VoteChoice:
    """One of the five ordinal choices; 1 is highly agreeable, 5 highly disagreeable."""

    ordinal: int

    def __post_init__(self):
        if isinstance(self.ordinal, bool) or not isinstance(self.ordinal, int) \
                or not 1 <= self.ordinal <= NUM_CHOICES:
            raise InvalidChoiceError(f"choice ordinal must be in 1..{NUM_CHOICES}, got {self.ordinal!r}")

    @property
    def agreement_level(self) -> int:
        return self.ordinal - 1

    @classmethod
    def all(cls) -> Tuple["VoteChoice", ...]:
        return tuple(cls(k) for k in range(1, NUM_CHOICES + 1))


@total_ordering
@dataclass(frozen=True)
class IntervalId:
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"interval index must be a non-negative integer, got {self.index!r}")

    def __lt__(self, other):
        if not isinstance(other, IntervalId):
            return NotImplemented
        return self.index < other.index

    def next(self) -> "IntervalId":
        return IntervalId(self.index + 1)

    def __int__(self):
        return self.index


@dataclass(frozen=True)
class Tally:
    """Weighted vote counts T1..T5 for one (proposal, interval)."""

    proposal: int
    interval: int
    counts: Tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)

    def __post_init__(self):
        counts = tuple(self.counts)
        if len(counts) != NUM_CHOICES or any(
                isinstance(c, bool) or not isinstance(c, int) or c < 0 for c in counts):
            raise ValueError(f"tally needs {NUM_CHOICES} non-negative integer counts, got {self.counts!r}")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def count(self, choice: VoteChoice) -> int:
        return self.counts[choice.ordinal - 1]


@dataclass(frozen=True)
class IdentityProof:
    stakeholder: StakeholderId
    token: str
