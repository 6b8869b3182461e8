"""Repeated-voting state machine with booth partitioning and aggregation.

A ``VoteLedger`` owns the stakeholder registry, the proposal list, the
recorded votes and the (interval, phase) cursor. All mutating methods check
every precondition before touching state, so a raised error leaves the ledger
unchanged.

Phase cycle per interval::

    Registration -> Voting -> Tallying --update_interval--> Voting (or Registration)
"""
from __future__ import annotations

import hmac
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .core import (NUM_CHOICES, ElectionPhase, IdentityProof, Proposal, ProposalKind,
                   Stakeholder, StakeholderId, Tally, VoteChoice)
from .errors import (DuplicateProposalError, DuplicateStakeholderError, EmptyRegistryError,
                     IllegalTransitionError, IntervalNotExistingError, InvalidIdentityError,
                     InvalidProofError, MixedKeysError, NoBoothAssignmentError, NotEAError,
                     StaleIntervalError, UnknownBoothError, UnknownProposalError,
                     UnknownStakeholderError, WrongPhaseError, ZeroBoothsError)
from .triggers import BlockHeightProof, ElapsedTimeProof, OracleQuorumProof, verify_interval_proof

VoteKey = Tuple[int, int, StakeholderId]  # (proposal, interval, stakeholder)

def _same_token(a, b) -> bool:
    return hmac.compare_digest(str(a).encode(), str(b).encode())


_NEXT_PHASE = {
    ElectionPhase.REGISTRATION: ElectionPhase.VOTING,
    ElectionPhase.VOTING: ElectionPhase.TALLYING,
}


@dataclass(frozen=True)
class VoteRecord:
    choice: int  # ordinal 1..5
    weight: int


@dataclass(frozen=True)
class BoothAssignment:
    booth_count: int
    assignment: Mapping[StakeholderId, int]

    def members(self, booth: int) -> List[StakeholderId]:
        if not 0 <= booth < self.booth_count:
            raise UnknownBoothError(f"booth {booth} not in [0, {self.booth_count})")
        return sorted(j for j, b in self.assignment.items() if b == booth)

    def sizes(self) -> List[int]:
        sizes = [0] * self.booth_count
        for b in self.assignment.values():
            sizes[b] += 1
        return sizes


def assign_booths(stakeholders: Iterable[StakeholderId], z: int, seed) -> BoothAssignment:
    """Balanced random partition of stakeholders into ``z`` booths.

    Booth sizes differ by at most one. The result depends only on the set of
    ids, ``z`` and ``seed``.
    """
    ids = sorted(set(stakeholders))
    if z < 1:
        raise ZeroBoothsError(f"booth count must be >= 1, got {z}")
    if not ids:
        raise EmptyRegistryError("cannot assign booths for an empty registry")
    order = np.random.default_rng(seed).permutation(len(ids))
    assignment = {ids[k]: pos % z for pos, k in enumerate(order)}
    return BoothAssignment(z, assignment)


def aggregate(local_tallies: Sequence[Tally]) -> Tally:
    """Componentwise sum of booth tallies that share one (proposal, interval)."""
    if not local_tallies:
        raise ValueError("nothing to aggregate")
    keys = {(t.proposal, t.interval) for t in local_tallies}
    if len(keys) != 1:
        raise MixedKeysError(f"tallies span several (proposal, interval) keys: {sorted(keys)}")
    (x, i), = keys
    counts = [0] * NUM_CHOICES
    for t in local_tallies:
        for k, c in enumerate(t.counts):
            counts[k] += c
    return Tally(x, i, tuple(counts))


@dataclass
class VoteLedger:
    ea_credential: str
    oracle_credentials: frozenset = frozenset()
    blocks_per_interval: int = 16
    last_height: int = 0
    proposals: Dict[int, Proposal] = field(default_factory=dict)
    stakeholders: Dict[StakeholderId, Stakeholder] = field(default_factory=dict)
    booths: Optional[BoothAssignment] = None
    votes: Dict[VoteKey, VoteRecord] = field(default_factory=dict)
    current_interval: int = 0
    phase: ElectionPhase = ElectionPhase.REGISTRATION

    def __post_init__(self):
        self.oracle_credentials = frozenset(self.oracle_credentials)

    # -- election authority -------------------------------------------------

    def _check_ea(self, ea_token):
        if not _same_token(ea_token, self.ea_credential):
            raise NotEAError("election authority credential rejected")

    def _check_registration(self, what):
        if self.phase is not ElectionPhase.REGISTRATION:
            raise WrongPhaseError(f"{what} requires the Registration phase (phase is {self.phase.value})")

    def add_proposal(self, ea_token, proposal_id: int, question: str = "",
                     kind: ProposalKind = ProposalKind.GENERIC) -> Proposal:
        self._check_ea(ea_token)
        if proposal_id in self.proposals:
            raise DuplicateProposalError(f"proposal {proposal_id} already exists")
        if proposal_id < 0:
            raise ValueError("proposal id must be non-negative")
        p = Proposal(proposal_id, question, ProposalKind(kind))
        self.proposals[proposal_id] = p
        return p

    def register_stakeholder(self, ea_token, stakeholder_id: StakeholderId, weight: int = 1,
                             credential: Optional[str] = None) -> Stakeholder:
        """Register a stakeholder. Without ``credential`` the id itself is the identity token."""
        self._check_ea(ea_token)
        self._check_registration("registration")
        stakeholder_id = str(stakeholder_id)
        if stakeholder_id in self.stakeholders:
            raise DuplicateStakeholderError(f"stakeholder {stakeholder_id!r} already registered")
        s = Stakeholder(stakeholder_id, weight, stakeholder_id if credential is None else str(credential))
        self.stakeholders[stakeholder_id] = s
        # registry changed: the old partition no longer covers everyone
        self.booths = None
        return s

    def update_weight(self, ea_token, stakeholder_id: StakeholderId, weight: int) -> Stakeholder:
        self._check_ea(ea_token)
        self._check_registration("weight update")
        old = self.stakeholders.get(stakeholder_id)
        if old is None:
            raise UnknownStakeholderError(stakeholder_id)
        s = Stakeholder(old.id, weight, old.credential)
        self.stakeholders[stakeholder_id] = s
        return s

    def assign_booths(self, z: int, seed) -> BoothAssignment:
        self.booths = assign_booths(self.stakeholders, z, seed)
        return self.booths

    def advance_phase(self, ea_token) -> ElectionPhase:
        self._check_ea(ea_token)
        nxt = _NEXT_PHASE.get(self.phase)
        if nxt is None:
            raise IllegalTransitionError(
                f"cannot leave {self.phase.value} without an interval update")
        self.phase = nxt
        return nxt

    # -- voting ---------------------------------------------------------------

    def verify_voter(self, j: StakeholderId, proof: IdentityProof) -> bool:
        s = self.stakeholders.get(j)
        return (s is not None and proof.stakeholder == j
                and _same_token(proof.token, s.credential))

    def vote_in_interval(self, x: int, i: int, j: StakeholderId, c, proof: IdentityProof) -> VoteRecord:
        """Record ``j``'s choice on proposal ``x`` in the open interval ``i``.

        A repeat vote in the same open interval replaces the earlier choice.
        """
        choice = c if isinstance(c, VoteChoice) else VoteChoice(c)
        if self.phase is not ElectionPhase.VOTING:
            raise WrongPhaseError(f"voting requires the Voting phase (phase is {self.phase.value})")
        if i != self.current_interval:
            raise StaleIntervalError(f"interval {i} is not the current interval {self.current_interval}")
        if x not in self.proposals:
            raise UnknownProposalError(f"proposal {x}")
        if not self.verify_voter(j, proof):
            raise InvalidIdentityError(f"identity proof rejected for {j!r}")
        rec = VoteRecord(choice.ordinal, self.stakeholders[j].weight)
        self.votes[(x, i, j)] = rec
        return rec

    def _check_tallyable(self, x: int, i: int):
        if not 0 <= i <= self.current_interval:
            raise IntervalNotExistingError(f"interval {i} does not exist (current is {self.current_interval})")
        if i == self.current_interval and self.phase is not ElectionPhase.TALLYING:
            raise WrongPhaseError(f"interval {i} is open; tallying it requires the Tallying phase")
        if x not in self.proposals:
            raise UnknownProposalError(f"proposal {x}")

    def votes_in(self, x: int, i: int) -> Dict[StakeholderId, VoteRecord]:
        return {j: rec for (px, pi, j), rec in self.votes.items() if px == x and pi == i}

    def tally_in_interval(self, x: int, i: int) -> Tally:
        self._check_tallyable(x, i)
        counts = [0] * NUM_CHOICES
        for rec in self.votes_in(x, i).values():
            counts[rec.choice - 1] += rec.weight
        return Tally(x, i, tuple(counts))

    def booth_tally(self, booths: BoothAssignment, b: int, x: int, i: int) -> Tally:
        self._check_tallyable(x, i)
        members = set(booths.members(b))
        counts = [0] * NUM_CHOICES
        for j, rec in self.votes_in(x, i).items():
            if j not in booths.assignment:
                raise NoBoothAssignmentError(f"voter {j!r} has no booth in this assignment")
            if j in members:
                counts[rec.choice - 1] += rec.weight
        return Tally(x, i, tuple(counts))

    def booth_tallies(self, booths: BoothAssignment, x: int, i: int) -> List[Tally]:
        return [self.booth_tally(booths, b, x, i) for b in range(booths.booth_count)]

    # -- interval trigger -----------------------------------------------------

    def check_proof(self, proof: ElapsedTimeProof) -> bool:
        """Validate ``proof`` against this ledger's stored trigger anchors."""
        if isinstance(proof, BlockHeightProof):
            if proof.prev_h != self.last_height or proof.required_x != self.blocks_per_interval:
                return False
        elif isinstance(proof, OracleQuorumProof):
            if proof.ea_total != len(self.oracle_credentials):
                return False
        return verify_interval_proof(proof, self.oracle_credentials)

    def update_interval(self, proof: ElapsedTimeProof, open_registration: bool = False) -> int:
        """Close the current interval and open the next one.

        Anyone may call this; only the proof is checked. ``open_registration``
        is the authority's flag for a registration window before revoting.
        """
        if self.phase is not ElectionPhase.TALLYING:
            raise WrongPhaseError(f"interval update requires the Tallying phase (phase is {self.phase.value})")
        if not self.check_proof(proof):
            raise InvalidProofError("elapsed-time proof did not verify")
        if isinstance(proof, BlockHeightProof):
            self.last_height = proof.cur_h
        self.current_interval += 1
        self.phase = ElectionPhase.REGISTRATION if open_registration else ElectionPhase.VOTING
        return self.current_interval

    @property
    def closed_intervals(self) -> range:
        return range(self.current_interval)

    @property
    def total_weight(self) -> int:
        return sum(s.weight for s in self.stakeholders.values())
