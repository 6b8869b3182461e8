"""Canonical JSON form of a ``VoteLedger``.

The layout (``FORMAT_VERSION`` 1) is documented in docs/schema.md. Output is
canonical: keys sorted, records sorted, so two ledgers are equal exactly when
their serialised texts are equal.
"""
from __future__ import annotations

import json
from typing import Any

from .core import NUM_CHOICES, ElectionPhase, Proposal, ProposalKind, Stakeholder
from .errors import InvariantViolationError, ParseError
from .ledger import BoothAssignment, VoteLedger, VoteRecord

FORMAT_VERSION = 1


def ledger_to_dict(ledger: VoteLedger) -> dict:
    booths = None
    if ledger.booths is not None:
        booths = {"booth_count": ledger.booths.booth_count,
                  "assignment": dict(sorted(ledger.booths.assignment.items()))}
    return {
        "version": FORMAT_VERSION,
        "ea_credential": ledger.ea_credential,
        "oracle_credentials": sorted(ledger.oracle_credentials),
        "blocks_per_interval": ledger.blocks_per_interval,
        "last_height": ledger.last_height,
        "proposals": [{"id": p.id, "question": p.question, "kind": p.kind.value}
                      for _, p in sorted(ledger.proposals.items())],
        "registry": [{"id": s.id, "weight": s.weight, "credential": s.credential}
                     for _, s in sorted(ledger.stakeholders.items())],
        "booths": booths,
        "votes": [{"proposal": x, "interval": i, "stakeholder": j,
                   "choice": rec.choice, "weight": rec.weight}
                  for (x, i, j), rec in sorted(ledger.votes.items())],
        "current_interval": ledger.current_interval,
        "phase": ledger.phase.value,
    }


def serialise_ledger(ledger: VoteLedger) -> str:
    return json.dumps(ledger_to_dict(ledger), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _int(v, what, minimum=0):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvariantViolationError(f"{what} must be an integer", repr(v))
    if v < minimum:
        raise InvariantViolationError(f"{what} must be >= {minimum}", repr(v))
    return v


def _str(v, what):
    if not isinstance(v, str):
        raise InvariantViolationError(f"{what} must be a string", repr(v))
    return v


def _get(d: Any, key: str, where: str):
    if not isinstance(d, dict):
        raise InvariantViolationError(f"{where} must be an object")
    if key not in d:
        raise InvariantViolationError(f"{where} is missing field {key!r}")
    return d[key]


def ledger_from_dict(doc: Any) -> VoteLedger:
    """Build a ledger from a parsed document, checking every invariant."""
    version = _get(doc, "version", "document")
    if version != FORMAT_VERSION:
        raise InvariantViolationError("unsupported version", repr(version))

    current = _int(_get(doc, "current_interval", "document"), "current_interval")
    try:
        phase = ElectionPhase(_get(doc, "phase", "document"))
    except ValueError as e:
        raise InvariantViolationError("phase must be Registration, Voting or Tallying", str(e))

    proposals = {}
    for p in _get(doc, "proposals", "document"):
        pid = _int(_get(p, "id", "proposal"), "proposal id")
        if pid in proposals:
            raise InvariantViolationError("proposal ids must be unique", str(pid))
        try:
            kind = ProposalKind(_get(p, "kind", "proposal"))
        except ValueError as e:
            raise InvariantViolationError("unknown proposal kind", str(e))
        proposals[pid] = Proposal(pid, _str(_get(p, "question", "proposal"), "question"), kind)

    stakeholders = {}
    for s in _get(doc, "registry", "document"):
        sid = _str(_get(s, "id", "stakeholder"), "stakeholder id")
        if sid in stakeholders:
            raise InvariantViolationError("stakeholder ids must be unique", sid)
        w = _int(_get(s, "weight", "stakeholder"), "stakeholder weight", minimum=1)
        stakeholders[sid] = Stakeholder(sid, w, _str(_get(s, "credential", "stakeholder"), "credential"))

    booths = None
    b = _get(doc, "booths", "document")
    if b is not None:
        z = _int(_get(b, "booth_count", "booths"), "booth_count", minimum=1)
        assignment = _get(b, "assignment", "booths")
        if not isinstance(assignment, dict):
            raise InvariantViolationError("booth assignment must be an object")
        for sid, idx in assignment.items():
            if _int(idx, "booth index") >= z:
                raise InvariantViolationError("booth index must be < booth_count", f"{sid}: {idx}")
        if set(assignment) != set(stakeholders):
            raise InvariantViolationError("booth assignment must cover exactly the registry")
        booths = BoothAssignment(z, dict(assignment))

    votes = {}
    for v in _get(doc, "votes", "document"):
        x = _int(_get(v, "proposal", "vote"), "vote proposal")
        i = _int(_get(v, "interval", "vote"), "vote interval")
        j = _str(_get(v, "stakeholder", "vote"), "vote stakeholder")
        c = _int(_get(v, "choice", "vote"), "vote choice", minimum=1)
        if c > NUM_CHOICES:
            raise InvariantViolationError(f"vote choice must be in 1..{NUM_CHOICES}", str(c))
        w = _int(_get(v, "weight", "vote"), "vote weight", minimum=1)
        if x not in proposals:
            raise InvariantViolationError("vote references unknown proposal", str(x))
        if j not in stakeholders:
            raise InvariantViolationError("vote references unregistered stakeholder", j)
        if i > current or (i == current and phase is ElectionPhase.REGISTRATION):
            raise InvariantViolationError("vote recorded in an interval that is not open or closed",
                                          f"interval {i}, current {current}, phase {phase.value}")
        if (x, i, j) in votes:
            raise InvariantViolationError("at most one vote per (proposal, interval, stakeholder)",
                                          f"{x}:{i}:{j}")
        votes[(x, i, j)] = VoteRecord(c, w)

    oracles = _get(doc, "oracle_credentials", "document")
    if not isinstance(oracles, list):
        raise InvariantViolationError("oracle_credentials must be a list")
    return VoteLedger(
        ea_credential=_str(_get(doc, "ea_credential", "document"), "ea_credential"),
        oracle_credentials=frozenset(_str(o, "oracle credential") for o in oracles),
        blocks_per_interval=_int(_get(doc, "blocks_per_interval", "document"),
                                 "blocks_per_interval", minimum=1),
        last_height=_int(_get(doc, "last_height", "document"), "last_height"),
        proposals=proposals,
        stakeholders=stakeholders,
        booths=booths,
        votes=votes,
        current_interval=current,
        phase=phase,
    )


def parse_ledger(text: str) -> VoteLedger:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    return ledger_from_dict(doc)
