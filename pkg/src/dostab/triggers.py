"""Interval-trigger proofs: block-height delta and election-authority oracle quorum.

Verification is pure. Who submits a proof is irrelevant; only its validity is
checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import AbstractSet, FrozenSet, Iterable, Union

from .errors import HeightRegressionError


@dataclass(frozen=True)
class BlockHeightProof:
    prev_h: int
    cur_h: int
    required_x: int


@dataclass(frozen=True)
class OracleQuorumProof:
    certificates: FrozenSet[str] = field(default_factory=frozenset)
    ea_total: int = 1

    def __post_init__(self):
        object.__setattr__(self, "certificates", frozenset(self.certificates))
        if self.ea_total < 1:
            raise ValueError("ea_total must be >= 1")


ElapsedTimeProof = Union[BlockHeightProof, OracleQuorumProof]


def quorum_threshold(ea_total: int) -> int:
    """Smallest certificate count that is at least two thirds of ``ea_total``."""
    if ea_total < 1:
        raise ValueError("ea_total must be >= 1")
    return -(-2 * ea_total // 3)


def verify_block_height(prev_h: int, cur_h: int, required_x: int) -> bool:
    if cur_h < prev_h:
        raise HeightRegressionError(f"block height went from {prev_h} to {cur_h}")
    return cur_h - prev_h >= required_x


def verify_oracle_quorum(certificates: Iterable[str], ea_total: int,
                         known_ea_credentials: AbstractSet[str]) -> bool:
    # unknown and repeated certificates are ignored, not fatal
    valid = set(certificates) & set(known_ea_credentials)
    return len(valid) >= quorum_threshold(ea_total)


def verify_interval_proof(proof: ElapsedTimeProof,
                          known_ea_credentials: AbstractSet[str] = frozenset()) -> bool:
    if isinstance(proof, BlockHeightProof):
        return verify_block_height(proof.prev_h, proof.cur_h, proof.required_x)
    if isinstance(proof, OracleQuorumProof):
        return verify_oracle_quorum(proof.certificates, proof.ea_total, known_ea_credentials)
    raise TypeError(f"not an interval proof: {proof!r}")


def proof_to_dict(proof: ElapsedTimeProof) -> dict:
    if isinstance(proof, BlockHeightProof):
        return {"type": "BlockHeight", "prev_h": proof.prev_h, "cur_h": proof.cur_h,
                "required_x": proof.required_x}
    return {"type": "OracleQuorum", "certificates": sorted(proof.certificates),
            "ea_total": proof.ea_total}


def proof_from_dict(d: dict) -> ElapsedTimeProof:
    kind = d.get("type")
    if kind == "BlockHeight":
        return BlockHeightProof(int(d["prev_h"]), int(d["cur_h"]), int(d["required_x"]))
    if kind == "OracleQuorum":
        return OracleQuorumProof(frozenset(map(str, d.get("certificates", []))), int(d["ea_total"]))
    raise ValueError(f"unknown proof type {kind!r}")
