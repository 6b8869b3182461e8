import pytest
from hypothesis import given, strategies as st

from dostab.errors import HeightRegressionError
from dostab.triggers import (BlockHeightProof, OracleQuorumProof, proof_from_dict, proof_to_dict,
                             quorum_threshold, verify_block_height, verify_interval_proof,
                             verify_oracle_quorum)
from oracles import brute_min_quorum, brute_quorum_sets


def test_block_height_examples():
    assert verify_block_height(100, 116, 16)
    assert not verify_block_height(100, 110, 16)
    with pytest.raises(HeightRegressionError):
        verify_block_height(100, 90, 16)


def test_oracle_quorum_examples():
    creds = {"a", "b", "c", "d"}
    assert verify_oracle_quorum({"a", "b"}, 3, creds)
    assert not verify_oracle_quorum({"a", "b"}, 4, creds)
    assert verify_oracle_quorum({"a"}, 1, {"a"})


def test_unknown_and_duplicate_certificates_ignored():
    creds = {"a", "b", "c"}
    assert not verify_oracle_quorum(["a", "a", "zz"], 3, creds)
    assert verify_oracle_quorum(["a", "a", "b", "zz"], 3, creds)


@pytest.mark.parametrize("n", range(1, 31))
def test_threshold_matches_enumeration(n):
    assert quorum_threshold(n) == brute_min_quorum(n)
    if n <= 12:
        assert min(brute_quorum_sets(n)) == quorum_threshold(n)


def test_dispatch():
    assert verify_interval_proof(BlockHeightProof(0, 16, 16))
    assert not verify_interval_proof(OracleQuorumProof(frozenset(), 3), {"a", "b", "c"})


@given(st.integers(0, 100), st.integers(0, 100), st.integers(1, 50))
def test_verify_is_pure(prev, delta, x):
    p = BlockHeightProof(prev, prev + delta, x)
    assert verify_interval_proof(p) == verify_interval_proof(p) == (delta >= x)


@pytest.mark.parametrize("proof", [BlockHeightProof(3, 19, 16),
                                   OracleQuorumProof(frozenset({"x", "y"}), 3)])
def test_proof_json_roundtrip(proof):
    assert proof_from_dict(proof_to_dict(proof)) == proof
