import random

from dostab.core import IdentityProof
from dostab.ledger import VoteLedger
from dostab.triggers import BlockHeightProof

EA = "ea-secret"


def proof_for(ledger):
    x = ledger.blocks_per_interval
    return BlockHeightProof(ledger.last_height, ledger.last_height + x, x)


def new_ledger(n=0, weights=None, proposals=(0,)):
    led = VoteLedger(EA)
    for x in proposals:
        led.add_proposal(EA, x)
    for k in range(n):
        w = 1 if weights is None else weights[k]
        led.register_stakeholder(EA, f"s{k}", w)
    return led


def vote(led, x, j, c, i=None):
    i = led.current_interval if i is None else i
    return led.vote_in_interval(x, i, j, c, IdentityProof(j, led.stakeholders[j].credential))


def close_interval(led):
    """Voting -> Tallying -> next interval's Voting."""
    led.advance_phase(EA)
    led.update_interval(proof_for(led))


def random_ledger(rng: random.Random, max_voters=32, max_weight=5, max_intervals=3, proposals=(0, 1)):
    """A ledger with every interval closed, built through the public API.

    Returns (ledger, ballots) where ballots maps (x, i, j) -> final choice.
    """
    n = rng.randint(1, max_voters)
    led = new_ledger(n, [rng.randint(1, max_weight) for _ in range(n)], proposals)
    led.advance_phase(EA)
    ballots = {}
    for _ in range(rng.randint(1, max_intervals)):
        i = led.current_interval
        for x in proposals:
            for j in led.stakeholders:
                if rng.random() < 0.8:
                    for _ in range(rng.choice((1, 1, 1, 2))):  # some re-votes
                        c = rng.randint(1, 5)
                        vote(led, x, j, c)
                        ballots[(x, i, j)] = c
        close_interval(led)
    return led, ballots
