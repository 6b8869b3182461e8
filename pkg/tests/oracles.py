"""Independent reference computations used to freeze expected values.

Nothing here imports the code under test's formulas; each oracle takes a
different route to the same quantity.
"""
from fractions import Fraction
from itertools import combinations


def expand_votes(counts):
    """Tally counts -> flat list of individual choice ordinals."""
    out = []
    for ordinal, n in enumerate(counts, start=1):
        out.extend([ordinal] * n)
    return out


def brute_nwa(counts):
    # per-vote: weight (3 - c)/5, rescaled by 5/2 -> (3 - c)/2; then average
    votes = expand_votes(counts)
    return sum(Fraction(3 - c, 2) for c in votes) / len(votes)


def brute_niwa(counts):
    # equivalently, the mean agreement level (c - 1) rescaled from 0..4 to 0..1
    votes = expand_votes(counts)
    return sum(Fraction(c - 1, 4) for c in votes) / len(votes)


def brute_min_quorum(ea_total):
    """Smallest certificate-set size m with m / ea_total >= 2/3, by enumeration."""
    for m in range(ea_total + 1):
        if Fraction(m, ea_total) >= Fraction(2, 3):
            return m
    raise AssertionError("unreachable")


def brute_quorum_sets(ea_total):
    """Sizes of every subset of EA indices that reaches two thirds."""
    ok = set()
    for m in range(ea_total + 1):
        for subset in combinations(range(ea_total), m):
            if 3 * len(subset) >= 2 * ea_total:
                ok.add(len(subset))
    return ok


def ewma_closed_form(xs, lam, z0):
    """z_i as an explicit geometric-weighted sum rather than a recurrence."""
    out = []
    for i in range(1, len(xs) + 1):
        z = (1 - lam) ** i * z0
        for k in range(1, i + 1):
            z += lam * (1 - lam) ** (i - k) * xs[k - 1]
        out.append(z)
    return out


def ewma_halfwidth_by_variance(sigma, lam, i, width=3.0):
    """3 * sd of z_i, summing the squared weights of i independent inputs."""
    var = sigma ** 2 * sum((lam * (1 - lam) ** k) ** 2 for k in range(i))
    return width * var ** 0.5
