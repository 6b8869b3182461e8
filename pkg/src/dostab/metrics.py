"""Stability scores from interval tallies.

Each choice carries a weight (2/5, 1/5, 0, -1/5, -2/5). The weighted average,
scaled by 5/2, gives NWA in [-1, 1]; NIWA = 1 - (NWA + 1) / 2 maps it to
[0, 1], where 0 is full agreement and 1 full disagreement. Arithmetic is exact
(``fractions.Fraction``); convert with ``float()`` at the edges.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from .core import Tally
from .errors import EmptyTallyError, IntervalMismatchError

CHOICE_WEIGHTS = (Fraction(2, 5), Fraction(1, 5), Fraction(0), Fraction(-1, 5), Fraction(-2, 5))
NWA_SCALE = Fraction(5, 2)

SCORE_COLUMNS = ("interval", "proposal", "T1", "T2", "T3", "T4", "T5", "T", "NWA", "NIWA")


@dataclass(frozen=True)
class NiwaScore:
    value: Fraction
    proposal: int
    interval: int

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"NIWA out of range: {self.value}")

    def __float__(self):
        return float(self.value)


def total_votes(t: Tally) -> int:
    return sum(t.counts)


def nwa(t: Tally) -> Fraction:
    total = total_votes(t)
    if total == 0:
        raise EmptyTallyError(t.proposal, t.interval)
    weighted = sum(w * c for w, c in zip(CHOICE_WEIGHTS, t.counts))
    return weighted * NWA_SCALE / total


def niwa(t: Tally) -> NiwaScore:
    return NiwaScore(1 - (nwa(t) + 1) / 2, t.proposal, t.interval)


def niwa_series(ledger, x: int, intervals: Optional[Iterable[int]] = None) -> List[NiwaScore]:
    """NIWA per interval for proposal ``x``; defaults to every closed interval."""
    if intervals is None:
        intervals = ledger.closed_intervals
    return [niwa(ledger.tally_in_interval(x, i)) for i in intervals]


class Classification(enum.Enum):
    BEST_CASE = "best-case"
    EXIT_RISK = "exit-risk"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class QuadrilateralSnapshot:
    """Distances from a stakeholder vertex to own group, other group and exit."""

    d_own: Fraction
    d_other: Fraction
    d_exit: Fraction
    interval: int
    classification: Classification = Classification.NEUTRAL


def quadrilateral_snapshot(s_own: NiwaScore, s_other: NiwaScore, s_exit: NiwaScore,
                           flag_exit_risk: bool = True) -> QuadrilateralSnapshot:
    intervals = {s_own.interval, s_other.interval, s_exit.interval}
    if len(intervals) != 1:
        raise IntervalMismatchError(f"scores come from different intervals: {sorted(intervals)}")
    d_own, d_other, d_exit = s_own.value, s_other.value, s_exit.value
    if d_own == 0 and d_other == 0 and d_exit == 1:
        cls = Classification.BEST_CASE
    elif flag_exit_risk and d_exit < min(d_own, d_other):
        cls = Classification.EXIT_RISK
    else:
        cls = Classification.NEUTRAL
    return QuadrilateralSnapshot(d_own, d_other, d_exit, s_own.interval, cls)


def score_row(t: Tally) -> list:
    """One CSV row: interval, proposal, T1..T5, T, NWA, NIWA."""
    return [t.interval, t.proposal, *t.counts, total_votes(t),
            format_real(nwa(t)), format_real(niwa(t).value)]


def format_real(v) -> str:
    # repr of a float is the shortest round-trip text; locale independent
    return repr(float(v))


def scores_csv(tallies: Sequence[Tally]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCORE_COLUMNS)
    for t in tallies:
        w.writerow(score_row(t))
    return buf.getvalue()
