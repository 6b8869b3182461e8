from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dostab.core import Tally
from dostab.errors import EmptyTallyError, IntervalMismatchError
from dostab.metrics import (CHOICE_WEIGHTS, Classification, NiwaScore, niwa, niwa_series, nwa,
                            quadrilateral_snapshot, score_row, scores_csv, total_votes)
from helpers import close_interval, new_ledger, vote
from oracles import brute_niwa, brute_nwa

counts_st = st.lists(st.integers(0, 50), min_size=5, max_size=5).filter(lambda c: sum(c) > 0)


def T(*counts, x=0, i=0):
    return Tally(x, i, counts)


def test_choice_weights_shape():
    assert CHOICE_WEIGHTS == tuple(Fraction(k, 5) for k in (2, 1, 0, -1, -2))
    assert all(a > b for a, b in zip(CHOICE_WEIGHTS, CHOICE_WEIGHTS[1:]))


def test_total_votes():
    assert total_votes(T(2, 1, 3, 1, 1)) == 8
    assert total_votes(T(0, 0, 0, 0, 0)) == 0


def test_worked_example_against_oracle():
    t = T(2, 1, 3, 1, 1)
    assert brute_nwa(t.counts) == Fraction(1, 8)
    assert brute_niwa(t.counts) == Fraction(7, 16)
    assert nwa(t) == Fraction(1, 8)
    assert niwa(t).value == Fraction(7, 16)
    assert float(niwa(t)) == 0.4375


@pytest.mark.parametrize("counts,expected", [
    ((5, 0, 0, 0, 0), 0), ((0, 0, 0, 0, 9), 1), ((0, 0, 4, 0, 0), Fraction(1, 2)),
])
def test_boundaries_exact(counts, expected):
    assert niwa(T(*counts)).value == expected


def test_empty_tally_is_an_error():
    with pytest.raises(EmptyTallyError, match="no votes in interval"):
        niwa(T(0, 0, 0, 0, 0))


@given(counts_st)
def test_matches_oracle(counts):
    assert nwa(T(*counts)) == brute_nwa(counts)
    assert niwa(T(*counts)).value == brute_niwa(counts)


@given(counts_st, st.integers(1, 20))
def test_scale_invariance(counts, k):
    assert niwa(T(*counts)) == niwa(T(*(k * c for c in counts)))


@given(counts_st)
def test_antisymmetry_and_range(counts):
    t, mirrored = T(*counts), T(*reversed(counts))
    assert nwa(mirrored) == -nwa(t)
    assert niwa(mirrored).value == 1 - niwa(t).value
    assert -1 <= nwa(t) <= 1
    assert 0 <= niwa(t).value <= 1


def test_series_over_ledger():
    led = new_ledger(4)
    led.advance_phase("ea-secret")
    for c in (3, 2, 1):
        for j in led.stakeholders:
            vote(led, 0, j, c)
        close_interval(led)
    scores = niwa_series(led, 0)
    assert [s.value for s in scores] == [Fraction(1, 2), Fraction(1, 4), 0]
    assert [s.interval for s in scores] == [0, 1, 2]


def test_series_reports_empty_interval():
    led = new_ledger(2)
    led.advance_phase("ea-secret")
    vote(led, 0, "s0", 1)
    close_interval(led)
    close_interval(led)  # nobody voted
    with pytest.raises(EmptyTallyError) as ei:
        niwa_series(led, 0)
    assert ei.value.interval == 1


def S(v, i=0):
    return NiwaScore(Fraction(v), 0, i)


@pytest.mark.parametrize("d,cls", [
    ((0, 0, 1), Classification.BEST_CASE),
    (("1/2", "1/2", "1/2"), Classification.NEUTRAL),
    (("4/5", "7/10", "1/10"), Classification.EXIT_RISK),
])
def test_quadrilateral(d, cls):
    snap = quadrilateral_snapshot(*(S(v) for v in d))
    assert snap.classification is cls
    assert (snap.d_own, snap.d_other, snap.d_exit) == tuple(Fraction(v) for v in d)


def test_quadrilateral_flag_can_be_disabled():
    snap = quadrilateral_snapshot(S("4/5"), S("7/10"), S("1/10"), flag_exit_risk=False)
    assert snap.classification is Classification.NEUTRAL


def test_quadrilateral_interval_mismatch():
    with pytest.raises(IntervalMismatchError):
        quadrilateral_snapshot(S(0, 1), S(0, 1), S(1, 2))


def test_score_csv_columns():
    text = scores_csv([T(2, 1, 3, 1, 1, i=4)])
    assert text.splitlines() == ["interval,proposal,T1,T2,T3,T4,T5,T,NWA,NIWA",
                                 "4,0,2,1,3,1,1,8,0.125,0.4375"]
    assert score_row(T(1, 0, 0, 0, 0))[-1] == "0.0"
