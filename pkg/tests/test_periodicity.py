import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import dtw_loops, dtw_paths
from seqscan.analysis import TRANSITION_SYMBOL, SymbolicEntry, SymbolicTrajectory
from seqscan.periodicity import (
    FULL_BEHAVIOR,
    PER_ZONE,
    PeriodReport,
    PeriodRow,
    SymbolSeries,
    best_period,
    build_series,
    dtw,
    warp,
    zone_series,
)

T = TRANSITION_SYMBOL


def symbolic(*entries):
    return SymbolicTrajectory(tuple(SymbolicEntry(*e) for e in entries))


# -- dtw ----------------------------------------------------------------------


def test_dtw_identical_and_disjoint():
    assert dtw("abcabc", "abcabc") == 0
    assert dtw([1, 2, 3, 4], [5, 6, 7, 8]) == 4
    assert dtw("a", "b") == 1


def test_dtw_matches_exhaustive_paths():
    assert dtw("abcabc", "bcabca") == dtw_paths("abcabc", "bcabca") == 2.0


def test_dtw_rejects_empty_and_mixed_resolution():
    with pytest.raises(ValueError):
        dtw([], [1])
    with pytest.raises(ValueError):
        dtw(SymbolSeries((1, 2), 1.0), SymbolSeries((1, 2), 2.0))


@given(st.text("abc", min_size=1, max_size=7), st.text("abc", min_size=1, max_size=7))
def test_dtw_matches_path_enumeration(a, b):
    assert dtw(a, b) == dtw_paths(a, b)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=40), st.lists(st.integers(0, 4), min_size=1, max_size=40))
def test_dtw_matches_loops_and_is_symmetric(a, b):
    cost = dtw(a, b)
    assert cost == dtw_loops(a, b) == dtw(b, a)
    assert dtw(a, a) == 0
    assert 0 <= cost <= max(len(a), len(b))
    if len(a) == len(b):
        assert cost <= len(a)


# -- warp ---------------------------------------------------------------------


@given(st.lists(st.integers(0, 3), min_size=4, max_size=30))
def test_warp_rows_follow_the_shift_formula(values):
    report = warp(values)
    n = len(values)
    assert len(report) == n // 2
    assert report.periods.tolist() == list(range(1, n // 2 + 1))
    for p, conf in zip(report.periods, report.confidences):
        assert conf == pytest.approx(1 - dtw_loops(values[: n - p], values[p:]) / (n - p), abs=1e-12)
        assert 0.0 <= conf <= 1.0


def test_alternating_series_has_period_two():
    for n in (4, 10, 30):
        assert warp("ab" * (n // 2)).confidence(2) == 1.0


def test_constant_series_is_periodic_everywhere():
    assert set(warp([3] * 11).confidences.tolist()) == {1.0}


def test_exact_period_and_its_multiples_score_one():
    series = [1, 2, 3, 4, 5] * 6
    report = warp(series)
    for p in (5, 10, 15):
        assert report.confidence(p) == 1.0


def test_warp_needs_four_slots():
    with pytest.raises(ValueError):
        warp([1, 2, 1])


def test_corrupted_period_seven_against_generated_scores():
    # generate-and-score: the top row of warp equals the top of the scores
    # recomputed with the loop oracle; with full DTW the shift of one slot
    # already scores 1 - 2/(n-1), so it wins over the true period
    rng = np.random.default_rng(0)
    s = np.tile(np.arange(1, 8), 6)
    for i in rng.choice(len(s), round(0.1 * len(s)), replace=False):
        s[i] = rng.choice([z for z in range(1, 8) if z != s[i]])
    n = len(s)
    scores = [1 - dtw_loops(s[: n - p], s[p:]) / (n - p) for p in range(1, n // 2 + 1)]
    top = best_period(warp(s.tolist()))
    assert top.period == int(np.argmax(scores)) + 1 == 1
    assert top.confidence == pytest.approx(1 - 2 / (n - 1))
    assert warp(np.tile(np.arange(1, 8), 6).tolist()).confidence(7) == 1.0


def test_shift_one_lower_bound():
    rng = np.random.default_rng(1)
    for _ in range(50):
        s = rng.integers(0, 5, int(rng.integers(4, 40))).tolist()
        assert warp(s).confidence(1) >= 1 - 2 / (len(s) - 1) - 1e-12


# -- best period --------------------------------------------------------------


def test_best_period_smallest_of_the_top():
    report = PeriodReport((PeriodRow(1, 0.5), PeriodRow(2, 0.9), PeriodRow(3, 0.7), PeriodRow(4, 0.9)))
    assert best_period(report) == PeriodRow(2, 0.9)
    assert best_period(report, 0.9) == PeriodRow(2, 0.9)
    assert best_period(report, 0.95) is None
    assert best_period(PeriodReport(())) is None


# -- series construction ------------------------------------------------------


def test_single_visit_per_zone_encoding():
    # third to fifth of eight slots
    st_ = symbolic((0.0, 20.0, T), (20.0, 49.0, 1), (49.0, 80.0, T))
    series = build_series(st_, 10.0, PER_ZONE, zone=1, span=(0.0, 80.0))
    assert str(series) == "00111000"
    assert len(series) == 8 and series.start == 0.0
    # default span runs from the first to the last visit of the zone
    assert str(build_series(st_, 10.0, PER_ZONE, zone=1)) == "111"


def test_split_slot_goes_to_the_zone():
    st_ = symbolic((0.0, 13.0, 1), (13.0, 40.0, T))
    series = build_series(st_, 10.0, FULL_BEHAVIOR)
    assert series.symbols == (1, 1, T, T)
    st_ = symbolic((0.0, 18.0, 1), (18.0, 21.0, T), (21.0, 40.0, 2))
    # slot [10,20) overlaps zone 1 for 8 s, slot [20,30] overlaps zone 2 for 9 s
    assert build_series(st_, 10.0).symbols == (1, 1, 2, 2)


def test_last_slot_holds_the_span_end():
    st_ = symbolic((0.0, 8.0, 1), (8.0, 22.0, T), (22.0, 30.0, 2))
    assert build_series(st_, 10.0).symbols == (1, T, 2)
    assert build_series(st_, 7.0).symbols == (1, 1, T, 2, 2)
    # extents are closed: touching a slot at its first instant claims it
    st_ = symbolic((0.0, 10.0, 1), (10.0, 20.0, T), (20.0, 30.0, 2))
    assert build_series(st_, 10.0).symbols == (1, 1, 2)


def test_build_series_errors():
    st_ = symbolic((0.0, 10.0, 1), (10.0, 20.0, T))
    with pytest.raises(ValueError, match="exceeds"):
        build_series(st_, 25.0)
    with pytest.raises(ValueError):
        build_series(st_, 0.0)
    with pytest.raises(ValueError):
        build_series(SymbolicTrajectory(()), 1.0)
    with pytest.raises(ValueError):
        build_series(st_, 1.0, PER_ZONE)
    with pytest.raises(ValueError):
        build_series(st_, 1.0, PER_ZONE, zone=9)
    with pytest.raises(ValueError):
        build_series(st_, 1.0, "weekly")
    with pytest.raises(ValueError):
        SymbolSeries((1,), 1.0)


def test_zone_series_one_per_zone():
    st_ = symbolic((0.0, 8.0, 1), (8.0, 20.0, T), (20.0, 35.0, 2), (35.0, 40.0, T), (40.0, 50.0, 1))
    out = zone_series(st_, 10.0, [1, 2])
    assert str(out[1]) == "10001" and str(out[2]) == "11"


def test_cyclic_visits_recover_the_cycle():
    # four zones, one slot per visit and one per transition
    entries, t = [], 0.0
    for z in itertools.islice(itertools.cycle([1, 2, 3, 4]), 12):
        entries += [(t, t + 4.0, z), (t + 4.0, t + 10.0, T)]
        t += 10.0
    series = build_series(symbolic(*entries[:-1]), 5.0)
    assert len(series) == 23
    assert series.symbols[:8] == (1, T, 2, T, 3, T, 4, T)
    top = best_period(warp(series))
    assert top.period == 8 and top.confidence == 1.0
