"""Tests for trajectory records, the head/tail table, error bounds, the
exclusion scan, exhaustive range verification, and the family probes.

Wherever a closed form or a memoized computation is under test, a plain
brute-force route computes the same quantity independently."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collatzbin.analysis import (
    DELTA_TABLE,
    Branch,
    DivergenceError,
    MapKind,
    audit_length_deltas,
    epsilon_bound,
    family_orbit_probe,
    head_tail_classify,
    kstar_scan,
    run_trajectory,
    verify_range,
)
from collatzbin.exact import GROUND_STATE, BinaryFraction, to_decimal, two_adic_valuation
from collatzbin.maps import Family, binary_step, critical_point, embed, reduced_step

odd_integers = st.integers(min_value=0, max_value=2**40).map(lambda m: 2 * m + 1)


def bf(bits: str) -> BinaryFraction:
    return BinaryFraction.from_bits(bits)


def brute_stopping_time(x: int) -> int:
    steps = 0
    while x != 1:
        x = reduced_step(x)
        steps += 1
    return steps


class TestRunTrajectory:
    def test_orbit_of_31(self):
        record = run_trajectory(31)
        assert record.stopping_time == 39
        assert record.max_length == 12
        assert record.lengths.count(12) == 3
        assert record.hailstone_index == 26
        assert record.iterates[-1] == GROUND_STATE
        assert len(record.iterates) == 40

    def test_one_step_orbit(self):
        record = run_trajectory(5)
        assert record.stopping_time == 1
        assert record.iterates == [bf("101"), GROUND_STATE]

    def test_lengths_track_iterates(self):
        record = run_trajectory(27)
        assert record.lengths == [y.length for y in record.iterates]
        assert record.max_length == max(record.lengths)
        assert record.hailstone_index == record.lengths.index(record.max_length)
        assert record.hailstone.length == record.max_length

    def test_binary_and_reduced_stopping_times_agree(self):
        for x in range(1, 400, 2):
            b = run_trajectory(x, MapKind.BINARY)
            r = run_trajectory(x, MapKind.REDUCED)
            assert b.stopping_time == r.stopping_time == brute_stopping_time(x)

    def test_reduced_orbit_of_11(self):
        record = run_trajectory(11, MapKind.REDUCED)
        assert record.iterates == [11, 17, 13, 5, 1]
        assert record.stopping_time == 4

    def test_collatz_orbit_of_7(self):
        record = run_trajectory(7, MapKind.COLLATZ)
        assert record.stopping_time == 16
        assert record.iterates[:6] == [7, 22, 11, 34, 17, 52]

    def test_capped_orbit_reports_no_stopping_time(self):
        record = run_trajectory(27, max_steps=5)
        assert record.capped
        assert record.stopping_time is None
        assert len(record.iterates) == 6

    def test_ground_start_is_followed_to_expose_cycles(self):
        record = run_trajectory(1, MapKind.COLLATZ, max_steps=4)
        assert record.iterates == [1, 4, 2, 1, 4]
        assert record.stopping_time == 0
        fixed = run_trajectory(1, MapKind.BINARY, max_steps=3)
        assert fixed.iterates == [GROUND_STATE] * 4
        assert fixed.stopping_time == 0

    def test_binary_start_accepts_digit_points(self):
        record = run_trajectory(bf("1011"))
        assert record.iterates[1] == bf("10001")
        assert record.stopping_time == 4

    def test_rejects_bad_starts(self):
        with pytest.raises(ValueError):
            run_trajectory(10, MapKind.REDUCED)
        with pytest.raises(ValueError):
            run_trajectory(0, MapKind.COLLATZ)
        with pytest.raises(ValueError):
            run_trajectory(bf("101"), MapKind.REDUCED)
        with pytest.raises(ValueError):
            run_trajectory(31, max_steps=0)


class TestHeadTailTable:
    def test_classification_examples(self):
        rep = head_tail_classify(bf("100101"))
        assert (rep.head, rep.tail) == ("h1", "t3")
        assert (rep.predicted_min, rep.predicted_max) == (None, -2)
        assert rep.observed_delta == -3
        assert rep.within_bounds()

        rep = head_tail_classify(bf("111111"))
        assert (rep.head, rep.tail) == ("h4", "t4")
        assert (rep.predicted_min, rep.predicted_max) == (1, 1)
        assert rep.observed_delta == 1

        rep = head_tail_classify(bf("100001"))
        assert (rep.head, rep.tail) == ("h1", "t1")
        assert rep.observed_delta == -1

    def test_needs_six_digits(self):
        with pytest.raises(ValueError):
            head_tail_classify(bf("10101"))

    def test_exhaustive_at_length_ten(self):
        for num in range((1 << 9) + 1, 1 << 10, 2):
            y = BinaryFraction(num, 10)
            rep = head_tail_classify(y)
            assert rep.within_bounds(), y.to_bits()
            if rep.branch is not Branch.PREDECESSOR:
                arm = 1 if rep.branch is Branch.LOW else 2
                assert rep.observed_delta == arm - two_adic_valuation(3 * num + 1)

    def test_predecessor_rows_stay_within_their_cell(self):
        for blocks in (3, 10, 40):
            y = bf("1" + "01" * blocks)
            rep = head_tail_classify(y)
            assert (rep.head, rep.tail) == ("h2", "t3")
            assert rep.observed_delta == 1 - y.length
            assert rep.within_bounds()

    def test_tails_pin_the_valuation(self):
        # tail 001 strips two factors of 2, tails 011 and 111 strip one,
        # tail 101 strips at least three
        for num in range((1 << 7) + 1, 1 << 8, 2):
            t = 3 * num + 1
            v = two_adic_valuation(t)
            tail = format(num, "b")[-3:]
            if tail == "001":
                assert v == 2
            elif tail in ("011", "111"):
                assert v == 1
            else:
                assert v >= 3

    def test_no_cell_allows_sustained_growth_without_tail_101(self):
        assert sum(hi for _, hi in DELTA_TABLE.values()) <= 0

    def test_audit_is_clean_and_deterministic(self):
        summary = audit_length_deltas(10**4, 64, seed=1)
        assert summary.ok
        assert sum(summary.cell_counts.values()) == 10**4
        assert len(summary.cell_counts) == 16
        again = audit_length_deltas(10**4, 64, seed=1)
        assert again.cell_counts == summary.cell_counts

    def test_audit_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            audit_length_deltas(100, 5)
        with pytest.raises(ValueError):
            audit_length_deltas(0, 16)


def epsilon_recurrence(k: int, ell: int) -> Fraction:
    """Independent route: propagate one last-place bump along the worst-case
    arm pattern (alternating halve/quarter, ending on a halve)."""
    e = Fraction(0)
    unit = Fraction(1, 1 << ell)
    for j in range(1, k + 1):
        arm = 1 if (k - j) % 2 == 0 else 2
        e = (3 * e + unit) / (1 << arm)
    return e


class TestEpsilonBound:
    def test_base_cases(self):
        assert epsilon_bound(1, 6) == Fraction(1, 2**7)
        assert epsilon_bound(2, 10) == Fraction(7, 2**13)
        assert epsilon_bound(3, 4) == Fraction(23, 16) / 16
        assert epsilon_bound(4, 4) == Fraction(119, 64) / 16

    def test_matches_recurrence(self):
        for ell in (6, 60):
            for k in range(1, 201):
                assert epsilon_bound(k, ell) == epsilon_recurrence(k, ell)

    def test_increasing_in_k(self):
        prev = epsilon_bound(1, 60)
        for k in range(2, 1001):
            cur = epsilon_bound(k, 60)
            assert cur > prev
            prev = cur

    @given(st.integers(min_value=1, max_value=300), st.integers(min_value=1, max_value=80))
    def test_scales_as_the_last_place_unit(self, k, ell):
        assert epsilon_bound(k, ell) == epsilon_bound(k, ell + 7) * 128

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            epsilon_bound(0, 6)
        with pytest.raises(ValueError):
            epsilon_bound(3, 0)


class TestKStarScan:
    def test_length_sixty(self):
        report = kstar_scan(60, 1000, collect_margins=True)
        assert report.k_star == 600
        assert report.critical == critical_point(600)
        assert report.epsilon == epsilon_bound(600, 60)
        assert to_decimal(report.critical, 6) == "0.507858"
        assert to_decimal(report.epsilon, 6) == "0.013460"
        # every horizon before k* is excluded, and k* strictly reverses
        assert all(m >= 0 for m in report.margins[:-1])
        assert report.margins[-1] < 0
        assert Fraction(1, 2) + report.epsilon > report.critical

    def test_short_scan_finds_nothing(self):
        report = kstar_scan(60, 100)
        assert report.k_star is None
        assert report.excluded_all

    def test_small_length(self):
        assert kstar_scan(4).k_star == 5

    def test_margins_follow_the_definition(self):
        report = kstar_scan(10, 50, collect_margins=True)
        for k, margin in enumerate(report.margins, start=1):
            assert margin == critical_point(k) - Fraction(1, 2) - epsilon_bound(k, 10)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            kstar_scan(0)
        with pytest.raises(ValueError):
            kstar_scan(10, 0)


class TestVerifyRange:
    def test_tiny_ranges(self):
        one = verify_range(1)
        assert (one.verified_count, one.max_stopping_time, one.worst_start) == (1, 0, 1)
        two = verify_range(2)
        assert (two.verified_count, two.max_stopping_time, two.worst_start) == (2, 2, 3)

    def test_matches_brute_force_at_small_lengths(self):
        for ell in (5, 10):
            result = verify_range(ell)
            stops = {x: brute_stopping_time(x) for x in range(1, 1 << ell, 2)}
            best = max(stops.values())
            assert result.verified_count == len(stops)
            assert result.max_stopping_time == best
            assert result.worst_start == min(x for x, s in stops.items() if s == best)

    def test_known_worst_cases(self):
        five = verify_range(5)
        assert (five.max_stopping_time, five.worst_start) == (41, 27)
        ten = verify_range(10)
        assert (ten.max_stopping_time, ten.worst_start) == (65, 871)

    def test_worker_count_never_changes_the_summary(self):
        assert verify_range(12, workers=3) == verify_range(12)
        assert verify_range(9, workers=8) == verify_range(9)

    def test_step_cap_raises_with_witness(self):
        with pytest.raises(DivergenceError) as exc_info:
            verify_range(5, step_cap=5)
        assert exc_info.value.start == 27
        assert "27" in str(exc_info.value)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            verify_range(0)
        with pytest.raises(ValueError):
            verify_range(40)
        with pytest.raises(ValueError):
            verify_range(10, step_cap=0)


class TestFamilyProbe:
    def test_alpha_and_beta_always_stop_in_two(self):
        for kind in (Family.ALPHA, Family.BETA):
            probe = family_orbit_probe(kind, 100)
            assert probe.ok
            assert set(probe.stopping_times.values()) == {2}

    def test_gamma_reaches_ground_with_growing_stopping_times(self):
        probe = family_orbit_probe(Family.GAMMA, 100)
        assert probe.ok
        assert len(probe.stopping_times) == 100
        assert probe.max_stop == 1776
        # spot check one member against the trajectory record
        record = run_trajectory(bf("111000111"))
        assert probe.stopping_times[1] == record.stopping_time

    def test_step_cap_marks_unresolved(self):
        probe = family_orbit_probe(Family.GAMMA, 10, step_cap=3)
        assert probe.unresolved == list(range(1, 11))
        assert not probe.ok
        assert probe.max_stop is None

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            family_orbit_probe(Family.ALPHA, 0)
