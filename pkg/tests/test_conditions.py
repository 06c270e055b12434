from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from known_squares import triple

from autotopism.appendix import all_normalized_triples, parse_table
from autotopism.conditions import (
    Status,
    check_lcm_matching,
    check_mmm,
    check_power_battery,
    check_strong_lcm,
    check_trivial_component,
    classify,
    decide_automorphism,
    has_perfect_matching,
    placement_matrix,
    special_exclusion,
    strong_lcm_traces,
)
from autotopism.latin import is_autotopism
from autotopism.perm import S3, CycleStructure, Isotopism, parastrophe_triple
from autotopism.search import count_delta

DATA = Path(__file__).parent / "data"


# --- fixed-point pattern ------------------------------------------------------------


def test_mmm_rejects_too_many_fixed_points():
    check = check_mmm(triple("2.1^3"))
    assert not check.ok
    assert "fixed points" in check.reason


def test_mmm_allows_fixed_point_free_triples():
    assert check_mmm(triple("2^3", "2^3", "6")).ok
    # no component has a fixed point, so the pattern test cannot reject it;
    # the triple is excluded later by the lcm condition
    assert check_mmm(triple("2^3", "2^3", "3^2")).ok
    assert classify(triple("2^3", "2^3", "3^2")).provenance == "lcm-matching"


def test_mmm_one_fixed_component_needs_other_two_equal_and_fixed_point_free():
    assert check_mmm(triple("2^2", "2^2", "1^4")).ok
    assert check_mmm(triple("3.1", "2^2", "2^2")).ok
    assert not check_mmm(triple("3.1", "2^2", "4")).ok


# --- trivial component ---------------------------------------------------------------


def test_trivial_component_examples():
    assert check_trivial_component(triple("2^2", "2^2", "1^4")).status is Status.MEMBER
    assert check_trivial_component(triple("2.1^2", "2.1^2", "1^4")).status is Status.NONMEMBER
    assert check_trivial_component(triple("6", "6", "1^6")).status is Status.MEMBER
    assert check_trivial_component(triple("3", "3", "3")) is None


def test_trivial_component_needs_equal_lengths_in_both_others():
    assert check_trivial_component(triple("2^3", "3^2", "1^6")).status is Status.NONMEMBER


# --- lcm condition --------------------------------------------------------------------


def test_lcm_matching_examples():
    assert not check_lcm_matching(triple("6.3.2^4")).ok
    assert not check_lcm_matching(triple("3^2.2^3", "3^4", "2^6")).ok
    assert check_lcm_matching(triple("7")).ok


def test_placement_matrix_of_single_cycle_is_all_ones():
    pm = placement_matrix(triple("5"), 5)
    assert pm.matrix.shape == (5, 5)
    assert pm.matrix.all()


def test_perfect_matching_examples():
    assert has_perfect_matching(np.eye(4, dtype=bool))
    assert has_perfect_matching(np.ones((3, 3), dtype=bool))
    adj = np.array([[1, 1, 0], [1, 1, 0], [1, 1, 0]], dtype=bool)
    assert not has_perfect_matching(adj)


# --- strongly lcm-closed sets ---------------------------------------------------------


def test_strong_lcm_rejects_block_too_wide_for_its_rows():
    check = check_strong_lcm(triple("4.2^2", "2^4", "2^4"))
    assert not check.ok
    assert "4x8" in check.reason


def test_strong_lcm_trace_of_fixed_points():
    traces = {tr.generator: tr for tr in strong_lcm_traces(triple("2.1^4", "2^3", "2^3"))}
    assert (traces[1].rows, traces[1].cols, traces[1].symbols) == (4, 0, 0)
    assert check_strong_lcm(triple("2.1^4", "2^3", "2^3")).ok


def test_strong_lcm_passes_identical_components():
    assert check_strong_lcm(triple("6^2")).ok


# --- power battery ------------------------------------------------------------------------


def test_power_battery_examples():
    check = check_power_battery(triple("2^3"))
    assert not check.ok
    assert check.reason.startswith("k=1")
    assert check_power_battery(triple("3^3")).ok


def test_power_battery_reports_the_first_failing_power():
    check = check_power_battery(triple("6.3.2^4"))
    assert not check.ok
    assert check.reason.startswith("k=1: lcm-matching")


def test_power_battery_never_rejects_reference_members():
    reference = parse_table((DATA / "appendix_tables.txt").read_text())
    assert all(check_power_battery(t).ok for n in range(1, 13) for t in reference[n])


# --- automorphism decision ------------------------------------------------------------------


@pytest.mark.parametrize(
    "cs, status, provenance",
    [
        ("5.1^5", Status.MEMBER, "single-cycle"),
        ("4", Status.NONMEMBER, "single-cycle"),
        ("6.3", Status.MEMBER, "two-cycles"),
        ("6.3.2.1", Status.MEMBER, "three-cycles"),
        ("6.3.2", Status.NONMEMBER, "three-cycles"),
        ("3^3", Status.MEMBER, "equal-lengths"),
        ("2^3", Status.NONMEMBER, "equal-length-parity"),
        ("1^4", Status.MEMBER, "trivial"),
    ],
)
def test_decide_automorphism_examples(cs, status, provenance):
    v = decide_automorphism(CycleStructure.parse(cs))
    assert v.status is status
    assert v.provenance.startswith(provenance)
    assert (v.builder is not None) == (status is Status.MEMBER)


def test_decide_automorphism_leaves_four_cycle_structures_undecided():
    assert decide_automorphism(CycleStructure.parse("5.4.3.2")).status is Status.UNDECIDED


# --- classify ----------------------------------------------------------------------------------


@pytest.mark.parametrize("t", [("4.2", "4.2", "4.1^2"), ("8.4.2", "8.4.2", "8.4.1^2")])
def test_special_exclusions_are_closed_under_parastrophy(t):
    base = triple(*t)
    for lam in S3:
        u = parastrophe_triple(base, lam)
        assert special_exclusion(u)
        v = classify(u)
        assert v.status is Status.NONMEMBER
        assert v.provenance == "special-exclusion"


def test_classify_realizes_horse_witness():
    t = triple("6", "3^2", "6")
    v = classify(t, witness=True)
    assert v.status is Status.MEMBER
    assert v.builder == ("horse", 6)
    assert v.theta == Isotopism.canonical(t)
    assert is_autotopism(v.theta, v.witness)


def test_classify_escalates_to_search_when_asked():
    # (2^2, 2^2, 2^2) is not settled by the theory-only pipeline at order 4
    undecided = [t for t in all_normalized_triples(4) if classify(t).status is Status.UNDECIDED]
    assert undecided
    for t in undecided:
        v = classify(t, search=True)
        assert v.status is not Status.UNDECIDED
        assert v.provenance == "search"


def test_verdict_report_mentions_status_and_provenance():
    report = classify(triple("4.2", "4.2", "4.1^2")).report()
    assert report.startswith("NONMEMBER")
    assert "special-exclusion" in report


# --- audits -----------------------------------------------------------------------------------


def test_no_reference_member_is_rejected_up_to_order_17():
    reference = parse_table((DATA / "appendix_tables.txt").read_text())
    assert set(reference) == set(range(1, 18))
    rejected = [t for n in reference for t in reference[n] if classify(t).is_nonmember]
    assert rejected == []


@pytest.mark.parametrize("n", range(1, 7))
def test_every_nonmember_has_no_square(n):
    for t in all_normalized_triples(n):
        if classify(t).is_nonmember:
            assert count_delta(Isotopism.canonical(t)).count == 0, t


@pytest.mark.parametrize("n", range(1, 7))
def test_every_member_witness_verifies(n):
    for t in all_normalized_triples(n):
        v = classify(t, witness=True)
        if v.is_member:
            assert is_autotopism(v.theta, v.witness), t
            assert v.theta.structure() == t
