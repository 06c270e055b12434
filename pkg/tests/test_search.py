from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from known_squares import triple

from autotopism.conditions import Status
from autotopism.latin import apply_isotopism, is_autotopism, parastrophe
from autotopism.perm import S3, CycleStructure, Isotopism, Permutation, parse_permutation
from autotopism.search import (
    CountResult,
    SearchBoundError,
    SearchBudgetExceeded,
    build_orbit_plan,
    contour_search,
    count_delta,
    exists_witness,
    lcm_condition,
)
from autotopism.search.table import enumerate_table, format_rows

ROOT = Path(__file__).resolve().parents[1]


def _swap(n: int) -> Permutation:
    return parse_permutation("(1 2)", n)


# --- orbit plans ------------------------------------------------------------------------------


def test_lcm_condition_examples():
    assert lcm_condition(2, 2, 1)
    assert lcm_condition(6, 3, 2)
    assert not lcm_condition(4, 2, 2)
    assert not lcm_condition(3, 2, 1)
    assert lcm_condition(3, 3, 1)


def test_orbit_plan_of_identity_has_one_orbit_per_cell():
    plan = build_orbit_plan(Isotopism.identity(3))
    assert plan.order == 3
    assert plan.n_orbits == 9
    assert all(plan.orbit_len == 1)


def test_orbit_plan_of_transposition_automorphism():
    plan = build_orbit_plan(Isotopism.automorphism(_swap(2)))
    assert plan.n_orbits == 2
    assert sorted(plan.orbit_cells(0) + plan.orbit_cells(1)) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert plan.feasible.all()


def test_orbit_plan_cells_partition_the_grid():
    theta = Isotopism.canonical(triple("3.2.1", "3.2.1", "3.2.1"))
    plan = build_orbit_plan(theta)
    cells = sorted(rc for o in range(plan.n_orbits) for rc in plan.orbit_cells(o))
    assert cells == [(r, c) for r in range(1, 7) for c in range(1, 7)]


# --- counting ---------------------------------------------------------------------------------


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (3, 12), (4, 576)])
def test_identity_count_is_number_of_latin_squares(n, expected):
    result = count_delta(Isotopism.identity(n))
    assert result == CountResult(expected, True)
    assert str(result) == str(expected)


def test_count_of_swap_swap_identity():
    theta = Isotopism(_swap(2), _swap(2), Permutation.identity(2))
    assert count_delta(theta).count == 2


def test_count_of_lcm_rejected_triple_is_zero():
    assert count_delta(Isotopism.canonical(triple("3^2.2^3", "3^4", "2^6"))).count == 0


def test_count_limit_reports_lower_bound():
    result = count_delta(Isotopism.identity(5), limit=7)
    assert not result.complete
    assert result.count == 7
    assert str(result) == ">=7"


def test_count_refuses_orders_beyond_the_bound():
    with pytest.raises(SearchBoundError):
        count_delta(Isotopism.identity(9))
    assert str(count_delta(Isotopism.identity(9), max_order=9, limit=5)) == ">=5"


def test_parallel_count_matches_serial():
    theta = Isotopism.identity(4)
    assert count_delta(theta, jobs=2) == count_delta(theta)


def test_count_is_a_class_function():
    theta = Isotopism.canonical(triple("2^2", "2^2", "1^4"))
    base = count_delta(theta).count
    assert base > 0
    phi = Isotopism(parse_permutation("(1 3)", 4), parse_permutation("(2 4 3)", 4), parse_permutation("(1 4)", 4))
    assert count_delta(theta.conjugate(phi)).count == base
    for lam in S3:
        assert count_delta(theta.parastrophe(lam)).count == base


# --- witnesses --------------------------------------------------------------------------------


def test_witness_for_order_one():
    L = exists_witness(Isotopism.identity(1))
    assert L is not None and L.tolist() == [[1]]


def test_no_witness_for_special_exclusion():
    assert exists_witness(Isotopism.canonical(triple("4.2", "4.2", "4.1^2"))) is None


def test_witness_verifies():
    theta = Isotopism.canonical(triple("3.1^2"))
    L = exists_witness(theta)
    assert L is not None
    assert is_autotopism(theta, L)


@pytest.mark.parametrize("t", [("2^2",), ("4",), ("3.1",), ("2.1^2", "2.1^2", "2^2"), ("1^4", "4", "4"), ("2^2", "4", "4")])
def test_witness_exists_exactly_when_count_is_positive(t):
    theta = Isotopism.canonical(triple(*t))
    L = exists_witness(theta)
    assert (L is not None) == (count_delta(theta).count > 0)
    if L is not None:
        assert is_autotopism(theta, L)


def test_witness_search_respects_node_budget():
    with pytest.raises(SearchBudgetExceeded):
        exists_witness(Isotopism.identity(7), max_nodes=3)


def test_prefilled_cells_are_kept():
    prefill = np.zeros((3, 3), dtype=np.int64)
    prefill[0, 0] = 2
    L = exists_witness(Isotopism.identity(3), prefill=prefill)
    assert L is not None and L[1, 1] == 2
    assert count_delta(Isotopism.identity(3), prefill=prefill).count == 4


def test_witnesses_are_closed_under_the_action():
    theta = Isotopism.canonical(triple("2^2", "2^2", "1^4"))
    L = exists_witness(theta)
    phi = Isotopism(parse_permutation("(1 2 3)", 4), parse_permutation("id", 4), parse_permutation("(3 4)", 4))
    assert is_autotopism(theta.conjugate(phi), apply_isotopism(phi, L))
    for lam in S3:
        assert is_autotopism(theta.parastrophe(lam), parastrophe(L, lam))


# --- contour search ---------------------------------------------------------------------------


def test_contour_search_finds_expanding_contour():
    alpha = parse_permutation("(1 2 3)", 5)
    C = contour_search(alpha)
    assert C is not None
    assert C.validate().ok
    assert is_autotopism(Isotopism.automorphism(alpha), C.expand())


def test_contour_search_reports_absence():
    assert contour_search(parse_permutation("(1 2 3 4)", 4)) is None


def test_contour_search_of_identity_is_a_whole_square():
    C = contour_search(Permutation.identity(3))
    assert C is not None and len(C) == 9


# --- compiled and pure kernels agree ----------------------------------------------------------

_PROBE = """
import json
from autotopism.perm import Isotopism, CycleStructure
from autotopism.search import JIT_ACTIVE, count_delta, exists_witness
from autotopism.perm import StructureTriple
t = StructureTriple(*(CycleStructure.parse(s) for s in ("2^2", "2^2", "1^4")))
theta = Isotopism.canonical(t)
print(json.dumps({
    "jit": JIT_ACTIVE,
    "counts": [count_delta(Isotopism.identity(4)).count, count_delta(theta).count],
    "witness": exists_witness(theta).tolist(),
}))
"""


def _probe(no_jit: bool) -> dict:
    env = dict(os.environ)
    env.pop("AUTOTOPISM_NO_JIT", None)
    if no_jit:
        env["AUTOTOPISM_NO_JIT"] = "1"
    out = subprocess.run([sys.executable, "-c", _PROBE], env=env, capture_output=True, text=True, check=True, cwd=ROOT)
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_pure_python_kernel_matches_compiled_kernel():
    pure, compiled = _probe(True), _probe(False)
    assert pure["jit"] is False
    assert pure["counts"] == compiled["counts"]
    assert pure["witness"] == compiled["witness"]


# --- table enumeration ------------------------------------------------------------------------


def test_exhaustive_table_of_order_three():
    rows = enumerate_table(3, exhaustive=True, progress=None)
    assert all(r.confirmed for r in rows)
    assert format_rows(rows) == "3 | 1^3 | 1^3,3\n3 | 2.1 | 2.1\n3 | 3 | 3\n"


def test_exhaustive_order_six_row_for_three_transpositions():
    rows = enumerate_table(6, exhaustive=True, progress=None)
    members = {(r.triple.b, r.triple.c) for r in rows if r.is_member and r.triple.a == CycleStructure.parse("2^3")}
    assert members == {(CycleStructure.parse("3^2"), CycleStructure.parse("6"))}


def test_parallel_enumeration_matches_serial():
    assert enumerate_table(4, exhaustive=True, jobs=2, progress=None) == enumerate_table(
        4, exhaustive=True, progress=None
    )


def test_pipeline_table_marks_undecided_column():
    rows = enumerate_table(4, progress=None)
    assert any(r.status is Status.UNDECIDED for r in rows)
    assert "UNDECIDED" in format_rows(rows)


def test_exhaustive_enumeration_is_bounded():
    with pytest.raises(SearchBoundError):
        enumerate_table(8, exhaustive=True, progress=None)
