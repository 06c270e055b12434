from __future__ import annotations

import json
import random
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

from known_squares import triple

from autotopism.conditions import classify, decide_automorphism
from autotopism.construct import (
    FALLBACKS,
    ConstructionError,
    InadmissibleError,
    build_automorphism,
    build_equal_lengths,
    build_horse,
    build_single_cycle,
    build_subsquare_union,
    build_three_cycles,
    build_two_cycles,
    fill_fixed_blocks,
    halving_square,
    prolong,
    prolong_capacity,
    realize,
    staircase_contour,
    three_cycles_admissible,
    to_canonical,
    trivial_component_witness,
    verify_automorphism,
)
from autotopism.construct.families import two_cycles_contour
from autotopism.construct.sweep import admissible_cases
from autotopism.construct.threecycles import three_cycles_contour
from autotopism.contour import INF, Contour, Layout, cell_orbits_of_automorphism
from autotopism.latin import is_autotopism
from autotopism.perm import (
    CycleStructure,
    Isotopism,
    canonical_permutation,
    cycle_structure,
    parse_permutation,
    partitions,
)

FIGURES = json.loads((Path(__file__).parent / "data" / "contour_figures.json").read_text())

# Figure cells that disagree with the construction they illustrate: the
# (24, 8, 6, 1) drawing puts the t1 of row 12 in column 12 instead of 13.
FIGURE_TYPOS = {(24, 8, 6, 1): {(12, 12)}}


def _is_automorphism(L, alpha) -> bool:
    return is_autotopism(Isotopism.automorphism(alpha), L)


# --- published layouts ----------------------------------------------------------------------


def _orbit_ids(alpha):
    ids = {}
    for k, orbit in enumerate(cell_orbits_of_automorphism(alpha)):
        for rc in orbit:
            ids[rc] = k
    return ids


@pytest.mark.parametrize(
    "fig", [f for f in FIGURES if f["kind"] != "horse"], ids=lambda f: f"{f['kind']}{tuple(f['params'])}"
)
def test_contour_contains_every_drawn_cell_up_to_orbit(fig):
    *lengths, f = fig["params"]
    assembly = two_cycles_contour(*lengths) if fig["kind"] == "two" else three_cycles_contour(*lengths)
    C = assembly.C
    ids = _orbit_ids(C.alpha)
    lay = Layout.of(C.alpha)
    start = lay.fixed_start
    typos = FIGURE_TYPOS.get(tuple(fig["params"]), set())
    built = {(ids[rc], s) for rc, s in C.cells.items()}
    missing = []
    for r, c, glyph in fig["cells"]:
        if r >= start or c >= start:  # fixed blocks are completed automatically
            continue
        symbol = lay.t(INF if glyph == "inf" else int(glyph[1:]))
        if (ids[(r, c)], symbol) not in built:
            missing.append((r, c))
    assert set(missing) == typos


def test_horse_matches_drawn_layout():
    fig = next(f for f in FIGURES if f["kind"] == "horse")
    L, theta = build_horse(6)
    assert all(L[r, c] == 1 for r, c, _ in fig["cells"])
    assert is_autotopism(theta, L)


# --- trivial component and single cycles -------------------------------------------------------


@pytest.mark.parametrize("n, d", [(6, 3), (4, 4), (5, 1), (12, 4)])
def test_trivial_component_witness(n, d):
    L, theta = trivial_component_witness(n, d)
    assert is_autotopism(theta, L)
    cs = CycleStructure.from_lengths([d] * (n // d))
    assert theta.structure() == (cs, cs, CycleStructure.identity(n))


def test_halving_square_has_full_cycle_automorphism():
    for n in (1, 3, 5, 9):
        alpha = canonical_permutation(CycleStructure.parse(str(n)))
        assert _is_automorphism(halving_square(n), alpha)
    with pytest.raises(InadmissibleError):
        halving_square(4)


@pytest.mark.parametrize("n, d", [(5, 5), (5, 3), (10, 5), (9, 6), (7, 4)])
def test_single_cycle_builder(n, d):
    L, alpha = build_single_cycle(n, d)
    assert _is_automorphism(L, alpha)
    assert cycle_structure(alpha) == CycleStructure.from_lengths([d] + [1] * (n - d))


@pytest.mark.parametrize("n, d", [(4, 4), (6, 2), (8, 3)])
def test_single_cycle_builder_rejects_inadmissible(n, d):
    with pytest.raises(InadmissibleError):
        build_single_cycle(n, d)


# --- equal lengths, two cycles, horse ------------------------------------------------------------


def test_staircase_contour_for_two_two_cycles():
    C = staircase_contour(2)
    assert C.validate().ok
    assert _is_automorphism(C.expand(), C.alpha)


@pytest.mark.parametrize("d, m, f", [(2, 2, 0), (3, 2, 3), (4, 3, 1), (5, 1, 0), (3, 3, 0), (2, 3, 6)])
def test_equal_lengths_builder(d, m, f):
    L, alpha = build_equal_lengths(d, m, f)
    assert _is_automorphism(L, alpha)
    assert cycle_structure(alpha) == CycleStructure.from_lengths([d] * m + [1] * f)


@pytest.mark.parametrize("d, m, f", [(2, 1, 0), (4, 3, 0), (2, 2, 5)])
def test_equal_lengths_builder_rejects_inadmissible(d, m, f):
    with pytest.raises(InadmissibleError):
        build_equal_lengths(d, m, f)


@pytest.mark.parametrize("d1, d2, f", [(6, 3, 0), (16, 4, 1), (9, 3, 2), (18, 6, 1), (8, 2, 2)])
def test_two_cycles_builder(d1, d2, f):
    L, alpha = build_two_cycles(d1, d2, f)
    assert _is_automorphism(L, alpha)
    assert cycle_structure(alpha) == CycleStructure.from_lengths([d1, d2] + [1] * f)


@pytest.mark.parametrize(
    "d1, d2, f, condition", [(4, 2, 0, "(c)"), (6, 4, 1, "(a)"), (9, 3, 4, "(b)")]
)
def test_two_cycles_builder_names_the_failed_condition(d1, d2, f, condition):
    with pytest.raises(InadmissibleError, match=rf"\{condition[:-1]}\)"):
        build_two_cycles(d1, d2, f)


def test_horse_small_cases():
    L, theta = build_horse(2)
    assert L.order == 2
    assert theta == Isotopism(
        parse_permutation("(1 2)", 2), parse_permutation("id", 2), parse_permutation("(1 2)", 2)
    )
    assert is_autotopism(theta, L)
    L, theta = build_horse(4)
    assert is_autotopism(theta, L)
    assert theta.structure() == triple("4", "2^2", "4")


def test_horse_rejects_odd_length():
    with pytest.raises(InadmissibleError):
        build_horse(5)


# --- three cycles -----------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "params",
    [(6, 2, 2, 1), (12, 12, 4, 1), (15, 5, 3, 0), (30, 10, 6, 1), (18, 6, 3, 0), (12, 3, 3, 0), (5, 5, 5, 0)],
)
def test_three_cycles_builder(params):
    *lengths, f = params
    L, alpha = build_three_cycles(*params)
    assert _is_automorphism(L, alpha)
    assert cycle_structure(alpha) == CycleStructure.from_lengths(lengths + [1] * f)


@pytest.mark.parametrize(
    "params, case",
    [
        ((3, 3, 3, 0), "equal"),
        ((6, 2, 2, 1), "d1>d2=d3"),
        ((12, 12, 4, 1), "d1=d2>d3"),
        ((15, 5, 3, 0), "d3∤d2"),
        ((18, 6, 3, 0), "d3|d2"),
    ],
)
def test_three_cycles_case_dispatch(params, case):
    assert three_cycles_admissible(*params) == case


@pytest.mark.parametrize(
    "params, condition",
    [((6, 4, 2, 1), "(a)"), ((6, 3, 2, 3), "(b)"), ((6, 3, 2, 0), "(c)"), ((12, 4, 2, 0), None)],
)
def test_three_cycles_builder_rejects_inadmissible(params, condition):
    with pytest.raises(InadmissibleError) as info:
        build_three_cycles(*params)
    if condition:
        assert str(info.value).startswith(condition)


# --- builders agree with the decision procedure ----------------------------------------------------


def _family_call(cs: CycleStructure):
    lengths = sorted(cs.nontrivial, reverse=True)
    n, f = cs.degree, cs.fixed
    if len(lengths) == 1:
        return build_single_cycle(n, lengths[0])
    if len(set(lengths)) == 1:
        return build_equal_lengths(lengths[0], len(lengths), f)
    if len(lengths) == 2:
        return build_two_cycles(*lengths, f)
    return build_three_cycles(*lengths, f)


@pytest.mark.parametrize("n", range(2, 19))
def test_builders_reject_exactly_the_excluded_structures(n):
    for cs in partitions(n):
        lengths = cs.nontrivial
        if not lengths or (len(lengths) > 3 and len(set(lengths)) > 1):
            continue
        v = decide_automorphism(cs)
        if v.is_member:
            L, alpha = _family_call(cs)
            assert cycle_structure(alpha) == cs
            assert _is_automorphism(L, alpha)
        else:
            with pytest.raises(InadmissibleError):
                _family_call(cs)


def test_build_automorphism_returns_canonical_permutation():
    L, alpha = build_automorphism(CycleStructure.parse("6.3.2.1"))
    assert alpha == canonical_permutation(CycleStructure.parse("6.3.2.1"))
    assert _is_automorphism(L, alpha)
    with pytest.raises(InadmissibleError):
        build_automorphism(CycleStructure.parse("6.3.2"))


def test_sweep_uses_no_search_fallbacks():
    before = dict(FALLBACKS)
    for case in admissible_cases(14):
        L, theta = realize(case.triple, SimpleNamespace(builder=case.builder))
        assert is_autotopism(theta, L)
    assert dict(FALLBACKS) == before


def test_sweep_covers_every_family():
    families = {case.family.split(":")[0] for case in admissible_cases(20)}
    assert families == {"trivial-component", "single-cycle", "equal-lengths", "two-cycles", "horse", "three-cycles"}
    kinds = {case.family for case in admissible_cases(40) if case.family.startswith("three-cycles")}
    assert len(kinds) == 5


# --- realize, canonical relabelling, verification ----------------------------------------------------


@pytest.mark.parametrize(
    "t", [("6", "3^2", "6"), ("3^2", "6", "6"), ("2^2", "2^2", "1^4"), ("1^4", "4", "4"), ("6.3", "6.3", "6.3")]
)
def test_realize_matches_the_requested_coordinate_order(t):
    st = triple(*t)
    v = classify(st)
    L, theta = realize(st, v)
    assert theta == Isotopism.canonical(st)
    assert is_autotopism(theta, L)


def test_realize_needs_a_builder():
    with pytest.raises(ValueError):
        realize(triple("2^3"), classify(triple("2^3")))


def test_to_canonical_relabels_any_automorphism():
    L, alpha = build_single_cycle(5, 3)
    phi = parse_permutation("(1 5)(2 4)", 5)
    from autotopism.latin import apply_isotopism

    M = apply_isotopism(Isotopism.automorphism(phi), L)
    beta = alpha.conjugate(phi)
    N, gamma = to_canonical(M, beta)
    assert gamma == canonical_permutation(cycle_structure(beta))
    assert _is_automorphism(N, gamma)


def test_verify_automorphism_detects_wrong_structure():
    L, alpha = build_single_cycle(5, 3)
    verify_automorphism(L, alpha, CycleStructure.parse("3.1^2"))
    with pytest.raises(ConstructionError):
        verify_automorphism(L, alpha, CycleStructure.parse("5"))


# --- prolongation --------------------------------------------------------------------------------------


def test_prolong_halving_square():
    L = halving_square(3)
    alpha = parse_permutation("(1 2 3)", 3)
    assert prolong_capacity(L, alpha) == 3
    L2, alpha2 = prolong(L, alpha, 1)
    assert L2.order == 4
    assert str(cycle_structure(alpha2)) == "3.1"
    assert _is_automorphism(L2, alpha2)


def test_prolong_zero_is_identity():
    L = halving_square(5)
    alpha = parse_permutation("(1 2 3 4 5)", 5)
    assert prolong(L, alpha, 0) == (L, alpha)


def test_prolong_beyond_capacity_fails():
    L = halving_square(3)
    alpha = parse_permutation("(1 2 3)", 3)
    with pytest.raises(InadmissibleError):
        prolong(L, alpha, prolong_capacity(L, alpha) + 1)


def _prolongable():
    out = []
    for n in range(3, 12):
        for cs in partitions(n):
            if decide_automorphism(cs).is_member:
                L, alpha = build_automorphism(cs)
                if prolong_capacity(L, alpha) > 0:
                    out.append((cs, L, alpha))
    return out


def test_prolong_only_changes_cells_that_receive_new_symbols():
    rng = random.Random(5)
    pool = _prolongable()
    for _ in range(20):
        cs, L, alpha = rng.choice(pool)
        nu = rng.randint(1, prolong_capacity(L, alpha))
        L2, alpha2 = prolong(L, alpha, nu)
        n = L.order
        changed = L.cells != L2.cells[:n, :n]
        # the old fixed block is rebuilt as a whole; elsewhere only diverted cells change
        fixed = np.array([alpha(x) == x for x in range(1, n + 1)])
        changed &= ~np.outer(fixed, fixed)
        assert np.all(L2.cells[:n, :n][changed] > n)
        assert cycle_structure(alpha2).fixed == cs.fixed + nu
        assert _is_automorphism(L2, alpha2)


# --- partial contours -------------------------------------------------------------------------------------


def test_subsquare_union_fills_the_shorter_cycle_with_the_fixed_points():
    C = build_subsquare_union(canonical_permutation(CycleStructure.parse("6.3.1")))
    assert C.validate(partial=True).ok
    # rows and columns 7..10: the 3-cycle together with the fixed point
    assert C.cells and all(r >= 7 and c >= 7 for r, c in C.cells)


def test_subsquare_union_rejects_lone_even_cycle_without_fixed_points():
    with pytest.raises(InadmissibleError, match=r"\(b\)"):
        build_subsquare_union(canonical_permutation(CycleStructure.parse("4.2")))


def test_subsquare_union_fills_coprime_lengths_independently():
    C = build_subsquare_union(canonical_permutation(CycleStructure.parse("5.3")))
    assert C.validate(partial=True).ok
    assert {(r <= 5, c <= 5) for r, c in C.cells} == {(True, True), (False, False)}


def test_fill_fixed_blocks_without_fixed_points_is_a_no_op():
    C = two_cycles_contour(6, 3).C
    assert fill_fixed_blocks(C) == C


def _without_fixed_blocks(C: Contour) -> Contour:
    start = Layout.of(C.alpha).fixed_start
    return Contour(C.alpha, {(r, c): v for (r, c), v in C.cells.items() if (r >= start) == (c >= start)})


def test_fill_fixed_blocks_completes_the_sixteen_four_case():
    full = two_cycles_contour(16, 4).C
    stripped = _without_fixed_blocks(full)
    assert not stripped.validate().ok
    filled = fill_fixed_blocks(stripped)
    fixed_column = [(r, c) for (r, c) in filled.cells if c == 21 and r <= 16]
    assert len(fixed_column) == 1 and filled.cells[fixed_column[0]] == 1
    assert filled.validate().ok


def test_fill_fixed_blocks_rejects_wrong_symbol_counts():
    C = _without_fixed_blocks(two_cycles_contour(16, 4).C)
    # one extra copy of t1 in the only first-cycle row that still lacks it
    row = next(r for r in range(1, 17) if 1 not in {v for (x, _), v in C.cells.items() if x == r})
    col = next(c for c in range(1, 17) if (row, c) not in C.cells)
    C.place(row, col, 1)
    with pytest.raises(ConstructionError):
        fill_fixed_blocks(C)
