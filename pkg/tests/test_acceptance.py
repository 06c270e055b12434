"""The eight end-to-end acceptance criteria; each test prints one PASS/FAIL line."""

from __future__ import annotations

import random
import time
from pathlib import Path
from types import SimpleNamespace

from known_squares import (
    ORDER5,
    ORDER5_ALPHA,
    ORDER6_A,
    ORDER6_A_DIAGRAM,
    ORDER6_ALPHA,
    ORDER6_B,
    ORDER6_B_DIAGRAM,
    automorphism,
    triple,
)
from oracles import all_latin_squares, naive_delta

from autotopism.appendix import parse_table
from autotopism.conditions import Status, classify, clear_cache
from autotopism.construct import prolong, prolong_capacity, realize
from autotopism.construct.sweep import admissible_cases
from autotopism.contour import block_diagram_of
from autotopism.latin import (
    LatinSquare,
    apply_isotopism,
    direct_product,
    is_autotopism,
    parastrophe,
    product_isotopism,
)
from autotopism.perm import (
    S3,
    CycleStructure,
    Isotopism,
    Permutation,
    cycle_structure,
    normalize_triple,
    parse_permutation,
)
from autotopism.search import count_delta
from autotopism.search.table import enumerate_table

DATA = Path(__file__).parent / "data"


def _random_perm(rng: random.Random, n: int) -> Permutation:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


def _random_isotopism(rng: random.Random, n: int) -> Isotopism:
    return Isotopism(*(_random_perm(rng, n) for _ in range(3)))


def _witness_pool(max_n: int) -> list[tuple[LatinSquare, Isotopism]]:
    """One verified witness per admissible constructive tuple of order <= max_n."""
    pool = []
    for case in admissible_cases(max_n):
        L, theta = realize(case.triple, SimpleNamespace(builder=case.builder))
        pool.append((L, theta))
    return pool


def test_known_squares_verify_with_expected_block_diagrams(acceptance):
    start = time.perf_counter()
    ok5 = is_autotopism(automorphism(ORDER5_ALPHA, 5), ORDER5)
    alpha6 = parse_permutation(ORDER6_ALPHA, 6)
    theta6 = Isotopism.automorphism(alpha6)
    ok6 = is_autotopism(theta6, ORDER6_A) and is_autotopism(theta6, ORDER6_B)
    diagrams_ok = True
    for L, expected in ((ORDER6_A, ORDER6_A_DIAGRAM), (ORDER6_B, ORDER6_B_DIAGRAM)):
        B = block_diagram_of(L, alpha6)
        for (i, j), counts in expected.items():
            diagrams_ok &= all(B.f(k, i, j) == v for k, v in counts.items())
        diagrams_ok &= B.check_sums()
    elapsed = time.perf_counter() - start
    ok = ok5 and ok6 and diagrams_ok and elapsed < 1.0
    acceptance(1, ok, f"order-5 {ok5}, order-6 pair {ok6}, diagrams {diagrams_ok}, {elapsed:.3f}s")


def test_exhaustive_tables_reproduce_reference_orders_1_to_7(acceptance):
    reference = parse_table((DATA / "appendix_tables.txt").read_text())
    start = time.perf_counter()
    problems = []
    for n in range(1, 8):
        rows = enumerate_table(n, exhaustive=True, progress=None)
        members = {normalize_triple(r.triple) for r in rows if r.is_member}
        expected = {normalize_triple(t) for t in reference[n]}
        if members != expected:
            problems.append(f"n={n}: extra {members - expected}, missing {expected - members}")
        if not all(r.confirmed and r.status is not Status.UNDECIDED for r in rows):
            problems.append(f"n={n}: unconfirmed rows")
    elapsed = time.perf_counter() - start
    acceptance(2, not problems and elapsed < 600, f"{'; '.join(problems) or 'all rows match'}, {elapsed:.1f}s")


NAMED_EXCLUSIONS = [
    ("3^2.2^3", "3^4", "2^6"),
    ("4.2^2", "2^4", "2^4"),
    ("4.2^2", "2^4", "4.2^2"),
    ("2^3", "2^3", "2^3"),
    ("6.3.2^4", "6.3.2^4", "6.3.2^4"),
    ("4.2", "4.2", "4.1^2"),
    ("8.4.2", "8.4.2", "8.4.1^2"),
]


def test_named_exclusions_rejected_fast_without_search(acceptance):
    failures = []
    slowest = 0.0
    for a, b, c in NAMED_EXCLUSIONS:
        clear_cache()
        start = time.perf_counter()
        v = classify(triple(a, b, c))
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        if v.status is not Status.NONMEMBER or v.provenance == "search" or elapsed >= 0.1:
            failures.append(f"({a},{b},{c}) -> {v.report()} in {elapsed * 1000:.1f}ms")
    acceptance(3, not failures, f"{'; '.join(failures) or 'all NONMEMBER'}, slowest {slowest * 1000:.1f}ms")


def test_constructor_sweep_up_to_order_40(acceptance):
    start = time.perf_counter()
    total, failures = 0, []
    for case in admissible_cases(40):
        total += 1
        try:
            L, theta = realize(case.triple, SimpleNamespace(builder=case.builder))
            if theta.structure() != case.triple or not is_autotopism(theta, L):
                failures.append(str(case))
        except Exception as exc:  # noqa: BLE001 - every failure is reported
            failures.append(f"{case}: {exc}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 300
    acceptance(4, ok, f"{total} tuples, {len(failures)} failures {failures[:3]}, {elapsed:.1f}s")


def test_orbit_search_matches_naive_enumeration(acceptance):
    rng = random.Random(20240611)
    trivial4 = count_delta(Isotopism.identity(4)).count
    trivial5 = count_delta(Isotopism.identity(5)).count
    oracle4 = naive_delta(range(4), range(4), range(4))
    oracle5 = naive_delta(range(5), range(5), range(5))
    mismatches = []
    nonzero = 0
    for n in (3, 4, 5):
        for k in range(50):
            if k % 2:
                theta = _random_isotopism(rng, n)
            else:  # conjugate of a random automorphism: far more often Delta > 0
                alpha = _random_perm(rng, n)
                theta = Isotopism.automorphism(alpha).conjugate(_random_isotopism(rng, n))
            fast = count_delta(theta).count
            slow = naive_delta(*(p.array0 for p in theta))
            nonzero += fast > 0
            if fast != slow:
                mismatches.append(f"{theta}: search {fast}, naive {slow}")
    ok = trivial4 == oracle4 == 576 and trivial5 == oracle5 == 161280 and not mismatches
    detail = f"trivial n=4 {trivial4}, n=5 {trivial5}; 150 random triples ({nonzero} nonzero), {len(mismatches)} mismatches"
    acceptance(5, ok, detail)


def test_conjugation_parastrophe_and_product_transport(acceptance):
    rng = random.Random(7)
    pool = _witness_pool(8)
    for n in range(1, 5):  # random squares with the trivial autotopism as well
        squares = all_latin_squares(n)
        for idx in rng.sample(range(len(squares)), min(5, len(squares))):
            pool.append((LatinSquare(squares[idx] + 1), Isotopism.identity(n)))
    failures = []
    for _ in range(200):
        L, theta = rng.choice(pool)
        phi = _random_isotopism(rng, L.order)
        if not is_autotopism(theta.conjugate(phi), apply_isotopism(phi, L)):
            failures.append(f"conjugation {theta} by {phi}")
        for lam in S3:
            if not is_autotopism(theta.parastrophe(lam), parastrophe(L, lam)):
                failures.append(f"parastrophe {lam} of {theta}")
    for _ in range(50):
        (L, theta), (M, phi) = rng.choice(pool), rng.choice(pool)
        if not is_autotopism(product_isotopism(theta, phi), direct_product(L, M)):
            failures.append(f"product {theta} x {phi}")
    acceptance(6, not failures, f"200 conjugation/parastrophe pairs, 50 products, {len(failures)} failures {failures[:3]}")


def test_prolongation_adds_exactly_the_requested_fixed_points(acceptance):
    rng = random.Random(11)
    from autotopism.construct import build_automorphism

    structures = [
        cs
        for case in admissible_cases(16)
        if case.triple.a == case.triple.b == case.triple.c and not (cs := case.triple.a).is_identity()
    ]
    failures = []
    for _ in range(100):
        cs = rng.choice(structures)
        L, alpha = build_automorphism(cs)
        mu = prolong_capacity(L, alpha)
        nu = rng.randint(0, mu)
        L2, alpha2 = prolong(L, alpha, nu)
        fixed = cycle_structure(alpha2).fixed
        if not is_autotopism(Isotopism.automorphism(alpha2), L2) or fixed != cs.fixed + nu:
            failures.append(f"{cs} nu={nu}: {cycle_structure(alpha2)}")
    acceptance(7, not failures, f"100 prolongations, {len(failures)} failures {failures[:3]}")


def test_parity_impossibilities_have_no_squares(acceptance):
    ok, parts = True, []
    for text in ("2", "2^3", "4"):
        cs = CycleStructure.parse(text)
        theta = Isotopism.canonical(triple(text))
        fast = count_delta(theta).count
        ok &= fast == 0
        part = f"{text} (n={cs.degree}): search {fast}"
        if cs.degree < 6:  # the naive enumerator is only practical below order 6
            slow = naive_delta(*(p.array0 for p in theta))
            ok &= slow == 0
            part += f", naive {slow}"
        parts.append(part)
    acceptance(8, ok, "; ".join(parts))
