"""Builders for automorphisms with equal cycle lengths and with two nontrivial cycles,
the horse autotopism, and the subsquare union shared by the three-cycle builders."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..contour import INF, Contour, offset1
from ..latin import LatinSquare, cyclic_square, direct_product, is_autotopism, product_permutation
from ..perm import CycleStructure, Isotopism, Permutation, canonical_permutation
from .assembly import Assembly
from .core import (
    ConstructionError,
    InadmissibleError,
    build_single_cycle,
    halving_square,
    prolong,
    to_canonical,
    verify_automorphism,
)

__all__ = [
    "build_equal_lengths",
    "build_two_cycles",
    "build_horse",
    "build_subsquare_union",
    "fill_fixed_blocks",
    "staircase_contour",
]


# ---------------------------------------------------------------------------
# all nontrivial cycles of one length


def _equal_lengths_admissible(d: int, m: int, f: int) -> None:
    if d < 2 or m < 1 or f < 0:
        raise InadmissibleError(f"need d >= 2, m >= 1, fixed >= 0 (got {d}, {m}, {f})")
    if f > 0 and m * d + f > 2 * m * d:
        raise InadmissibleError(f"n = {m * d + f} > 2md = {2 * m * d}")
    if f == 0 and d % 2 == 0 and m % 2 == 1:
        raise InadmissibleError(f"d = {d} even and m = {m} odd without fixed points")


def staircase_contour(d: int) -> Contour:
    """Contour of ``d^2`` (``d`` even): four copies of the staircase, shifted."""
    if d % 2:
        raise InadmissibleError(f"the staircase contour needs even d, got {d}")
    C = Contour(canonical_permutation(CycleStructure.from_lengths([d, d])))
    t1, t2 = 1, d + 1
    h = d // 2
    cells: list[tuple[int, int, int]] = []
    for i in range(1, h + 1):
        cells += [(i, h + 1 - i, t1), (i, h + 2 - i, t2)]
    cells.append((h + 1, d + 1, t2))
    cells += [(h + i, 2 * d + 1 - i, t1) for i in range(1, h + 1)]
    cells += [(h + 1 + i, 2 * d + 1 - i, t2) for i in range(1, h)]
    for r, c, s in cells:
        C.place(r, c, s)
        # M22 = M11 and M21 = M12
        C.place(r + d if r <= d else r - d, c + d if c <= d else c - d, s)
    return C


def build_equal_lengths(d: int, m: int, fixed: int = 0) -> tuple[LatinSquare, Permutation]:
    """Square with canonical automorphism ``d^m . 1^fixed``.

    No fixed points, ``d`` odd: halving square times a cyclic square (the
    automorphism acting on the first factor only).  No fixed points, ``d`` and
    ``m`` even: the staircase contour for ``m = 2`` times a cyclic square of
    order ``m/2``.  With fixed points: a single ``md``-cycle with the same
    fixed points, raised to the ``m``-th power.
    """
    _equal_lengths_admissible(d, m, fixed)
    if fixed == 0:
        if d % 2:
            base, alpha = halving_square(d), Permutation(tuple(list(range(2, d + 1)) + [1]))
            k = m
        else:
            C = staircase_contour(d)
            base, alpha = C.expand(), C.alpha
            k = m // 2
        L = direct_product(base, cyclic_square(k))
        omega = product_permutation(alpha, Permutation.identity(k))
        if not is_autotopism(Isotopism.automorphism(omega), L):  # pragma: no cover - product construction
            raise ConstructionError("direct product lost the automorphism")
        return to_canonical(L, omega)
    n = m * d + fixed
    L, omega = build_single_cycle(n, m * d)
    return to_canonical(L, omega ** m)


# ---------------------------------------------------------------------------
# two nontrivial cycles


def _two_cycles_admissible(d1: int, d2: int, f: int) -> None:
    if not d1 > d2 >= 2:
        raise InadmissibleError(f"need d1 > d2 >= 2 (got {d1}, {d2})")
    if d1 % d2:
        raise InadmissibleError(f"(a) {d2} does not divide {d1}")
    if f > d2:
        raise InadmissibleError(f"(b) {f} fixed points exceed d2 = {d2}")
    if d2 % 2 == 0 and f == 0:
        raise InadmissibleError(f"(c) d2 = {d2} even without fixed points")


def _m11_diagonal(A: Assembly, symbol_of_row) -> None:
    """``C(i, t2 - i - O_1,i) = symbol_of_row(i)`` for the rows of the first cycle."""
    d1, t2 = A.d(1), A.t(2)
    for i in range(1, d1 + 1):
        s = symbol_of_row(i)
        if s is not None:
            A.place(i, t2 - i - offset1(d1, i), s)


def two_cycles_contour(d1: int, d2: int) -> Assembly:
    """Contour for ``d1 . d2`` (``d2`` odd) or ``d1 . d2 . 1`` (``d2`` even), before completion checks."""
    _two_cycles_admissible(d1, d2, 0 if d2 % 2 else 1)
    if d2 % 2:
        A = Assembly([d1, d2], 0, "two_cycles")
        t1, t2 = A.t(1), A.t(2)
        _m11_diagonal(A, lambda i: t1 if i <= d1 - d2 else t2)
        A.embed(*build_single_cycle(d2, d2), [2])
        A.fill_transversal(1, 2, t1)
        A.fill_transversal(2, 1, t1)
        return A
    A = Assembly([d1, d2], 1, "two_cycles")
    t1, t2, t3, n = A.t(1), A.t(2), A.t(INF), A.n
    h, q = d1 // 2, d2 // 2

    def m11(i: int) -> int:
        if i == d1:
            return n
        if h - d2 < i <= h:
            return t2
        return t1

    _m11_diagonal(A, m11)
    A.embed(*build_single_cycle(d2 + 1, d2), [2])
    A.place(d1, t3 - 1, t1)
    if (d1 // d2) % 2 == 0:
        cells = [(h - d2 + i, t3 - 1 - i) for i in range(1, q)]
        cells += [(h - q + i, t2 + q - i) for i in range(1, q + 1)]
    else:
        cells = [(h - d2 + i, t2 + q - i) for i in range(1, q + 1)]
        cells += [(h - q + i, t3 - 1 - i) for i in range(1, q)]
    for r, c in cells:
        A.place(r, c, t1)
    A.fill_transversal(2, 1, t1)
    A.fill_fixed_blocks()
    return A


def build_two_cycles(d1: int, d2: int, fixed: int = 0) -> tuple[LatinSquare, Permutation]:
    """Square with canonical automorphism ``d1 . d2 . 1^fixed`` (``d1 > d2``).

    The contour is built for the least number of fixed points (0 for odd
    ``d2``, 1 for even ``d2``); more fixed points are added by prolongation.
    """
    _two_cycles_admissible(d1, d2, fixed)
    A = two_cycles_contour(d1, d2)
    L, alpha = A.finish()
    return prolong(L, alpha, fixed - A.lay.d_inf)


# ---------------------------------------------------------------------------
# the horse autotopism


def build_horse(d1: int) -> tuple[LatinSquare, Isotopism]:
    """Order-``d1`` square with autotopism ``((1..d1), (1..d1/2)(d1/2+1..d1), (1..d1))``.

    Contour ``L(2i-1, i) = L(2i, d2+i) = 1`` for ``i = 1..d2``, expanded along
    the orbits of the autotopism.
    """
    if d1 < 2 or d1 % 2:
        raise InadmissibleError(f"the horse construction needs even d1 >= 2, got {d1}")
    d2 = d1 // 2
    cyc = Permutation(tuple(list(range(2, d1 + 1)) + [1]))
    beta = Permutation.from_cycles([range(1, d2 + 1), range(d2 + 1, d1 + 1)], d1)
    theta = Isotopism(cyc, beta, cyc)
    grid = np.zeros((d1 + 1, d1 + 1), dtype=np.int64)
    for i in range(1, d2 + 1):
        for r, c in ((2 * i - 1, i), (2 * i, d2 + i)):
            s = 1
            for _ in range(d1):
                grid[r, c] = s
                r, c, s = cyc(r), beta(c), cyc(s)
    L = LatinSquare(grid[1:, 1:])
    if not is_autotopism(theta, L):  # pragma: no cover - contour argument
        raise ConstructionError("horse square does not verify")
    return L, theta


# ---------------------------------------------------------------------------
# closed subsquares sharing the fixed block


def _subsquare_groups(lengths: Sequence[int]) -> dict[int, list[int]]:
    """Cycle indices grouped by length, for the lengths without a proper divisor among the lengths."""
    groups: dict[int, list[int]] = {}
    for k, d in enumerate(lengths, 1):
        if not any(e < d and d % e == 0 for e in lengths):
            groups.setdefault(d, []).append(k)
    return groups


def build_subsquare_union(alpha: Permutation) -> Contour:
    """Partial contour filling every subsquare ``S_i`` (equal-length cycles plus the fixed points).

    The ``S_i`` overlap only in the fixed block, which is taken from the first
    of them.  Raises :class:`InadmissibleError` if some ``S_i`` cannot exist.
    """
    lay = Contour(alpha).layout
    f = lay.d_inf
    A = Assembly(list(lay.lengths), f, "subsquare_union")
    first = True
    for d, ks in _subsquare_groups(lay.lengths).items():
        lam = len(ks)
        if f > lam * d:
            raise InadmissibleError(f"(a) {f} fixed points exceed {lam} x {d}")
        if f == 0 and d % 2 == 0 and lam % 2 == 1:
            raise InadmissibleError(f"(b) {lam} cycle(s) of even length {d} without fixed points")
        if lam == 1:
            L, a = build_single_cycle(d + f, d)
        else:
            L, a = build_equal_lengths(d, lam, f)
        A.embed(L, a, ks, with_fixed_block=first)
        first = False
    return A.C


def fill_fixed_blocks(C: Contour) -> Contour:
    """Complete the blocks between the nontrivial cycles and the fixed points of a partial contour.

    Each block ``M_k,inf`` (and transposed ``M_inf,k``) receives one leading
    symbol of a cycle of the same length per fixed column (row), in the rows
    (columns) still missing it.  Raises :class:`ConstructionError` if the
    number of missing symbols does not match the number of empty blocks.
    """
    lay = C.layout
    A = Assembly(list(lay.lengths), lay.d_inf, "fill_fixed_blocks")
    A.C = C.copy()
    A.fill_fixed_blocks()
    return A.C
