"""Builders for automorphisms with exactly three nontrivial cycles.

Four shapes beyond equal lengths:

* ``d1 > d2 = d3``: a diagonal ``D`` in ``M_11`` plus horse patterns;
* ``d1 = d2 > d3``: squaring a two-cycle automorphism (``d3`` odd) or an
  explicit contour (``d3`` even);
* ``d1 > d2 > d3`` with ``d3`` not dividing ``d2``: offset diagonals in
  every block of the first cycle and transversals in ``M_23``, ``M_32``;
* ``d1 > d2 > d3`` with ``d3 | d2``: the diagonal ``D`` with even/odd
  patterns wrapped around each other, the subsquare on cycles 2, 3 and the
  fixed points being a two-cycle square.
"""

from __future__ import annotations

import math

from ..contour import INF, offset1, offset_j
from ..latin import LatinSquare
from ..perm import Permutation
from .assembly import Assembly
from .core import ConstructionError, InadmissibleError, build_single_cycle, prolong, to_canonical
from .families import build_equal_lengths, build_two_cycles, two_cycles_contour

__all__ = [
    "build_three_cycles",
    "three_cycles_admissible",
    "three_cycles_contour",
]


# ---------------------------------------------------------------------------
# admissibility


def three_cycles_admissible(d1: int, d2: int, d3: int, f: int) -> str:
    """Name of the applicable case; raises :class:`InadmissibleError` naming the violated condition."""
    if not (d1 >= d2 >= d3 >= 2 and f >= 0):
        raise InadmissibleError(f"need d1 >= d2 >= d3 >= 2 and fixed >= 0 (got {d1}, {d2}, {d3}, {f})")
    if d1 == d2 == d3:
        if f > 3 * d1:
            raise InadmissibleError(f"(a) {f} fixed points exceed 3 x {d1}")
        if d1 % 2 == 0 and f == 0:
            raise InadmissibleError(f"(b) d = {d1} even without fixed points")
        return "equal"
    if d2 == d3:
        if d1 < 2 * d2 + f:
            raise InadmissibleError(f"(a) d1 = {d1} < 2 d2 + fixed = {2 * d2 + f}")
        if d1 % d2:
            raise InadmissibleError(f"(b) {d2} does not divide {d1}")
        if f > 2 * d2:
            raise InadmissibleError(f"(c) {f} fixed points exceed 2 d2 = {2 * d2}")
        if d2 % 2 == 0 and (d1 // d2) % 2 == 1 and f == 0:
            raise InadmissibleError("(d) d2 even and d1/d2 odd without fixed points")
        return "d1>d2=d3"
    if d1 == d2:
        if d1 % d3:
            raise InadmissibleError(f"(a) {d3} does not divide {d1}")
        if f > d3:
            raise InadmissibleError(f"(b) {f} fixed points exceed d3 = {d3}")
        if d3 % 2 == 0 and f == 0:
            raise InadmissibleError(f"(c) d3 = {d3} even without fixed points")
        return "d1=d2>d3"
    if d2 % d3:
        if d1 != math.lcm(d2, d3):
            raise InadmissibleError(f"(a) d1 = {d1} is not lcm({d2}, {d3})")
        if f > d3:
            raise InadmissibleError(f"(b) {f} fixed points exceed d3 = {d3}")
        if d1 % 2 == 0 and f == 0:
            raise InadmissibleError(f"(c) d1 = {d1} even without fixed points")
        return "d3∤d2"
    if d1 % d2:
        raise InadmissibleError(f"(a) {d2} does not divide {d1}")
    if f > d3:
        raise InadmissibleError(f"(b) {f} fixed points exceed d3 = {d3}")
    if d3 % 2 == 0 and f == 0:
        raise InadmissibleError(f"(c) d3 = {d3} even without fixed points")
    return "d3|d2"


# ---------------------------------------------------------------------------
# shared pieces


def _diagonal_d(A: Assembly, swap: bool) -> None:
    """The diagonal ``D = {(i, t2 - i - O_1,i)}`` of ``M_11`` for ``d1 > d2 >= d3``.

    ``t2`` on rows ``h-d2+1..h`` and ``t3`` on rows ``h+1..h+d3`` with
    ``h = floor(d1/2)``; the fixed symbols on the last rows outside those;
    ``t1`` elsewhere.  With ``swap`` the entries of rows ``d1`` and ``h+d3``
    are exchanged (no fixed points, ``d1`` even).
    """
    d1, d2, d3, f = A.d(1), A.d(2), A.d(3), A.lay.d_inf
    t1, t2, t3 = A.t(1), A.t(2), A.t(3)
    h = d1 // 2
    sym = {}
    for i in range(1, d1 + 1):
        if h - d2 < i <= h:
            sym[i] = t2
        elif h < i <= h + d3:
            sym[i] = t3
    spare = [i for i in range(d1, 0, -1) if i not in sym][:f]
    if len(spare) < f:
        raise ConstructionError(f"no room for {f} fixed points on the diagonal of M_11")
    for q, i in enumerate(spare):
        sym[i] = A.t(INF) + q
    for i in range(1, d1 + 1):
        sym.setdefault(i, t1)
    if swap:
        sym[d1], sym[h + d3] = sym[h + d3], sym[d1]
    for i in range(1, d1 + 1):
        A.place(i, _dcol(A, i), sym[i])


def _dcol(A: Assembly, i: int) -> int:
    return A.t(2) - i - offset1(A.d(1), i)


def _free_d_columns(A: Assembly) -> list[int]:
    """Columns of the first cycle without ``t1`` in ``M_11``."""
    used = {c for (r, c), s in A.C.cells.items() if s == A.t(1) and r <= A.d(1) and c <= A.d(1)}
    return [c for c in range(1, A.d(1) + 1) if c not in used]


def _free_d_rows(A: Assembly) -> list[int]:
    used = {r for (r, c), s in A.C.cells.items() if s == A.t(1) and r <= A.d(1) and c <= A.d(1)}
    return [r for r in range(1, A.d(1) + 1) if r not in used]


def _finish_with_fixed(A: Assembly, f: int) -> tuple[LatinSquare, Permutation]:
    A.fill_fixed_blocks()
    L, alpha = A.finish()
    return prolong(L, alpha, f - A.lay.d_inf)


def _embed_subsquares(A: Assembly, groups: list[tuple[list[int], tuple[LatinSquare, Permutation]]]) -> None:
    first = True
    for cycles, (L, a) in groups:
        A.embed(L, a, cycles, with_fixed_block=first)
        first = False


# ---------------------------------------------------------------------------
# d1 > d2 = d3


def _case_d2_eq_d3(d1: int, d2: int, f: int) -> Assembly:
    A = Assembly([d1, d2, d2], f, "three_cycles:d1>d2=d3")
    t1, t2, t3 = A.t(1), A.t(2), A.t(3)
    h = d1 // 2
    case2 = f == 0 and d1 % 2 == 0
    _diagonal_d(A, swap=case2)
    # M12 u M13: horse pattern on the rows of t2 and t3 in D
    r0 = h - d2 + 1
    horse_rows = {}
    for rho in range(1, 2 * d2 + 1):
        c = t2 + (rho + 1) // 2 - 1 if rho % 2 else t3 + rho // 2 - 1
        horse_rows[rho] = (r0 + rho - 1, c)
    if case2:
        # the bottom t1 of M13 moves down to row d1
        r, c = horse_rows[2 * d2]
        horse_rows[2 * d2] = (d1, c)
    for r, c in horse_rows.values():
        A.place(r, c, t1)
    # M21 u M31: transposed horse pattern on the lowest 2 d2 consecutive free columns
    free = _free_d_columns(A)
    c0 = _first_run(free, 2 * d2)
    for i in range(1, d2 + 1):
        A.place(t2 + i - 1, c0 + 2 * i - 2, t1)
        A.place(t3 + i - 1, c0 + 2 * i - 1, t1)
    _embed_subsquares(A, [([2, 3], build_equal_lengths(d2, 2, f))])
    return A


def _first_run(xs: list[int], length: int) -> int:
    """Start of the first run of ``length`` consecutive integers in sorted ``xs``."""
    run_start, run = None, 0
    prev = None
    for x in xs:
        if prev is not None and x == prev + 1:
            run += 1
        else:
            run_start, run = x, 1
        if run >= length:
            return run_start
        prev = x
    raise ConstructionError(f"no {length} consecutive free columns in {xs}")


# ---------------------------------------------------------------------------
# d1 = d2 > d3, d3 even


def _case_d1_eq_d2_even(d1: int, d3: int) -> Assembly:
    A = Assembly([d1, d1, d3], 1, "three_cycles:d1=d2>d3")
    t1, t2, t3, n = A.t(1), A.t(2), A.t(3), A.n
    h = d1 // 2
    q = d3 // 2
    cells: list[tuple[int, int, int]] = [(h + 1, h, n)]
    cells += [(h + 1 + i, h - i, t2) for i in range(1, h)]
    cells += [(h + i, h - i + 2, t1) for i in range(1, h + 1)]
    cells += [(i, 2 * d1 - i, t2) for i in range(1, h + 1)]
    cells += [(i, t3 - i, t1) for i in range(1, h - d3 + 1)]
    cells += [(h - d3 + i, t3 - h + d3 - i, t3) for i in range(1, d3 + 1)]
    cells += [(t2, 1, t1)]
    cells += [(d1 + i, t2 - i, t2) for i in range(1, h - d3 + 1)]
    cells += [(3 * h - d3 + i, h + d3 - i + 1, t3) for i in range(1, d3 + 1)]
    cells += [(t2 + i, t2 - i, t1) for i in range(1, h)]
    cells += [(3 * h + 1, 3 * h, n)]
    cells += [(3 * h + i, 3 * h - i, t2) for i in range(1, h)]
    cells += [(3 * h + 1 + i, 3 * h - i, t1) for i in range(1, h)]
    cells += [(2 * d1, 2 * d1, t2)]
    # M13 u M23
    cells += [(h - d3 + i, n - i, t1) for i in range(1, q + 1)]
    cells += [(h - q + i + 1, n - q - i, t1) for i in range(1, q)]
    cells += [(h + 1, t3, t2)]
    cells += [(3 * h - d3 + i, n - i, t2) for i in range(1, q + 1)]
    cells += [(3 * h - q + i + 1, n - q - i, t2) for i in range(1, q)]
    cells += [(3 * h + 1, t3, t1)]
    for r, c, s in cells:
        A.place(r, c, s)
    A.fill_transversal(3, 1, t2)
    A.fill_transversal(3, 2, t1)
    _embed_subsquares(A, [([3], build_single_cycle(d3 + 1, d3))])
    return A


# ---------------------------------------------------------------------------
# d1 > d2 > d3, d3 does not divide d2


def _case_nondividing(d1: int, d2: int, d3: int) -> Assembly:
    g = math.gcd(d2, d3)
    f = 0 if d1 % 2 else 1
    A = Assembly([d1, d2, d3], f, "three_cycles:d3∤d2")
    cells = nondividing_cells(d1, d2, d3)
    for (r, c), s in cells.items():
        A.place(r, c, s)
    A.fill_transversal(2, 3, A.t(1))
    A.fill_transversal(3, 2, A.t(1))
    _embed_subsquares(A, [([2], build_single_cycle(d2 + f, d2)), ([3], build_single_cycle(d3 + f, d3))])
    return A


def nondividing_cells(d1: int, d2: int, d3: int) -> dict[tuple[int, int], int]:
    """Partial contour outside ``M_23``, ``M_32`` and the subsquares, for ``d1 = lcm(d2, d3)``.

    With ``g = gcd(d2, d3)``, ``a = d2/g`` and ``b = d3/g``, the generic
    contour places the ``t2`` and ``t3`` entries of ``M_11`` at the top of
    the diagonal.  When ``g`` and ``a - b`` are both even it is modified:
    everything is shifted down so that the break of the diagonal falls
    between ``t2`` and ``t3``, ``M_21`` moves down-left by one, ``M_31``
    copies the ``M_13`` pattern next to the ``t2`` columns of ``M_11``, and
    the ``i = g`` entry of ``M_13`` moves ``d3/2`` down-left while the entry it
    lands on goes to row ``d1``.
    """
    g = math.gcd(d2, d3)
    t1, t2, t3 = 1, d1 + 1, d1 + d2 + 1
    t4 = t3 + d3
    n = t4 - 1 + (1 - d1 % 2)
    h = d1 // 2
    wrap = g % 2 == 0 and (d2 // g - d3 // g) % 2 == 0
    s = h - d2 + g if wrap else 0
    C: dict[tuple[int, int], int] = {}

    def m11(i: int) -> int:
        if s < i <= s + d2 - g:
            return t2
        if s + d2 - g < i <= s + d2 + d3 - 2 * g:
            return t3
        if i == d1 and d1 % 2 == 0:
            return n
        return t1

    for i in range(1, d1 + 1):
        C[(i, t2 - i - offset1(d1, i))] = m11(i)
    for i in range(1, d2 + 1):
        sym = t3 if g < i <= 2 * g else t1
        o = offset_j(d2, g, i)
        C[(s + d2 + 1 - i, d1 + i - o)] = sym
        r, c = t3 - i + o, d1 - d2 + i
        if wrap:
            r, c = r + 1, c - 1 - s
            if r >= t3:  # the same cell orbit, one row cycle up
                r, c = r - d2, c + d2
        C[(r, c)] = sym
    m13 = {}
    for i in range(1, d3 + 1):
        sym = t2 if g < i <= 2 * g else t1
        o = offset_j(d3, g, i)
        m13[i] = (s + d2 - 2 * g + i, t4 - i + o)
        if wrap:
            x = t2 - h + 1 - offset1(d1, h)
            C[(t3 - 1 + i, x - i + o)] = sym
        else:
            C[(t3 - 1 + i - o, d1 - d2 + 2 * g + 1 - i)] = sym
    if wrap:
        r, c = m13[g]
        target = (r + d3 // 2, c - d3 // 2)
        for i, (r2, c2) in m13.items():
            if r2 == target[0]:
                m13[i] = (d1, c2)
        m13[g] = target
    for i, cell in m13.items():
        C[cell] = t2 if g < i <= 2 * g else t1
    return C


# ---------------------------------------------------------------------------
# d1 > d2 > d3, d3 | d2


def _case_dividing(d1: int, d2: int, d3: int) -> Assembly:
    f = 1 if d3 % 2 == 0 else 0
    A = Assembly([d1, d2, d3], f, "three_cycles:d3|d2")
    t1, t2, t3 = A.t(1), A.t(2), A.t(3)
    t4 = t3 + d3
    h = d1 // 2
    _diagonal_d(A, swap=f == 0 and d1 % 2 == 0)
    cells: list[tuple[int, int]] = []
    if f == 1:
        # the wrap-around of an even pattern in M21 by one in M31, and its transpose slid up
        a = h + d2 - d3 // 2 + 1
        v = d3 - d2
        for i in range(1, d2 + 1):
            c = a - i if i <= d2 // 2 else a - 1 - i
            cells.append((d1 + i, c))
            cells.append((c + v, d1 + i))
        for i in range(1, d3 + 1):
            c = h + d2 + 1 - i if i <= d3 // 2 else h - i
            cells.append((d1 + d2 + i, c))
            cells.append((c + v, d1 + d2 + i))
        top = min((r, c) for r, c in cells if c >= t3)
        shift = d2 + h if (d2 // 2) % d3 == 0 else d2 // 2 + d3 // 2
        cells[cells.index(top)] = (top[0] + shift, top[1])
    elif d1 % 2:
        rows = _free_d_rows(A)
        cols = _free_d_columns(A)
        if len(rows) != d2 + d3 or len(cols) != d2 + d3:
            raise ConstructionError("unexpected free lines of D")
        right = cols[::-1]
        cells += [(t2 + i, right[i]) for i in range(d2)]
        cells += [(t3 + i, right[d2 + i]) for i in range(d3)]
        cells += [(rows[i], t2 + d2 - 1 - i) for i in range(d2)]
        cells += [(rows[d2 + i], t3 + d3 - 1 - i) for i in range(d3)]
    elif d2 % 2 == 0:
        R = max(_free_d_columns(A))
        for i in range(1, d2 + 1):
            cells.append((d1 + i, R - i + 1 if i <= d2 // 2 else R - i))
        m31 = [(d1 + d2 + i, R - d2 - i) for i in range(1, d3 + 1)]
        m31[-1] = (m31[-1][0], m31[-1][1] + d3 + d2 // 2)
        cells += m31
        top = _free_d_rows(A)[0]
        for i in range(1, d2 + 1):
            cells.append((top + i - 1 if i <= d2 // 2 else top + i, t3 - i))
        m13 = [(top + d2 + i - 1, t4 - i) for i in range(1, d3 + 1)]
        m13[0] = (m13[0][0] - d2 // 2, m13[0][1])
        m13[-1] = (d1, m13[-1][1])
        cells += m13
    else:
        cells += [(d1 + i, h + d2 + 1 - i) for i in range(1, d2 + 1)]
        cells += [(d1 + d2 + i, h + 1 - i) for i in range(1, d3 + 1)]
        cells += [(h - d2 + i, t2 + d2 - i) for i in range(1, d2 + 1)]
        m13 = [(h + i, t3 + d3 - i) for i in range(1, d3 + 1)]
        m13[-1] = (d1, m13[-1][1])
        cells += m13
    for r, c in cells:
        A.place(r, c, t1)
    sub = two_cycles_contour(d2, d3)
    K = sub.finish()
    _embed_subsquares(A, [([2, 3], K)])
    return A


# ---------------------------------------------------------------------------
# dispatch


def three_cycles_contour(d1: int, d2: int, d3: int) -> Assembly:
    """Contour assembly for the least admissible number of fixed points (``d1 > d3``)."""
    case = three_cycles_admissible(d1, d2, d3, _least_fixed(d1, d2, d3))
    if case == "d1>d2=d3":
        return _case_d2_eq_d3(d1, d2, _least_fixed(d1, d2, d3))
    if case == "d1=d2>d3":
        if d3 % 2:
            raise ValueError("d3 odd is built by squaring a two-cycle automorphism")
        return _case_d1_eq_d2_even(d1, d3)
    if case == "d3∤d2":
        return _case_nondividing(d1, d2, d3)
    if case == "d3|d2":
        return _case_dividing(d1, d2, d3)
    raise ValueError(f"no contour construction for {case}")


def _least_fixed(d1: int, d2: int, d3: int) -> int:
    if d2 == d3:
        return 1 if d2 % 2 == 0 and (d1 // d2) % 2 == 1 else 0
    if d1 == d2 or d2 % d3 == 0:
        return 1 if d3 % 2 == 0 else 0
    return 1 if d1 % 2 == 0 else 0


def build_three_cycles(d1: int, d2: int, d3: int, fixed: int = 0) -> tuple[LatinSquare, Permutation]:
    """Square with canonical automorphism ``d1 . d2 . d3 . 1^fixed`` (``d1 >= d2 >= d3``)."""
    case = three_cycles_admissible(d1, d2, d3, fixed)
    if case == "equal":
        return build_equal_lengths(d1, 3, fixed)
    if case == "d1>d2=d3":
        # the diagonal holds the fixed points directly
        A = _case_d2_eq_d3(d1, d2, fixed)
        A.fill_fixed_blocks()
        return A.finish()
    if case == "d1=d2>d3" and d3 % 2:
        L, beta = build_two_cycles(2 * d1, d3, fixed)
        return to_canonical(L, beta ** 2)
    A = three_cycles_contour(d1, d2, d3)
    return _finish_with_fixed(A, fixed)
