"""Assembling a contour block by block.

An :class:`Assembly` wraps a :class:`~autotopism.contour.Contour` of a
canonical automorphism and offers the three generic steps the family
builders share:

* :meth:`Assembly.embed` copies a closed subsquare (built for a smaller
  automorphism with the same cycle lengths) onto a union of cycles plus the
  fixed points;
* :meth:`Assembly.fill_transversal` fills a block with one copy of a
  leading symbol per cell orbit, using the gapped-window formula when the
  free rows and columns form such a window and a small backtracking search
  otherwise;
* :meth:`Assembly.fill_fixed_blocks` completes the blocks between a cycle
  and the fixed points, one leading symbol per row and column.

:meth:`Assembly.finish` validates and expands the contour.  If the contour is
consistent but incomplete (a formula left a block unfilled), the rest is
completed by the orbit search with the expanded partial square as prefill;
every such completion is counted in :data:`FALLBACKS` so the sweep can report
it.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from typing import Sequence

from ..contour import INF, Contour, ContourError, Layout, OrbitWindow, gapped_transversal, partial_grid
from ..latin import LatinSquare
from ..perm import Permutation, canonical_permutation, CycleStructure
from .core import ConstructionError, verify_automorphism

__all__ = ["Assembly", "FALLBACKS", "SEARCH_COMPLETION_NODES"]

#: search completions per builder name (diagnostics for the constructor sweep)
FALLBACKS: Counter = Counter()

#: node budget of the completion search
SEARCH_COMPLETION_NODES = 2_000_000


class Assembly:
    """A contour under construction for the canonical permutation with ``lengths`` and ``fixed`` points."""

    def __init__(self, lengths: Sequence[int], fixed: int, name: str):
        cs = CycleStructure.from_lengths(list(lengths) + [1] * fixed)
        self.alpha: Permutation = canonical_permutation(cs)
        self.C = Contour(self.alpha)
        self.lay: Layout = self.C.layout
        self.name = name
        if tuple(self.lay.lengths) != tuple(lengths):
            raise ValueError(f"cycle lengths {tuple(lengths)} must be non-increasing")

    # -- shorthand --------------------------------------------------------
    @property
    def n(self) -> int:
        return self.C.n

    def t(self, k) -> int:
        return self.lay.t(k)

    def d(self, k) -> int:
        return self.lay.d(k)

    def place(self, r: int, c: int, s: int) -> None:
        self.C.place(r, c, s)

    def symbol_rows(self, s: int) -> set[int]:
        return {r for (r, _), x in self.C.cells.items() if x == s}

    def symbol_cols(self, s: int) -> set[int]:
        return {c for (_, c), x in self.C.cells.items() if x == s}

    def block_cells(self, i, j) -> dict[tuple[int, int], int]:
        return self.C.restrict(self.lay.span(i), self.lay.span(j))

    # -- subsquares ---------------------------------------------------------
    def embed(self, L: LatinSquare, alpha: Permutation, cycles: Sequence[int], *, with_fixed_block: bool = True) -> None:
        """Copy the contour of ``(L, alpha)`` onto global ``cycles`` (local cycle ``k`` -> ``cycles[k-1]``).

        ``alpha`` must be canonical, with cycle lengths matching the targets
        and exactly the fixed points of this assembly.  The fixed-point block
        is copied only when ``with_fixed_block`` is set, so several
        subsquares can share one ``M_inf,inf``.
        """
        sub = Layout.of(alpha)
        if sub.d_inf != self.lay.d_inf:
            raise ConstructionError(f"subsquare has {sub.d_inf} fixed points, need {self.lay.d_inf}")
        if len(cycles) != sub.m or any(sub.d(k) != self.d(g) for k, g in enumerate(cycles, 1)):
            raise ConstructionError("subsquare cycles do not match the targets")

        def phi(x: int) -> int:
            k = sub.label_of(x)
            if k == INF:
                return self.lay.fixed_start + (x - sub.fixed_start)
            return self.t(cycles[k - 1]) + (x - sub.t(k))

        for r, c, s in Contour.from_square(L, alpha):
            if not with_fixed_block and sub.label_of(r) == INF and sub.label_of(c) == INF:
                continue
            self.place(phi(r), phi(c), phi(s))

    # -- transversals -----------------------------------------------------
    def free_lines(self, k, s: int, axis: int) -> list[int]:
        """Rows (``axis=0``) or columns (``axis=1``) of cycle ``k`` that may still receive symbol ``s``."""
        g = math.gcd(self.d(k), self.lay.cycle_length_of(s))
        start = self.t(k)
        used = {(x - start) % g for x in (self.symbol_rows(s) if axis == 0 else self.symbol_cols(s)) if x in self.lay.span(k)}
        return [x for x in self.lay.span(k) if (x - start) % g not in used]

    def fill_transversal(self, i, j, s: int, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> list[tuple[int, int]]:
        """Place ``s`` on a transversal of block ``M_ij`` using only ``rows`` x ``cols`` (default: the free lines)."""
        g = math.gcd(self.d(i), self.d(j))
        rows = sorted(self.free_lines(i, s, 0) if rows is None else rows)
        cols = sorted(self.free_lines(j, s, 1) if cols is None else cols)
        cells = None
        if math.comb(len(rows), g) * math.comb(len(cols), g) <= 64:
            # prefer a gapped window, leaving out as few free lines as necessary
            for rsub in itertools.combinations(rows, g):
                for csub in itertools.combinations(cols, g):
                    cells = self._window_transversal(i, j, list(rsub), list(csub))
                    if cells is not None:
                        break
                if cells is not None:
                    break
        if cells is None:
            cells = self._search_transversal(i, j, s, rows, cols, g)
        if cells is None:
            raise ConstructionError(f"{self.name}: no transversal of block ({i},{j}) for symbol {s}")
        for r, c in cells:
            self.place(r, c, s)
        return cells

    def _window_transversal(self, i, j, rows, cols):
        g = len(rows)
        r0, c0 = self.t(i) - 1, self.t(j) - 1
        lr = [r - r0 for r in rows]
        lc = [c - c0 for c in cols]
        if g % 2 == 1 and _contiguous(lr) and _contiguous(lc):
            # antidiagonal of the window (the odd pattern)
            cand = [(rows[k], cols[g - 1 - k]) for k in range(g)]
            if self._is_transversal(i, j, cand, g):
                return cand
        for e in sorted({g - 1, g // 2} if g % 2 == 0 else {g - 1}, reverse=True):
            if e < 1:
                continue
            w = _window(lr, lc, g, e)
            if w is None:
                continue
            cells = gapped_transversal(w)
            if cells is None:
                continue
            cand = [(r + r0, c + c0) for r, c in cells]
            if self._is_transversal(i, j, cand, g):
                return cand
        return None

    def _is_transversal(self, i, j, cells, g) -> bool:
        ri, cj = self.t(i), self.t(j)
        return (
            len({r for r, _ in cells}) == g
            and len({c for _, c in cells}) == g
            and len({((c - cj) - (r - ri)) % g for r, c in cells}) == g
            and all((r, c) not in self.C.cells for r, c in cells)
        )

    def _search_transversal(self, i, j, s, rows, cols, g):
        ri, cj = self.t(i), self.t(j)
        gr = math.gcd(self.d(i), self.lay.cycle_length_of(s))
        gc = math.gcd(self.d(j), self.lay.cycle_length_of(s))
        row_syms = {r: {x for (rr, _), x in self.C.cells.items() if rr == r} for r in rows}
        col_syms = {c: {x for (_, cc), x in self.C.cells.items() if cc == c} for c in cols}
        rows = [r for r in rows if s not in row_syms[r]]
        cols = [c for c in cols if s not in col_syms[c]]
        out: list[tuple[int, int]] = []
        used_c, used_l, used_rr, used_cr = set(), set(), set(), set()

        def dfs(idx: int) -> bool:
            if len(out) == g:
                return True
            if len(rows) - idx < g - len(out):
                return False
            r = rows[idx]
            if (r - ri) % gr not in used_rr:
                for c in cols:
                    lab = ((c - cj) - (r - ri)) % g
                    if c in used_c or lab in used_l or (c - cj) % gc in used_cr or (r, c) in self.C.cells:
                        continue
                    out.append((r, c)); used_c.add(c); used_l.add(lab); used_rr.add((r - ri) % gr); used_cr.add((c - cj) % gc)
                    if dfs(idx + 1):
                        return True
                    out.pop(); used_c.discard(c); used_l.discard(lab); used_rr.discard((r - ri) % gr); used_cr.discard((c - cj) % gc)
            return dfs(idx + 1)

        return list(out) if dfs(0) else None

    # -- blocks against the fixed points ---------------------------------
    def fill_fixed_blocks(self) -> None:
        """Complete every ``M_k,inf`` and ``M_inf,k`` (one leading symbol per fixed row/column)."""
        lay = self.lay
        if lay.d_inf == 0:
            return
        fixed = list(range(lay.fixed_start, self.n + 1))
        by_length: dict[int, list[int]] = {}
        for k in range(1, lay.m + 1):
            by_length.setdefault(lay.d(k), []).append(k)
        for group in by_length.values():
            for axis in (0, 1):
                self._fill_fixed_group(group, fixed, axis)

    def _fill_fixed_group(self, group: list[int], fixed: list[int], axis: int) -> None:
        """``axis=0``: blocks ``M_k,inf`` (cycle rows, fixed columns); ``axis=1``: transposed."""
        lay = self.lay
        symbols = [self.t(k) for k in group]
        # lines of the group cycles that still miss a symbol of the group
        have: dict[int, set[int]] = {}
        for (r, c), s in self.C.cells.items():
            x = (r, c)[axis]
            if s in symbols and lay.label_of(x) in group:
                have.setdefault(x, set()).add(s)
        tasks = []  # (fixed line, cycle) blocks still empty
        for f in fixed:
            for k in group:
                if not any(((x, f) if axis == 0 else (f, x)) in self.C.cells for x in lay.span(k)):
                    tasks.append((f, k))
        missing = {x: [s for s in symbols if s not in have.get(x, set())] for k in group for x in lay.span(k)}
        col_used: dict[int, set[int]] = {f: set() for f in fixed}
        for (r, c), s in self.C.cells.items():
            f = c if axis == 0 else r
            if f in col_used:
                col_used[f].add(s)
        need = sum(len(v) for v in missing.values())
        if need != len(tasks):
            raise ConstructionError(
                f"{self.name}: {need} missing group symbols for {len(tasks)} empty fixed blocks (cycles {group})"
            )
        placed: list[tuple[int, int, int]] = []

        def dfs(idx: int) -> bool:
            if idx == len(tasks):
                return True
            f, k = tasks[idx]
            for x in lay.span(k):
                for s in list(missing[x]):
                    if s in col_used[f]:
                        continue
                    missing[x].remove(s); col_used[f].add(s)
                    placed.append((x, f, s))
                    if dfs(idx + 1):
                        return True
                    placed.pop(); col_used[f].discard(s); missing[x].append(s)
            return False

        if not dfs(0):
            raise ConstructionError(f"{self.name}: fixed blocks of cycles {group} cannot be completed")
        for x, f, s in placed:
            self.place(*((x, f) if axis == 0 else (f, x)), s)

    def fill_fixed_square(self) -> None:
        """``M_inf,inf`` as the cyclic square on the fixed symbols, if still empty."""
        fixed = list(range(self.lay.fixed_start, self.n + 1))
        if any((r, c) in self.C.cells for r in fixed for c in fixed):
            return
        f = len(fixed)
        for a, r in enumerate(fixed):
            for b, c in enumerate(fixed):
                self.place(r, c, fixed[(a + b) % f])

    # -- completion -------------------------------------------------------
    def finish(self) -> tuple[LatinSquare, Permutation]:
        """Expand the contour; complete it by search if a block was left open."""
        chk = self.C.validate()
        if chk:
            L = self.C.expand()
            verify_automorphism(L, self.alpha)
            return L, self.alpha
        part = self.C.validate(partial=True)
        if not part:
            raise ConstructionError(f"{self.name}: inconsistent contour: {part}\n{self.C.render()}")
        return self._search_completion(str(chk))

    def _search_completion(self, why: str) -> tuple[LatinSquare, Permutation]:
        from ..perm import Isotopism
        from ..search import SearchBudgetExceeded, exists_witness

        try:
            grid = partial_grid(self.C)
        except ContourError as exc:
            raise ConstructionError(f"{self.name}: {exc}") from exc
        FALLBACKS[self.name] += 1
        try:
            L = exists_witness(
                Isotopism.automorphism(self.alpha), max_order=self.n, prefill=grid, max_nodes=SEARCH_COMPLETION_NODES
            )
        except SearchBudgetExceeded:
            L = None
        if L is None:
            raise ConstructionError(f"{self.name}: partial contour cannot be completed ({why})")
        verify_automorphism(L, self.alpha)
        return L, self.alpha


def _contiguous(xs: Sequence[int]) -> bool:
    return all(b == a + 1 for a, b in zip(xs, xs[1:]))


def _window(rows: Sequence[int], cols: Sequence[int], g: int, e: int) -> OrbitWindow | None:
    """Describe sorted local ``rows``/``cols`` as a gapped window with first part of size ``e``."""
    if not (_contiguous(rows[:e]) and _contiguous(rows[e:]) and _contiguous(cols[:e]) and _contiguous(cols[e:])):
        return None
    r, c = rows[e - 1], cols[e - 1]
    h1 = rows[e] - r - 1 if e < g else 0
    h2 = cols[e] - c - 1 if e < g else 0
    return OrbitWindow(g, r, c, e, h1, h2)
