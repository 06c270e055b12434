"""Cell orbits of an isotopism and their encoding as an exact cover instance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..perm import Isotopism


def lcm_condition(a: int, b: int, c: int) -> bool:
    """Cycle lengths ``a`` (row), ``b`` (column), ``c`` (symbol) compatible with one entry."""
    l = math.lcm(a, b, c)
    return math.lcm(a, b) == l and math.lcm(b, c) == l and math.lcm(a, c) == l


@dataclass(frozen=True)
class OrbitPlan:
    """Cell orbits of ``theta`` with the symbols allowed at each representative.

    Orbit ``o`` consists of the cells ``(cell_r[k], cell_c[k])`` for
    ``k`` in ``orbit_start[o] : orbit_start[o] + orbit_len[o]`` (0-based), listed
    along the action ``(i, j) -> (alpha(i), beta(j))`` from the representative.
    Putting symbol ``s`` (1-based) at the representative puts ``gamma^k(s)``
    at the ``k``-th cell.  ``feasible[o, s-1]`` says whether that assignment is
    internally consistent, satisfies the lcm condition and agrees with any
    prefilled cells.
    """

    theta: Isotopism
    orbit_start: np.ndarray
    orbit_len: np.ndarray
    cell_r: np.ndarray
    cell_c: np.ndarray
    feasible: np.ndarray
    # exact cover encoding
    n_items: int
    opt_orbit: np.ndarray
    opt_symbol: np.ndarray
    opt_ptr: np.ndarray
    opt_items: np.ndarray
    item_ptr: np.ndarray
    item_opts: np.ndarray

    @property
    def order(self) -> int:
        return self.theta.degree

    @property
    def n_orbits(self) -> int:
        return len(self.orbit_len)

    def orbit_cells(self, o: int) -> list[tuple[int, int]]:
        s, l = self.orbit_start[o], self.orbit_len[o]
        return [(int(r) + 1, int(c) + 1) for r, c in zip(self.cell_r[s : s + l], self.cell_c[s : s + l])]

    def representative(self, o: int) -> tuple[int, int]:
        s = self.orbit_start[o]
        return int(self.cell_r[s]) + 1, int(self.cell_c[s]) + 1

    def options_for(self, orbit: int, symbol: int) -> int:
        """Option index assigning ``symbol`` to ``orbit`` (``-1`` if infeasible)."""
        hits = np.flatnonzero((self.opt_orbit == orbit) & (self.opt_symbol == symbol))
        return int(hits[0]) if len(hits) else -1

    def decode(self, options) -> np.ndarray:
        """Fill an ``n x n`` array (0 = empty) from a list of chosen options."""
        n = self.order
        g = self.theta.gamma.array0
        grid = np.zeros((n, n), dtype=np.int64)
        for opt in options:
            o = int(self.opt_orbit[opt])
            s = int(self.opt_symbol[opt]) - 1
            start, length = self.orbit_start[o], self.orbit_len[o]
            for k in range(length):
                grid[self.cell_r[start + k], self.cell_c[start + k]] = s + 1
                s = g[s]
        return grid


def _orbits(theta: Isotopism) -> list[list[tuple[int, int]]]:
    n = theta.degree
    a, b = theta.alpha.array0, theta.beta.array0
    seen = np.zeros((n, n), dtype=bool)
    orbits = []
    for r in range(n):
        for c in range(n):
            if seen[r, c]:
                continue
            cells = []
            i, j = r, c
            while not seen[i, j]:
                seen[i, j] = True
                cells.append((i, j))
                i, j = int(a[i]), int(b[j])
            orbits.append(cells)
    # longest orbits first; ties by representative, row-major
    orbits.sort(key=lambda cells: (-len(cells), cells[0]))
    return orbits


def build_orbit_plan(theta: Isotopism, prefill: np.ndarray | None = None) -> OrbitPlan:
    """Orbits, feasibility table and exact cover encoding of ``theta``.

    ``prefill`` is an optional ``n x n`` array of fixed entries (``0`` = free).
    """
    n = theta.degree
    orbits = _orbits(theta)
    la = theta.alpha.cycle_length_of
    lb = theta.beta.cycle_length_of
    lg = theta.gamma.cycle_length_of
    g = theta.gamma.array0
    if prefill is not None:
        prefill = np.asarray(prefill, dtype=np.int64)
        if prefill.shape != (n, n):
            raise ValueError(f"prefill must be {n}x{n}")

    n_orb = len(orbits)
    orbit_len = np.array([len(c) for c in orbits], dtype=np.int64)
    orbit_start = np.concatenate([[0], np.cumsum(orbit_len)[:-1]]).astype(np.int64)
    flat = [cell for cells in orbits for cell in cells]
    cell_r = np.array([r for r, _ in flat], dtype=np.int64)
    cell_c = np.array([c for _, c in flat], dtype=np.int64)

    feasible = np.zeros((n_orb, n), dtype=bool)
    opt_orbit: list[int] = []
    opt_symbol: list[int] = []
    opt_items: list[int] = []
    opt_ptr = [0]
    row_base, col_base = n_orb, n_orb + n * n
    for o, cells in enumerate(orbits):
        r0, c0 = cells[0]
        a, b = la[r0], lb[c0]
        length = len(cells)
        for s0 in range(n):
            c = lg[s0]
            if length % c or not lcm_condition(a, b, c):
                continue
            items = [o]
            rows_seen, cols_seen = set(), set()
            ok = True
            s = s0
            for (i, j) in cells:
                if prefill is not None and prefill[i, j] and prefill[i, j] != s + 1:
                    ok = False
                    break
                if (i, s) in rows_seen or (j, s) in cols_seen:
                    ok = False
                    break
                rows_seen.add((i, s))
                cols_seen.add((j, s))
                items.append(row_base + i * n + s)
                items.append(col_base + j * n + s)
                s = int(g[s])
            if not ok:
                continue
            feasible[o, s0] = True
            opt_orbit.append(o)
            opt_symbol.append(s0 + 1)
            opt_items.extend(items)
            opt_ptr.append(len(opt_items))

    n_items = n_orb + 2 * n * n
    opt_ptr_a = np.array(opt_ptr, dtype=np.int64)
    opt_items_a = np.array(opt_items, dtype=np.int64)
    # item -> options (CSR), options listed in increasing index, i.e. by orbit then symbol
    owners = np.repeat(np.arange(len(opt_orbit), dtype=np.int64), np.diff(opt_ptr_a))
    order = np.argsort(opt_items_a, kind="stable")
    item_opts = owners[order]
    item_ptr = np.zeros(n_items + 1, dtype=np.int64)
    np.cumsum(np.bincount(opt_items_a, minlength=n_items), out=item_ptr[1:])

    for arr in (orbit_start, orbit_len, cell_r, cell_c, feasible):
        arr.setflags(write=False)
    return OrbitPlan(
        theta=theta,
        orbit_start=orbit_start,
        orbit_len=orbit_len,
        cell_r=cell_r,
        cell_c=cell_c,
        feasible=feasible,
        n_items=n_items,
        opt_orbit=np.array(opt_orbit, dtype=np.int64),
        opt_symbol=np.array(opt_symbol, dtype=np.int64),
        opt_ptr=opt_ptr_a,
        opt_items=opt_items_a,
        item_ptr=item_ptr,
        item_opts=item_opts.astype(np.int64),
    )
