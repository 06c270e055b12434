"""Contours: sparse leading-symbol skeletons of Latin squares with a given automorphism.

For a canonical automorphism ``alpha`` the cells of an ``n x n`` grid fall into
orbits under ``(i, j) -> (alpha(i), alpha(j))``.  A contour stores one leading
symbol (the least element of a cycle of ``alpha``) in one cell of every orbit;
propagating each entry ``(i, j, k) -> (alpha(i), alpha(j), alpha(k))`` along
its orbit fills the whole square.

The module also holds the block bookkeeping (cycles ``1..m`` of decreasing
length plus the fixed points, written ``INF``), the contour validity
conditions, block diagrams, the standard block patterns and gapped
transversals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .latin import LatinSquare, is_autotopism
from .perm import Isotopism, Permutation, canonical_permutation, cycle_structure

__all__ = [
    "INF",
    "Layout",
    "Contour",
    "ContourCheck",
    "ContourError",
    "BlockDiagram",
    "OrbitWindow",
    "cell_orbits_of_automorphism",
    "validate_contour",
    "expand_contour",
    "partial_grid",
    "block_diagram_of",
    "odd_pattern",
    "even_pattern",
    "staircase_pattern",
    "place_odd_pattern",
    "place_even_pattern",
    "place_staircase",
    "transversal_parity",
    "gapped_transversal",
    "offset1",
    "offset_j",
    "parse_contour",
]

INF = "inf"


class ContourError(ValueError):
    """A contour cannot be built, validated or expanded as requested."""


# ---------------------------------------------------------------------------
# block layout of a canonical automorphism


@dataclass(frozen=True)
class Layout:
    """Cycle bookkeeping for a canonical permutation.

    ``lengths[k-1]`` and ``starts[k-1]`` are ``d_k`` and ``t_k`` for the
    nontrivial cycles ``k = 1..m``; the fixed points are
    ``fixed_start .. n``.
    """

    n: int
    lengths: tuple[int, ...]
    starts: tuple[int, ...]

    @classmethod
    def of(cls, alpha: Permutation) -> "Layout":
        if not alpha.is_canonical():
            raise ContourError(f"{alpha} is not canonical")
        nontrivial = [c for c in alpha.cycles if len(c) > 1]
        return cls(alpha.degree, tuple(len(c) for c in nontrivial), tuple(c[0] for c in nontrivial))

    @property
    def m(self) -> int:
        return len(self.lengths)

    @property
    def d_inf(self) -> int:
        return self.n - sum(self.lengths)

    @property
    def fixed_start(self) -> int:
        return sum(self.lengths) + 1

    def t(self, k) -> int:
        """Leading symbol of cycle ``k`` (``INF`` gives the first fixed point)."""
        return self.fixed_start if k == INF else self.starts[k - 1]

    def d(self, k) -> int:
        return self.d_inf if k == INF else self.lengths[k - 1]

    def labels(self) -> list:
        return list(range(1, self.m + 1)) + ([INF] if self.d_inf else [])

    def span(self, k) -> range:
        """Indices (1-based) of the rows/columns of cycle ``k`` or of the fixed points."""
        s = self.t(k)
        return range(s, s + self.d(k))

    def label_of(self, x: int):
        for k in range(1, self.m + 1):
            if self.starts[k - 1] <= x < self.starts[k - 1] + self.lengths[k - 1]:
                return k
        return INF

    def cycle_length_of(self, x: int) -> int:
        k = self.label_of(x)
        return 1 if k == INF else self.lengths[k - 1]

    def cycle_start_of(self, x: int) -> int:
        """Leading element of the cycle containing ``x`` (``x`` itself for a fixed point)."""
        k = self.label_of(x)
        return x if k == INF else self.starts[k - 1]

    def is_leading(self, s: int) -> bool:
        return self.cycle_start_of(s) == s


def cell_orbits_of_automorphism(alpha: Permutation) -> list[list[tuple[int, int]]]:
    """Orbits of ``(i, j) -> (alpha(i), alpha(j))``, representatives in row-major order."""
    n = alpha.degree
    seen = np.zeros((n + 1, n + 1), dtype=bool)
    out = []
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            if seen[r, c]:
                continue
            cells = []
            i, j = r, c
            while not seen[i, j]:
                seen[i, j] = True
                cells.append((i, j))
                i, j = alpha(i), alpha(j)
            out.append(cells)
    return out


# ---------------------------------------------------------------------------
# the contour type


@dataclass(frozen=True)
class ContourCheck:
    ok: bool
    condition: str = ""
    location: tuple = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else f"condition ({self.condition}) at {self.location}: {self.message}"


class Contour:
    """Sparse map ``(row, column) -> leading symbol`` for a canonical automorphism."""

    def __init__(self, alpha: Permutation, cells: dict[tuple[int, int], int] | None = None):
        self.alpha = alpha
        self.layout = Layout.of(alpha)
        self.cells: dict[tuple[int, int], int] = {}
        for (r, c), s in (cells or {}).items():
            self.place(r, c, s)

    @classmethod
    def for_structure(cls, cs) -> "Contour":
        return cls(canonical_permutation(cs))

    @property
    def n(self) -> int:
        return self.alpha.degree

    def place(self, r: int, c: int, s: int, *, overwrite: bool = False) -> None:
        n = self.n
        if not (1 <= r <= n and 1 <= c <= n and 1 <= s <= n):
            raise ContourError(f"entry ({r},{c},{s}) outside [1..{n}]")
        if not overwrite and (r, c) in self.cells and self.cells[(r, c)] != s:
            raise ContourError(f"cell ({r},{c}) already holds {self.cells[(r, c)]}, cannot place {s}")
        self.cells[(r, c)] = s

    def remove(self, r: int, c: int) -> int:
        return self.cells.pop((r, c))

    def move(self, src: tuple[int, int], dst: tuple[int, int]) -> None:
        s = self.cells.pop(src)
        self.place(*dst, s)

    def get(self, r: int, c: int) -> int | None:
        return self.cells.get((r, c))

    def copy(self) -> "Contour":
        return Contour(self.alpha, dict(self.cells))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        for (r, c), s in sorted(self.cells.items()):
            yield r, c, s

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Contour) and self.alpha == other.alpha and self.cells == other.cells

    def restrict(self, rows: Iterable[int], cols: Iterable[int]) -> dict[tuple[int, int], int]:
        rows, cols = set(rows), set(cols)
        return {rc: s for rc, s in self.cells.items() if rc[0] in rows and rc[1] in cols}

    @classmethod
    def from_square(cls, L: LatinSquare, alpha: Permutation) -> "Contour":
        """Per orbit, the first cell (row-major) holding a leading symbol."""
        lay = Layout.of(alpha)
        C = cls(alpha)
        for orbit in cell_orbits_of_automorphism(alpha):
            for r, c in sorted(orbit):
                if lay.is_leading(L[r, c]):
                    C.place(r, c, L[r, c])
                    break
        return C

    def validate(self, *, partial: bool = False) -> ContourCheck:
        return validate_contour(self, partial=partial)

    def expand(self) -> LatinSquare:
        return expand_contour(self)

    def render(self) -> str:
        return render_contour(self)

    def to_text(self) -> str:
        lines = [f"{self.n} {cycle_structure(self.alpha)}"]
        lines += [f"{r} {c} {s}" for r, c, s in self]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"Contour(alpha={self.alpha}, cells={len(self.cells)})"


# ---------------------------------------------------------------------------
# validation and expansion


def _blocks(lay: Layout) -> list[tuple[int, int]]:
    """Every cycle of the automorphism as (start, length); fixed points are 1-cycles."""
    out = [(s, d) for s, d in zip(lay.starts, lay.lengths)]
    out += [(x, 1) for x in range(lay.fixed_start, lay.n + 1)]
    return out


def validate_contour(C: Contour, *, partial: bool = False) -> ContourCheck:
    """Check conditions (a)-(e) in that order, scanning row-major; report the first failure.

    (a) partial Latin square on leading symbols; (b) each ``a x b`` block holds
    ``gcd(a, b)`` symbols in distinct cell orbits; (c) the lcm condition for
    every placed symbol; (d)/(e) repeated symbols in one row/column cycle are
    spaced incongruently modulo ``gcd(a, c)`` / ``gcd(b, c)``.  With
    ``partial=True`` blocks may hold fewer than ``gcd(a, b)`` symbols, which
    checks that a contour under construction can still be extended.
    """
    lay = C.layout
    items = sorted(C.cells.items())

    # (a)
    seen_row: dict[tuple[int, int], tuple[int, int]] = {}
    seen_col: dict[tuple[int, int], tuple[int, int]] = {}
    for (r, c), s in items:
        if not lay.is_leading(s):
            return ContourCheck(False, "a", (r, c), f"symbol {s} is not a leading symbol")
        if (r, s) in seen_row:
            return ContourCheck(False, "a", (r, c), f"symbol {s} repeated in row {r}")
        if (c, s) in seen_col:
            return ContourCheck(False, "a", (r, c), f"symbol {s} repeated in column {c}")
        seen_row[(r, s)] = (r, c)
        seen_col[(c, s)] = (r, c)

    # (b)
    blocks = _blocks(lay)
    for rs, a in blocks:
        for cs, b in blocks:
            g = math.gcd(a, b)
            inside = [(r, c) for (r, c), _ in items if rs <= r < rs + a and cs <= c < cs + b]
            labels = set()
            for r, c in inside:
                lab = ((c - cs) - (r - rs)) % g
                if lab in labels:
                    return ContourCheck(False, "b", (r, c), f"two symbols in one cell orbit of block ({rs},{cs})")
                labels.add(lab)
            if len(inside) != g and not (partial and len(inside) < g):
                return ContourCheck(
                    False, "b", (rs, cs), f"block at ({rs},{cs}) of size {a}x{b} holds {len(inside)} symbols, needs {g}"
                )

    # (c)
    for (r, c), s in items:
        a, b, cc = lay.cycle_length_of(r), lay.cycle_length_of(c), lay.cycle_length_of(s)
        l = math.lcm(a, b, cc)
        if not (math.lcm(a, b) == l and math.lcm(b, cc) == l and math.lcm(a, cc) == l):
            return ContourCheck(False, "c", (r, c), f"lcm condition fails for lengths ({a},{b},{cc})")

    # (d) and (e)
    for cond, axis in (("d", 0), ("e", 1)):
        first: dict[tuple[int, int, int], tuple[int, int]] = {}
        for (r, c), s in items:
            x = (r, c)[axis]
            start = lay.cycle_start_of(x)
            a = lay.cycle_length_of(x)
            g = math.gcd(a, lay.cycle_length_of(s))
            key = (s, start, (x - start) % g)
            if key in first:
                what = "rows" if axis == 0 else "columns"
                return ContourCheck(
                    False, cond, (r, c), f"symbol {s} in {what} {first[key][axis]} and {x}, congruent mod {g}"
                )
            first[key] = (r, c)
    return ContourCheck(True)


def partial_grid(C: Contour) -> np.ndarray:
    """Propagate every entry along its cell orbit; ``n x n`` array with ``0`` in unreached cells."""
    n = C.n
    a = C.alpha
    grid = np.zeros((n + 1, n + 1), dtype=np.int64)
    for (r, c), s in sorted(C.cells.items()):
        i, j, k = r, c, s
        while True:
            if grid[i, j] and grid[i, j] != k:
                raise ContourError(f"propagation clash at ({i},{j}): {grid[i, j]} vs {k}")
            grid[i, j] = k
            i, j, k = a(i), a(j), a(k)
            if (i, j) == (r, c):
                if k != s:
                    raise ContourError(f"orbit of ({r},{c}) does not close on symbol {s}")
                break
    return grid[1:, 1:]


def expand_contour(C: Contour, *, check: bool = True) -> LatinSquare:
    """Propagate every entry along its cell orbit and return the verified square."""
    if check:
        res = validate_contour(C)
        if not res:
            raise ContourError(f"invalid contour: {res}")
    body = partial_grid(C)
    if (body == 0).any():
        r, c = (int(x) + 1 for x in np.argwhere(body == 0)[0])
        raise ContourError(f"cell ({r},{c}) left empty")
    try:
        L = LatinSquare(body)
    except ValueError as exc:
        raise ContourError(f"expansion is not a Latin square: {exc}") from exc
    if not is_autotopism(Isotopism.automorphism(C.alpha), L):
        raise ContourError("expanded square does not admit the automorphism")
    return L


# ---------------------------------------------------------------------------
# block diagrams


@dataclass(frozen=True)
class BlockDiagram:
    """``counts[(i, j, k)]`` = occurrences of each symbol of cycle ``k`` in block ``M_ij``.

    Indices are cycle labels ``1..m`` or :data:`INF`.  Fixed points need not
    be spread evenly over the blocks, so ``fixed[(i, j)]`` keeps one count per
    fixed symbol; ``f(INF, i, j)`` is their common value when they agree.
    """

    layout: Layout
    counts: dict
    fixed: dict

    def f(self, k, i, j) -> int:
        if k != INF:
            return self.counts.get((i, j, k), 0)
        per_symbol = set(self.fixed.get((i, j), (0,)))
        if len(per_symbol) != 1:
            raise ContourError(f"fixed points occur unevenly in block ({i},{j}): {self.fixed[(i, j)]}")
        return per_symbol.pop()

    def check_sums(self) -> bool:
        """Block areas and per-symbol row/column band counts."""
        lay = self.layout
        labels = lay.labels()
        cycles = [k for k in labels if k != INF]
        for i in labels:
            for j in labels:
                area = sum(lay.d(k) * self.counts.get((i, j, k), 0) for k in cycles)
                if area + sum(self.fixed.get((i, j), ())) != lay.d(i) * lay.d(j):
                    return False
        for i in labels:
            for k in cycles:
                if sum(self.counts.get((i, j, k), 0) for j in labels) != lay.d(i):
                    return False
                if sum(self.counts.get((j, i, k), 0) for j in labels) != lay.d(i):
                    return False
            for x in range(lay.d_inf):
                if sum(self.fixed[(i, j)][x] for j in labels) != lay.d(i):
                    return False
                if sum(self.fixed[(j, i)][x] for j in labels) != lay.d(i):
                    return False
        return True

    def table(self) -> dict:
        """Nonzero counts as ``{(i, j): {k: f}}``; uneven fixed points give a per-symbol tuple."""
        out: dict = {}
        for (i, j, k), v in self.counts.items():
            if v:
                out.setdefault((i, j), {})[k] = v
        for (i, j), per_symbol in self.fixed.items():
            if any(per_symbol):
                out.setdefault((i, j), {})[INF] = per_symbol[0] if len(set(per_symbol)) == 1 else per_symbol
        return out


def block_diagram_of(L: LatinSquare, alpha: Permutation) -> BlockDiagram:
    if not is_autotopism(Isotopism.automorphism(alpha), L):
        raise ContourError("alpha is not an automorphism of the square")
    lay = Layout.of(alpha)
    labels = lay.labels()
    fixed_symbols = list(lay.span(INF)) if lay.d_inf else []
    counts, fixed = {}, {}
    for i in labels:
        for j in labels:
            block = L.cells[np.ix_([r - 1 for r in lay.span(i)], [c - 1 for c in lay.span(j)])]
            for k in labels:
                if k != INF:
                    counts[(i, j, k)] = int((block == lay.t(k)).sum())
            fixed[(i, j)] = tuple(int((block == x).sum()) for x in fixed_symbols)
    return BlockDiagram(lay, counts, fixed)


# ---------------------------------------------------------------------------
# rendering and text format

GLYPHS = {1: "★", 2: "◦", 3: "•"}


def _glyph(lay: Layout, s: int) -> str:
    k = lay.label_of(s)
    if k == INF:
        return "∞"
    return GLYPHS.get(k, str(s))


def render_contour(C: Contour) -> str:
    """Fixed-width grid with block separators; ``.`` marks empty cells."""
    lay = C.layout
    breaks = {s for s in lay.starts[1:]} | ({lay.fixed_start} if lay.d_inf and lay.m else set())
    width = max([1] + [len(_glyph(lay, s)) for s in C.cells.values()])
    lines = []
    for r in range(1, C.n + 1):
        if r in breaks:
            lines.append(_rule(C.n, breaks, width))
        parts = []
        for c in range(1, C.n + 1):
            if c in breaks:
                parts.append("|")
            s = C.cells.get((r, c))
            parts.append(("." if s is None else _glyph(lay, s)).rjust(width))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _rule(n: int, breaks: set, width: int) -> str:
    parts = []
    for c in range(1, n + 1):
        if c in breaks:
            parts.append("+")
        parts.append("-" * width)
    return "-".join(parts)


def parse_contour(text: str) -> Contour:
    """Parse ``n STRUCTURE`` then ``r c s`` lines; ``#`` starts a comment."""
    from .perm import CycleStructure, ParseError

    lines = []
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append(body)
    if not lines:
        raise ContourError("empty contour text")
    head = lines[0].split()
    try:
        n = int(head[0])
    except ValueError:
        raise ContourError(f"bad header {lines[0]!r}") from None
    if len(head) < 2:
        raise ContourError("header must give the order and the cycle structure, e.g. '5 3.1^2'")
    try:
        cs = CycleStructure.parse(head[1])
    except ParseError as exc:
        raise ContourError(str(exc)) from None
    if cs.degree != n:
        raise ContourError(f"structure {cs} has degree {cs.degree}, header says {n}")
    C = Contour(canonical_permutation(cs))
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 3:
            raise ContourError(f"expected 'r c s', got {ln!r}")
        try:
            r, c, s = (int(t) for t in toks)
        except ValueError:
            raise ContourError(f"non-integer entry in {ln!r}") from None
        C.place(r, c, s)
    return C


# ---------------------------------------------------------------------------
# patterns (offsets relative to the top-left corner of a g x g window, 0-based)


def odd_pattern(g: int) -> list[tuple[int, int]]:
    """Main antidiagonal of a ``g x g`` window (``g`` odd)."""
    if g % 2 == 0:
        raise ContourError(f"odd pattern needs odd g, got {g}")
    return [(i, g - 1 - i) for i in range(g)]


def even_pattern(g: int) -> list[tuple[int, int]]:
    """Antidiagonal with its lower half shifted one column left, cyclically (``g`` even)."""
    if g % 2:
        raise ContourError(f"even pattern needs even g, got {g}")
    return [(i, g - 1 - i) if i < g // 2 else (i, (g - 2 - i) % g) for i in range(g)]


def staircase_pattern(g: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Pairs ``(k-cell, l-cell)`` of the staircase in the top half of the window (``g`` even)."""
    if g % 2:
        raise ContourError(f"staircase pattern needs even g, got {g}")
    return [((i, g - 2 - i), (i, g - 1 - i)) for i in range(g // 2)]


def _check_window(C: Contour, row0: int, col0: int, g: int) -> None:
    if row0 < 1 or col0 < 1 or row0 + g - 1 > C.n or col0 + g - 1 > C.n:
        raise ContourError(f"{g}x{g} window at ({row0},{col0}) overflows order {C.n}")


def place_odd_pattern(C: Contour, row0: int, col0: int, g: int, symbol: int) -> list[tuple[int, int]]:
    _check_window(C, row0, col0, g)
    cells = [(row0 + i, col0 + j) for i, j in odd_pattern(g)]
    for r, c in cells:
        C.place(r, c, symbol)
    return cells


def place_even_pattern(C: Contour, row0: int, col0: int, g: int, symbols: tuple[int, int]) -> list[tuple[int, int]]:
    """Even pattern with ``symbols[0]`` on the first ``g-2`` cells and ``symbols[1]`` on the last two."""
    _check_window(C, row0, col0, g)
    k, l = symbols
    cells = [(row0 + i, col0 + j) for i, j in even_pattern(g)]
    for idx, (r, c) in enumerate(cells):
        C.place(r, c, k if idx < g - 2 else l)
    return cells


def place_staircase(C: Contour, row0: int, col0: int, g: int, symbols: tuple[int, int]) -> list[tuple[int, int]]:
    _check_window(C, row0, col0, g)
    k, l = symbols
    out = []
    for (ki, kj), (li, lj) in staircase_pattern(g):
        C.place(row0 + ki, col0 + kj, k)
        C.place(row0 + li, col0 + lj, l)
        out += [(row0 + ki, col0 + kj), (row0 + li, col0 + lj)]
    return out


# ---------------------------------------------------------------------------
# transversals


def delta(g: int) -> int:
    return 0 if g % 2 else g // 2


def transversal_parity(g: int, cells: Iterable[tuple[int, int]] | None = None) -> tuple[int, bool]:
    """``(delta_g, holds)``: the forced residue of ``sum(cols) - sum(rows)`` modulo ``g``."""
    d = delta(g)
    if cells is None:
        return d, True
    cells = list(cells)
    return d, (sum(c for _, c in cells) - sum(r for r, _ in cells) - d) % g == 0


@dataclass(frozen=True)
class OrbitWindow:
    """Rows ``r-e+1..r`` and ``r+h1+1..r+h1+g-e``; columns likewise with ``c`` and ``h2``."""

    g: int
    r: int
    c: int
    e: int
    h1: int
    h2: int

    def rows(self) -> list[int]:
        return list(range(self.r - self.e + 1, self.r + 1)) + list(
            range(self.r + self.h1 + 1, self.r + self.h1 + self.g - self.e + 1)
        )

    def cols(self) -> list[int]:
        return list(range(self.c - self.e + 1, self.c + 1)) + list(
            range(self.c + self.h2 + 1, self.c + self.h2 + self.g - self.e + 1)
        )


def gapped_transversal(w: OrbitWindow) -> list[tuple[int, int]] | None:
    """A transversal inside the window, or ``None`` when ``(h1 - h2) e != delta_g (mod g)``.

    Coordinates are positions within the block (any consistent origin).
    """
    g, r, c, e, h1, h2 = w.g, w.r, w.c, w.e, w.h1, w.h2
    if not (e == g - 1 or g == 2 * e):
        raise ContourError(f"window shape needs e = g-1 or g = 2e (g={g}, e={e})")
    if ((h1 - h2) * e - delta(g)) % g:
        return None
    if g == 2 * e:
        return [(r - e + i, c + 1 - i) for i in range(1, e + 1)] + [
            (r + h1 + i, c + h2 + e + 1 - i) for i in range(1, e + 1)
        ]
    if g % 2 == 0:
        h = g // 2
        return (
            [(r + h1 + 1, c + h2 + 1)]
            + [(r - h - i + 2, c - g + i + 1) for i in range(1, h + 1)]
            + [(r - i + 1, c - h + i + 1) for i in range(1, h)]
        )
    return [(r + h1 + 1, c + h2 + 1)] + [(r - i + 1, c - g + i + 1) for i in range(1, e + 1)]


# ---------------------------------------------------------------------------
# offsets


def offset1(d1: int, i: int) -> int:
    """Shift turning the antidiagonal of the ``d1 x d1`` block into an even pattern."""
    if not 1 <= i <= d1:
        raise ContourError(f"index {i} outside 1..{d1}")
    if d1 % 2 == 0 and d1 // 2 < i < d1:
        return 1
    if d1 % 2 == 0 and i == d1:
        return 1 - d1
    return 0


def offset_j(dj: int, g: int, i: int) -> int:
    """Offset used for the cycles ``j >= 2``: ``1`` when ``dj`` is even and ``g < i <= g + dj/2``."""
    if not 1 <= i <= dj:
        raise ContourError(f"index {i} outside 1..{dj}")
    return 1 if dj % 2 == 0 and g < i <= g + dj // 2 else 0
