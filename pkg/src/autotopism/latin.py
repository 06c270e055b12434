"""Latin squares, the isotopism action and the standard operations on squares."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .perm import Isotopism, Permutation, S3

__all__ = [
    "NotLatinError",
    "LatinSquare",
    "OrthogonalArray",
    "Subsquare",
    "Violation",
    "validate",
    "apply_isotopism",
    "is_autotopism",
    "first_violation",
    "parastrophe",
    "direct_product",
    "product_isotopism",
    "product_permutation",
    "cyclic_square",
    "subsquare_on",
    "read_square",
    "write_square",
    "format_square",
    "parse_square",
]


class NotLatinError(ValueError):
    """Array is not a Latin square; ``location`` says where it first fails."""

    def __init__(self, message: str, location: tuple | None = None):
        super().__init__(message)
        self.location = location


class LatinSquare:
    """An immutable ``n x n`` Latin square over symbols ``1..n``.

    ``cells`` is a read-only int64 array; ``square[i, j]`` is 1-based.
    """

    __slots__ = ("_cells", "_hash")

    def __init__(self, cells, *, check: bool = True):
        arr = np.array(cells, dtype=np.int64, copy=True)
        if check:
            _check_latin(arr)
        arr.setflags(write=False)
        self._cells = arr
        self._hash = None

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    @property
    def order(self) -> int:
        return self._cells.shape[0]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int(self._cells[i - 1, j - 1])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LatinSquare) and np.array_equal(self._cells, other._cells)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._cells.tobytes())
        return self._hash

    def tolist(self) -> list[list[int]]:
        return self._cells.tolist()

    def transpose(self) -> "LatinSquare":
        return LatinSquare(self._cells.T, check=False)

    def orthogonal_array(self) -> "OrthogonalArray":
        n = self.order
        i, j = np.indices((n, n))
        return OrthogonalArray(n, np.stack([i.ravel() + 1, j.ravel() + 1, self._cells.ravel()], axis=1))

    def __str__(self) -> str:
        return format_square(self).rstrip("\n")

    def __repr__(self) -> str:
        return f"LatinSquare(order={self.order})"


def _check_latin(arr: np.ndarray) -> None:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotLatinError(f"expected a non-empty square array, got shape {arr.shape}")
    n = arr.shape[0]
    bad = np.argwhere((arr < 1) | (arr > n))
    if len(bad):
        r, c = (int(x) + 1 for x in bad[0])
        raise NotLatinError(f"entry {int(arr[r - 1, c - 1])} at ({r},{c}) outside [1..{n}]", ("cell", r, c))
    for r in range(n):
        if len(np.unique(arr[r])) != n:
            raise NotLatinError(f"duplicate symbol in row {r + 1}", ("row", r + 1))
    for c in range(n):
        if len(np.unique(arr[:, c])) != n:
            raise NotLatinError(f"duplicate symbol in column {c + 1}", ("column", c + 1))


def validate(cells) -> LatinSquare:
    """Return ``cells`` as a :class:`LatinSquare` or raise :class:`NotLatinError`."""
    return LatinSquare(cells)


def _check_degree(theta: Isotopism, L: LatinSquare) -> None:
    if theta.degree != L.order:
        raise ValueError(f"isotopism of degree {theta.degree} applied to square of order {L.order}")


def apply_isotopism(theta: Isotopism, L: LatinSquare) -> LatinSquare:
    """``L'(alpha(i), beta(j)) = gamma(L(i, j))``."""
    _check_degree(theta, L)
    a, b, g = (p.array0 for p in theta)
    new = np.empty_like(L.cells)
    new[np.ix_(a, b)] = g[L.cells - 1] + 1
    return LatinSquare(new, check=False)


@dataclass(frozen=True)
class Violation:
    """A cell ``(i, j)`` where ``gamma(L(i,j)) != L(alpha(i), beta(j))``."""

    row: int
    col: int
    expected: int
    found: int

    def __str__(self) -> str:
        return (
            f"cell ({self.row},{self.col}): gamma(L(i,j)) = {self.expected} "
            f"but L(alpha(i),beta(j)) = {self.found}"
        )


def first_violation(theta: Isotopism, L: LatinSquare) -> Violation | None:
    """First cell in row-major order breaking the autotopism condition, if any."""
    _check_degree(theta, L)
    a, b, g = (p.array0 for p in theta)
    lhs = g[L.cells - 1] + 1
    rhs = L.cells[np.ix_(a, b)]
    bad = np.argwhere(lhs != rhs)
    if not len(bad):
        return None
    i, j = (int(x) for x in bad[0])
    return Violation(i + 1, j + 1, int(lhs[i, j]), int(rhs[i, j]))


def is_autotopism(theta: Isotopism, L: LatinSquare) -> bool:
    return first_violation(theta, L) is None


class OrthogonalArray:
    """The ``n^2`` triples ``(row, column, symbol)`` of a Latin square."""

    __slots__ = ("order", "entries")

    def __init__(self, order: int, entries):
        arr = np.asarray(entries, dtype=np.int64).reshape(-1, 3)
        if arr.shape[0] != order * order:
            raise ValueError(f"expected {order * order} triples, got {arr.shape[0]}")
        # any two coordinates determine the third
        for x, y in ((0, 1), (0, 2), (1, 2)):
            keys = (arr[:, x] - 1) * order + (arr[:, y] - 1)
            if len(np.unique(keys)) != order * order:
                raise ValueError("two triples agree in two coordinates")
        arr.setflags(write=False)
        self.order = order
        self.entries = arr

    def permute(self, lam: Sequence[int]) -> "OrthogonalArray":
        return OrthogonalArray(self.order, self.entries[:, list(lam)])

    def to_square(self) -> LatinSquare:
        n = self.order
        cells = np.zeros((n, n), dtype=np.int64)
        cells[self.entries[:, 0] - 1, self.entries[:, 1] - 1] = self.entries[:, 2]
        return LatinSquare(cells)

    def as_set(self) -> set[tuple[int, int, int]]:
        return {tuple(int(v) for v in row) for row in self.entries}


def parastrophe(L: LatinSquare, lam: Sequence[int]) -> LatinSquare:
    """Permute the coordinates of every triple: new triple ``k`` is old triple ``lam[k]``."""
    if tuple(lam) not in S3:
        raise ValueError(f"{lam!r} is not an element of S3")
    return L.orthogonal_array().permute(lam).to_square()


def direct_product(L: LatinSquare, M: LatinSquare) -> LatinSquare:
    """Product square with pair ``(x, x')`` relabelled as ``(x-1)*n' + x'``."""
    n, m = L.order, M.order
    big = (L.cells - 1)[:, None, :, None] * m + M.cells[None, :, None, :]
    return LatinSquare(big.reshape(n * m, n * m), check=False)


def product_permutation(p: Permutation, q: Permutation) -> Permutation:
    """``(x, x') -> (p(x), q(x'))`` under the same pairing as :func:`direct_product`."""
    m = q.degree
    imgs = (p.array0[:, None] * m + q.array0[None, :] + 1).ravel()
    return Permutation(tuple(int(x) for x in imgs))


def product_isotopism(theta: Isotopism, phi: Isotopism) -> Isotopism:
    return Isotopism(*(product_permutation(p, q) for p, q in zip(theta, phi)))


def cyclic_square(n: int) -> LatinSquare:
    """``L(i, j) = ((i + j - 1) mod n) + 1``."""
    if n < 1:
        raise ValueError("order must be positive")
    i = np.arange(1, n + 1)
    return LatinSquare(((i[:, None] + i[None, :] - 1) % n) + 1, check=False)


@dataclass(frozen=True)
class Subsquare:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    symbols: tuple[int, ...]
    square: LatinSquare


def subsquare_on(L: LatinSquare, rows: Iterable[int], cols: Iterable[int]) -> Subsquare | None:
    """Submatrix on ``rows x cols`` if it uses exactly ``|rows|`` symbols, else ``None``.

    The returned ``square`` is relabelled onto ``1..m`` in increasing symbol order.
    """
    rows = tuple(sorted(set(rows)))
    cols = tuple(sorted(set(cols)))
    if len(rows) != len(cols):
        raise ValueError(f"{len(rows)} rows but {len(cols)} columns")
    if not rows:
        raise ValueError("empty subsquare")
    sub = L.cells[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]
    symbols = np.unique(sub)
    if len(symbols) != len(rows):
        return None
    relabel = np.searchsorted(symbols, sub) + 1
    return Subsquare(rows, cols, tuple(int(s) for s in symbols), LatinSquare(relabel, check=False))


# ---------------------------------------------------------------------------
# text format


def format_square(L: LatinSquare) -> str:
    lines = [str(L.order)] + [" ".join(str(int(x)) for x in row) for row in L.cells]
    return "\n".join(lines) + "\n"


def parse_square(text: str) -> LatinSquare:
    """Parse the ``n`` / ``n`` rows format; anything after the last row is an error."""
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise NotLatinError("empty input")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise NotLatinError(f"first line must be the order, got {lines[0]!r}") from None
    if n < 1:
        raise NotLatinError(f"order must be positive, got {n}")
    body = lines[1:]
    if len(body) != n:
        raise NotLatinError(f"expected {n} rows, found {len(body)}")
    rows = []
    for k, ln in enumerate(body, 1):
        toks = ln.split()
        if len(toks) != n:
            raise NotLatinError(f"row {k} has {len(toks)} entries, expected {n}", ("row", k))
        try:
            rows.append([int(t) for t in toks])
        except ValueError:
            raise NotLatinError(f"row {k} has a non-integer entry", ("row", k)) from None
    return LatinSquare(rows)


def read_square(path: str | Path) -> LatinSquare:
    return parse_square(Path(path).read_text())


def write_square(L: LatinSquare, path: str | Path) -> None:
    Path(path).write_text(format_square(L))
