"""Independent reference implementations used to check the fast code paths.

Nothing here shares code with the search kernel: Latin squares are listed
row by row from permutations and filtered with a vectorised autotopism test.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np


@lru_cache(maxsize=None)
def all_latin_squares(n: int) -> np.ndarray:
    """Every Latin square of order ``n`` (0-based symbols), shape ``(count, n, n)``."""
    perms = list(permutations(range(n)))
    # cell (c, symbol) as bit c*n + symbol: a row fits iff it shares no bit with the rows so far
    bits = [sum(1 << (c * n + s) for c, s in enumerate(p)) for p in perms]
    out: list[tuple[int, ...]] = []

    def extend(rows: list[int], used: int) -> None:
        if len(rows) == n:
            out.append(tuple(rows))
            return
        for k, pb in enumerate(bits):
            if not pb & used:
                rows.append(k)
                extend(rows, used | pb)
                rows.pop()

    extend([], 0)
    table = np.array(perms, dtype=np.int8)
    return table[np.array(out, dtype=np.int64)]


def naive_delta(alpha, beta, gamma) -> int:
    """Count squares with ``gamma(L(i,j)) == L(alpha(i), beta(j))``; 0-based image arrays."""
    a = np.asarray(alpha)
    b = np.asarray(beta)
    g = np.asarray(gamma)
    squares = all_latin_squares(len(a))
    lhs = g[squares]
    rhs = squares[:, a][:, :, b]
    return int(np.all(lhs == rhs, axis=(1, 2)).sum())
