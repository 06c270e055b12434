"""Basic witness builders and the operations the family builders share.

* the halving square (single cycle of odd length ``n``),
* the cyclic witness for triples with an identity component,
* the single cycle with fixed points (orbit search, see below),
* transport of a witness to canonical labels,
* prolongation (adding fixed points to an automorphism).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..latin import LatinSquare, apply_isotopism, cyclic_square, first_violation, is_autotopism
from ..perm import (
    CycleStructure,
    Isotopism,
    Permutation,
    canonical_permutation,
    conjugator,
    cycle_structure,
)

__all__ = [
    "ConstructionError",
    "InadmissibleError",
    "halving_square",
    "trivial_component_witness",
    "build_single_cycle",
    "to_canonical",
    "canonical_isotopism_witness",
    "prolong",
    "prolong_capacity",
    "verify_automorphism",
]


class ConstructionError(RuntimeError):
    """A builder produced something that does not verify (a bug, never expected)."""


class InadmissibleError(ValueError):
    """The requested parameters admit no Latin square; the message names the violated condition."""


def verify_automorphism(L: LatinSquare, alpha: Permutation, structure: CycleStructure | None = None) -> None:
    """Raise :class:`ConstructionError` unless ``alpha`` is an automorphism of ``L`` (with ``structure``)."""
    v = first_violation(Isotopism.automorphism(alpha), L)
    if v is not None:
        raise ConstructionError(f"automorphism {alpha} fails: {v}")
    if structure is not None and cycle_structure(alpha) != structure:
        raise ConstructionError(f"automorphism has structure {cycle_structure(alpha)}, wanted {structure}")


# ---------------------------------------------------------------------------
# closed forms


def halving_square(n: int) -> LatinSquare:
    """Order-``n`` square (``n`` odd) admitting ``(1 2 ... n)`` as an automorphism.

    ``L(i, j) = 2^-1 (i + j - n - 1) mod n`` shifted to ``1..n``; the leading
    symbol ``1`` fills the main antidiagonal, i.e. the contour is an odd pattern.
    """
    if n < 1 or n % 2 == 0:
        raise InadmissibleError(f"the halving square needs odd order, got {n}")
    half = (n + 1) // 2
    i = np.arange(1, n + 1)
    return LatinSquare((((i[:, None] + i[None, :] - n - 1) * half) % n) + 1, check=False)


def trivial_component_witness(n: int, d: int) -> tuple[LatinSquare, Isotopism]:
    """Cyclic square with ``((1..n), (1..n)^-1, id)^(n/d)``: structure ``(d^(n/d), d^(n/d), 1^n)``."""
    if n < 1 or d < 1 or n % d:
        raise InadmissibleError(f"{d} does not divide {n}")
    sigma = Permutation(tuple(list(range(2, n + 1)) + [1]))
    theta = Isotopism(sigma, sigma ** -1, Permutation.identity(n)).power(n // d)
    L = cyclic_square(n)
    if not is_autotopism(theta, L):  # pragma: no cover - algebraic identity
        raise ConstructionError("cyclic witness does not verify")
    return L, theta


# ---------------------------------------------------------------------------
# single cycle


def _single_cycle_admissible(n: int, d: int) -> None:
    if not 1 < d <= n:
        raise InadmissibleError(f"cycle length {d} outside 2..{n}")
    if d == n and d % 2 == 0:
        raise InadmissibleError(f"d = n = {n} is even")
    if d < n and d < math.ceil(n / 2):
        raise InadmissibleError(f"d = {d} < ceil(n/2) = {math.ceil(n / 2)}")


@lru_cache(maxsize=None)
def _single_cycle_search(n: int, d: int) -> LatinSquare:
    from ..search import exists_witness

    alpha = canonical_permutation(CycleStructure.from_lengths([d] + [1] * (n - d)))
    L = exists_witness(Isotopism.automorphism(alpha), max_order=n)
    if L is None:  # pragma: no cover - excluded by admissibility
        raise ConstructionError(f"no square found for {d}.1^{n - d}")
    return L


def build_single_cycle(n: int, d: int) -> tuple[LatinSquare, Permutation]:
    """Square of order ``n`` with automorphism ``(1..d)`` fixing ``d+1..n``.

    ``d = n`` (odd) uses :func:`halving_square`; with fixed points the witness
    comes from the orbit search, whose result is deterministic and verified.
    """
    _single_cycle_admissible(n, d)
    alpha = canonical_permutation(CycleStructure.from_lengths([d] + [1] * (n - d)))
    L = halving_square(n) if d == n else _single_cycle_search(n, d)
    verify_automorphism(L, alpha)
    return L, alpha


# ---------------------------------------------------------------------------
# relabelling


def to_canonical(L: LatinSquare, alpha: Permutation) -> tuple[LatinSquare, Permutation]:
    """Conjugate ``(L, alpha)`` so that the automorphism becomes canonical."""
    target = canonical_permutation(cycle_structure(alpha))
    phi = conjugator(alpha, target)
    L2 = apply_isotopism(Isotopism(phi, phi, phi), L)
    verify_automorphism(L2, target)
    return L2, target


def canonical_isotopism_witness(L: LatinSquare, theta: Isotopism) -> tuple[LatinSquare, Isotopism]:
    """Conjugate ``(L, theta)`` componentwise so that every component is canonical."""
    phi = Isotopism(*(conjugator(p, canonical_permutation(cycle_structure(p))) for p in theta))
    L2 = apply_isotopism(phi, L)
    theta2 = theta.conjugate(phi)
    if not is_autotopism(theta2, L2):  # pragma: no cover - transport of structure
        raise ConstructionError("transport to canonical labels failed")
    return L2, theta2


# ---------------------------------------------------------------------------
# prolongation


def _cycles(alpha: Permutation) -> list[tuple[int, ...]]:
    return [c for c in alpha.cycles if len(c) > 1]


def prolong_capacity(L: LatinSquare, alpha: Permutation) -> int:
    """``mu``: the least number of occurrences of ``t_k`` in the diagonal block ``M_kk``."""
    counts = []
    for cyc in _cycles(alpha):
        lo, hi = min(cyc), max(cyc)
        block = L.cells[lo - 1 : hi, lo - 1 : hi]
        counts.append(int((block == cyc[0]).sum()))
    return min(counts) if counts else 0


def _prolong_once(L: LatinSquare, alpha: Permutation) -> tuple[LatinSquare, Permutation]:
    n = L.order
    new = np.zeros((n + 1, n + 1), dtype=np.int64)
    new[:n, :n] = L.cells
    for cyc in _cycles(alpha):
        lo, hi, t = min(cyc), max(cyc), cyc[0]
        block = L.cells[lo - 1 : hi, lo - 1 : hi]
        hits = np.argwhere(block == t)
        i, j = (int(x) + lo for x in hits[0])  # lexicographically first entry (i, j, t_k)
        s = t
        for _ in range(len(cyc)):
            new[i - 1, j - 1] = n + 1
            new[i - 1, n] = s
            new[n, j - 1] = s
            i, j, s = alpha(i), alpha(j), alpha(s)
    # the fixed block becomes a cyclic square on the old fixed points and n+1
    fixed = [x for x in range(1, n + 1) if alpha(x) == x] + [n + 1]
    f = len(fixed)
    for a, x in enumerate(fixed):
        for b, y in enumerate(fixed):
            new[x - 1, y - 1] = fixed[(a + b) % f]
    alpha2 = Permutation(alpha.images + (n + 1,))
    L2 = LatinSquare(new)
    return L2, alpha2


def prolong(L: LatinSquare, alpha: Permutation, nu: int) -> tuple[LatinSquare, Permutation]:
    """Add ``nu`` fixed points to the automorphism ``alpha`` of ``L``.

    ``alpha`` must be canonical.  Each step diverts, for every nontrivial cycle
    ``k``, the orbit of the lexicographically first entry ``(i, j, t_k)`` of the
    block ``M_kk`` into the new row and column; the fixed-point block is
    replaced by a cyclic square.
    """
    if nu < 0:
        raise ValueError("nu must be non-negative")
    if not alpha.is_canonical():
        raise ValueError(f"{alpha} is not canonical")
    if not is_autotopism(Isotopism.automorphism(alpha), L):
        raise ValueError("alpha is not an automorphism of L")
    mu = prolong_capacity(L, alpha)
    if nu > mu:
        raise InadmissibleError(f"nu = {nu} exceeds mu = {mu}")
    for _ in range(nu):
        L, alpha = _prolong_once(L, alpha)
    verify_automorphism(L, alpha)
    return L, alpha
