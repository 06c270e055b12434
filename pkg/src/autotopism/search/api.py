"""Existence, counting and contour search on top of the exact cover kernel."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..latin import LatinSquare, is_autotopism
from ..perm import Isotopism, Permutation
from .kernels import root_options, search_kernel
from .plan import OrbitPlan, build_orbit_plan

DEFAULT_MAX_ORDER = 8

_EMPTY = np.empty(0, dtype=np.int64)


class SearchBoundError(RuntimeError):
    """The requested order exceeds the configured search bound."""


class SearchBudgetExceeded(RuntimeError):
    """The search gave up after its node budget without settling the question."""


@dataclass(frozen=True)
class CountResult:
    """``count`` solutions; ``complete`` is False when the search stopped at ``limit``."""

    count: int
    complete: bool

    def __str__(self) -> str:
        return str(self.count) if self.complete else f">={self.count}"


def _check_bound(theta: Isotopism, max_order: int | None) -> None:
    bound = DEFAULT_MAX_ORDER if max_order is None else max_order
    if theta.degree > bound:
        raise SearchBoundError(f"order {theta.degree} exceeds the search bound {bound}")


def _uncoverable(plan: OrbitPlan) -> bool:
    """Some cell, row-symbol or column-symbol constraint has no option at all."""
    return bool(np.any(np.diff(plan.item_ptr) == 0))


def _run(plan: OrbitPlan, forced=_EMPTY, limit: int = 0, max_nodes: int = 0):
    return search_kernel(
        plan.n_items, plan.opt_ptr, plan.opt_items, plan.item_ptr, plan.item_opts,
        np.asarray(forced, dtype=np.int64), int(limit), int(max_nodes),
    )


def _count_branch(args):
    theta, prefill, opt = args
    plan = build_orbit_plan(theta, prefill)
    return int(_run(plan, np.array([opt], dtype=np.int64))[0])


def count_delta(
    theta: Isotopism,
    limit: int | None = None,
    *,
    max_order: int | None = None,
    jobs: int = 1,
    prefill: np.ndarray | None = None,
) -> CountResult:
    """Number of Latin squares admitting ``theta`` (stopping at ``limit`` if given).

    With ``jobs > 1`` (and no limit) the branches at the first decision are
    counted in separate processes and summed.  When the orbit plan already
    leaves some constraint without any option the answer 0 is returned
    without search, whatever the order.
    """
    plan = build_orbit_plan(theta, prefill)
    if _uncoverable(plan):
        return CountResult(0, True)
    _check_bound(theta, max_order)
    if jobs > 1 and not limit:
        roots = root_options(plan.n_items, plan.opt_ptr, plan.opt_items, plan.item_ptr, plan.item_opts, _EMPTY)
        if len(roots) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                total = sum(pool.map(_count_branch, [(theta, prefill, int(o)) for o in roots]))
            return CountResult(total, True)
    count, _, _, _ = _run(plan, limit=limit or 0)
    count = int(count)
    return CountResult(count, not (limit and count >= limit))


def exists_witness(
    theta: Isotopism,
    *,
    max_order: int | None = None,
    prefill: np.ndarray | None = None,
    max_nodes: int = 0,
) -> LatinSquare | None:
    """First Latin square (in search order) admitting ``theta``, or ``None``.

    ``prefill`` (``n x n``, ``0`` = free) fixes entries.  With ``max_nodes > 0``
    the search raises :class:`SearchBudgetExceeded` after that many branching
    steps without an answer.
    """
    _check_bound(theta, max_order)
    plan = build_orbit_plan(theta, prefill)
    count, first, first_len, aborted = _run(plan, limit=1, max_nodes=max_nodes)
    if count == 0:
        if aborted:
            raise SearchBudgetExceeded(f"no square within {max_nodes} search nodes")
        return None
    L = LatinSquare(plan.decode(first[:first_len]))
    if not is_autotopism(theta, L):  # pragma: no cover - would be a kernel bug
        raise AssertionError("search produced a square that does not admit theta")
    return L


def contour_search(alpha: Permutation, *, max_order: int | None = None):
    """A contour of ``alpha`` (one leading-symbol cell per orbit), or ``None``.

    The orbit search is run on ``(alpha, alpha, alpha)``; from the first square
    found, each cell orbit keeps its first cell (row-major) that holds the
    leading symbol of its cycle.
    """
    from ..contour import Contour  # local import: contour depends on search-free modules only

    L = exists_witness(Isotopism.automorphism(alpha), max_order=max_order)
    if L is None:
        return None
    return Contour.from_square(L, alpha)
