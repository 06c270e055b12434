"""Exact-cover backtracking over orbit assignments.

The problem is encoded as an exact cover instance (see :mod:`.plan`):

* item ``o`` for every cell orbit ``o`` (exactly one symbol choice per orbit),
* item ``(row, symbol)`` and item ``(column, symbol)`` (Latin property).

An *option* is the assignment of a symbol to an orbit representative; it covers
its orbit item plus the row/column-symbol items of every cell it fills.  The
kernel is Knuth's Algorithm X with the minimum-remaining-values item choice,
implemented on flat arrays (an undo log instead of dancing links) so that it
compiles under numba and also runs as plain Python.
"""

from __future__ import annotations

import numpy as np

from ._jit import maybe_njit


@maybe_njit
def _cover(opt, opt_ptr, opt_items, item_ptr, item_opts, covered, valid, count, log, log_top):
    """Select ``opt``: cover its items and retire every option that clashes with it."""
    for p in range(opt_ptr[opt], opt_ptr[opt + 1]):
        it = opt_items[p]
        covered[it] = True
        for q in range(item_ptr[it], item_ptr[it + 1]):
            o2 = item_opts[q]
            if valid[o2]:
                valid[o2] = False
                log[log_top] = o2
                log_top += 1
                for r in range(opt_ptr[o2], opt_ptr[o2 + 1]):
                    count[opt_items[r]] -= 1
    return log_top


@maybe_njit
def _uncover(opt, opt_ptr, opt_items, covered, valid, count, log, log_top, log_base):
    while log_top > log_base:
        log_top -= 1
        o2 = log[log_top]
        valid[o2] = True
        for r in range(opt_ptr[o2], opt_ptr[o2 + 1]):
            count[opt_items[r]] += 1
    for p in range(opt_ptr[opt], opt_ptr[opt + 1]):
        covered[opt_items[p]] = False
    return log_top


@maybe_njit
def _best_item(n_items, covered, count):
    """Uncovered item with fewest live options; -1 when every item is covered."""
    best = -1
    best_count = 1 << 62
    for it in range(n_items):
        if not covered[it]:
            c = count[it]
            if c < best_count:
                best = it
                best_count = c
                if c == 0:
                    break
    return best


@maybe_njit
def _init_state(n_items, n_opts, opt_ptr, opt_items):
    covered = np.zeros(n_items, dtype=np.bool_)
    valid = np.ones(n_opts, dtype=np.bool_)
    count = np.zeros(n_items, dtype=np.int64)
    for o in range(n_opts):
        for p in range(opt_ptr[o], opt_ptr[o + 1]):
            count[opt_items[p]] += 1
    return covered, valid, count


@maybe_njit
def search_kernel(n_items, opt_ptr, opt_items, item_ptr, item_opts, forced, limit, max_nodes):
    """Count exact covers extending the ``forced`` options.

    Returns ``(solutions, first, first_len, aborted)``.  ``first[:first_len]``
    lists the options of the first cover found in the deterministic search
    order.  With ``limit > 0`` the search stops as soon as ``limit`` covers are
    found; with ``max_nodes > 0`` it gives up (``aborted``) after that many
    branching steps.
    """
    n_opts = opt_ptr.shape[0] - 1
    covered, valid, count = _init_state(n_items, n_opts, opt_ptr, opt_items)
    log = np.empty(n_opts, dtype=np.int64)
    log_top = 0
    first = np.full(n_items + 1, -1, dtype=np.int64)
    first_len = -1
    solutions = 0
    nodes = 0
    aborted = False

    for k in range(forced.shape[0]):
        o = forced[k]
        if not valid[o]:
            return solutions, first, first_len, aborted
        log_top = _cover(o, opt_ptr, opt_items, item_ptr, item_opts, covered, valid, count, log, log_top)

    max_depth = n_items + 1
    st_item = np.empty(max_depth, dtype=np.int64)
    st_pos = np.empty(max_depth, dtype=np.int64)
    st_opt = np.full(max_depth, -1, dtype=np.int64)
    st_log = np.empty(max_depth, dtype=np.int64)

    depth = 0
    choose = True
    while True:
        if choose:
            it = _best_item(n_items, covered, count)
            if it < 0:
                solutions += 1
                if first_len < 0:
                    for k in range(forced.shape[0]):
                        first[k] = forced[k]
                    for k in range(depth):
                        first[forced.shape[0] + k] = st_opt[k]
                    first_len = forced.shape[0] + depth
                if limit > 0 and solutions >= limit:
                    break
                depth -= 1
                if depth < 0:
                    break
                choose = False
                continue
            if count[it] == 0:
                depth -= 1
                if depth < 0:
                    break
                choose = False
                continue
            st_item[depth] = it
            st_pos[depth] = item_ptr[it]
            st_opt[depth] = -1

        # retract the previous choice at this depth, then try the next live option
        if st_opt[depth] >= 0:
            log_top = _uncover(st_opt[depth], opt_ptr, opt_items, covered, valid, count, log, log_top, st_log[depth])
            st_opt[depth] = -1
        it = st_item[depth]
        end = item_ptr[it + 1]
        p = st_pos[depth]
        while p < end and not valid[item_opts[p]]:
            p += 1
        if p < end:
            nodes += 1
            if max_nodes > 0 and nodes > max_nodes:
                aborted = True
                break
            o = item_opts[p]
            st_pos[depth] = p + 1
            st_log[depth] = log_top
            log_top = _cover(o, opt_ptr, opt_items, item_ptr, item_opts, covered, valid, count, log, log_top)
            st_opt[depth] = o
            depth += 1
            choose = True
        else:
            depth -= 1
            if depth < 0:
                break
            choose = False
    return solutions, first, first_len, aborted


@maybe_njit
def root_options(n_items, opt_ptr, opt_items, item_ptr, item_opts, forced):
    """Live options of the item the search would branch on first (after ``forced``).

    Returns an empty array when the instance is already infeasible or solved.
    """
    n_opts = opt_ptr.shape[0] - 1
    covered, valid, count = _init_state(n_items, n_opts, opt_ptr, opt_items)
    log = np.empty(n_opts, dtype=np.int64)
    log_top = 0
    for k in range(forced.shape[0]):
        o = forced[k]
        if not valid[o]:
            return np.empty(0, dtype=np.int64)
        log_top = _cover(o, opt_ptr, opt_items, item_ptr, item_opts, covered, valid, count, log, log_top)
    it = _best_item(n_items, covered, count)
    if it < 0:
        return np.empty(0, dtype=np.int64)
    out = np.empty(item_ptr[it + 1] - item_ptr[it], dtype=np.int64)
    m = 0
    for p in range(item_ptr[it], item_ptr[it + 1]):
        if valid[item_opts[p]]:
            out[m] = item_opts[p]
            m += 1
    return out[:m]
