"""Membership tables: every normalized triple of a given order, decided.

Pipeline mode classifies each triple with the condition battery and the
constructive families only.  Exhaustive mode additionally settles every
triple by search: members get a verified witness (constructed or found),
non-members are confirmed to admit no square.
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

from ..appendix import all_normalized_triples, format_entry, table_rows
from ..conditions import Status, classify
from ..latin import is_autotopism
from ..perm import Isotopism, StructureTriple
from .api import DEFAULT_MAX_ORDER, SearchBoundError, exists_witness

__all__ = ["TableRow", "TableMismatch", "decide_triple", "enumerate_table", "format_rows"]

EXHAUSTIVE_MAX_ORDER = 7


class TableMismatch(RuntimeError):
    """Search contradicted the pipeline (a theory or implementation bug)."""


@dataclass(frozen=True)
class TableRow:
    triple: StructureTriple
    status: Status
    provenance: str
    confirmed: bool = False  # settled by a verified witness or an exhausted search

    @property
    def is_member(self) -> bool:
        return self.status is Status.MEMBER


def decide_triple(t: StructureTriple, exhaustive: bool = False) -> TableRow:
    """Classify ``t``; in exhaustive mode confirm the answer by witness or search."""
    v = classify(t, witness=exhaustive)
    if not exhaustive:
        return TableRow(t, v.status, v.provenance)
    if v.is_member:
        if v.witness is None or not is_autotopism(v.theta, v.witness):  # pragma: no cover
            raise TableMismatch(f"{t}: member witness does not verify")
        return TableRow(t, v.status, v.provenance, True)
    theta = Isotopism.canonical(t)
    L = exists_witness(theta, max_order=max(DEFAULT_MAX_ORDER, t.degree))
    if v.is_nonmember:
        if L is not None:
            raise TableMismatch(f"{t}: classified NONMEMBER ({v.provenance}) but search found a square")
        return TableRow(t, v.status, v.provenance, True)
    if L is None:
        return TableRow(t, Status.NONMEMBER, "search", True)
    return TableRow(t, Status.MEMBER, "search", True)


def _decide_exhaustive(t: StructureTriple) -> TableRow:
    return decide_triple(t, True)


def _decide_pipeline(t: StructureTriple) -> TableRow:
    return decide_triple(t, False)


def enumerate_table(
    n: int,
    exhaustive: bool = False,
    jobs: int = 1,
    progress: TextIO | None = sys.stderr,
) -> list[TableRow]:
    """Decide every normalized triple of order ``n`` (in table order).

    Progress (``triples processed / total``) goes to ``progress`` unless it
    is ``None``.  Exhaustive mode is limited to ``n <= 7``.
    """
    if exhaustive and n > EXHAUSTIVE_MAX_ORDER:
        raise SearchBoundError(f"exhaustive tables are limited to order {EXHAUSTIVE_MAX_ORDER}, got {n}")
    triples = all_normalized_triples(n)
    work: Callable[[StructureTriple], TableRow] = _decide_exhaustive if exhaustive else _decide_pipeline
    total = len(triples)
    rows: list[TableRow] = []

    def tick(k: int) -> None:
        if progress is not None and (k == total or k % 50 == 0):
            print(f"order {n}: {k}/{total} triples", file=progress, flush=True)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for k, row in enumerate(pool.map(work, triples, chunksize=8), 1):
                rows.append(row)
                tick(k)
    else:
        for k, t in enumerate(triples, 1):
            rows.append(work(t))
            tick(k)
    return rows


def format_rows(rows: Iterable[TableRow]) -> str:
    """Table layout of the members; undecided entries of a row go in a trailing column.

    Each line is ``n | alpha | entries`` with an extra ``| UNDECIDED: ...``
    column when some triple of that ``alpha`` is undecided; an ``alpha`` with
    only undecided triples gets an empty entry column.
    """
    rows = list(rows)
    members = [r.triple for r in rows if r.is_member]
    undecided: dict = {}
    for r in rows:
        if r.status is Status.UNDECIDED:
            undecided.setdefault(r.triple.a, []).append(format_entry(r.triple.b, r.triple.c))
    lines: dict = {a: (deg, ",".join(e)) for deg, a, e in table_rows(members)}
    for a in undecided:
        lines.setdefault(a, (a.degree, ""))
    out = []
    for a in sorted(lines):
        deg, entries = lines[a]
        line = f"{deg} | {a} | {entries}"
        if a in undecided:
            line += f" | UNDECIDED: {','.join(undecided[a])}"
        out.append(line)
    return "\n".join(out) + ("\n" if out else "")
