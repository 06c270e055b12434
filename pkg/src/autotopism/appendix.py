"""Text layout of cycle-structure membership tables.

A table lists, for each order ``n``, the normalized triples ``(a, b, c)``
(``a <= b <= c`` in the cycle-structure order) grouped by ``a``.  Within a row
an entry ``X`` stands for ``b = c = X`` and ``(X,Y)`` for ``b = X < c = Y``::

    6 | 2^3 | (3^2,6)
    6 | 3.1^3 | 3.1^3,3^2,6
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable

from .perm import CycleStructure, StructureTriple, normalize_triple


def _key(t: StructureTriple):
    return tuple(x.sort_key() for x in t)


def format_entry(b: CycleStructure, c: CycleStructure) -> str:
    return str(b) if b == c else f"({b},{c})"


def table_rows(members: Iterable[StructureTriple]) -> list[tuple[int, CycleStructure, list[str]]]:
    """Group normalized member triples into ``(n, alpha, entries)`` rows."""
    groups: dict[CycleStructure, list[StructureTriple]] = defaultdict(list)
    for t in {normalize_triple(t) for t in members}:
        groups[t.a].append(t)
    rows = []
    for a in sorted(groups):
        ts = sorted(groups[a], key=_key)
        rows.append((a.degree, a, [format_entry(t.b, t.c) for t in ts]))
    return rows


def format_table(members: Iterable[StructureTriple]) -> str:
    lines = [f"{n} | {a} | {','.join(entries)}" for n, a, entries in table_rows(members)]
    return "\n".join(lines) + ("\n" if lines else "")


def _split_entries(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def parse_table(text: str) -> dict[int, set[StructureTriple]]:
    """Inverse of :func:`format_table`; ``#`` lines and blank lines are ignored.

    Extra ``|``-separated columns (for instance a provenance column) are ignored.
    """
    out: dict[int, set[StructureTriple]] = defaultdict(set)
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        n, a = int(parts[0]), CycleStructure.parse(parts[1])
        for entry in _split_entries(parts[2]):
            if entry.startswith("("):
                b_text, c_text = _split_entries(entry[1:-1])
                b, c = CycleStructure.parse(b_text), CycleStructure.parse(c_text)
            else:
                b = c = CycleStructure.parse(entry)
            t = StructureTriple(a, b, c)
            if t.degree != n:
                raise ValueError(f"row {line!r}: entry {entry} has the wrong degree")
            out[n].add(normalize_triple(t))
    return dict(out)


def all_normalized_triples(n: int) -> list[StructureTriple]:
    """Every normalized triple of cycle structures of degree ``n``, in table order."""
    from itertools import combinations_with_replacement

    from .perm import partitions

    return [StructureTriple(*t) for t in combinations_with_replacement(partitions(n), 3)]
