"""Enumeration of every admissible parameter tuple of the constructive families.

Used by the constructor sweep: each tuple carries the builder tag understood
by :func:`autotopism.construct.realize` and the structure triple the witness
must have.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from ..perm import CycleStructure, StructureTriple

__all__ = ["SweepCase", "admissible_cases"]


@dataclass(frozen=True)
class SweepCase:
    family: str
    builder: tuple
    triple: StructureTriple

    def __str__(self) -> str:
        return f"{self.family} {self.builder[1:]} -> {self.triple}"


def _auto(family: str, builder: tuple, lengths: list[int], f: int) -> SweepCase:
    cs = CycleStructure.from_lengths(lengths + [1] * f)
    return SweepCase(family, builder, StructureTriple(cs, cs, cs))


def _trivial_component(max_n: int) -> Iterator[SweepCase]:
    for n in range(1, max_n + 1):
        for d in range(1, n + 1):
            if n % d == 0:
                x = CycleStructure.from_lengths([d] * (n // d))
                yield SweepCase("trivial-component", ("trivial_component", n, d), StructureTriple(x, x, CycleStructure.identity(n)))


def _single_cycle(max_n: int) -> Iterator[SweepCase]:
    for n in range(2, max_n + 1):
        for d in range(2, n + 1):
            if (d == n and d % 2) or math.ceil(n / 2) <= d < n:
                yield _auto("single-cycle", ("single_cycle", n, d), [d], n - d)


def _equal_lengths(max_n: int) -> Iterator[SweepCase]:
    for d in range(2, max_n + 1):
        for m in range(2, max_n // d + 1):
            for f in range(0, min(m * d, max_n - m * d) + 1):
                if f == 0 and d % 2 == 0 and m % 2 == 1:
                    continue
                yield _auto("equal-lengths", ("equal_lengths", d, m, f), [d] * m, f)


def _two_cycles(max_n: int) -> Iterator[SweepCase]:
    for d1 in range(3, max_n + 1):
        for d2 in range(2, d1):
            if d1 % d2:
                continue
            for f in range(0, min(d2, max_n - d1 - d2) + 1):
                if d2 % 2 == 0 and f == 0:
                    continue
                yield _auto("two-cycles", ("two_cycles", d1, d2, f), [d1, d2], f)


def _horse(max_n: int) -> Iterator[SweepCase]:
    for d1 in range(2, max_n + 1, 2):
        a = CycleStructure.from_lengths([d1])
        b = CycleStructure.from_lengths([d1 // 2] * 2)
        yield SweepCase("horse", ("horse", d1), StructureTriple(a, b, a))


def _three_cycles(max_n: int) -> Iterator[SweepCase]:
    from .threecycles import three_cycles_admissible
    from .core import InadmissibleError

    for d1 in range(2, max_n + 1):
        for d2 in range(2, d1 + 1):
            for d3 in range(2, d2 + 1):
                for f in range(0, max_n - d1 - d2 - d3 + 1):
                    try:
                        case = three_cycles_admissible(d1, d2, d3, f)
                    except InadmissibleError:
                        continue
                    yield _auto(f"three-cycles:{case}", ("three_cycles", d1, d2, d3, f), [d1, d2, d3], f)


def admissible_cases(max_n: int = 40) -> Iterator[SweepCase]:
    """Every admissible tuple of the constructive families with ``n <= max_n``."""
    for gen in (_trivial_component, _single_cycle, _equal_lengths, _two_cycles, _horse, _three_cycles):
        yield from gen(max_n)
