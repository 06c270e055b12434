"""Permutations of ``[n] = {1, ..., n}``, cycle structures and triples of them.

Everything here is 1-based and immutable.  A :class:`Permutation` stores its
image list; the disjoint-cycle decomposition is computed lazily and cached.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce, total_ordering
from itertools import permutations as _s3_elements
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

__all__ = [
    "ParseError",
    "Permutation",
    "CycleStructure",
    "Isotopism",
    "StructureTriple",
    "S3",
    "SWAP_ROWS_COLS",
    "ROTATE",
    "parse_permutation",
    "cycle_structure",
    "canonical_permutation",
    "compose",
    "power",
    "inverse",
    "conjugator",
    "parastrophe_triple",
    "normalize_triple",
    "partitions",
]


class ParseError(ValueError):
    """Malformed permutation or cycle-structure text."""


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``[n]``; ``images[i-1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"images {images} are not a bijection of [1..{n}]")

    # -- construction -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        images = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= n:
                    raise ValueError(f"element {x} outside [1..{n}]")
                if x in seen:
                    raise ValueError(f"element {x} repeated")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a - 1] = b
        return cls(tuple(images))

    @classmethod
    def from_array0(cls, arr: Sequence[int]) -> "Permutation":
        """Build from a 0-based image array."""
        return cls(tuple(int(x) + 1 for x in arr))

    # -- basic protocol ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        return power(self, k)

    def __str__(self) -> str:
        parts = ["(" + " ".join(map(str, c)) + ")" for c in self.cycles if len(c) > 1]
        return "".join(parts) if parts else "id"

    def __repr__(self) -> str:
        return f"Permutation({self})[n={self.degree}]"

    # -- derived data -----------------------------------------------------
    @cached_property
    def array0(self) -> np.ndarray:
        """0-based images as a read-only int64 array."""
        arr = np.asarray(self.images, dtype=np.int64) - 1
        arr.setflags(write=False)
        return arr

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles (fixed points included), each starting at its least element."""
        seen = [False] * (self.degree + 1)
        out = []
        for start in range(1, self.degree + 1):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self(start)
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self(x)
            out.append(tuple(cyc))
        return tuple(out)

    @cached_property
    def cycle_length_of(self) -> tuple[int, ...]:
        """``cycle_length_of[i-1]`` is the length of the cycle through ``i``."""
        lengths = [0] * self.degree
        for cyc in self.cycles:
            for x in cyc:
                lengths[x - 1] = len(cyc)
        return tuple(lengths)

    @property
    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles), 1)

    @property
    def fixed_points(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.cycles if len(c) == 1)

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, 1))

    def structure(self) -> "CycleStructure":
        return cycle_structure(self)

    def is_canonical(self) -> bool:
        return self == canonical_permutation(self.structure())

    def conjugate(self, phi: "Permutation") -> "Permutation":
        """Return ``phi * self * phi^-1``."""
        return compose(compose(phi, self), inverse(phi))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``(p q)(i) = p(q(i))``: apply ``q`` first."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation(tuple(p.images[x - 1] for x in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, x in enumerate(p.images, 1):
        inv[x - 1] = i
    return Permutation(tuple(inv))


def power(p: Permutation, k: int) -> Permutation:
    """``p^k`` for any integer ``k``, computed cycle by cycle."""
    images = [0] * p.degree
    for cyc in p.cycles:
        c = len(cyc)
        shift = k % c
        for idx, x in enumerate(cyc):
            images[x - 1] = cyc[(idx + shift) % c]
    return Permutation(tuple(images))


# ---------------------------------------------------------------------------
# parsing

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: int | None = None) -> Permutation:
    """Parse ``id``, cycle notation ``(1 2 3)(4 5)`` or an image list ``[2,3,1]``.

    Elements not mentioned in cycle notation are fixed.  ``degree`` may be
    omitted for image lists and is then the list length; for cycle notation
    it defaults to the largest element mentioned.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty permutation text")
    if s == "id":
        if degree is None:
            raise ParseError("'id' needs an explicit degree")
        return Permutation.identity(degree)
    if s.startswith("("):
        pos = 0
        cycles: list[list[int]] = []
        while pos < len(s):
            if s[pos].isspace():
                pos += 1
                continue
            m = _CYCLE_RE.match(s, pos)
            if m is None:
                raise ParseError(f"malformed cycle notation near {s[pos:]!r}")
            body = m.group(1).replace(",", " ").split()
            if not body:
                raise ParseError("empty cycle '()'")
            try:
                cycles.append([int(tok) for tok in body])
            except ValueError:
                raise ParseError(f"non-integer element in cycle {m.group(0)!r}") from None
            pos = m.end()
        n = degree if degree is not None else max(max(c) for c in cycles)
        try:
            return Permutation.from_cycles(cycles, n)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    body = s[1:-1] if s.startswith("[") and s.endswith("]") else s
    try:
        images = [int(tok) for tok in body.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"malformed image list {text!r}") from None
    if degree is not None and len(images) != degree:
        raise ParseError(f"image list has {len(images)} entries, expected {degree}")
    try:
        return Permutation(tuple(images))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# ---------------------------------------------------------------------------
# cycle structures


@total_ordering
@dataclass(frozen=True)
class CycleStructure:
    """Partition of ``n`` as ``((length, multiplicity), ...)``, longest first."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        terms = tuple((int(c), int(k)) for c, k in self.terms)
        if not terms:
            raise ValueError("a cycle structure needs at least one term")
        for (c, k) in terms:
            if c < 1 or k < 1:
                raise ValueError(f"bad term {c}^{k}")
        if any(a[0] <= b[0] for a, b in zip(terms, terms[1:])):
            raise ValueError("cycle lengths must be strictly decreasing")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "CycleStructure":
        counts: dict[int, int] = {}
        for c in lengths:
            counts[int(c)] = counts.get(int(c), 0) + 1
        return cls(tuple(sorted(counts.items(), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "CycleStructure":
        """Parse the ``3.2.1^2`` grammar (``·`` is accepted for ``.``)."""
        s = text.strip().replace("·", ".")
        if not s:
            raise ParseError("empty cycle structure")
        lengths: list[int] = []
        for term in s.split("."):
            m = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*(\d+)\s*)?", term)
            if m is None:
                raise ParseError(f"malformed cycle-structure term {term!r} in {text!r}")
            c, k = int(m.group(1)), int(m.group(2) or 1)
            if c < 1 or k < 1:
                raise ParseError(f"non-positive term {term!r}")
            lengths.extend([c] * k)
        return cls.from_lengths(lengths)

    @classmethod
    def identity(cls, n: int) -> "CycleStructure":
        return cls(((1, n),))

    @property
    def degree(self) -> int:
        return sum(c * k for c, k in self.terms)

    @property
    def lengths(self) -> tuple[int, ...]:
        """All cycle lengths, longest first, with repetition."""
        return tuple(c for c, k in self.terms for _ in range(k))

    @property
    def nontrivial(self) -> tuple[int, ...]:
        return tuple(c for c in self.lengths if c > 1)

    @property
    def fixed(self) -> int:
        return dict(self.terms).get(1, 0)

    @property
    def order(self) -> int:
        return reduce(math.lcm, (c for c, _ in self.terms), 1)

    def multiplicity(self, length: int) -> int:
        return dict(self.terms).get(length, 0)

    def is_identity(self) -> bool:
        return self.terms == ((1, self.degree),)

    def power(self, k: int) -> "CycleStructure":
        """Cycle structure of ``p^k`` for any ``p`` with this structure."""
        out: list[int] = []
        for c, mult in self.terms:
            g = math.gcd(c, k)
            out.extend([c // g] * (g * mult))
        return CycleStructure.from_lengths(out)

    def restrict(self, keep) -> "CycleStructure | None":
        """Sub-structure of the cycles whose length satisfies ``keep``."""
        kept = [c for c in self.lengths if keep(c)]
        return CycleStructure.from_lengths(kept) if kept else None

    def sort_key(self) -> tuple:
        return (self.degree, self.lengths)

    def __lt__(self, other: "CycleStructure") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return ".".join(str(c) if k == 1 else f"{c}^{k}" for c, k in self.terms)

    def __repr__(self) -> str:
        return f"CycleStructure({self})"


def cycle_structure(p: Permutation) -> CycleStructure:
    return CycleStructure.from_lengths(len(c) for c in p.cycles)


def canonical_permutation(cs: CycleStructure) -> Permutation:
    """Contiguous cycles, longest first: ``3.2.1^2`` -> ``(1 2 3)(4 5)(6)(7)``."""
    images: list[int] = []
    start = 1
    for c in cs.lengths:
        images.extend(range(start + 1, start + c))
        images.append(start)
        start += c
    return Permutation(tuple(images))


def conjugator(p: Permutation, q: Permutation) -> Permutation:
    """Some ``phi`` with ``phi p phi^-1 == q``; requires equal cycle structures."""
    if cycle_structure(p) != cycle_structure(q):
        raise ValueError("permutations are not conjugate")
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for cyc in q.cycles:
        by_len.setdefault(len(cyc), []).append(cyc)
    images = [0] * p.degree
    for cyc in p.cycles:
        target = by_len[len(cyc)].pop(0)
        for x, y in zip(cyc, target):
            images[x - 1] = y
    return Permutation(tuple(images))


def partitions(n: int) -> list[CycleStructure]:
    """All cycle structures of degree ``n`` in increasing total order."""

    def gen(rest: int, cap: int) -> Iterator[list[int]]:
        if rest == 0:
            yield []
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield [first] + tail

    return sorted(CycleStructure.from_lengths(p) for p in gen(n, n))


# ---------------------------------------------------------------------------
# triples

# An element of S3 is a tuple ``lam`` and acts by ``x -> (x[lam[0]], x[lam[1]], x[lam[2]])``.
S3: tuple[tuple[int, int, int], ...] = tuple(_s3_elements(range(3)))  # type: ignore[assignment]
SWAP_ROWS_COLS = (1, 0, 2)
ROTATE = (1, 2, 0)


class StructureTriple(NamedTuple):
    a: CycleStructure
    b: CycleStructure
    c: CycleStructure

    @classmethod
    def of(cls, a, b=None, c=None) -> "StructureTriple":
        """Accept structures or grammar strings; ``b``/``c`` default to ``a``."""
        conv = lambda x: x if isinstance(x, CycleStructure) else CycleStructure.parse(x)
        a = conv(a)
        b = a if b is None else conv(b)
        c = b if c is None else conv(c)
        if not a.degree == b.degree == c.degree:
            raise ValueError(f"degree mismatch in ({a}, {b}, {c})")
        return cls(a, b, c)

    @property
    def degree(self) -> int:
        return self.a.degree

    def is_trivial(self) -> bool:
        return all(x.is_identity() for x in self)

    def power(self, k: int) -> "StructureTriple":
        return StructureTriple(*(x.power(k) for x in self))

    @property
    def order(self) -> int:
        return math.lcm(self.a.order, self.b.order, self.c.order)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def parastrophe_triple(t: StructureTriple, lam: Sequence[int]) -> StructureTriple:
    return StructureTriple(t[lam[0]], t[lam[1]], t[lam[2]])


def normalize_triple(t: StructureTriple) -> StructureTriple:
    """Least S3-image of ``t`` under the cycle-structure order."""
    return min((parastrophe_triple(t, lam) for lam in S3), key=lambda x: tuple(y.sort_key() for y in x))


@dataclass(frozen=True)
class Isotopism:
    alpha: Permutation
    beta: Permutation
    gamma: Permutation

    def __post_init__(self) -> None:
        if not self.alpha.degree == self.beta.degree == self.gamma.degree:
            raise ValueError("isotopism components must share a degree")

    @classmethod
    def automorphism(cls, alpha: Permutation) -> "Isotopism":
        return cls(alpha, alpha, alpha)

    @classmethod
    def identity(cls, n: int) -> "Isotopism":
        e = Permutation.identity(n)
        return cls(e, e, e)

    @classmethod
    def canonical(cls, t: StructureTriple) -> "Isotopism":
        return cls(*(canonical_permutation(x) for x in t))

    @property
    def degree(self) -> int:
        return self.alpha.degree

    def __iter__(self) -> Iterator[Permutation]:
        return iter((self.alpha, self.beta, self.gamma))

    def __getitem__(self, k: int) -> Permutation:
        return (self.alpha, self.beta, self.gamma)[k]

    def structure(self) -> StructureTriple:
        return StructureTriple(*(cycle_structure(p) for p in self))

    def is_trivial(self) -> bool:
        return all(p.is_identity() for p in self)

    def compose(self, other: "Isotopism") -> "Isotopism":
        return Isotopism(*(compose(p, q) for p, q in zip(self, other)))

    def inverse(self) -> "Isotopism":
        return Isotopism(*(inverse(p) for p in self))

    def power(self, k: int) -> "Isotopism":
        return Isotopism(*(power(p, k) for p in self))

    def conjugate(self, phi: "Isotopism") -> "Isotopism":
        """Componentwise ``phi theta phi^-1``."""
        return Isotopism(*(p.conjugate(f) for p, f in zip(self, phi)))

    def parastrophe(self, lam: Sequence[int]) -> "Isotopism":
        comps = tuple(self)
        return Isotopism(comps[lam[0]], comps[lam[1]], comps[lam[2]])

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta}, {self.gamma})"
