"""Necessary conditions and complete characterizations for autotopism cycle structures.

Every check works on a :class:`~autotopism.perm.StructureTriple` only: whether
an isotopism is an autotopism of some Latin square depends on nothing but the
three cycle structures.  Checks return a :class:`Check` (truthy on pass);
deciding procedures return a :class:`Verdict`.

Provenance names used in verdicts:

``trivial-component``      one component is the identity
``fixed-point-pattern``    the McKay-Meynert-Myrvold fixed-point cases
``lcm-matching``           perfect matchings in the lcm placement matrices
``strong-lcm-subsquare``   closed subsquares from divisor-closed length sets
``power-battery``          any of the above (or parity) applied to a power
``equal-length-parity``    ``d^m`` with ``d`` even, ``m`` odd, no fixed points
``two-power-divisibility`` every cycle length divisible by the 2-part of ``n``
``special-exclusion``      two individually settled small cases
``single-cycle``, ``equal-lengths``, ``two-cycles``, ``three-cycles:<case>``,
``horse``                  automorphism/autotopism families with explicit builders
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np

from .latin import LatinSquare
from .perm import CycleStructure, Isotopism, StructureTriple, canonical_permutation, normalize_triple

__all__ = [
    "Status",
    "Verdict",
    "Check",
    "StrongLcmTrace",
    "PlacementMatrix",
    "placement_matrix",
    "has_perfect_matching",
    "check_mmm",
    "check_trivial_component",
    "check_lcm_matching",
    "check_strong_lcm",
    "strong_lcm_traces",
    "check_power_battery",
    "decide_automorphism",
    "special_exclusion",
    "classify",
]


class Status(enum.Enum):
    MEMBER = "MEMBER"
    NONMEMBER = "NONMEMBER"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision.

    ``provenance`` names the deciding condition (non-members) or the
    constructive family / witness source (members).  ``builder`` holds the
    parameters the construct module needs to realize a member.
    """

    status: Status
    provenance: str = ""
    witness: Optional[LatinSquare] = None
    theta: Optional[Isotopism] = None
    builder: Optional[tuple] = None
    detail: str = ""

    @property
    def is_member(self) -> bool:
        return self.status is Status.MEMBER

    @property
    def is_nonmember(self) -> bool:
        return self.status is Status.NONMEMBER

    def report(self) -> str:
        """``MEMBER <provenance>`` / ``NONMEMBER <condition>`` / ``UNDECIDED``."""
        if self.status is Status.UNDECIDED:
            head = "UNDECIDED"
        else:
            head = f"{self.status.value} {self.provenance}"
        return head + (f" ({self.detail})" if self.detail else "")


def member(provenance: str, builder: tuple | None = None, detail: str = "") -> Verdict:
    return Verdict(Status.MEMBER, provenance, builder=builder, detail=detail)


def nonmember(provenance: str, detail: str = "") -> Verdict:
    return Verdict(Status.NONMEMBER, provenance, detail=detail)


UNDECIDED = Verdict(Status.UNDECIDED)


@dataclass(frozen=True)
class Check:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Check(True)


def fail(reason: str) -> Check:
    return Check(False, reason)


# ---------------------------------------------------------------------------
# fixed points


def check_mmm(t: StructureTriple) -> Check:
    """Fixed-point pattern every nontrivial autotopism must follow.

    Either (a) all three structures agree and have between 1 and ``n // 2``
    fixed points, (b) one component has a fixed point and the other two agree
    and have none, or (c) no component has a fixed point.
    """
    if t.is_trivial():
        return PASS
    n = t.degree
    f = [x.fixed for x in t]
    if all(v == 0 for v in f):
        return PASS
    if t.a == t.b == t.c and 1 <= f[0] <= n // 2:
        return PASS
    for k in range(3):
        o1, o2 = [t[j] for j in range(3) if j != k]
        if f[k] >= 1 and o1 == o2 and o1.fixed == 0:
            return PASS
    if t.a == t.b == t.c:
        return fail(f"{f[0]} fixed points in each component exceeds n/2 = {n / 2:g}")
    return fail(f"fixed points {tuple(f)} fit none of the allowed patterns")


def check_trivial_component(t: StructureTriple) -> Verdict | None:
    """Decide triples with an identity component; ``None`` when no component is trivial."""
    trivial = [k for k in range(3) if t[k].is_identity()]
    if not trivial:
        return None
    others = [t[k] for k in range(3) if k != trivial[0]]
    n = t.degree
    for x in others:
        if len(x.terms) != 1:
            return nonmember("trivial-component", f"{x} mixes cycle lengths")
    d1, d2 = others[0].terms[0][0], others[1].terms[0][0]
    if d1 != d2:
        return nonmember("trivial-component", f"cycle lengths {d1} and {d2} differ")
    assert n % d1 == 0
    return member("trivial-component", ("trivial_component", n, d1))


# ---------------------------------------------------------------------------
# lcm placement matrices


def _lcm_ok(a: int, b: int, c: int) -> bool:
    l = math.lcm(a, b, c)
    return math.lcm(a, b) == l and math.lcm(b, c) == l and math.lcm(a, c) == l


def _lengths_by_point(cs: CycleStructure) -> np.ndarray:
    """Cycle length of each point of the canonical permutation with structure ``cs``."""
    return np.repeat(np.array(cs.lengths, dtype=np.int64), cs.lengths)


@dataclass(frozen=True)
class PlacementMatrix:
    """0/1 matrix of cells where a symbol of a ``symbol_length``-cycle may sit."""

    symbol_length: int
    matrix: np.ndarray


def placement_matrix(t: StructureTriple, symbol_length: int) -> PlacementMatrix:
    la = _lengths_by_point(t.a)
    lb = _lengths_by_point(t.b)
    ok = np.array([[_lcm_ok(int(a), int(b), symbol_length) for b in lb] for a in la], dtype=bool)
    return PlacementMatrix(symbol_length, ok)


def has_perfect_matching(adj: np.ndarray) -> bool:
    """Perfect matching in the bipartite graph rows x columns given by ``adj`` (augmenting paths)."""
    n_rows, n_cols = adj.shape
    if n_rows != n_cols:
        return False
    nbrs = [np.flatnonzero(adj[i]).tolist() for i in range(n_rows)]
    match_col = [-1] * n_cols

    def augment(i: int, seen: list[bool]) -> bool:
        for j in nbrs[i]:
            if not seen[j]:
                seen[j] = True
                if match_col[j] < 0 or augment(match_col[j], seen):
                    match_col[j] = i
                    return True
        return False

    for i in range(n_rows):
        if not augment(i, [False] * n_cols):
            return False
    return True


_ORIENTATIONS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def check_lcm_matching(t: StructureTriple) -> Check:
    """Each symbol class needs ``n`` placements in distinct rows and columns, in every orientation."""
    for lam in _ORIENTATIONS:
        u = StructureTriple(t[lam[0]], t[lam[1]], t[lam[2]])
        for c, _ in u.c.terms:
            X = placement_matrix(u, c).matrix
            if not has_perfect_matching(X):
                roles = "αβγ"
                return fail(f"no placement for symbols of a {c}-cycle of {roles[lam[2]]} = {u.c}")
    return PASS


# ---------------------------------------------------------------------------
# strongly lcm-closed sets


@dataclass(frozen=True)
class StrongLcmTrace:
    """Divisors of ``generator`` among the occurring cycle lengths, with point counts."""

    generator: int
    member_lengths: tuple[int, ...]
    rows: int
    cols: int
    symbols: int


def strong_lcm_traces(t: StructureTriple) -> list[StrongLcmTrace]:
    lengths = sorted({c for x in t for c in x.lengths})
    gens: set[int] = set()
    for c in lengths:
        gens |= {math.lcm(g, c) for g in gens} | {c}
    out = []
    for D in sorted(gens):
        members = tuple(c for c in lengths if D % c == 0)
        r, cc, s = (sum(c for c in x.lengths if D % c == 0) for x in t)
        out.append(StrongLcmTrace(D, members, r, cc, s))
    return out


def _restrict(t: StructureTriple, D: int, keep: tuple[bool, bool, bool]) -> StructureTriple | None:
    parts = []
    for x, inside in zip(t, keep):
        part = x.restrict((lambda c: D % c == 0) if inside else (lambda c: D % c != 0))
        if part is None:
            return None
        parts.append(part)
    return StructureTriple(*parts)


def check_strong_lcm(t: StructureTriple, *, _depth: int = 0) -> Check:
    """Closed subsquares forced by divisor-closed sets of cycle lengths.

    For every trace the row, column and symbol counts must agree when at least
    two are nonzero, cannot lie strictly between ``n/2`` and ``n``, and the
    induced sub-triples (and the three complementary ones at exactly ``n/2``)
    must not themselves be non-members.
    """
    n = t.degree
    for tr in strong_lcm_traces(t):
        counts = (tr.rows, tr.cols, tr.symbols)
        if sum(1 for x in counts if x) < 2:
            continue
        if len(set(counts)) != 1:
            return fail(f"lengths dividing {tr.generator} give a {tr.rows}x{tr.cols} block on {tr.symbols} symbols")
        k = counts[0]
        if k == n:
            continue
        if 2 * k > n:
            return fail(f"lengths dividing {tr.generator} force a subsquare of order {k} > n/2")
        subs = [(_restrict(t, tr.generator, (True, True, True)), "subsquare")]
        if 2 * k == n:
            subs += [
                (_restrict(t, tr.generator, keep), "complementary subsquare")
                for keep in ((True, False, False), (False, True, False), (False, False, True))
            ]
        for sub, what in subs:
            if sub is None:
                return fail(f"{what} for lengths dividing {tr.generator} is empty")
            v = _classify_memo(sub, _depth + 1)
            if v.is_nonmember:
                return fail(f"{what} {sub} from lengths dividing {tr.generator} is impossible ({v.provenance})")
    return PASS


# ---------------------------------------------------------------------------
# powers


def _equal_length_parity(t: StructureTriple) -> Check:
    if t.a == t.b == t.c and len(t.a.terms) == 1:
        d, m = t.a.terms[0]
        if d > 1 and d % 2 == 0 and m % 2 == 1:
            return fail(f"{t.a}: even cycle length with an odd number of cycles and no fixed points")
    return PASS


def _two_power_divisibility(t: StructureTriple) -> Check:
    n = t.degree
    if n % 2:
        return PASS
    two_part = n & -n
    if all(c % two_part == 0 for x in t for c in x.lengths):
        return fail(f"every cycle length is divisible by {two_part}, the 2-part of n = {n}")
    return PASS


def check_power_battery(t: StructureTriple) -> Check:
    """Apply the cheap necessary conditions to every power ``theta^k`` (``k`` dividing the order)."""
    order = t.order
    for k in sorted(d for d in range(1, order + 1) if order % d == 0):
        tk = t.power(k)
        if tk.is_trivial():
            continue
        for name, check in (
            ("equal-length-parity", _equal_length_parity),
            ("two-power-divisibility", _two_power_divisibility),
            ("fixed-point-pattern", check_mmm),
            ("lcm-matching", check_lcm_matching),
        ):
            res = check(tk)
            if not res:
                return fail(f"k={k}: {name}: {res.reason}")
        tc = check_trivial_component(tk)
        if tc is not None and tc.is_nonmember:
            return fail(f"k={k}: trivial-component: {tc.detail}")
        if tk.a == tk.b == tk.c:
            v = decide_automorphism(tk.a)
            if v.is_nonmember:
                return fail(f"k={k}: {v.provenance}: {v.detail}")
    return PASS


# ---------------------------------------------------------------------------
# automorphisms


def decide_automorphism(cs: CycleStructure) -> Verdict:
    """Membership of ``(alpha, alpha, alpha)`` for the families with complete answers."""
    n = cs.degree
    cyc = sorted(cs.nontrivial, reverse=True)
    f = cs.fixed
    if not cyc:
        return member("trivial", ("identity", n))
    if len(cyc) == 1:
        d = cyc[0]
        if (d == n and d % 2 == 1) or (math.ceil(n / 2) <= d < n):
            return member("single-cycle", ("single_cycle", n, d))
        why = "d = n is even" if d == n else f"d = {d} < ceil(n/2) = {math.ceil(n / 2)}"
        return nonmember("single-cycle", why)
    if len(set(cyc)) == 1:
        d, m = cyc[0], len(cyc)
        if f > 0:
            if n <= 2 * m * d:
                return member("equal-lengths", ("equal_lengths", d, m, f))
            return nonmember("equal-lengths", f"n = {n} > 2md = {2 * m * d}")
        if d % 2 == 1 or m % 2 == 0:
            return member("equal-lengths", ("equal_lengths", d, m, 0))
        return nonmember("equal-length-parity", f"d = {d} even and m = {m} odd without fixed points")
    if len(cyc) == 2:
        d1, d2 = cyc
        if d1 % d2:
            return nonmember("two-cycles", f"{d2} does not divide {d1}")
        if d2 < f:
            return nonmember("two-cycles", f"d2 = {d2} < {f} fixed points")
        if d2 % 2 == 0 and f == 0:
            return nonmember("two-cycles", f"d2 = {d2} even without fixed points")
        return member("two-cycles", ("two_cycles", d1, d2, f))
    if len(cyc) == 3:
        d1, d2, d3 = cyc
        if d1 > d2 == d3:
            return _three_case2(d1, d2, f)
        if d1 == d2 > d3:
            conds = [
                (d1 % d3 == 0, f"{d3} does not divide {d1}"),
                (f <= d3, f"{f} fixed points exceed d3 = {d3}"),
                (not (d3 % 2 == 0 and f == 0), f"d3 = {d3} even without fixed points"),
            ]
            return _three_verdict("three-cycles:d1=d2>d3", conds, (d1, d2, d3, f))
        if d2 % d3:
            conds = [
                (d1 == math.lcm(d2, d3), f"d1 = {d1} is not lcm({d2},{d3})"),
                (d3 >= f, f"{f} fixed points exceed d3 = {d3}"),
                (not (d1 % 2 == 0 and f == 0), f"d1 = {d1} even without fixed points"),
            ]
            return _three_verdict("three-cycles:d1>d2>d3,d3∤d2", conds, (d1, d2, d3, f))
        conds = [
            (d1 % d2 == 0, f"{d2} does not divide {d1}"),
            (d3 >= f, f"{f} fixed points exceed d3 = {d3}"),
            (not (d3 % 2 == 0 and f == 0), f"d3 = {d3} even without fixed points"),
        ]
        return _three_verdict("three-cycles:d1>d2>d3,d3|d2", conds, (d1, d2, d3, f))
    return UNDECIDED


def _three_case2(d1: int, d2: int, f: int) -> Verdict:
    conds = [
        (d1 >= 2 * d2 + f, f"d1 = {d1} < 2*d2 + fixed = {2 * d2 + f}"),
        (d1 % d2 == 0, f"{d2} does not divide {d1}"),
        (f <= 2 * d2, f"{f} fixed points exceed 2*d2 = {2 * d2}"),
        (not (d2 % 2 == 0 and (d1 // d2) % 2 == 1 and f == 0), "d2 even, d1/d2 odd, no fixed points"),
    ]
    return _three_verdict("three-cycles:d1>d2=d3", conds, (d1, d2, d2, f))


def _three_verdict(name: str, conds, params) -> Verdict:
    for ok, why in conds:
        if not ok:
            return nonmember(name, why)
    return member(name, ("three_cycles",) + params)


# ---------------------------------------------------------------------------
# pipeline

_SPECIAL = {
    normalize_triple(StructureTriple.of("4.2", "4.2", "4.1^2")),
    normalize_triple(StructureTriple.of("8.4.2", "8.4.2", "8.4.1^2")),
}


def special_exclusion(t: StructureTriple) -> bool:
    return normalize_triple(t) in _SPECIAL


def _horse_shape(t: StructureTriple) -> tuple | None:
    """``(d1, d2^2, d1)`` with ``d1 = 2 d2`` in some coordinate order."""
    for k in range(3):
        x = t[k]
        others = [t[j] for j in range(3) if j != k]
        if (
            len(x.terms) == 1
            and x.terms[0][1] == 2
            and others[0] == others[1]
            and others[0].terms == ((2 * x.terms[0][0], 1),)
        ):
            return ("horse", 2 * x.terms[0][0])
    return None


MAX_DEPTH = 8
_memo: dict[StructureTriple, Verdict] = {}
_memo_lock = threading.Lock()


def _classify_memo(t: StructureTriple, depth: int) -> Verdict:
    key = normalize_triple(t)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    if depth > MAX_DEPTH:
        return UNDECIDED
    v = _classify(key, depth)
    with _memo_lock:
        _memo[key] = v
    return v


def _classify(t: StructureTriple, depth: int) -> Verdict:
    v = check_trivial_component(t)
    if v is not None:
        return v
    if t.a == t.b == t.c:
        v = decide_automorphism(t.a)
        if v.status is not Status.UNDECIDED:
            return v
    if special_exclusion(t):
        return nonmember("special-exclusion", f"{normalize_triple(t)} admits no Latin square")
    for name, check in (
        ("fixed-point-pattern", check_mmm),
        ("lcm-matching", check_lcm_matching),
        ("strong-lcm-subsquare", lambda u: check_strong_lcm(u, _depth=depth)),
        ("power-battery", check_power_battery),
    ):
        res = check(t)
        if not res:
            return nonmember(name, res.reason)
    horse = _horse_shape(t)
    if horse is not None:
        return member("horse", horse)
    return UNDECIDED


def classify(t: StructureTriple, *, witness: bool = False, search: bool = False, max_order: int | None = None) -> Verdict:
    """Decide ``t`` with the condition battery and the constructive families.

    With ``witness=True`` member verdicts carry a verified witness square and
    the realized isotopism (canonical components in the order of ``t``).  With
    ``search=True`` undecided triples are settled by exact search when the
    order is within ``max_order`` (default: the search module's bound).
    """
    v = _classify_memo(t, 0)
    if v.is_member and witness:
        from .construct import realize

        L, theta = realize(t, v)
        v = Verdict(v.status, v.provenance, L, theta, v.builder, v.detail)
    if v.status is Status.UNDECIDED and search:
        from .search import DEFAULT_MAX_ORDER, exists_witness

        bound = DEFAULT_MAX_ORDER if max_order is None else max_order
        if t.degree <= bound:
            theta = Isotopism.canonical(t)
            L = exists_witness(theta, max_order=bound)
            if L is None:
                v = nonmember("search", "exhaustive search found no square")
            else:
                v = Verdict(Status.MEMBER, "search", L, theta)
    return v


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()
