"""Known completely regular codes of strength 1 in Johnson graphs.

All families are built from a partition Y_1..Y_q of {1..n} into parts of
equal size p.  By default Y_i = {p(i-1)+1, ..., pi}, which for p = 2 is the
pairing {2i-1, 2i} used by the M-families.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .analysis import Code
from .errors import ParameterError
from .johnson import JohnsonParams, subset


@dataclass(frozen=True)
class Partition:
    parts: tuple[frozenset[int], ...]

    def __post_init__(self):
        sizes = {len(y) for y in self.parts}
        if len(sizes) != 1:
            raise ParameterError("parts must have equal size")
        union = set().union(*self.parts)
        if sum(map(len, self.parts)) != len(union) or union != set(range(1, len(union) + 1)):
            raise ParameterError("parts must be disjoint and cover 1..n")

    @classmethod
    def standard(cls, p: int, q: int) -> Partition:
        return cls(tuple(frozenset(range(p * i + 1, p * i + p + 1)) for i in range(q)))

    @classmethod
    def of(cls, parts) -> Partition:
        return cls(tuple(frozenset(y) for y in parts))

    @property
    def p(self) -> int:
        return len(self.parts[0])

    @property
    def q(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return self.p * self.q


@dataclass(frozen=True)
class ExpectedProfile:
    """Covering radius and spectrum (as eigenvalue indices) stated for a family."""

    rho: int | None = None
    spectrum: frozenset[int] | None = None


@dataclass(frozen=True)
class Construction:
    name: str
    code: Code
    expected: ExpectedProfile
    partition: Partition | None = None


def _partition(partition, p, q):
    if partition is None:
        return Partition.standard(p, q)
    if partition.p != p or partition.q != q:
        raise ParameterError(f"partition has shape {partition.p}x{partition.q}, expected {p}x{q}")
    return partition


def _inside_parts(part: Partition, w: int) -> list[int]:
    return [subset(c) for y in part.parts for c in combinations(sorted(y), w)]


def _build(name, n, w, blocks, expected, part):
    params = JohnsonParams(n, w)
    return Construction(name, Code.from_blocks(params, blocks), expected, part)


def gp1(n: int, w: int, partition: Partition | None = None) -> Construction:
    """Unions of (w-1)/2 pairs plus one point outside them."""
    if w < 5 or w % 2 == 0:
        raise ParameterError("GP.1 needs odd w >= 5")
    if n % 2 or n < 2 * w:
        raise ParameterError("GP.1 needs even n >= 2w")
    part = _partition(partition, 2, n // 2)
    pairs = [subset(y) for y in part.parts]
    blocks = []
    for chosen in combinations(pairs, (w - 1) // 2):
        u = 0
        for y in chosen:
            u |= y
        blocks.extend(u | (1 << (e - 1)) for e in range(1, n + 1) if not u >> (e - 1) & 1)
    return _build("GP.1", n, w, blocks, ExpectedProfile(), part)


def gp1_prime(n: int, partition: Partition | None = None) -> Construction:
    """One pair plus one point, w = 3."""
    if n % 2 or n < 6:
        raise ParameterError("GP.1' needs even n >= 6")
    part = _partition(partition, 2, n // 2)
    blocks = []
    for y in part.parts:
        ym = subset(y)
        blocks.extend(ym | (1 << (e - 1)) for e in range(1, n + 1) if e not in y)
    return _build("GP.1'", n, 3, blocks, ExpectedProfile(1, frozenset({0, 2})), part)


def gp2(p: int, q: int, partition: Partition | None = None) -> Construction:
    """Triples inside one part, p, q >= 3."""
    if p < 3 or q < 3:
        raise ParameterError("GP.2 needs p, q >= 3")
    part = _partition(partition, p, q)
    return _build(
        "GP.2", p * q, 3, _inside_parts(part, 3), ExpectedProfile(2, frozenset({0, 2, 3})), part
    )


def gp3_family(n: int, w: int, partition: Partition | None = None) -> Construction:
    """w-subsets inside one of two halves (GP.3, GP.3', GP.3'')."""
    if n % 2:
        raise ParameterError("GP.3 needs even n")
    if w < 3 or 2 * w > n:
        raise ParameterError("GP.3 needs 3 <= w <= n/2")
    part = _partition(partition, n // 2, 2)
    if w == 3:
        name, exp = "GP.3", ExpectedProfile(1, frozenset({0, 2}))
    elif w == 4:
        name, exp = "GP.3'", ExpectedProfile(2, frozenset({0, 2, 4}))
    else:
        name, exp = "GP.3''", ExpectedProfile(w // 2)
    return _build(name, n, w, _inside_parts(part, w), exp, part)


def gp4_gp5(p: int, q: int, partition: Partition | None = None) -> Construction:
    """Pairs inside one part; GP.4 for p >= 3, GP.5 for p = 2."""
    if p < 2 or q < 2:
        raise ParameterError("GP.4/GP.5 need p >= 2 and q >= 2")
    part = _partition(partition, p, q)
    name = "GP.4" if p >= 3 else "GP.5"
    return _build(
        name, p * q, 2, _inside_parts(part, 2), ExpectedProfile(1, frozenset({0, 2})), part
    )


def m1(n: int, w: int, partition: Partition | None = None) -> Construction:
    """Unions of w/2 of the pairs {2i-1, 2i}."""
    if n % 2 or w % 2 or w < 2 or 2 * w > n:
        raise ParameterError("M.1 needs even n, even w and 2 <= w <= n/2")
    part = _partition(partition, 2, n // 2)
    pairs = [subset(y) for y in part.parts]
    blocks = []
    for chosen in combinations(pairs, w // 2):
        u = 0
        for y in chosen:
            u |= y
        blocks.append(u)
    spec = frozenset({0, 2, 4}) if w == 4 else None
    return _build("M.1", n, w, blocks, ExpectedProfile(w // 2, spec), part)


def m2(n: int, partition: Partition | None = None) -> Construction:
    """Triples meeting each pair at most once and holding both parities."""
    if n % 2 or n < 6:
        raise ParameterError("M.2 needs even n >= 6")
    part = _partition(partition, 2, n // 2)
    pair_of = {e: i for i, y in enumerate(part.parts) for e in y}
    blocks = []
    for c in combinations(range(1, n + 1), 3):
        if len({pair_of[e] for e in c}) == 3 and len({e % 2 for e in c}) == 2:
            blocks.append(subset(c))
    return _build("M.2", n, 3, blocks, ExpectedProfile(1, frozenset({0, 2})), part)


def d_family(p: int, q: int, partition: Partition | None = None) -> Construction:
    """4-subsets inside one part.  Not completely regular for q >= 3 and p >= 4."""
    if p < 4 or q < 2 or 2 * 4 > p * q:
        raise ParameterError("D needs p >= 4 and q >= 2")
    part = _partition(partition, p, q)
    return _build("D", p * q, 4, _inside_parts(part, 4), ExpectedProfile(), part)


def antipodal_classes() -> list[tuple[int, int]]:
    """The ten pairs {x, complement of x} of J(6,3), x taken to contain 1."""
    full = (1 << 6) - 1
    return [(subset(c), full ^ subset(c)) for c in combinations(range(1, 7), 3) if c[0] == 1]


def antipodal_union(classes) -> Construction:
    """Union of the chosen antipodal classes (indices into ``antipodal_classes()``)."""
    chosen = sorted(set(classes))
    if not chosen or any(not 0 <= c < 10 for c in chosen):
        raise ParameterError("choose a nonempty set of class indices from 0..9")
    pairs = antipodal_classes()
    blocks = [x for c in chosen for x in pairs[c]]
    exp = ExpectedProfile(0, frozenset({0})) if len(chosen) == 10 else ExpectedProfile(1, frozenset({0, 2}))
    return _build("antipodal", 6, 3, blocks, exp, None)


FAMILIES = {
    "gp1": gp1,
    "gp1_prime": gp1_prime,
    "gp2": gp2,
    "gp3": gp3_family,
    "gp4_gp5": gp4_gp5,
    "m1": m1,
    "m2": m2,
    "d": d_family,
    "antipodal": antipodal_union,
}
