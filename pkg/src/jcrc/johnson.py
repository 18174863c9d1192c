"""Johnson graph J(n, w) on bitmask-encoded subsets.

Element ``i`` of the ground set {1..n} is stored in bit ``i - 1``.  Sorting
masks numerically gives colexicographic order, which is the canonical vertex
order everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb

from .errors import ParameterError

MAX_N = 64


def subset(elements) -> int:
    """Bitmask for an iterable of 1-based elements."""
    mask = 0
    for e in elements:
        if not 1 <= e <= MAX_N:
            raise ParameterError(f"element {e} outside 1..{MAX_N}")
        mask |= 1 << (e - 1)
    return mask


def elements(mask: int) -> tuple[int, ...]:
    """Sorted 1-based elements of a bitmask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def fmt(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"


def colex_rank(mask: int) -> int:
    """Position of a subset among all subsets of its size in colex order."""
    rank = 0
    for j, e in enumerate(elements(mask), start=1):
        rank += comb(e - 1, j)
    return rank


def colex_unrank(rank: int, w: int) -> int:
    mask = 0
    for j in range(w, 0, -1):
        c = j - 1
        while comb(c + 1, j) <= rank:
            c += 1
        rank -= comb(c, j)
        mask |= 1 << c
    return mask


def all_subsets(n: int, w: int) -> list[int]:
    """All w-subsets of {1..n} in colex order."""
    out = [sum(1 << (e - 1) for e in c) for c in combinations(range(1, n + 1), w)]
    out.sort()
    return out


@dataclass(frozen=True)
class JohnsonParams:
    n: int
    w: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.w, int):
            raise ParameterError("n and w must be integers")
        if self.n > MAX_N:
            raise ParameterError(f"n={self.n} exceeds the supported maximum {MAX_N}")
        if self.w < 1 or self.n < 2:
            raise ParameterError(f"J({self.n},{self.w}) needs n >= 2 and w >= 1")
        if 2 * self.w > self.n:
            raise ParameterError(
                f"w={self.w} > n/2 for n={self.n}; J(n,w) is isomorphic to "
                f"J(n,{self.n - self.w}), complement the blocks and use w={self.n - self.w}"
            )

    @property
    def valency(self) -> int:
        return self.w * (self.n - self.w)

    @property
    def order(self) -> int:
        return comb(self.n, self.w)

    @property
    def ground(self) -> int:
        return (1 << self.n) - 1

    def thetas(self) -> list[int]:
        return [theta(self.n, self.w, i) for i in range(self.w + 1)]

    def check_vertex(self, x: int) -> None:
        if x < 0 or x >> self.n:
            raise ParameterError(f"{fmt(x)} is not a subset of 1..{self.n}")
        if x.bit_count() != self.w:
            raise ParameterError(f"{fmt(x)} is not a {self.w}-subset")

    def graph(self) -> JohnsonGraph:
        return johnson_graph(self.n, self.w)

    def __str__(self):
        return f"J({self.n},{self.w})"


def theta(n: int, w: int, i: int) -> int:
    """i-th largest eigenvalue (n-w-i)(w-i)-i of J(n, w)."""
    if w < 1 or 2 * w > n:
        raise ParameterError(f"theta needs 1 <= w <= n/2, got n={n} w={w}")
    if not 0 <= i <= w:
        raise ParameterError(f"theta index {i} outside 0..{w}")
    return (n - w - i) * (w - i) - i


def theta_index(n: int, w: int, value: int) -> int | None:
    for i in range(w + 1):
        if theta(n, w, i) == value:
            return i
    return None


def distance(x: int, y: int, params: JohnsonParams | None = None) -> int:
    """Johnson distance w - |x & y|."""
    w = x.bit_count()
    if params is not None:
        params.check_vertex(x)
        params.check_vertex(y)
    elif y.bit_count() != w:
        raise ParameterError(f"{fmt(x)} and {fmt(y)} have different sizes")
    return w - (x & y).bit_count()


def neighbors(x: int, params: JohnsonParams) -> list[int]:
    """The w(n-w) vertices meeting x in w-1 elements, colex order."""
    params.check_vertex(x)
    inside = [1 << (e - 1) for e in elements(x)]
    outside = [1 << (e - 1) for e in elements(params.ground & ~x)]
    return sorted(x ^ a ^ b for a in inside for b in outside)


@dataclass(frozen=True)
class DelsarteClique:
    base: int
    members: tuple[int, ...]

    def __contains__(self, x):
        return x in self.members

    def __len__(self):
        return len(self.members)


def clique_of(base: int, params: JohnsonParams) -> DelsarteClique:
    rest = params.ground & ~base
    return DelsarteClique(base, tuple(sorted(base | (1 << (e - 1)) for e in elements(rest))))


def delsarte_cliques(params: JohnsonParams) -> list[DelsarteClique]:
    """One maximum clique per (w-1)-subset, ordered by base in colex order."""
    return [clique_of(y, params) for y in all_subsets(params.n, params.w - 1)]


def local_grid(x: int, params: JohnsonParams) -> list[list[int]]:
    """Neighbors of x as a w x (n-w) grid.

    Row r drops the r-th smallest element of x, column c adds the c-th
    smallest element outside x.
    """
    params.check_vertex(x)
    inside = elements(x)
    outside = elements(params.ground & ~x)
    return [[x ^ (1 << (a - 1)) ^ (1 << (b - 1)) for b in outside] for a in inside]


class JohnsonGraph:
    """Indexed view of J(n, w): vertex list, rank table and adjacency lists."""

    def __init__(self, n: int, w: int):
        self.params = JohnsonParams(n, w)
        self.n = n
        self.w = w
        self.vertices: list[int] = all_subsets(n, w)
        self.index: dict[int, int] = {v: i for i, v in enumerate(self.vertices)}

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def adjacency(self) -> list[list[int]]:
        idx = self.index
        return [[idx[u] for u in neighbors(v, self.params)] for v in self.vertices]

    @cached_property
    def adjacency_bits(self) -> list[int]:
        """Neighbor sets as integer bitsets over vertex indices."""
        out = []
        for nb in self.adjacency:
            b = 0
            for u in nb:
                b |= 1 << u
            out.append(b)
        return out

    @cached_property
    def cliques(self) -> list[list[int]]:
        """Delsarte cliques as lists of vertex indices, ordered like the J(n, w-1) vertices."""
        idx = self.index
        return [[idx[m] for m in k.members] for k in delsarte_cliques(self.params)]

    @cached_property
    def point_blocks(self) -> list[list[int]]:
        """For each point p (0-based), indices of vertices containing it."""
        out = [[] for _ in range(self.n)]
        for i, v in enumerate(self.vertices):
            for e in elements(v):
                out[e - 1].append(i)
        return out


@lru_cache(maxsize=32)
def johnson_graph(n: int, w: int) -> JohnsonGraph:
    return JohnsonGraph(n, w)
