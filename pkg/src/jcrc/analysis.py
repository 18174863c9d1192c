"""Distance partitions, complete regularity, spectra and design strength."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import DegenerateInput, LloydViolation, NonIntegralSizes, ParameterError
from .johnson import JohnsonParams, elements, fmt, subset, theta_index


@dataclass(frozen=True)
class Code:
    """A nonempty set of w-subsets of {1..n}, kept in colex order."""

    params: JohnsonParams
    blocks: tuple[int, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ParameterError("a code must contain at least one block")
        for b in self.blocks:
            self.params.check_vertex(b)
        if list(self.blocks) != sorted(set(self.blocks)):
            raise ParameterError("blocks must be sorted in colex order without duplicates")

    @classmethod
    def from_blocks(cls, params: JohnsonParams, blocks) -> Code:
        """Build from masks or from iterables of 1-based elements; duplicates are merged."""
        masks = set()
        for b in blocks:
            masks.add(b if isinstance(b, int) else subset(b))
        return cls(params, tuple(sorted(masks)))

    @property
    def n(self):
        return self.params.n

    @property
    def w(self):
        return self.params.w

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __contains__(self, x):
        return x in set(self.blocks)

    def as_set(self) -> frozenset[int]:
        return frozenset(self.blocks)

    def indices(self) -> list[int]:
        idx = self.params.graph().index
        return [idx[b] for b in self.blocks]

    def element_lists(self) -> list[tuple[int, ...]]:
        return [elements(b) for b in self.blocks]

    def __str__(self):
        return f"{self.params}: " + " ".join(fmt(b) for b in self.blocks)


@dataclass(frozen=True)
class DistancePartition:
    cells: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]  # cell index of every vertex, indexed by colex rank

    @property
    def rho(self) -> int:
        return len(self.cells) - 1

    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]


@dataclass(frozen=True)
class IntersectionMatrix:
    """Tridiagonal quotient matrix: alpha[0..rho], beta[0..rho-1], gamma[1..rho]."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]

    def __post_init__(self):
        if len(self.beta) != len(self.alpha) - 1 or len(self.gamma) != len(self.alpha) - 1:
            raise ParameterError("need len(beta) == len(gamma) == len(alpha) - 1")
        if any(x < 0 for x in self.alpha):
            raise ParameterError(f"negative diagonal entry in {self.alpha}")
        if any(x <= 0 for x in self.beta + self.gamma):
            raise ParameterError("off-diagonal entries must be positive")
        sums = set(self.row_sums())
        if len(sums) != 1:
            raise ParameterError(f"row sums differ: {self.row_sums()}")

    @classmethod
    def from_array(cls, beta, gamma, k: int) -> IntersectionMatrix:
        """From an intersection array {beta_0..; gamma_1..} and the valency."""
        beta, gamma = tuple(beta), tuple(gamma)
        rho = len(beta)
        alpha = tuple(
            k - (beta[i] if i < rho else 0) - (gamma[i - 1] if i > 0 else 0)
            for i in range(rho + 1)
        )
        return cls(alpha, beta, gamma)

    @classmethod
    def from_rows(cls, rows) -> IntersectionMatrix:
        r = len(rows)
        return cls(
            tuple(rows[i][i] for i in range(r)),
            tuple(rows[i][i + 1] for i in range(r - 1)),
            tuple(rows[i + 1][i] for i in range(r - 1)),
        )

    @property
    def rho(self) -> int:
        return len(self.alpha) - 1

    @property
    def k(self) -> int:
        return self.row_sums()[0]

    def row_sums(self) -> list[int]:
        r = self.rho
        return [
            self.alpha[i] + (self.beta[i] if i < r else 0) + (self.gamma[i - 1] if i > 0 else 0)
            for i in range(r + 1)
        ]

    def rows(self) -> list[list[int]]:
        r = self.rho
        m = [[0] * (r + 1) for _ in range(r + 1)]
        for i in range(r + 1):
            m[i][i] = self.alpha[i]
            if i < r:
                m[i][i + 1] = self.beta[i]
                m[i + 1][i] = self.gamma[i]
        return m

    def entry(self, i: int, j: int) -> int:
        """Neighbors in cell j of a vertex in cell i (0 off the band)."""
        if j == i:
            return self.alpha[i]
        if j == i + 1 and i < self.rho:
            return self.beta[i]
        if j == i - 1 and i > 0:
            return self.gamma[i - 1]
        return 0

    def array_str(self) -> str:
        return "{" + ",".join(map(str, self.beta)) + ";" + ",".join(map(str, self.gamma)) + "}"

    def opposite(self) -> IntersectionMatrix:
        return IntersectionMatrix(self.alpha[::-1], self.gamma[::-1], self.beta[::-1])


@dataclass(frozen=True)
class Witness:
    """First vertex (colex order) whose neighbor count disagrees with its cell."""

    vertex: int
    cell: int
    direction: int  # target cell minus own cell: -1, 0 or +1
    count: int
    expected: int
    reference: int  # earliest vertex of the same cell, which set ``expected``
    counts: tuple[int, int, int]
    reference_counts: tuple[int, int, int]


@dataclass
class CrcReport:
    code: Code
    is_crc: bool
    partition: DistancePartition
    matrix: IntersectionMatrix | None
    spectrum: list[int]
    strength: int
    lambdas: list[int]
    cell_sizes: list[int]
    witness: Witness | None = None
    spectrum_indices: list[int] = field(default_factory=list)

    @property
    def rho(self) -> int:
        return self.partition.rho


def distance_partition(code: Code) -> DistancePartition:
    """BFS layering of J(n, w) from the code."""
    g = code.params.graph()
    adj = g.adjacency
    labels = [-1] * len(g)
    frontier = code.indices()
    for i in frontier:
        labels[i] = 0
    layers = [sorted(frontier)]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for u in adj[v]:
                if labels[u] < 0:
                    labels[u] = d
                    nxt.append(u)
        if nxt:
            layers.append(sorted(nxt))
        frontier = nxt
    verts = g.vertices
    cells = tuple(tuple(verts[i] for i in layer) for layer in layers)
    return DistancePartition(cells, tuple(labels))


def neighbor_counts(labels, adj, rho: int) -> list[list[int]]:
    out = []
    for nb in adj:
        row = [0] * (rho + 1)
        for u in nb:
            row[labels[u]] += 1
        out.append(row)
    return out


def check_crc(code: Code) -> CrcReport:
    part = distance_partition(code)
    g = code.params.graph()
    rho = part.rho
    labels = part.labels
    counts = neighbor_counts(labels, g.adjacency, rho)

    def band(v):
        i = labels[v]
        row = counts[v]
        return (
            row[i - 1] if i > 0 else 0,
            row[i],
            row[i + 1] if i < rho else 0,
        )

    reference: dict[int, int] = {}
    witness = None
    for v in range(len(g)):
        i = labels[v]
        if i not in reference:
            reference[i] = v
            continue
        r = reference[i]
        mine, theirs = band(v), band(r)
        if mine != theirs:
            d = next(j for j in range(3) if mine[j] != theirs[j])
            witness = Witness(
                g.vertices[v], i, d - 1, mine[d], theirs[d], g.vertices[r], mine, theirs
            )
            break

    t, lambdas = design_table(code)
    sizes = part.sizes()
    if witness is not None:
        return CrcReport(code, False, part, None, [], t, lambdas, sizes, witness)

    alpha = tuple(band(reference[i])[1] for i in range(rho + 1))
    beta = tuple(band(reference[i])[2] for i in range(rho))
    gamma = tuple(band(reference[i])[0] for i in range(1, rho + 1))
    m = IntersectionMatrix(alpha, beta, gamma)
    spec = matrix_spectrum(m, code.params)
    idx = [theta_index(code.n, code.w, s) for s in spec]
    return CrcReport(code, True, part, m, spec, t, lambdas, sizes, None, idx)


def char_poly_at(m: IntersectionMatrix, x) -> int:
    """det(xI - M) by the three-term continuant recurrence."""
    prev, cur = 1, x - m.alpha[0]
    for i in range(1, m.rho + 1):
        prev, cur = cur, (x - m.alpha[i]) * cur - m.beta[i - 1] * m.gamma[i - 1] * prev
    return cur


def matrix_spectrum(m: IntersectionMatrix, params: JohnsonParams) -> list[int]:
    """Graph eigenvalues that are roots of the matrix's characteristic polynomial, descending.

    Raises LloydViolation unless exactly rho+1 of them are roots.
    """
    if m.k != params.valency:
        raise ParameterError(f"row sum {m.k} differs from valency {params.valency} of {params}")
    roots = [t for t in params.thetas() if char_poly_at(m, t) == 0]
    if len(roots) != m.rho + 1:
        raise LloydViolation(
            f"only {len(roots)} eigenvalues of {params} are roots of a "
            f"{m.rho + 1}x{m.rho + 1} intersection matrix",
            roots,
        )
    return roots


def design_table(code: Code) -> tuple[int, list[int]]:
    """Strength t and the block counts lambda_0..lambda_t."""
    n, w = code.n, code.w
    lambdas = [len(code)]
    block_elems = [elements(b) for b in code.blocks]
    for t in range(1, w + 1):
        cover = Counter()
        for e in block_elems:
            cover.update(combinations(e, t))
        if len(cover) != comb(n, t) or len(set(cover.values())) != 1:
            return t - 1, lambdas
        lambdas.append(next(iter(cover.values())))
    return w, lambdas


def strength(code: Code) -> int:
    return design_table(code)[0]


def opposite_code(code: Code) -> Code:
    part = distance_partition(code)
    if part.rho == 0:
        raise DegenerateInput("covering radius 0: the code is the whole vertex set")
    return Code(code.params, part.cells[-1])


def cell_size_chain(m: IntersectionMatrix, total: int) -> list[int]:
    """Cell sizes forced by |C_i| beta_i = |C_{i+1}| gamma_{i+1} and a fixed total."""
    ratios = [Fraction(1)]
    for i in range(m.rho):
        ratios.append(ratios[-1] * m.beta[i] / m.gamma[i])
    c0 = Fraction(total) / sum(ratios)
    sizes = [c0 * r for r in ratios]
    if any(s.denominator != 1 or s <= 0 for s in sizes):
        raise NonIntegralSizes(f"cell sizes {[str(s) for s in sizes]} are not positive integers", sizes)
    return [int(s) for s in sizes]
