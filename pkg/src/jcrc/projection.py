"""Clique codes: from a CRC in J(n, w) with eigenvalue -w to its shadow in J(n, w-1).

Every Delsarte clique of J(n, w) is the star of a (w-1)-subset, so the clique
graph is J(n, w-1) and vertex/clique incidence is plain inclusion.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .analysis import Code, CrcReport, IntersectionMatrix, check_crc, distance_partition
from .errors import (
    DegenerateInput,
    InconsistentProfile,
    MapsToZero,
    MissingMinEigenvalue,
    ParameterError,
    ProfileMismatch,
)
from .johnson import JohnsonParams, elements, fmt, johnson_graph


def _facets(x: int) -> list[int]:
    out = []
    m = x
    while m:
        low = m & -m
        out.append(x ^ low)
        m ^= low
    return out


def project(code: Code) -> Code:
    """All (w-1)-subsets lying in at least one block."""
    if code.w < 2:
        raise DegenerateInput("projection needs w >= 2")
    shadow = set()
    for b in code.blocks:
        shadow.update(_facets(b))
    return Code(JohnsonParams(code.n, code.w - 1), tuple(sorted(shadow)))


def matrix_eigenvector(m: IntersectionMatrix, theta: int) -> list[Fraction]:
    """Right eigenvector of the tridiagonal matrix for ``theta`` with v_0 = 1.

    Back-substitution row by row; the final row is checked, so a non-root
    ``theta`` raises ParameterError.
    """
    v = [Fraction(1)]
    for i in range(m.rho):
        below = m.gamma[i - 1] * v[i - 1] if i > 0 else 0
        v.append(((theta - m.alpha[i]) * v[i] - below) / m.beta[i])
    r = m.rho
    last = (m.gamma[r - 1] * v[r - 1] if r > 0 else 0) + m.alpha[r] * v[r]
    if last != theta * v[r]:
        raise ParameterError(f"{theta} is not an eigenvalue of the intersection matrix")
    return v


def spectrum_map(theta_val: int, params: JohnsonParams) -> int:
    """Eigenvalue of J(n, w-1) carried by the clique-sum image of a theta-eigenvector."""
    k, w = params.valency, params.w
    if theta_val not in params.thetas():
        raise ParameterError(f"{theta_val} is not an eigenvalue of {params}")
    theta_min = -w
    if theta_val == theta_min:
        raise MapsToZero(f"{theta_val} is the minimum eigenvalue; its image is the zero vector")
    image = theta_val - theta_min - 1 + Fraction(k, theta_min)
    assert image.denominator == 1
    return int(image)


@dataclass(frozen=True)
class ProjectionProfile:
    a: tuple[Fraction, ...]  # a_i = |K & C_i| for cliques K inside C_i u C_{i+1}
    b: tuple[int, ...]  # b_i = cliques of C'_{i-1} through a vertex of C_i
    spectrum_map: tuple[tuple[int, int], ...]
    eigenvector: tuple[Fraction, ...]
    clique_matrix: IntersectionMatrix  # predicted intersection matrix of C'


def _min_eigen_report(code: Code) -> CrcReport:
    rep = check_crc(code)
    if not rep.is_crc:
        raise ParameterError("the code is not completely regular")
    if -code.w not in rep.spectrum:
        raise MissingMinEigenvalue(f"-{code.w} is not in Spec(C) = {rep.spectrum}")
    return rep


def projection_profile(code: Code, verify: bool = True) -> ProjectionProfile:
    """Clique fill constants a_i and membership constants b_i of a CRC with eigenvalue -w.

    Both are derived from the (-w)-eigenvector of the intersection matrix and,
    with ``verify``, checked against a direct count over all cliques and vertices.
    """
    rep = _min_eigen_report(code)
    m = rep.matrix
    n, w = code.n, code.w
    clique_size = n - w + 1
    v = matrix_eigenvector(m, -w)
    a = tuple(clique_size * v[i + 1] / (v[i + 1] - v[i]) for i in range(m.rho))
    b = (0,) + tuple(Fraction(m.gamma[i - 1]) / a[i - 1] for i in range(1, m.rho + 1))
    if any(x.denominator != 1 for x in a + b):
        raise ProfileMismatch(f"non-integral clique constants a={a} b={b}")
    b = tuple(int(x) for x in b)

    ab = [int(x) for x in a]
    gamma_c = tuple(ab[i] * b[i] for i in range(1, m.rho))
    beta_c = tuple((w - b[i + 1]) * (clique_size - ab[i]) for i in range(m.rho - 1))
    alpha_c = tuple(
        (w - b[i] - 1) * ab[i] + (b[i + 1] - 1) * (clique_size - ab[i]) for i in range(m.rho)
    )
    clique_matrix = IntersectionMatrix(alpha_c, beta_c, gamma_c)
    smap = tuple((t, spectrum_map(t, code.params)) for t in rep.spectrum if t != -w)
    prof = ProjectionProfile(a, b, smap, tuple(v), clique_matrix)
    if verify:
        _verify_profile(code, rep, prof)
    return prof


def _verify_profile(code: Code, rep: CrcReport, prof: ProjectionProfile) -> None:
    g = code.params.graph()
    labels = rep.partition.labels
    lower = []  # lower cell index of every clique
    for members in g.cliques:
        cells = Counter(labels[x] for x in members)
        lo = min(cells)
        if set(cells) != {lo, lo + 1}:
            raise ProfileMismatch(f"clique meets cells {sorted(cells)}")
        if cells[lo] != prof.a[lo]:
            raise ProfileMismatch(f"clique has {cells[lo]} vertices in C_{lo}, expected a={prof.a[lo]}")
        lower.append(lo)
    through = [[] for _ in range(len(g))]
    for c, members in enumerate(g.cliques):
        for x in members:
            through[x].append(c)
    for x, cl in enumerate(through):
        i = labels[x]
        got = sum(1 for c in cl if lower[c] == i - 1)
        if got != prof.b[i]:
            raise ProfileMismatch(
                f"{fmt(g.vertices[x])} lies in {got} cliques of C'_{i - 1}, expected b={prof.b[i]}"
            )


@dataclass
class Reconstruction:
    code: Code
    b: tuple[int, ...]  # membership constants read off the partition of ``code``
    histograms: dict[int, Counter]  # cell -> Counter of facet-cell histograms


def _lex_key(x: int):
    return elements(x)


def reconstruct(cprime: Code, b1: int | None = None) -> Reconstruction:
    """Rebuild C in J(n, w) from its clique code using the b_0 = 0 rule.

    C is the set of w-subsets all of whose facets are in C'.  Every other
    vertex is classified by how many of its facets fall in each cell of C';
    if two vertices of the same cell of C disagree, no CRC with a constant
    membership profile projects onto C' and InconsistentProfile is raised with
    the first such pair in lexicographic order.  A given ``b1`` must match the
    observed b_1.
    """
    n, w = cprime.n, cprime.w + 1
    params = JohnsonParams(n, w)
    if b1 is not None and not 0 < b1 < w:
        raise ParameterError(f"b1 must lie strictly between 0 and {w}")
    prime_part = distance_partition(cprime)
    gp = johnson_graph(n, w - 1)
    prime_label = {gp.vertices[i]: lab for i, lab in enumerate(prime_part.labels)}
    cset = cprime.as_set()

    g = params.graph()
    blocks = [x for x in g.vertices if all(f in cset for f in _facets(x))]
    if not blocks:
        raise DegenerateInput("no w-subset has all of its facets in the clique code")
    code = Code(params, tuple(blocks))
    part = distance_partition(code)
    rho_p = prime_part.rho

    hist_of = {}
    for x in g.vertices:
        h = [0] * (rho_p + 1)
        for f in _facets(x):
            h[prime_label[f]] += 1
        hist_of[x] = tuple(h)

    histograms: dict[int, Counter] = {}
    reference: dict[int, int] = {}
    b = [0] * (part.rho + 1)
    for x in sorted(g.vertices, key=_lex_key):
        i = part.labels[g.index[x]]
        h = hist_of[x]
        histograms.setdefault(i, Counter())[h] += 1
        if i not in reference:
            reference[i] = x
            continue
        r = reference[i]
        if hist_of[r] != h:
            raise InconsistentProfile(
                f"{fmt(r)} and {fmt(x)} both lie in C_{i} but contain "
                f"{_describe(hist_of[r])} and {_describe(h)} facets of C'",
                witnesses=(r, x),
                counts=(hist_of[r], h),
            )
    for i, r in reference.items():
        h = hist_of[r]
        below = h[i - 1] if 1 <= i <= rho_p + 1 else 0
        here = h[i] if i <= rho_p else 0
        if below + here != w:
            raise InconsistentProfile(
                f"{fmt(r)} in C_{i} has facets outside C'_{i - 1} and C'_{i}: {h}",
                witnesses=(r,),
                counts=(h,),
            )
        b[i] = below
    if b1 is not None and part.rho >= 1 and b[1] != b1:
        r = reference[1]
        raise InconsistentProfile(
            f"observed b_1 = {b[1]} (at {fmt(r)}) but b_1 = {b1} was requested",
            witnesses=(r,),
            counts=(hist_of[r],),
        )
    return Reconstruction(code, tuple(b), histograms)


def _describe(h) -> str:
    return "/".join(map(str, h))


@dataclass(frozen=True)
class LiftedVector:
    params: JohnsonParams
    theta: int
    values: tuple[Fraction, ...]  # indexed by colex rank
    cell_values: tuple[Fraction, ...]


def adjacency_apply(params: JohnsonParams, values) -> list:
    adj = params.graph().adjacency
    return [sum((values[u] for u in nb), start=0 * values[0]) for nb in adj]


def is_eigenvector(params: JohnsonParams, values, theta_val) -> bool:
    av = adjacency_apply(params, values)
    return all(x == theta_val * y for x, y in zip(av, values))


def lift_eigenvector(code: Code, theta_val: int) -> LiftedVector:
    """Spread the matrix eigenvector for ``theta_val`` over the distance partition."""
    rep = check_crc(code)
    if not rep.is_crc:
        raise ParameterError("the code is not completely regular")
    if theta_val not in rep.spectrum:
        raise ParameterError(f"{theta_val} is not in Spec(C) = {rep.spectrum}")
    v = matrix_eigenvector(rep.matrix, theta_val)
    values = tuple(v[i] for i in rep.partition.labels)
    if not is_eigenvector(code.params, values, theta_val):
        raise ProfileMismatch(f"lifted vector is not a {theta_val}-eigenvector")
    return LiftedVector(code.params, theta_val, values, tuple(v))


def clique_sum_transform(u, params: JohnsonParams) -> list:
    """(I u)_y = sum of u over the n-w+1 vertices containing the (w-1)-subset y."""
    g = params.graph()
    if len(u) != len(g):
        raise ParameterError(f"vector has {len(u)} entries, {params} has {len(g)} vertices")
    return [sum((u[x] for x in members), start=0 * u[0]) for members in g.cliques]


def characteristic_vector(code: Code) -> list[int]:
    g = code.params.graph()
    chi = [0] * len(g)
    for i in code.indices():
        chi[i] = 1
    return chi


__all__ = [
    "LiftedVector",
    "ProjectionProfile",
    "Reconstruction",
    "characteristic_vector",
    "clique_sum_transform",
    "is_eigenvector",
    "lift_eigenvector",
    "matrix_eigenvector",
    "project",
    "projection_profile",
    "reconstruct",
    "spectrum_map",
]
