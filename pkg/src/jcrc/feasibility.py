"""Feasible intersection matrices from spectral and counting constraints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, comb, floor

from .analysis import IntersectionMatrix, cell_size_chain, matrix_spectrum
from .errors import LloydViolation, NonIntegralSizes, ParameterError
from .johnson import JohnsonParams, theta


@dataclass(frozen=True)
class ArrayTarget:
    n: int
    w: int
    matrix: IntersectionMatrix
    sizes: tuple[int, ...]
    spectrum: tuple[int, ...]  # eigenvalue indices, ascending

    @property
    def rho(self) -> int:
        return self.matrix.rho

    @property
    def params(self) -> JohnsonParams:
        return JohnsonParams(self.n, self.w)

    def key(self):
        return (self.matrix.beta, self.matrix.gamma)


def make_target(n: int, w: int, matrix: IntersectionMatrix) -> ArrayTarget:
    """Validate a matrix against J(n, w) and attach its cell sizes and spectrum."""
    params = JohnsonParams(n, w)
    spec = matrix_spectrum(matrix, params)
    sizes = cell_size_chain(matrix, params.order)
    thetas = params.thetas()
    return ArrayTarget(n, w, matrix, tuple(sizes), tuple(sorted(thetas.index(s) for s in spec)))


def _implied_strength(indices) -> int:
    rest = sorted(i for i in indices if i != 0)
    return rest[0] - 1 if rest else 0


def design_divisible(n: int, w: int, size: int, t: int) -> bool:
    """Whether size blocks can form a t-design: every lambda_s, s <= t, is integral."""
    return all((size * comb(w, s)) % comb(n, s) == 0 for s in range(1, t + 1))


def _eigvec_prefix(beta, gamma, k, theta_val, upto):
    """v_0..v_upto of the theta-eigenvector from the first rows of the matrix."""
    v = [Fraction(1)]
    for i in range(upto):
        g = gamma[i - 1] if i > 0 else 0
        alpha = k - beta[i] - g
        below = g * v[i - 1] if i > 0 else 0
        v.append(((theta_val - alpha) * v[i] - below) / beta[i])
    return v


def enumerate_arrays(
    n: int, w: int, rho: int, target_spectrum, require_design: bool = False
) -> list[ArrayTarget]:
    """All intersection matrices of covering radius rho with exactly the target spectrum.

    ``target_spectrum`` holds eigenvalue indices and must contain 0.  All but
    the last two off-diagonal entries are enumerated; the last beta and gamma
    are solved from two of the eigenvalue conditions, and every candidate is
    then confirmed by exact determinant evaluation and integral cell sizes.
    With ``require_design`` the code size must also admit the t-design implied
    by the spectrum.
    """
    params = JohnsonParams(n, w)
    k = params.valency
    target = frozenset(target_spectrum)
    if 0 not in target or len(target) != rho + 1 or not target <= set(range(w + 1)):
        raise ParameterError(f"target spectrum must hold {rho + 1} indices in 0..{w}, including 0")
    if rho == 0:
        m = IntersectionMatrix((k,), (), ())
        return [make_target(n, w, m)]
    others = [theta(n, w, i) - k for i in sorted(target) if i != 0]
    t_design = _implied_strength(target)

    found = {}

    def consider(beta, gamma):
        try:
            m = IntersectionMatrix.from_array(beta, gamma, k)
        except ParameterError:
            return
        try:
            tgt = make_target(n, w, m)
        except (LloydViolation, NonIntegralSizes):
            return
        if frozenset(tgt.spectrum) != target:
            return
        if require_design and not design_divisible(n, w, tgt.sizes[0], t_design):
            return
        found[tgt.key()] = tgt

    if rho == 1:
        for b0 in range(1, k + 1):
            g1 = -others[0] - b0
            if 1 <= g1 <= k:
                consider((b0,), (g1,))
        return [found[key] for key in sorted(found)]

    def free_params(i, beta, gamma):
        # assigns beta_0..beta_{rho-2}, gamma_1..gamma_{rho-1}
        if i == rho - 1:
            yield beta, gamma
            return
        g = gamma[i - 1] if i > 0 else 0
        for b in range(1, k - g + 1):
            for gnext in range(1, k + 1):
                yield from free_params(i + 1, beta + (b,), gamma + (gnext,))

    ta, tb = others[0], others[1]
    for beta, gamma in free_params(0, (), ()):
        g_last = gamma[-1]
        rows = []
        for d in (ta, tb):
            v = _eigvec_prefix(beta, gamma, k, d + k, rho - 1)
            r = (d + g_last) * v[-1] - g_last * v[-2]
            rows.append((d * v[-1], r, -d * r))
        (a1, b1, c1), (a2, b2, c2) = rows
        det = a1 * b2 - a2 * b1
        if det != 0:
            bl = (c1 * b2 - c2 * b1) / det
            gl = (a1 * c2 - a2 * c1) / det
            if bl.denominator == 1 and gl.denominator == 1:
                consider(beta + (int(bl),), gamma + (int(gl),))
        else:
            for bl, gl in product(range(1, k - g_last + 1), range(1, k + 1)):
                consider(beta + (bl,), gamma + (gl,))
    return [found[key] for key in sorted(found)]


@dataclass(frozen=True)
class FeasibleMatrix:
    """A member of the two-parameter family with spectrum {theta_0, theta_2, theta_3} in J(n, 4)."""

    n: int
    beta0: int
    gamma2: int
    gamma1: int
    beta1: int
    sizes: tuple[int, int, int]

    @property
    def matrix(self) -> IntersectionMatrix:
        return IntersectionMatrix.from_array((self.beta0, self.beta1), (self.gamma1, self.gamma2), 4 * self.n - 16)

    def row(self):
        return (self.beta0, self.gamma2, self.gamma1, self.beta1)


def rho2_entries(n: int, beta0: int, gamma2: int) -> tuple[Fraction, Fraction, int]:
    """gamma_1, beta_1 and alpha_1 of the family member fixed by beta_0 != gamma_2."""
    if beta0 == gamma2:
        raise ParameterError("the family needs beta0 != gamma2")
    d = beta0 - gamma2
    gamma1 = Fraction(-(beta0 - 2 * n + 2) * (beta0 - 3 * n + 6), d)
    beta1 = Fraction((gamma2 - 2 * n + 2) * (gamma2 - 3 * n + 6), d)
    return gamma1, beta1, beta0 + gamma2 - n - 8


def rho2_cell_sizes(n: int, beta0, beta1, gamma1, gamma2) -> tuple[Fraction, Fraction, Fraction]:
    """|C_0|, |C_1|, |C_2| of a covering-radius-2 code in J(n, 4) from its intersection array."""
    total = Fraction(n * (n - 1) * (n - 2) * (n - 3), 24)
    denom = beta0 * beta1 + beta0 * gamma2 + gamma1 * gamma2
    return (
        gamma1 * gamma2 * total / denom,
        beta0 * gamma2 * total / denom,
        beta0 * beta1 * total / denom,
    )


def feasible_rho2_matrices(n: int) -> list[FeasibleMatrix]:
    """Scan beta0 != gamma2 in 1..4n-16 for integral, nonnegative family members."""
    if n < 8:
        raise ParameterError("J(n,4) needs n >= 8")
    k = 4 * n - 16
    out = []
    for beta0 in range(1, k + 1):
        for gamma2 in range(1, k + 1):
            if beta0 == gamma2:
                continue
            gamma1, beta1, alpha1 = rho2_entries(n, beta0, gamma2)
            if gamma1.denominator != 1 or beta1.denominator != 1:
                continue
            if gamma1 <= 0 or beta1 <= 0 or alpha1 < 0:
                continue
            if gamma1 + beta1 + alpha1 != k:
                continue
            sizes = rho2_cell_sizes(n, beta0, beta1, gamma1, gamma2)
            if any(s.denominator != 1 or s <= 0 for s in sizes):
                continue
            if (4 * sizes[0]) % n:
                continue
            out.append(
                FeasibleMatrix(n, beta0, gamma2, int(gamma1), int(beta1), tuple(int(s) for s in sizes))
            )
    return out


# The equal-parameter branch beta0 = gamma2 = 2n-2 of the same spectrum.


def m2_matrix(n: int, gamma1: int) -> IntersectionMatrix:
    return IntersectionMatrix(
        (2 * n - 14, 3 * n - 12, 2 * n - 14), (2 * n - 2, n - 4 - gamma1), (gamma1, 2 * n - 2)
    )


def _is_int(x) -> bool:
    return Fraction(x).denominator == 1


def case_a_filter(n: int, gamma1: int) -> str | None:
    """First filter of the one-full-row case that rules the pair out, or None."""
    if gamma1 > 12:
        return "packing: |C'| <= n(n-1)/6 forces gamma1 <= 12"
    if gamma1 < ceil(Fraction(n - 4, 3)):
        return "row count: gamma1 >= ceil((n-4)/3)"
    if n < 10:
        return "full row plus 2n-14 code neighbours needs n >= 10"
    sizes = (
        Fraction(gamma1 * n * (n - 1) * (n - 3), 72),
        Fraction(gamma1 * (n - 1) * (n - 3), 18),
        Fraction(gamma1 * (n - 1), 24),
    )
    if not all(map(_is_int, sizes)):
        return "integrality of |C|, point degree of C and of C'"
    lhs = Fraction((n - 4 - gamma1) * (n - 1) * (n - 3), 18)
    top = n - 1 - Fraction(gamma1 * (n - 1), 12)
    if lhs > comb(max(int(top), 0), 3):
        return "set-packing bound on C_2 blocks through a point"
    return None


def grid_placement_feasible(n: int, gamma1: int) -> bool:
    """Can 2n-14 code neighbours sit in the 4 x (n-4) grid with no all-code row?

    Every grid cell outside the code lies in C_1, so a cell in row r and column
    c sees R_r + K_c <= gamma1 - 1 code cells besides the centre.  Columns are
    interchangeable, so a placement is a multiset of column patterns; this
    searches row-count vectors and pattern multiplicities exactly.
    """
    m = n - 4
    total = 2 * n - 14
    cap = gamma1 - 1
    alpha0 = 2 * n - 14
    patterns = [frozenset(r for r in range(4) if mask >> r & 1) for mask in range(1, 16)]

    def realisable(R):
        allowed = []
        for p in patterns:
            if any(R[r] + len(p) > cap for r in range(4) if r not in p):
                continue
            if any((R[r] - 1) + (len(p) - 1) + 1 > alpha0 for r in p):
                continue
            allowed.append(p)

        def solve(i, rest, cols):
            if all(x == 0 for x in rest):
                return True
            if i == len(allowed) or cols == 0:
                return False
            p = allowed[i]
            most = min(min(rest[r] for r in p), cols)
            for c in range(most, -1, -1):
                nxt = [rest[r] - c if r in p else rest[r] for r in range(4)]
                if solve(i + 1, nxt, cols - c):
                    return True
            return False

        return solve(0, list(R), m)

    bound = min(cap, m - 1)
    if bound < 0 or 4 * bound < total:
        return False

    def row_counts(parts, left, low):
        # nondecreasing R_1 <= ... <= R_4 summing to ``total``
        if parts == 1:
            if low <= left <= bound:
                yield (left,)
            return
        for r in range(max(low, left - bound * (parts - 1)), min(bound, left // parts) + 1):
            for tail in row_counts(parts - 1, left - r, r):
                yield (r,) + tail

    return any(realisable(R) for R in row_counts(4, total, 0))


def case_b_filter(n: int, gamma1: int) -> str | None:
    """First filter of the no-full-row case that rules the pair out, or None."""
    if not ceil(Fraction(n - 5, 2)) <= gamma1 <= floor(Fraction(n - 4, 2)):
        return "window: ceil((n-5)/2) <= gamma1 <= floor((n-4)/2)"
    if not grid_placement_feasible(n, gamma1):
        return "no admissible placement of code neighbours in the 4 x (n-4) grid"
    if n % 2 == 1:
        if 135 % (n - 4):
            return "|S_0| integrality: n-4 must divide 135"
        s0 = Fraction((n - 1) * (n - 5) * (7 * n * n - 28 * n + 45), 2304 * (n - 4))
        cprime = Fraction((5 * n - 3) * (n - 1) * (n - 5), 1152)
        if not _is_int(s0):
            return "|S_0| non-integral"
        if not _is_int(cprime):
            return "|C'| non-integral"
    return None


@dataclass(frozen=True)
class M2Verdict:
    n: int
    gamma1: int
    case_a: str | None  # filter eliminating the pair when some code vertex has a full code row
    case_b: str | None  # filter eliminating the pair when some code vertex has none
    case_a_core_survivor: bool  # passed the packing and integrality filters
    case_b_divisor_survivor: bool  # odd n in the window with n-4 dividing 135
    in_family: bool  # beta1 = n-4-gamma1 is positive

    @property
    def eliminated(self) -> bool:
        return self.case_a is not None and self.case_b is not None


WLOG = "opposite code: assume gamma1 <= floor((n-4)/2)"


def m2_matrix_refutation(n: int, gamma1: int) -> M2Verdict:
    """Run the machine-checkable filters against the beta0 = gamma2 = 2n-2 matrix.

    gamma1 may exceed n-5 (where beta1 = n-4-gamma1 is no longer positive):
    the packing scan covers 1 <= gamma1 <= 12 for every n, and such pairs are
    removed by the opposite-code normalisation like any other large gamma1.
    """
    if n < 8:
        raise ParameterError("J(n,4) needs n >= 8")
    if gamma1 < 1:
        raise ParameterError("gamma1 must be positive")
    core = case_a_filter(n, gamma1)
    a = core
    if a is None and gamma1 > (n - 4) // 2:
        a = WLOG
    b = case_b_filter(n, gamma1)
    divisor = (
        n % 2 == 1
        and ceil(Fraction(n - 5, 2)) <= gamma1 <= (n - 4) // 2
        and 135 % (n - 4) == 0
    )
    return M2Verdict(n, gamma1, a, b, core is None, divisor, gamma1 <= n - 5)


def clique_count_solutions(n: int, w: int, alpha0_prime: int, b1: int) -> list[int]:
    """Values r with (w-1) r + (b1-1)(n-w+1-r) = alpha0_prime, 1 <= r <= n-w+1.

    A code vertex of a clique code C' (covering radius 1) has alpha0_prime
    neighbours in C'.  They are the facets of the n-w+1 supersets of that
    vertex: the r supersets in C contribute w-1 each and the others, lying in
    C_1, contribute b1-1 each.
    """
    return [
        r
        for r in range(1, n - w + 2)
        if (w - 1) * r + (b1 - 1) * (n - w + 1 - r) == alpha0_prime
    ]


def m2_scan_domain(n: int) -> range:
    """gamma1 values scanned for a given n: the family 1..n-5 and the packing box 1..12."""
    return range(1, max(n - 5, 12) + 1)


def m2_scan(n_lo: int = 10, n_hi: int = 200) -> list[M2Verdict]:
    return [m2_matrix_refutation(n, g) for n in range(n_lo, n_hi + 1) for g in m2_scan_domain(n)]
