from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcrc.analysis import IntersectionMatrix
from jcrc.errors import ParameterError
from jcrc.feasibility import (
    case_b_filter,
    clique_count_solutions,
    design_divisible,
    enumerate_arrays,
    feasible_rho2_matrices,
    grid_placement_feasible,
    rho2_cell_sizes,
    m2_matrix_refutation,
    m2_scan,
    make_target,
    rho2_entries,
)
from jcrc.johnson import theta

from oracles import fraction_det


def test_j83_rho1_targets():
    got = [t.matrix.array_str() for t in enumerate_arrays(8, 3, 1, {0, 2})]
    assert got == [f"{{{b};{14 - b}}}" for b in range(1, 14)]
    design = enumerate_arrays(8, 3, 1, {0, 2}, require_design=True)
    assert [t.matrix.beta[0] for t in design] == [2, 4, 6, 8, 10, 12]


def test_j103_contains_m2_array():
    assert "{9;9}" in {t.matrix.array_str() for t in enumerate_arrays(10, 3, 1, {0, 2})}


def test_singleton_array():
    (t,) = enumerate_arrays(6, 3, 3, {0, 1, 2, 3})
    assert t.matrix.array_str() == "{9,4,1;1,4,9}" and t.sizes == (1, 9, 9, 1)


def test_bad_target():
    with pytest.raises(ParameterError):
        enumerate_arrays(8, 3, 1, {2, 3})


@settings(max_examples=60, deadline=None)
@given(st.integers(8, 12), st.data())
def test_enumerated_matrices_have_exact_spectrum(n, data):
    spec = data.draw(st.sampled_from([{0, 2}, {0, 3}, {0, 1}]))
    k = 3 * (n - 3)
    for t in enumerate_arrays(n, 3, 1, spec):
        rows = t.matrix.rows()
        for i in spec:
            x = theta(n, 3, i)
            assert fraction_det([[(x if a == b else 0) - rows[a][b] for b in range(2)] for a in range(2)]) == 0
        assert sum(t.sizes) * 6 == n * (n - 1) * (n - 2)
        assert t.matrix.k == k


@pytest.mark.parametrize(
    "n,row,sizes",
    [(15, (30, 24, 3, 10), (90, 900, 375)), (17, (36, 24, 3, 14), None), (18, (36, 32, 6, 8), None)],
)
def test_published_rows(n, row, sizes):
    rows = {m.row(): m for m in feasible_rho2_matrices(n)}
    assert row in rows
    if sizes:
        assert rows[row].sizes == sizes


def test_rho2_entries_against_matrix_spectrum():
    for n in (15, 17, 18):
        for m in feasible_rho2_matrices(n):
            t = make_target(n, 4, m.matrix)
            assert t.spectrum == (0, 2, 3)
            assert t.sizes == m.sizes
    with pytest.raises(ParameterError):
        rho2_entries(15, 30, 30)


def test_rho2_cell_sizes_sum():
    s = rho2_cell_sizes(15, 30, 10, 3, 24)
    assert sum(s) == Fraction(15 * 14 * 13 * 12, 24)


@pytest.mark.parametrize("n", [10, 13, 16, 19, 22])
def test_two_derivations_agree(n):
    a = {
        (t.matrix.beta[0], t.matrix.gamma[1], t.matrix.gamma[0], t.matrix.beta[1])
        for t in enumerate_arrays(n, 4, 2, {0, 2, 3}, require_design=True)
        if t.matrix.beta[0] != t.matrix.gamma[1]
    }
    b = {m.row() for m in feasible_rho2_matrices(n)}
    assert a == b


def test_design_divisible():
    assert design_divisible(8, 3, 24, 1)
    assert not design_divisible(8, 3, 20, 1)


def test_m2_examples():
    for n, g in [(10, 8), (13, 6)]:
        v = m2_matrix_refutation(n, g)
        assert v.case_a_core_survivor and v.eliminated
        assert "floor((n-4)/2)" in v.case_a
    assert m2_matrix_refutation(13, 4).case_b_divisor_survivor
    with pytest.raises(ParameterError):
        m2_matrix_refutation(10, 0)


def test_m2_scan_eliminates_all():
    verdicts = m2_scan(10, 60)
    assert all(v.eliminated for v in verdicts)
    assert {v.n for v in m2_scan(8, 200) if v.case_b_divisor_survivor} == {9, 13, 19, 31, 49, 139}


def test_grid_placement():
    # odd n: the code neighbours fill a 4 x (n-7)/2 block, which fits
    assert grid_placement_feasible(13, 4)
    assert case_b_filter(13, 4) == "|C'| non-integral"
    # even n with gamma1 = (n-4)/2 has no admissible placement
    assert not grid_placement_feasible(14, 5)
    assert case_b_filter(20, 3).startswith("window")


def test_clique_count():
    assert clique_count_solutions(10, 4, 12, 2) == []
    assert clique_count_solutions(10, 4, 12, 3) == []
    # clique code GP.1' of M.1 in J(8,4): alpha'_0 = 7, b1 = 2, one superset in C
    assert clique_count_solutions(8, 4, 7, 2) == [1]


def test_matrix_entries_helper():
    m = IntersectionMatrix.from_array((8,), (6,), 15)
    assert m.entry(0, 1) == 8 and m.entry(1, 0) == 6 and m.entry(0, 2) == 0
