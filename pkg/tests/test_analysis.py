from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jcrc.analysis import (
    Code,
    IntersectionMatrix,
    cell_size_chain,
    char_poly_at,
    check_crc,
    design_table,
    distance_partition,
    matrix_spectrum,
    opposite_code,
)
from jcrc.constructions import gp2, m2
from jcrc.errors import DegenerateInput, LloydViolation, NonIntegralSizes, ParameterError
from jcrc.johnson import JohnsonParams, all_subsets, elements

from oracles import fraction_det, naive_crc, naive_partition, naive_strength, numeric_spectrum


def code_strategy(n, w, max_size=None):
    vs = all_subsets(n, w)
    return st.sets(st.sampled_from(vs), min_size=1, max_size=max_size or len(vs)).map(
        lambda s: Code.from_blocks(JohnsonParams(n, w), s)
    )


def test_code_validation():
    p = JohnsonParams(6, 3)
    with pytest.raises(ParameterError):
        Code(p, ())
    with pytest.raises(ParameterError):
        Code.from_blocks(p, [[1, 2]])
    c = Code.from_blocks(p, [[4, 5, 6], [1, 2, 3], [1, 2, 3]])
    assert len(c) == 2 and c.element_lists() == [(1, 2, 3), (4, 5, 6)]


def test_matrix_validation_and_opposite():
    m = IntersectionMatrix.from_array((18, 6), (1, 12), 18)
    assert m.alpha == (0, 11, 6)
    assert m.opposite().array_str() == "{12,1;6,18}"
    with pytest.raises(ParameterError):
        IntersectionMatrix((1, 2), (3,), (3,))
    with pytest.raises(ParameterError):
        IntersectionMatrix.from_array((20,), (1,), 18)


def test_char_poly_matches_exact_determinant():
    m = IntersectionMatrix.from_array((18, 6), (1, 12), 18)
    rows = m.rows()
    for x in range(-5, 20):
        shifted = [[(x if i == j else 0) - rows[i][j] for j in range(3)] for i in range(3)]
        assert char_poly_at(m, x) == fraction_det(shifted)


def test_lloyd_violation():
    p = JohnsonParams(8, 3)
    with pytest.raises(LloydViolation):
        matrix_spectrum(IntersectionMatrix.from_array((7,), (2,), 15), p)
    with pytest.raises(ParameterError):
        matrix_spectrum(IntersectionMatrix.from_array((7,), (2,), 14), p)


def test_cell_sizes():
    m = IntersectionMatrix.from_array((18, 6), (1, 12), 18)
    assert cell_size_chain(m, 84) == [3, 54, 27]
    with pytest.raises(NonIntegralSizes):
        cell_size_chain(IntersectionMatrix.from_array((7,), (2,), 15), 56)


def test_gp2_report():
    rep = check_crc(gp2(3, 3).code)
    assert rep.is_crc and rep.rho == 2
    assert rep.spectrum == [18, 2, -3] and rep.spectrum_indices == [0, 2, 3]
    assert rep.cell_sizes == [3, 54, 27]
    assert (rep.strength, rep.lambdas) == (1, [3, 1])


def test_singleton_has_full_spectrum():
    rep = check_crc(Code.from_blocks(JohnsonParams(6, 3), [[1, 2, 3]]))
    assert rep.is_crc and rep.rho == 3 and rep.spectrum_indices == [0, 1, 2, 3]


def test_witness_is_first_in_colex_order():
    c = Code.from_blocks(JohnsonParams(6, 3), [[1, 2, 3], [1, 2, 4]])
    rep = check_crc(c)
    assert not rep.is_crc
    wt = rep.witness
    assert wt.count != wt.expected
    assert rep.partition.labels[c.params.graph().index[wt.reference]] == wt.cell


def test_opposite_of_whole_set():
    p = JohnsonParams(4, 2)
    with pytest.raises(DegenerateInput):
        opposite_code(Code(p, tuple(all_subsets(4, 2))))


@settings(max_examples=150, deadline=None)
@given(st.one_of(code_strategy(7, 3), code_strategy(8, 3, 12)))
def test_check_crc_agrees_with_recount(code):
    ok, rho, rows = naive_crc(code.n, code.w, code.element_lists())
    rep = check_crc(code)
    assert rep.is_crc == ok and rep.rho == rho
    d = naive_partition(code.n, code.w, code.element_lists())
    g = code.params.graph()
    assert all(rep.partition.labels[i] == d[frozenset(elements(v))] for i, v in enumerate(g.vertices))
    if ok:
        assert [list(r) for r in rows] == rep.matrix.rows()
    assert rep.strength == naive_strength(code.n, code.w, code.element_lists())


@pytest.mark.parametrize("con", [gp2(3, 3), m2(8)], ids=lambda c: c.name)
def test_spectrum_matches_floating_point(con):
    rep = check_crc(con.code)
    assert rep.spectrum == numeric_spectrum(con.code.n, con.code.w, con.code.element_lists())


@pytest.mark.parametrize("con", [gp2(3, 3), m2(8)], ids=lambda c: c.name)
def test_opposite_code_same_spectrum(con):
    rep = check_crc(con.code)
    opp = check_crc(opposite_code(con.code))
    assert opp.is_crc and opp.spectrum == rep.spectrum
    assert opp.matrix == rep.matrix.opposite()


def test_design_table():
    t, lam = design_table(m2(8).code)
    assert t == 1 and lam == [24, 9]
    assert distance_partition(m2(8).code).sizes() == [24, 32]
    assert Fraction(3 * 24, 8) == 9
