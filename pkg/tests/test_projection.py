import pytest

from jcrc.analysis import check_crc
from jcrc.constructions import gp1_prime, gp2, gp3_family, m1, m2
from jcrc.errors import DegenerateInput, InconsistentProfile, MapsToZero, MissingMinEigenvalue, ParameterError
from jcrc.johnson import JohnsonParams, subset, theta
from jcrc.projection import (
    characteristic_vector,
    clique_sum_transform,
    lift_eigenvector,
    matrix_eigenvector,
    project,
    projection_profile,
    reconstruct,
    spectrum_map,
)

CASES = [gp2(3, 3), gp2(3, 4), m1(8, 4), m1(10, 4), gp3_family(8, 4)]


@pytest.mark.parametrize("con", CASES, ids=lambda c: f"{c.name}-{c.code.params}")
def test_projection_theorem(con):
    code = con.code
    rep = check_crc(code)
    prof = projection_profile(code)
    prime = check_crc(project(code))
    assert prime.is_crc and prime.rho == rep.rho - 1
    shift = code.n - 2 * code.w + 1
    assert prime.spectrum == [t - shift for t in rep.spectrum if t != -code.w]
    assert prime.strength == rep.strength
    assert prime.matrix == prof.clique_matrix
    assert [t for _, t in prof.spectrum_map] == prime.spectrum


def test_b_profiles():
    assert projection_profile(gp2(3, 3).code).b == (0, 1, 3)
    assert projection_profile(m1(8, 4).code).b == (0, 2, 4)
    assert projection_profile(gp3_family(8, 4).code).b == (0, 1, 4)


def test_profile_errors():
    with pytest.raises(MissingMinEigenvalue):
        projection_profile(m2(8).code)
    with pytest.raises(ParameterError):
        from jcrc.constructions import d_family

        projection_profile(d_family(4, 3).code)


def test_spectrum_map():
    p = JohnsonParams(9, 3)
    assert spectrum_map(18, p) == 14
    with pytest.raises(MapsToZero):
        spectrum_map(-3, p)
    with pytest.raises(ParameterError):
        spectrum_map(5, p)


@pytest.mark.parametrize("n", range(4, 21))
def test_spectrum_map_identity(n):
    for w in range(2, n // 2 + 1):
        p = JohnsonParams(n, w)
        for i in range(w):
            assert theta(n, w, i) - (n - 2 * w + 1) == theta(n, w - 1, i)
            assert spectrum_map(theta(n, w, i), p) == theta(n, w - 1, i)


def test_matrix_eigenvector_rejects_non_roots():
    m = check_crc(gp2(3, 3).code).matrix
    with pytest.raises(ParameterError):
        matrix_eigenvector(m, 5)


@pytest.mark.parametrize("con", CASES, ids=lambda c: f"{c.name}-{c.code.params}")
def test_clique_sum_identities(con):
    code = con.code
    rep = check_crc(code)
    prof = projection_profile(code)
    chi = characteristic_vector(code)
    image = clique_sum_transform(chi, code.params)
    prime = project(code)
    chi_p = characteristic_vector(prime)
    assert image == [prof.a[0] * x for x in chi_p]
    for t in rep.spectrum:
        lv = lift_eigenvector(code, t)
        out = clique_sum_transform(list(lv.values), code.params)
        if t == -code.w:
            assert all(x == 0 for x in out)


def test_reconstruct_m1():
    rec = reconstruct(gp1_prime(8).code)
    assert rec.code == m1(8, 4).code
    assert rec.b == (0, 2, 4)
    assert reconstruct(gp1_prime(8).code, b1=2).code == m1(8, 4).code
    with pytest.raises(InconsistentProfile):
        reconstruct(gp1_prime(8).code, b1=1)


def test_reconstruct_m2_fails():
    with pytest.raises(InconsistentProfile) as e:
        reconstruct(m2(8).code)
    assert set(e.value.witnesses) == {subset([1, 2, 3, 5]), subset([1, 2, 3, 6])}


def test_roundtrip_project_reconstruct():
    for con in [m1(8, 4), gp3_family(8, 4), gp2(3, 3)]:
        assert reconstruct(project(con.code)).code == con.code


def test_project_needs_w2():
    from jcrc.analysis import Code

    with pytest.raises(DegenerateInput):
        project(Code.from_blocks(JohnsonParams(4, 1), [[1]]))
