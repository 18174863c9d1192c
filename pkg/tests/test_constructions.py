import pytest

from jcrc.analysis import check_crc
from jcrc.constructions import (
    FAMILIES,
    Partition,
    antipodal_classes,
    antipodal_union,
    d_family,
    gp1,
    gp1_prime,
    gp2,
    gp3_family,
    gp4_gp5,
    m1,
    m2,
)
from jcrc.errors import ParameterError

from oracles import naive_crc, numeric_spectrum

SMALL = [
    gp1(12, 5),
    gp1_prime(8),
    gp2(3, 3),
    gp3_family(8, 3),
    gp3_family(8, 4),
    gp3_family(12, 5),
    gp4_gp5(3, 2),
    gp4_gp5(2, 3),
    m1(8, 4),
    m2(8),
]


@pytest.mark.parametrize("con", SMALL, ids=lambda c: f"{c.name}-{c.code.params}")
def test_profiles(con):
    rep = check_crc(con.code)
    assert rep.is_crc
    if con.expected.rho is not None:
        assert rep.rho == con.expected.rho
    if con.expected.spectrum is not None:
        assert frozenset(rep.spectrum_indices) == con.expected.spectrum
    assert rep.strength >= 1


@pytest.mark.parametrize("con", [gp1_prime(6), gp2(3, 3), gp4_gp5(3, 2), m2(6)], ids=lambda c: c.name)
def test_recount_oracle(con):
    ok, rho, rows = naive_crc(con.code.n, con.code.w, con.code.element_lists())
    rep = check_crc(con.code)
    assert ok and rho == rep.rho
    assert rep.spectrum == numeric_spectrum(con.code.n, con.code.w, con.code.element_lists())


def test_sizes():
    assert len(gp1_prime(8).code) == 24
    assert len(m2(8).code) == 24
    assert len(gp3_family(8, 3).code) == 8
    assert len(m1(8, 4).code) == 6
    assert len(gp2(3, 3).code) == 3


def test_custom_partition():
    part = Partition.of([[1, 5], [2, 6], [3, 7], [4, 8]])
    c = m1(8, 4, part).code
    assert check_crc(c).is_crc
    assert (1 << 0 | 1 << 4 | 1 << 1 | 1 << 5) in c
    with pytest.raises(ParameterError):
        Partition.of([[1, 2], [2, 3]])
    with pytest.raises(ParameterError):
        m1(8, 4, Partition.standard(4, 2))


@pytest.mark.parametrize(
    "call",
    [lambda: gp1(12, 4), lambda: gp1(9, 5), lambda: gp2(2, 3), lambda: gp3_family(7, 3), lambda: m1(8, 3),
     lambda: m2(7), lambda: antipodal_union([]), lambda: antipodal_union([10])],
)
def test_parameter_errors(call):
    with pytest.raises(ParameterError):
        call()


def test_antipodal():
    pairs = antipodal_classes()
    assert len(pairs) == 10 and all(a ^ b == 0b111111 for a, b in pairs)
    for k in range(1, 10):
        rep = check_crc(antipodal_union(range(k)).code)
        assert rep.is_crc and rep.rho == 1 and rep.spectrum_indices == [0, 2]
    assert check_crc(antipodal_union(range(10)).code).rho == 0


def test_d_family_is_not_crc():
    assert not check_crc(d_family(4, 3).code).is_crc


def test_registry():
    assert set(FAMILIES) >= {"gp1", "gp1_prime", "gp2", "gp3", "gp4_gp5", "m1", "m2"}
