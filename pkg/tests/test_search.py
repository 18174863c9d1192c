import random
from functools import lru_cache

import pytest

from jcrc.analysis import Code, check_crc, opposite_code
from jcrc.constructions import antipodal_classes, d_family, gp1_prime, gp3_family, m2
from jcrc.errors import BudgetExhausted, ParameterError
from jcrc.feasibility import enumerate_arrays, make_target
from jcrc.johnson import JohnsonParams, elements, subset
from jcrc.search import (
    SearchOptions,
    _transversal_vectors,
    canonical_form,
    canonical_labels,
    is_isomorphic,
    refute_candidate,
    search_crc,
)

from oracles import adjacency_matrix, brute_force_rho1_strength1, naive_strength

J63 = JohnsonParams(6, 3)
J83 = JohnsonParams(8, 3)


def permute(code: Code, perm) -> Code:
    """Apply perm (a dict on 1..n) to every block."""
    return Code.from_blocks(code.params, [[perm[e] for e in elements(b)] for b in code.blocks])


def random_perm(n, rng):
    img = list(range(1, n + 1))
    rng.shuffle(img)
    return dict(zip(range(1, n + 1), img))


@lru_cache(maxsize=None)
def j63_oracle():
    return {c for c in brute_force_rho1_strength1(6, 3) if naive_strength(6, 3, c) == 1}


def as_sets(code):
    return frozenset(frozenset(elements(b)) for b in code.blocks)


def test_j63_search_matches_brute_force():
    found = set()
    for t in enumerate_arrays(6, 3, 1, {0, 2}):
        res = search_crc(J63, t, SearchOptions(isomorph_rejection=False, fix_first_vertex=False))
        found |= {as_sets(c) for c in res.codes}
    assert found == j63_oracle()
    assert len(found) == 1022


def test_j63_results_are_antipodal_unions():
    pairs = {a: b for a, b in antipodal_classes()} | {b: a for a, b in antipodal_classes()}
    for t in enumerate_arrays(6, 3, 1, {0, 2}):
        for c in search_crc(J63, t, SearchOptions(isomorph_rejection=False)).codes:
            assert all(pairs[b] in c for b in c.blocks)


def test_eigenspace_vectors_are_eigenvectors():
    import numpy as np

    from jcrc.johnson import johnson_graph, theta

    g = johnson_graph(7, 3)
    vs, a = adjacency_matrix(7, 3)
    order = [g.index[subset(x)] for x in vs]
    for j in (1, 2, 3):
        for vec in _transversal_vectors(7, 3, j, g.index)[:20]:
            f = np.zeros(len(g))
            for v, s in vec:
                f[v] = s
            f = f[order]
            assert np.array_equal(a @ f, theta(7, 3, j) * f)


@pytest.fixture(scope="module")
def j83_results():
    out = {}
    for t in enumerate_arrays(8, 3, 1, {0, 2}, require_design=True):
        out[t.matrix.array_str()] = search_crc(J83, t)
    return out


def test_j83_known_codes_found(j83_results):
    for con in (gp1_prime(8), gp3_family(8, 3), m2(8)):
        rep = check_crc(con.code)
        res = j83_results[rep.matrix.array_str()]
        assert canonical_form(con.code) in res.codes
        opp = opposite_code(con.code)
        assert canonical_form(opp) in j83_results[check_crc(opp).matrix.array_str()].codes


def test_search_soundness(j83_results):
    for key, res in j83_results.items():
        for c in res.codes:
            rep = check_crc(c)
            assert rep.is_crc and rep.matrix == res.target.matrix
            assert canonical_form(c) == c


def test_orbit_consistency(j83_results):
    rng = random.Random(7)
    for key, res in j83_results.items():
        for c in res.codes:
            for _ in range(3):
                img = permute(c, random_perm(8, rng))
                assert canonical_form(img) in res.codes
                assert is_isomorphic(img, c)


def test_isomorph_rejection_matches_labelled_search():
    t = make_target(8, 3, check_crc(m2(8).code).matrix)
    iso = search_crc(J83, t)
    lab = search_crc(J83, t, SearchOptions(isomorph_rejection=False))
    assert sorted({canonical_labels(c) for c in lab.codes}) == sorted(iso.orbit_counts)
    assert sum(iso.orbit_counts.values()) <= len(lab.codes)


def test_workers_and_checkpoint_are_deterministic(tmp_path):
    t = make_target(8, 3, check_crc(gp1_prime(8).code).matrix)
    base = search_crc(J83, t, SearchOptions(split_depth=3))
    par = search_crc(J83, t, SearchOptions(workers=2, split_depth=3))
    assert base.codes == par.codes
    ck = str(tmp_path / "run.ckpt")
    with pytest.raises(BudgetExhausted) as e:
        search_crc(J83, t, SearchOptions(checkpoint=ck, split_depth=3, budget=60))
    assert e.value.stats.nodes >= 60
    text = open(ck).read()
    assert text.startswith("jcrc-search-checkpoint 1\n")
    resumed = search_crc(J83, t, SearchOptions(checkpoint=ck, split_depth=3))
    assert resumed.codes == base.codes
    again = search_crc(J83, t, SearchOptions(checkpoint=ck, split_depth=3))
    assert again.codes == base.codes


def test_checkpoint_mismatch(tmp_path):
    a = make_target(8, 3, check_crc(gp1_prime(8).code).matrix)
    b = make_target(8, 3, check_crc(gp3_family(8, 3).code).matrix)
    ck = str(tmp_path / "x.ckpt")
    search_crc(J83, a, SearchOptions(checkpoint=ck))
    with pytest.raises(ParameterError):
        search_crc(J83, b, SearchOptions(checkpoint=ck))


def test_budget():
    t = make_target(8, 3, check_crc(m2(8).code).matrix)
    with pytest.raises(BudgetExhausted) as e:
        search_crc(J83, t, SearchOptions(budget=5))
    assert e.value.stats.nodes > 5
    with pytest.raises(ParameterError):
        SearchOptions(budget=0)


def test_wrong_graph():
    t = make_target(8, 3, check_crc(m2(8).code).matrix)
    with pytest.raises(ParameterError):
        search_crc(JohnsonParams(10, 3), t)


@pytest.mark.parametrize("p,counts", [(4, (4, 8)), (5, (6, 12))])
def test_refute_d_family(p, counts):
    r = refute_candidate(d_family(p, 3).code)
    assert not r.is_crc and r.cell == 2 and r.toward == 1
    assert (r.count, r.expected) == counts
    assert r.reference == subset([1, 2, p + 1, p + 2])


def test_refute_crc():
    assert refute_candidate(m2(8).code).is_crc
