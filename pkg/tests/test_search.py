import itertools
import json

import pytest

from hollowpoly.catalog import catalog
from hollowpoly.classify import CAYLEY, EXCEPTIONAL, PROJECTS
from hollowpoly.equivalence import canonical_form, embeds_into
from hollowpoly.polytope import ResourceLimitError, degree, hull, is_empty_polytope, simplex_polytope
from hollowpoly.search import (
    SIMPLEX_FILTERS,
    _apex_admissible,
    CensusRecord,
    CensusStore,
    enumerate_polygons,
    enumerate_simplices,
    haase_ziegler_5d,
    haase_ziegler_simplex,
    hensley_apex_search,
    hollow_census,
    outer_candidates,
    projection_onto_2delta2,
    subpolytope_census,
    subsimplex_forms,
    verify_haase_ziegler,
)
from oracles import image_is_2delta2, is_surjective_pair, prime_simplex_classes

D3 = simplex_polytope(3)


def _by_volume(records):
    out = {}
    for r in records:
        out[r.canonical.invariants[2]] = out.get(r.canonical.invariants[2], 0) + 1
    return out


def test_unit_simplex_only():
    recs = enumerate_simplices(1)
    assert len(recs) == 1
    assert recs[0].classification.tag == CAYLEY


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_volume_counts_match_orbit_oracle(p):
    total, empty = prime_simplex_classes(p)
    assert _by_volume(enumerate_simplices(p, classify=False)).get(p) == total
    assert _by_volume(enumerate_simplices(p, SIMPLEX_FILTERS["empty"], classify=False)).get(p) == empty


def test_counts_monotone_in_volume():
    sizes = [len(enumerate_simplices(v, classify=False)) for v in range(1, 7)]
    assert sizes == sorted(sizes)


@pytest.mark.parametrize("name", ["empty", "hollow", "white"])
def test_records_satisfy_their_filter(name):
    filt = SIMPLEX_FILTERS[name]
    recs = enumerate_simplices(8, filt)
    assert recs
    for r in recs:
        p = r.polytope()
        assert filt(p)
        assert canonical_form(p) == r.canonical
    assert len({r.canonical.key() for r in recs}) == len(recs)


def test_volume_guard():
    with pytest.raises(ResourceLimitError):
        enumerate_simplices(41)
    with pytest.raises(ValueError):
        enumerate_simplices(0)


def test_parallel_matches_serial():
    a = enumerate_simplices(6, SIMPLEX_FILTERS["hollow"], jobs=1)
    b = enumerate_simplices(6, SIMPLEX_FILTERS["hollow"], jobs=2)
    assert [r.canonical.key() for r in a] == [r.canonical.key() for r in b]
    assert [r.classification for r in a] == [r.classification for r in b]


def test_store_dedups():
    store = CensusStore()
    cf = canonical_form(D3)
    assert store.add(CensusRecord(cf, None, "x"))
    assert not store.add(CensusRecord(canonical_form(hull([(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)])), None, "y"))
    assert len(store) == 1 and cf in store


def test_record_json():
    rec = enumerate_simplices(2)[1]
    doc = rec.to_json()
    assert doc["format"] == 1 and doc["invariants"]["vol"] == 2
    json.dumps(doc)


def test_outer_candidates_are_outside_and_close():
    p = simplex_polytope(3, 2)
    cands = outer_candidates(p, 1)
    assert cands and not any(p.contains(x) for x in cands)
    for x in cands:
        assert min(f.value(x) for f in p.facets) == -1
    assert set(cands) < set(outer_candidates(p, 2))


def test_polygons_up_to_volume_four():
    recs = enumerate_polygons(4)
    assert all(r.canonical.invariants[0] == 2 for r in recs)
    # brute force: all polygons with vertices in a 5x5 box, classified by form
    pts = list(itertools.product(range(5), repeat=2))
    forms = set()
    for tri in itertools.combinations(pts, 3):
        t = hull(tri)
        if t.affine_dim == 2 and t.volume <= 4:
            forms.add(canonical_form(t).key())
    for quad in itertools.combinations(pts, 4):
        q = hull(quad)
        if q.affine_dim == 2 and q.volume <= 4:
            forms.add(canonical_form(q).key())
    mine = {r.canonical.key() for r in recs}
    assert forms <= mine
    assert all(r.canonical.invariants[2] <= 4 for r in recs)


def test_census_of_unit_simplex():
    recs = subpolytope_census(D3)
    assert len(recs) == 1


def test_census_of_two_delta3():
    q = simplex_polytope(3, 2)
    recs = subpolytope_census(q)
    keys = {r.canonical.key() for r in recs}
    assert canonical_form(D3).key() in keys and canonical_form(q).key() in keys
    for r in recs:
        assert embeds_into(r.polytope(), q) is not None
    # every 4-subset simplex appears among the census
    brute = set()
    for quad in itertools.combinations(q.lattice_points.points, 4):
        s = hull(quad)
        if s.affine_dim == 3:
            brute.add(canonical_form(s).key())
    assert brute == {cf.key() for cf in subsimplex_forms(q)}
    assert brute <= keys


def test_census_point_guard():
    with pytest.raises(ResourceLimitError):
        subpolytope_census(simplex_polytope(3, 4), point_limit=20)


def test_census_descent_agrees_with_subsets_on_p1():
    q = catalog()[1]
    recs = subpolytope_census(q, classify=False)
    simplices = {r.canonical.key() for r in recs if r.canonical.invariants[1] == 4}
    assert simplices == {cf.key() for cf in subsimplex_forms(q)}


def test_apex_example_admissible():
    p = hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1)])
    assert _apex_admissible(p, (0, 0, 1))
    tall = hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 2)])
    assert not _apex_admissible(tall, (0, 0, 1))


def test_apex_search_bound():
    rep = hensley_apex_search(8)
    assert rep.extremal["max_apex_height"] < 7
    assert rep.anomalies == []
    assert rep.counts["admissible"] == sum(rep.details["admissible_per_height"].values())
    with pytest.raises(ValueError):
        hensley_apex_search(6)


def test_haase_ziegler_family():
    assert is_empty_polytope(haase_ziegler_simplex(7))
    assert not is_empty_polytope(haase_ziegler_simplex(8))
    five = haase_ziegler_5d()
    assert five.lattice_points.total == 6 == len(five.vertices)
    m = projection_onto_2delta2(five)
    assert m is not None and is_surjective_pair(*m)
    assert image_is_2delta2([(sum(a * b for a, b in zip(m[0], v)), sum(a * b for a, b in zip(m[1], v))) for v in five.vertices])


def test_haase_ziegler_report():
    rep = verify_haase_ziegler(7, 20)
    assert rep.anomalies == []
    assert rep.counts["empty"] == sum(1 for k in range(7, 21) if k % 2 and k % 3)
    with pytest.raises(ResourceLimitError):
        verify_haase_ziegler(7, 500)


def test_hollow_census_small():
    recs = hollow_census(5)
    assert all(r.canonical.invariants[4] == 0 for r in recs)
    assert all(r.canonical.invariants[3] <= 5 for r in recs)
    keys = {r.canonical.key() for r in recs}
    # hollow five-point circuits built on the unit triangle
    for x in range(-2, 3):
        for y in range(-2, 3):
            q = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, -1), (1, x, y)])
            if q.affine_dim == 3 and q.lattice_points.total == 5 and q.lattice_points.interior == 0:
                assert canonical_form(q).key() in keys


def test_degree_corollary_on_census():
    recs = hollow_census(6)
    for r in recs:
        p = r.polytope()
        if degree(p) <= 1:
            assert r.classification.tag in (CAYLEY, PROJECTS)
        assert r.classification.tag != EXCEPTIONAL or r.classification.containers
