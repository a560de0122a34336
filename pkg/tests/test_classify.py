import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hollowpoly.catalog import CATALOG_VERTICES, catalog, check_entry
from hollowpoly.classify import (
    CAYLEY,
    EXCEPTIONAL,
    HAS_INTERIOR,
    PROJECTS,
    classify_3d,
    classify_polygon,
    is_cayley,
    is_two_delta2,
    lattice_width,
    projects_onto_2delta2,
)
from hollowpoly.equivalence import are_equivalent
from hollowpoly.lattice import random_unimodular_map
from hollowpoly.polytope import hull, simplex_polytope
from oracles import brute_projects, brute_width, dot, image_is_2delta2, is_surjective_pair

D3 = simplex_polytope(3)
PYRAMID = hull([(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 1)])
EMPTY_TET = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])

small3 = st.lists(st.tuples(*[st.integers(-5, 5)] * 3), min_size=4, max_size=8)


def test_width_examples():
    assert lattice_width(D3).width == 1
    assert lattice_width(simplex_polytope(3, 2)).width == 2 == brute_width(simplex_polytope(3, 2).vertices, 3)
    # brute force over [-10,10]^3 gives 3 for P1
    assert lattice_width(catalog()[1]).width == 3 == brute_width(catalog()[1].vertices)


def test_width_certificates_attain_width():
    for p in list(catalog().values()) + [D3, PYRAMID]:
        wr = lattice_width(p)
        assert list(wr.certificates) == sorted(wr.certificates)
        for y in wr.certificates:
            vals = [dot(y, v) for v in p.vertices]
            assert max(vals) - min(vals) == wr.width
            assert next(c for c in y if c) > 0


@settings(max_examples=60, deadline=None)
@given(small3)
def test_width_matches_brute_force(pts):
    p = hull(pts)
    if p.affine_dim == 3:
        assert lattice_width(p).width == brute_width(p.vertices)


@settings(max_examples=30, deadline=None)
@given(small3, st.integers(0, 10**6))
def test_width_invariant_and_certificates_transform(pts, seed):
    p = hull(pts)
    if p.affine_dim != 3:
        return
    f = random_unimodular_map(3, random.Random(seed))
    q = p.transform(f)
    wp, wq = lattice_width(p), lattice_width(q)
    assert wp.width == wq.width
    # pulling the certificates of q back through the linear part gives those of p
    back = set()
    for y in wq.certificates:
        z = tuple(sum(f.linear[i][j] * y[i] for i in range(3)) for j in range(3))
        back.add(z if next(c for c in z if c) > 0 else tuple(-c for c in z))
    assert back == set(wp.certificates)


def test_cayley_examples():
    cay = is_cayley(EMPTY_TET)
    assert cay is not None
    assert is_cayley(simplex_polytope(3, 2)) is None
    prism = hull([(x, y, z) for x, y in [(0, 0), (2, 0), (0, 2)] for z in (0, 1)])
    assert is_cayley(prism).certificate == (0, 0, 1)


@settings(max_examples=40, deadline=None)
@given(small3)
def test_cayley_iff_width_one(pts):
    p = hull(pts)
    if p.affine_dim != 3:
        return
    cay = is_cayley(p)
    assert (cay is not None) == (lattice_width(p).width == 1)
    if cay:
        # the two slabs rebuild p
        assert hull(list(cay.lower.vertices) + list(cay.upper.vertices)) == p
        levels = {dot(cay.certificate, v) for v in cay.lower.vertices}
        assert len(levels) == 1
        assert {dot(cay.certificate, v) for v in cay.upper.vertices} == {levels.pop() + 1}


def test_projection_examples():
    m = projects_onto_2delta2(simplex_polytope(3, 2))
    assert m is not None
    assert projects_onto_2delta2(catalog()[1]) is None
    assert projects_onto_2delta2(PYRAMID) is not None


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=4, max_size=7))
def test_projection_matches_brute_force(pts):
    p = hull(pts)
    if p.affine_dim != 3:
        return
    m = projects_onto_2delta2(p)
    if m is not None:
        assert is_surjective_pair(*m)
        assert image_is_2delta2([(dot(m[0], v), dot(m[1], v)) for v in p.vertices])
    assert (m is not None) == brute_projects(p.vertices)


def test_polygon_examples():
    assert classify_polygon(simplex_polytope(2, 2)).tag == "TwoDelta2"
    c = classify_polygon(hull([(0, 0), (1, 0), (0, 3), (1, 1)]))
    assert (c.tag, c.heights) == ("Lawrence", (3, 1))
    c = classify_polygon(simplex_polytope(2, 3))
    assert (c.tag, c.interior) == (HAS_INTERIOR, 1)
    # the same polygons embedded in a slanted plane of Z^3
    c = classify_polygon(hull([(0, 0, 0), (1, 0, 1), (0, 3, 3), (1, 1, 2)]))
    assert (c.tag, c.heights) == ("Lawrence", (3, 1))
    assert is_two_delta2(hull([(0, 0, 0), (2, 0, 2), (0, 2, 2)]))


@pytest.mark.parametrize("h1,h2", [(1, 0), (1, 1), (2, 0), (3, 1), (4, 4), (5, 2)])
def test_lawrence_parameters_recovered(h1, h2):
    rng = random.Random(h1 * 10 + h2)
    p = hull([(0, 0), (1, 0), (0, h1), (1, h2)])
    for _ in range(10):
        q = p.transform(random_unimodular_map(2, rng))
        c = classify_polygon(q)
        assert (c.tag, c.heights) == ("Lawrence", (h1, h2))


def test_classify_examples():
    assert classify_3d(D3).tag == CAYLEY
    assert classify_3d(simplex_polytope(3, 2)).tag == PROJECTS
    c = classify_3d(catalog()[7])
    assert c.tag == EXCEPTIONAL and 7 in c.containers
    assert classify_3d(simplex_polytope(3, 4)).tag == HAS_INTERIOR
    with pytest.raises(ValueError):
        classify_3d(hull([(0, 0, 0), (3, 0, 0), (0, 3, 0)]))


def test_classification_json():
    doc = classify_3d(catalog()[1]).to_json()
    assert set(doc) >= {"tag", "witness", "interior", "width", "containers"}
    assert doc["tag"] == EXCEPTIONAL and doc["containers"] == [1]
    json.dumps(doc)
    doc = classify_3d(EMPTY_TET).to_json()
    assert doc["tag"] == CAYLEY and len(doc["witness"]["slabs"]) == 2


def test_catalog_verbatim_and_sound():
    cat = catalog()
    assert set(cat) == set(range(1, 10))
    assert set(cat[3].vertices) == {(0, 0, 0), (3, 0, 0), (0, 3, 0), (0, 0, 3)}
    assert cat[6].volume == 36
    for i, p in cat.items():
        assert set(p.vertices) == set(CATALOG_VERTICES[i])
        facts = check_entry(p)
        assert facts["ok"], (i, facts)
    # the nine are pairwise inequivalent
    for i in cat:
        for j in cat:
            if i < j:
                assert are_equivalent(cat[i], cat[j]) is None


@pytest.mark.parametrize("i", [1, 3, 7, 8])
def test_classification_tag_invariant(i):
    p = catalog()[i]
    rng = random.Random(i)
    tags = {classify_3d(p.transform(random_unimodular_map(3, rng))).tag for _ in range(25)}
    assert tags == {EXCEPTIONAL}


@settings(max_examples=20, deadline=None)
@given(small3, st.integers(0, 10**6))
def test_classification_invariant_random(pts, seed):
    p = hull(pts)
    if p.affine_dim != 3:
        return
    q = p.transform(random_unimodular_map(3, random.Random(seed)))
    a, b = classify_3d(p), classify_3d(q)
    assert (a.tag, a.width, a.interior, a.containers) == (b.tag, b.width, b.interior, b.containers)


def test_width_with_large_coordinates():
    p = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2**40)])
    wr = lattice_width(p)
    assert wr.width == 1 and wr.certificates == ((0, 1, 0), (1, 0, 0))


def test_width_of_skewed_transform():
    # a skewed image whose dual search region once overflowed its box limit
    p = hull([(0, 0, 5), (0, 4, -5), (-4, -2, -4), (5, -4, -3)])
    q = p.transform(random_unimodular_map(3, random.Random(0)))
    assert lattice_width(p).width == lattice_width(q).width == 8 == brute_width(p.vertices)
