import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hollowpoly.catalog import catalog
from hollowpoly.equivalence import (
    UnimodularAffineMap,
    are_equivalent,
    canonical_form,
    embeds_into,
)
from hollowpoly.lattice import random_unimodular_map
from hollowpoly.polytope import ResourceLimitError, hull, simplex_polytope

D3 = simplex_polytope(3)
EMPTY_TET = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])

pts3 = st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=4, max_size=9)


def test_shear_invariance():
    shear = UnimodularAffineMap(((1, 1, 0), (0, 1, 0), (0, 0, 1)), (0, 0, 0))
    assert canonical_form(D3) == canonical_form(D3.transform(shear))


def test_forms_distinguish_triangle_and_square():
    lawrence = hull([(0, 0), (1, 0), (0, 2), (1, 2)])
    assert canonical_form(simplex_polytope(2, 2)) != canonical_form(lawrence)


def test_rotated_two_delta2():
    rot = UnimodularAffineMap(((0, -1), (1, 0)), (2, 0))
    t = simplex_polytope(2, 2)
    f = are_equivalent(t, t.transform(rot))
    assert f is not None
    assert {f(v) for v in t.vertices} == set(t.transform(rot).vertices)


@pytest.mark.parametrize("i", range(1, 10))
def test_canonical_form_invariant_under_100_maps(i):
    p = catalog()[i]
    cf = canonical_form(p)
    rng = random.Random(i)
    for _ in range(100):
        q = p.transform(random_unimodular_map(3, rng))
        assert canonical_form(q) == cf


@settings(max_examples=40, deadline=None)
@given(pts3, st.integers(0, 10**6))
def test_witness_validated(pts, seed):
    p = hull(pts)
    q = p.transform(random_unimodular_map(3, random.Random(seed)))
    f = are_equivalent(p, q)
    assert f is not None
    assert {f(v) for v in p.vertices} == set(q.vertices)
    if p.affine_dim == 3:
        g = embeds_into(p, q)
        assert g is not None
        assert all(q.contains(g(v)) for v in p.vertices)


def test_equivalence_negative():
    assert are_equivalent(D3, simplex_polytope(3, 2)) is None
    assert are_equivalent(simplex_polytope(3, 3), catalog()[1]) is None


def test_mirror_of_empty_tetrahedron():
    other = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (-1, -1, -2)])
    f = are_equivalent(EMPTY_TET, other)
    if f is not None:
        assert {f(v) for v in EMPTY_TET.vertices} == set(other.vertices)
    # both are Vol-2 empty tetrahedra, and there is exactly one such class
    assert f is not None


def test_identical_gives_identity_like_witness():
    p = catalog()[7]
    f = are_equivalent(p, p)
    assert {f(v) for v in p.vertices} == set(p.vertices)


def test_canonical_text_has_invariant_header():
    text = canonical_form(catalog()[3]).to_text()
    head, *rows = text.strip().splitlines()
    assert head.startswith("# dim=3 vertices=4 vol=27 points=20 interior=0")
    assert len(rows) == 4


def test_vertex_guard():
    circle = hull([(x, y) for x in range(-6, 7) for y in range(-6, 7) if x * x + y * y <= 36])
    assert len(circle.vertices) > 4
    with pytest.raises(ResourceLimitError):
        canonical_form(circle, max_vertices=4)


def test_embedding_examples():
    for q in list(catalog().values()) + [simplex_polytope(3, 2)]:
        f = embeds_into(D3, q)
        assert f is not None and all(q.contains(f(v)) for v in D3.vertices)
    f = embeds_into(simplex_polytope(3, 2), simplex_polytope(3, 3))
    assert f is not None
    # Vol(P3) = 27 > Vol(P1) = 25
    assert embeds_into(simplex_polytope(3, 3), catalog()[1]) is None
    assert embeds_into(catalog()[1], catalog()[6]) is None


def test_embedding_transitive():
    a, b, c = D3, simplex_polytope(3, 2), simplex_polytope(3, 3)
    rng = random.Random(3)
    b2 = b.transform(random_unimodular_map(3, rng))
    c2 = c.transform(random_unimodular_map(3, rng))
    assert embeds_into(a, b2) and embeds_into(b2, c2) and embeds_into(a, c2)


def test_embedding_guard():
    with pytest.raises(ResourceLimitError):
        embeds_into(D3, simplex_polytope(3, 6), limit=0)


def test_embedding_with_large_coordinates():
    # cubic determinants exceed int64 here, so the object-dtype path runs
    q = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 10**6)])
    assert q.lattice_points.total == 4
    assert embeds_into(q, q) is not None
    assert embeds_into(D3, q) is None
