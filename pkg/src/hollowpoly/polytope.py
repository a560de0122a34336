"""Exact lattice polytopes.

A :class:`Polytope` keeps its vertices in ambient coordinates and its facet
inequalities in the coordinates of an :class:`~hollowpoly.lattice.AffineChart`
of its affine hull.  For full-dimensional polytopes the chart is the identity,
so facets are ordinary inequalities ``<normal, x> >= offset`` on ``Z^n``.
Lower-dimensional polytopes (facets of 3-polytopes, slices, segments) get a
lattice basis of their affine hull, which makes 2D routines such as Pick's
identity apply to polygons sitting in ``Z^3``.  "Interior" always means
relative interior.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .lattice import (
    AffineChart,
    IntPoint,
    affine_chart,
    affine_rank,
    as_point,
    det,
    dot,
    primitive_part,
    rank,
    sub,
)

DEFAULT_BOX_LIMIT = 10**8
_INT64_SAFE = 2**62


def int_dtype(max_abs: int):
    """``np.int64`` if values of size ``max_abs`` are safe, else Python-int objects."""
    return np.int64 if max_abs < _INT64_SAFE else object


class ResourceLimitError(RuntimeError):
    """A configured search or enumeration bound would be exceeded."""


@dataclass(frozen=True, order=True)
class Facet:
    """Inequality ``<normal, y> >= offset`` in chart coordinates.

    ``normal`` is primitive and points inward.  ``vertices`` indexes into the
    owning polytope's vertex tuple.
    """

    normal: IntPoint
    offset: int
    vertices: tuple[int, ...]

    def value(self, y: Sequence[int]) -> int:
        return dot(self.normal, y) - self.offset


@dataclass(frozen=True)
class LatticePointSet:
    points: tuple[IntPoint, ...]
    interior_points: tuple[IntPoint, ...]

    @property
    def total(self) -> int:
        return len(self.points)

    @property
    def interior(self) -> int:
        return len(self.interior_points)

    @property
    def boundary(self) -> int:
        return self.total - self.interior


# ---------------------------------------------------------------------------
# hull


def _plane(points: Sequence[IntPoint], ref: IntPoint, ref_scale: int) -> tuple[IntPoint, int]:
    """Primitive inward hyperplane through ``k`` affinely independent points of Z^k.

    ``ref / ref_scale`` must be a point strictly inside.
    """
    k = len(points[0])
    p0 = points[0]
    rows = [sub(q, p0) for q in points[1:]]
    normal = []
    for j in range(k):
        minor = [r[:j] + r[j + 1:] for r in rows]
        normal.append((-1) ** j * det(minor))
    normal, _ = primitive_part(normal)
    offset = dot(normal, p0)
    side = dot(normal, ref) - ref_scale * offset
    if side == 0:
        raise ArithmeticError("reference point lies on a hull plane")
    if side < 0:
        normal = tuple(-x for x in normal)
        offset = -offset
    return normal, offset


def _independent_subset(pts: Sequence[IntPoint], size: int) -> list[IntPoint]:
    chosen = [pts[0]]
    rows: list[IntPoint] = []
    for q in pts[1:]:
        d = sub(q, pts[0])
        if rank(rows + [d]) > len(rows):
            rows.append(d)
            chosen.append(q)
            if len(chosen) == size:
                break
    return chosen


class _HullFacet:
    __slots__ = ("normal", "offset", "pts")

    def __init__(self, normal, offset, pts):
        self.normal = normal
        self.offset = offset
        self.pts = pts


def _hull_full(pts: Sequence[IntPoint], k: int) -> tuple[list[int], list[tuple[IntPoint, int, frozenset]]]:
    """Beneath-beyond hull of points spanning Z^k (k >= 1).

    Returns vertex indices and facets as ``(normal, offset, vertex index set)``.
    """
    if k == 1:
        vals = [p[0] for p in pts]
        lo = min(range(len(pts)), key=vals.__getitem__)
        hi = max(range(len(pts)), key=vals.__getitem__)
        return sorted({lo, hi}), [((1,), vals[lo], frozenset([lo])), ((-1,), -vals[hi], frozenset([hi]))]

    # initial simplex
    simplex = [0]
    rows: list[IntPoint] = []
    for i in range(1, len(pts)):
        d = sub(pts[i], pts[0])
        if rank(rows + [d]) > len(rows):
            rows.append(d)
            simplex.append(i)
            if len(simplex) == k + 1:
                break
    ref = tuple(sum(pts[i][j] for i in simplex) for j in range(k))
    scale = k + 1
    facets = []
    for omit in simplex:
        on = [i for i in simplex if i != omit]
        n, off = _plane([pts[i] for i in on], ref, scale)
        facets.append(_HullFacet(n, off, set(on)))
    kept = list(simplex)
    in_simplex = set(simplex)

    for idx in range(len(pts)):
        if idx in in_simplex:
            continue
        p = pts[idx]
        vals = [dot(f.normal, p) - f.offset for f in facets]
        if min(vals) >= 0:
            continue
        kept.append(idx)
        visible = [f for f, v in zip(facets, vals) if v < 0]
        others = [f for f, v in zip(facets, vals) if v >= 0]
        for f, v in zip(facets, vals):
            if v == 0:
                f.pts.add(idx)
        keys = {(f.normal, f.offset) for f in others}
        created = {}
        for f in visible:
            for g in others:
                ridge = f.pts & g.pts
                if len(ridge) < k - 1:
                    continue
                ridge_pts = [pts[i] for i in sorted(ridge)]
                if k > 3 and affine_rank(ridge_pts) != k - 2:
                    continue
                basis = _independent_subset(ridge_pts, k - 1) if k > 2 else ridge_pts[:1]
                n, off = _plane(basis + [p], ref, scale)
                key = (n, off)
                if key in keys or key in created:
                    continue
                created[key] = {i for i in kept if dot(n, pts[i]) == off}
        facets = others + [_HullFacet(n, off, on) for (n, off), on in created.items()]

    vertices = []
    for i in kept:
        normals = [f.normal for f in facets if i in f.pts]
        if len(normals) >= k and rank(normals) == k:
            vertices.append(i)
    vset = set(vertices)
    out = [(f.normal, f.offset, frozenset(f.pts & vset)) for f in facets]
    return sorted(vertices), out


class Polytope:
    """A lattice polytope given by its vertices, with exact facet data.

    Build instances with :func:`hull`.  Instances are immutable; derived data
    (lattice points, faces, volume) is cached on first use.
    """

    def __init__(self, vertices: tuple[IntPoint, ...], chart: AffineChart, facets: tuple[Facet, ...]):
        self.vertices = vertices
        self.chart = chart
        self.facets = facets

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def affine_dim(self) -> int:
        return self.chart.dim

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.ambient_dim

    @cached_property
    def local_vertices(self) -> tuple[IntPoint, ...]:
        return tuple(self.chart.to_local(v) for v in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Polytope(dim={self.affine_dim}, vertices={list(map(list, self.vertices))})"

    def contains(self, x: Sequence[int]) -> bool:
        if not self.chart.contains(x):
            return False
        y = self.chart.to_local(x)
        return all(f.value(y) >= 0 for f in self.facets)

    def transform(self, f) -> "Polytope":
        """Image under a :class:`~hollowpoly.lattice.UnimodularAffineMap`."""
        return hull([f.apply(v) for v in self.vertices])

    @cached_property
    def lattice_points(self) -> LatticePointSet:
        return lattice_points(self)

    @cached_property
    def faces(self) -> dict[int, frozenset[frozenset[int]]]:
        """Faces by dimension, each face a set of vertex indices."""
        k = self.affine_dim
        everything = frozenset(range(len(self.vertices)))
        levels: dict[int, set] = {k: {everything}}
        if k == 0:
            return {0: frozenset({everything})}
        fsets = [frozenset(f.vertices) for f in self.facets]
        levels[k - 1] = set(fsets)
        for d in range(k - 1, 0, -1):
            nxt = set()
            for s in levels[d]:
                nxt.update(_subfacets(s, fsets))
            levels[d - 1] = nxt
        return {d: frozenset(v) for d, v in levels.items()}

    @cached_property
    def volume(self) -> int:
        return normalized_volume(self)


def _subfacets(face: frozenset, facet_sets: Sequence[frozenset]) -> list[frozenset]:
    cands = {face & g for g in facet_sets}
    cands.discard(face)
    cands.discard(frozenset())
    return [c for c in cands if not any(c < o for o in cands)]


def hull(points: Iterable[Sequence[int]]) -> Polytope:
    """Convex hull of lattice points, with vertices sorted lexicographically."""
    pts = sorted({as_point(p) for p in points})
    if not pts:
        raise ValueError("hull of an empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points of mixed dimension")
    chart = affine_chart(pts)
    k = chart.dim
    if k == 0:
        return Polytope((pts[0],), chart, ())
    local = [chart.to_local(p) for p in pts]
    vidx, raw = _hull_full(local, k)
    vertices = tuple(pts[i] for i in vidx)
    remap = {old: new for new, old in enumerate(vidx)}
    facets = sorted(
        Facet(normal, offset, tuple(sorted(remap[i] for i in on))) for normal, offset, on in raw
    )
    return Polytope(vertices, chart, tuple(facets))


def simplex_polytope(n: int, k: int = 1) -> Polytope:
    """``k * Delta_n = conv(0, k e_1, ..., k e_n)``."""
    pts = [(0,) * n] + [tuple(k * int(i == j) for j in range(n)) for i in range(n)]
    return hull(pts)


# ---------------------------------------------------------------------------
# lattice points


def _dtype_for(A: np.ndarray | list, b, lo, hi):
    amax = max((abs(int(x)) for row in A for x in row), default=0)
    bmax = max((abs(int(x)) for x in b), default=0)
    xmax = max((abs(int(x)) for x in list(lo) + list(hi)), default=0)
    k = len(lo)
    if amax * xmax * (k + 1) + bmax + xmax < _INT64_SAFE:
        return np.int64
    return object


def scan_box(normals, offsets, lo, hi, *, limit: int = DEFAULT_BOX_LIMIT, points: bool = True):
    """Lattice points of ``{y : normals @ y >= offsets}`` inside a box.

    The box is scanned along all axes but the longest; along that axis the
    feasible range is solved exactly with integer floor/ceil division.
    Returns an array of points (``points=True``) or their count.  Falls back to
    Python-int object arrays when int64 could overflow.
    """
    k = len(lo)
    box = 1
    for a, b in zip(lo, hi):
        box *= max(0, b - a + 1)
    if box > limit:
        raise ResourceLimitError(f"bounding box holds {box} points, limit is {limit}")
    dtype = _dtype_for(normals, offsets, lo, hi)
    if k == 0:
        ok = all(o <= 0 for o in offsets)
        return np.zeros((int(ok), 0), dtype=dtype) if points else int(ok)
    if box == 0:
        return np.zeros((0, k), dtype=dtype) if points else 0
    axis = max(range(k), key=lambda i: hi[i] - lo[i])
    others = [i for i in range(k) if i != axis]
    A = np.array(normals, dtype=dtype).reshape(len(normals), k)
    b = np.array(offsets, dtype=dtype)
    if others:
        ranges = [np.arange(lo[i], hi[i] + 1, dtype=np.int64).astype(dtype) for i in others]
        mesh = np.meshgrid(*ranges, indexing="ij")
        G = np.stack([m.ravel() for m in mesh], axis=1)
    else:
        G = np.zeros((1, 0), dtype=dtype)
    M = G.shape[0]
    a = A[:, axis]
    c = b[None, :] - G @ A[:, others].T if others else np.repeat(b[None, :], M, axis=0)
    lower = np.full(M, lo[axis], dtype=dtype)
    upper = np.full(M, hi[axis], dtype=dtype)
    ok = np.ones(M, dtype=bool)
    pos = a > 0
    neg = a < 0
    zero = ~(pos | neg)
    if pos.any():
        ceil = -((-c[:, pos]) // a[pos])
        lower = np.maximum(lower, ceil.max(axis=1))
    if neg.any():
        floor = (-c[:, neg]) // (-a[neg])
        upper = np.minimum(upper, floor.min(axis=1))
    if zero.any():
        ok &= (c[:, zero] <= 0).all(axis=1)
    cnt = np.where(ok, np.maximum(upper - lower + 1, 0), 0).astype(np.int64)
    if not points:
        return int(cnt.sum())
    total = int(cnt.sum())
    out = np.empty((total, k), dtype=dtype)
    if total == 0:
        return out
    rows = np.repeat(np.arange(M), cnt)
    starts = np.cumsum(cnt) - cnt
    step = np.arange(total) - np.repeat(starts, cnt)
    out[:, axis] = lower[rows] + step
    for j, i in enumerate(others):
        out[:, i] = G[rows, j]
    return out


def _local_box(p: Polytope, factor: int = 1):
    lv = p.local_vertices
    k = p.affine_dim
    lo = [factor * min(v[j] for v in lv) for j in range(k)]
    hi = [factor * max(v[j] for v in lv) for j in range(k)]
    return lo, hi


def lattice_points(p: Polytope, limit: int = DEFAULT_BOX_LIMIT) -> LatticePointSet:
    """All lattice points of ``p`` and those in its relative interior."""
    if p.affine_dim == 0:
        return LatticePointSet(p.vertices, p.vertices)
    lo, hi = _local_box(p)
    normals = [f.normal for f in p.facets]
    offsets = [f.offset for f in p.facets]
    pts = scan_box(normals, offsets, lo, hi, limit=limit)
    inner = scan_box(normals, [o + 1 for o in offsets], lo, hi, limit=limit)
    to_amb = p.chart.from_local
    allp = tuple(sorted(to_amb(tuple(int(x) for x in row)) for row in pts))
    inn = tuple(sorted(to_amb(tuple(int(x) for x in row)) for row in inner))
    return LatticePointSet(allp, inn)


def facet_point_counts(p: Polytope) -> list[int]:
    """Number of lattice points on each facet, in facet order."""
    pts = [p.chart.to_local(x) for x in p.lattice_points.points]
    return [sum(1 for y in pts if f.value(y) == 0) for f in p.facets]


# ---------------------------------------------------------------------------
# volume and faces


def triangulate(p: Polytope) -> list[tuple[int, ...]]:
    """Fan triangulation as tuples of vertex indices.

    Coned from the first vertex over a recursive fan triangulation of the
    facets that miss it.
    """
    k = p.affine_dim
    fsets = [frozenset(f.vertices) for f in p.facets]

    def fan(face: frozenset, d: int) -> list[tuple[int, ...]]:
        if d == 0:
            return [tuple(face)]
        if d == 1:
            return [tuple(sorted(face))]
        apex = min(face)
        out = []
        for sub_face in sorted(_subfacets(face, fsets), key=sorted):
            if apex in sub_face:
                continue
            out.extend((apex,) + s for s in fan(sub_face, d - 1))
        return out

    return fan(frozenset(range(len(p.vertices))), k)


def simplex_volume(local_pts: Sequence[IntPoint]) -> int:
    p0 = local_pts[0]
    return abs(det([sub(q, p0) for q in local_pts[1:]]))


def normalized_volume(p: Polytope) -> int:
    """``k! * vol`` in the lattice of the affine hull (``k`` = affine dim).

    A point has volume 1, a segment its lattice length.
    """
    if p.affine_dim == 0:
        return 1
    lv = p.local_vertices
    return sum(simplex_volume([lv[i] for i in s]) for s in triangulate(p))


def edges(p: Polytope) -> list[tuple[tuple[IntPoint, IntPoint], int]]:
    """Edges as ``((u, v), lattice_length)`` with ``u < v``."""
    if p.affine_dim < 1:
        return []
    out = []
    for e in sorted(p.faces[1], key=sorted):
        i, j = sorted(e)
        u, v = p.vertices[i], p.vertices[j]
        out.append(((u, v), primitive_part(sub(v, u))[1]))
    return out


def dilate(p: Polytope, k: int) -> Polytope:
    if k < 1:
        raise ValueError("dilation factor must be positive")
    return hull([tuple(k * x for x in v) for v in p.vertices])


def degree(p: Polytope, limit: int = DEFAULT_BOX_LIMIT) -> int:
    """Largest ``d`` with a lattice point interior to ``(n + 1 - d) p``.

    ``n`` is the affine dimension; the computation takes place in the affine
    hull's lattice.  Returns 0 when only ``(n + 1) p`` has interior points.
    """
    n = p.affine_dim
    if n == 0:
        return 0
    for k in range(1, n + 2):
        if interior_count(p, k, limit) > 0:
            return n + 1 - k
    raise ArithmeticError("(n+1)P has no interior lattice point")  # impossible for lattice polytopes


def interior_count(p: Polytope, factor: int = 1, limit: int = DEFAULT_BOX_LIMIT) -> int:
    """Number of lattice points in the relative interior of ``factor * p``."""
    if p.affine_dim == 0:
        return 1
    # Chart coordinates of factor * p are factor * (chart coordinates of p):
    # factor * base is a lattice point and the chart basis is saturated.
    lo, hi = _local_box(p, factor)
    return scan_box(
        [f.normal for f in p.facets],
        [factor * f.offset + 1 for f in p.facets],
        lo,
        hi,
        limit=limit,
        points=False,
    )


def pick_identity_holds(f: Polytope) -> bool:
    """Check ``Vol(F) == |F ∩ Z^2| + |F° ∩ Z^2| - 2`` for a polygon."""
    if f.affine_dim != 2:
        raise ValueError("Pick's identity needs a 2-dimensional polytope")
    lp = f.lattice_points
    return normalized_volume(f) == lp.total + lp.interior - 2


def is_white(p: Polytope) -> bool:
    """All lattice points of ``p`` lie on its edges."""
    on_edges = set()
    for (u, v), length in edges(p):
        step, _ = primitive_part(sub(v, u))
        for t in range(length + 1):
            on_edges.add(tuple(a + t * s for a, s in zip(u, step)))
    on_edges.update(p.vertices)
    return all(x in on_edges for x in p.lattice_points.points)


def is_empty_polytope(p: Polytope) -> bool:
    """The only lattice points of ``p`` are its vertices."""
    return p.lattice_points.total == len(p.vertices)
