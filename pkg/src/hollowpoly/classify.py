"""Lattice width, Cayley and 2Δ2-projection detection, and the trichotomy.

A hollow lattice 3-polytope is Cayley (lattice width 1), projects onto
``2Δ2``, or is one of finitely many exceptional classes.  The classes
overlap; :func:`classify_3d` reports Cayley first and
:func:`projects_onto_2delta2` can always be asked separately.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .catalog import catalog
from .equivalence import _adjugate, canonical_form, embeds_into
from .lattice import IntMatrix, IntPoint, det, dot, matvec, sub
from .polytope import Polytope, hull, int_dtype, scan_box, simplex_polytope

DUAL_BOX_LIMIT = 20_000_000

HAS_INTERIOR = "HasInteriorPoints"
CAYLEY = "Cayley"
PROJECTS = "ProjectsTo2Delta2"
EXCEPTIONAL = "Exceptional"


@dataclass(frozen=True)
class WidthResult:
    """Minimal spread and every primitive functional attaining it.

    Functionals are sign-normalized (first nonzero entry positive) since
    ``y`` and ``-y`` describe the same strip; they are sorted.
    """

    width: int
    certificates: tuple[IntPoint, ...]


def _sign_normal(y: Sequence[int]) -> IntPoint:
    for c in y:
        if c:
            return tuple(y) if c > 0 else tuple(-x for x in y)
    return tuple(y)


def spread(vertices: Sequence[Sequence[int]], y: Sequence[int]) -> int:
    vals = [dot(y, v) for v in vertices]
    return max(vals) - min(vals)


def _dual_box(diffs: Sequence[IntPoint], bound: int, n: int) -> list[int]:
    """Per-coordinate bounds of ``{y : |<y, d>| <= bound for all d}``.

    The set is a centrally symmetric rational polytope; its vertices solve
    ``n`` of the constraints with equality.  All arithmetic is integral:
    a vertex is ``adj(D) (bound * s) / det(D)``.
    """
    box = [0] * n
    for sub_rows in itertools.combinations(diffs, n):
        d = det(sub_rows)
        if d == 0:
            continue
        adj = _adjugate([list(r) for r in sub_rows])
        ad = abs(d)
        for signs in itertools.product((1, -1), repeat=n - 1):
            s = (bound,) + tuple(bound * x for x in signs)
            y = [sum(adj[j][k] * s[k] for k in range(n)) for j in range(n)]
            if all(abs(dot(y, e)) <= bound * ad for e in diffs):
                for j in range(n):
                    box[j] = max(box[j], abs(y[j]) // ad)
    return box


def _reduced_frame(verts: Sequence[IntPoint]) -> tuple[IntMatrix, list[IntPoint]]:
    """Unimodular ``u`` and the vertices ``u (v - v_0)`` in an LLL-reduced frame.

    ``u`` LLL-reduces the coordinate columns of the difference matrix, so the
    region of functionals with small spread is close to a box in the new
    coordinates and its bounding box stays small however skewed the input is.
    """
    n = len(verts[0])
    diffs = [sub(v, verts[0]) for v in verts[1:]]
    cols = DomainMatrix([[ZZ(d[j]) for d in diffs] for j in range(n)], (n, len(diffs)), ZZ)
    _, t = cols.lll_transform()
    u = tuple(tuple(int(x) for x in row) for row in t.to_list())
    return u, [(0,) * n] + [matvec(u, c) for c in diffs]


def functionals_up_to(p: Polytope, bound: int, limit: int = DUAL_BOX_LIMIT) -> list[tuple[IntPoint, int]]:
    """All primitive sign-normalized ``y`` with spread at most ``bound`` on ``p``.

    Returns ``(y, spread)`` pairs sorted by spread, then lexicographically.
    The search runs in a reduced frame; a functional ``z`` there is
    ``y = z u`` on the original coordinates.
    """
    if not p.is_full_dimensional:
        raise ValueError("lattice width needs a full-dimensional polytope")
    n = p.ambient_dim
    u, verts = _reduced_frame(p.vertices)
    diffs = sorted(set(verts[1:]))
    box = _dual_box(diffs, bound, n)
    normals = [d for d in diffs] + [tuple(-x for x in d) for d in diffs]
    Y = scan_box(normals, [-bound] * len(normals), [-b for b in box], box, limit=limit)
    if len(Y) == 0:
        return []
    ymax = max(abs(int(x)) for row in Y for x in row)
    vmax = max(abs(x) for v in verts for x in v)
    dtype = int_dtype(2 * n * ymax * vmax)
    Y = np.asarray(Y).astype(dtype)
    # keep one of z, -z: first nonzero coordinate positive
    first = np.argmax(Y != 0, axis=1)
    Y = Y[Y[np.arange(len(Y)), first] > 0]
    V = np.array(verts, dtype=dtype)
    vals = Y @ V.T
    w = vals.max(axis=1) - vals.min(axis=1)
    keep = (w <= bound) & (np.gcd.reduce(np.abs(Y), axis=1) == 1)
    out = []
    for z, s in zip(Y[keep], w[keep]):
        y = tuple(sum(int(z[k]) * u[k][j] for k in range(n)) for j in range(n))
        out.append((_sign_normal(y), int(s)))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def lattice_width(p: Polytope) -> WidthResult:
    """Exact lattice width with all minimizing functionals."""
    n = p.ambient_dim
    if not p.is_full_dimensional:
        raise ValueError("lattice width needs a full-dimensional polytope")
    _, verts = _reduced_frame(p.vertices)
    # cheap upper bound from small functionals in the reduced frame
    bound = min(
        spread(verts, y)
        for y in itertools.product((-1, 0, 1), repeat=n)
        if any(y)
    )
    while True:
        found = functionals_up_to(p, bound)
        best = found[0][1]
        if best == bound:
            return WidthResult(best, tuple(y for y, s in found if s == best))
        bound = best


class CayleyDecomposition(NamedTuple):
    certificate: IntPoint
    lower: Polytope
    upper: Polytope


def is_cayley(p: Polytope) -> CayleyDecomposition | None:
    """Width-1 certificate and the two slices it cuts, or ``None``."""
    wr = lattice_width(p)
    if wr.width != 1:
        return None
    y = wr.certificates[0]
    vals = [dot(y, v) for v in p.vertices]
    lo = min(vals)
    lower = hull([v for v, h in zip(p.vertices, vals) if h == lo])
    upper = hull([v for v, h in zip(p.vertices, vals) if h == lo + 1])
    return CayleyDecomposition(y, lower, upper)


@lru_cache(maxsize=None)
def _two_delta2_form():
    return canonical_form(simplex_polytope(2, 2))


def is_two_delta2(f: Polytope) -> bool:
    """Whether a polygon (in any ambient lattice) is equivalent to ``2Δ2``."""
    if f.affine_dim != 2 or len(f.vertices) != 3 or f.volume != 4:
        return False
    local = hull(f.local_vertices)
    return canonical_form(local) == _two_delta2_form()


def _surjective(rows: Sequence[Sequence[int]]) -> bool:
    n = len(rows[0])
    g = 0
    for i, j in itertools.combinations(range(n), 2):
        g = math.gcd(g, rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i])
        if g == 1:
            return True
    return g == 1


def projects_onto_2delta2(p: Polytope) -> IntMatrix | None:
    """A surjective lattice map ``Z^n -> Z^2`` sending ``p`` onto ``2Δ2``.

    Any such map, followed by a normalization of the image to
    ``conv(0, 2e1, 2e2)``, has two rows of spread exactly 2 on ``p``, so
    searching pairs of spread-2 functionals is complete.
    """
    cands = [y for y, s in functionals_up_to(p, 2) if s == 2]
    verts = p.vertices
    images = {y: [dot(y, v) for v in verts] for y in cands}
    for y1, y2 in itertools.combinations(cands, 2):
        if not _surjective((y1, y2)):
            continue
        pts = set(zip(images[y1], images[y2]))
        if len(pts) < 3:
            continue
        img = hull(pts)
        if img.affine_dim == 2 and is_two_delta2(img):
            return (y1, y2)
    return None


@dataclass(frozen=True)
class PolygonClass:
    """``HasInteriorPoints`` / ``TwoDelta2`` / ``Lawrence`` with ``h1 >= h2``."""

    tag: str
    interior: int = 0
    heights: tuple[int, int] | None = None


def classify_polygon(f: Polytope) -> PolygonClass:
    if f.affine_dim != 2:
        raise ValueError("classify_polygon needs a 2-dimensional polytope")
    g = hull(f.local_vertices)
    inner = g.lattice_points.interior
    if inner:
        return PolygonClass(HAS_INTERIOR, interior=inner)
    if is_two_delta2(g):
        return PolygonClass("TwoDelta2")
    wr = lattice_width(g)
    if wr.width != 1:
        raise ArithmeticError(f"hollow polygon of width {wr.width} that is not 2Δ2: {f!r}")
    y = wr.certificates[0]
    vals = [dot(y, v) for v in g.vertices]
    lo = min(vals)
    lengths = []
    for level in (lo, lo + 1):
        side = [v for v, h in zip(g.vertices, vals) if h == level]
        lengths.append(hull(side).volume if len(side) > 1 else 0)
    h1, h2 = max(lengths), min(lengths)
    return PolygonClass("Lawrence", heights=(h1, h2))


@dataclass(frozen=True)
class Classification:
    """Outcome of the trichotomy, with its witness."""

    tag: str
    interior: int
    width: int
    certificate: IntPoint | None = None
    slabs: tuple[Polytope, Polytope] | None = field(default=None, compare=False)
    projection: IntMatrix | None = None
    containers: tuple[int, ...] = ()

    def to_json(self) -> dict:
        witness: dict = {}
        if self.tag == HAS_INTERIOR:
            witness = {"interior_points": self.interior}
        elif self.tag == CAYLEY:
            witness = {
                "certificate": list(self.certificate),
                "slabs": [[list(v) for v in s.vertices] for s in self.slabs],
            }
        elif self.tag == PROJECTS:
            witness = {"projection": [list(r) for r in self.projection]}
        elif self.tag == EXCEPTIONAL:
            witness = {"containers": list(self.containers)}
        return {
            "format": 1,
            "tag": self.tag,
            "witness": witness,
            "interior": self.interior,
            "width": self.width,
            "containers": list(self.containers),
        }


def exceptional_containers(p: Polytope) -> tuple[int, ...]:
    """Catalog indices ``i`` such that ``p`` embeds into ``P_i``."""
    return tuple(i for i, q in catalog().items() if embeds_into(p, q) is not None)


def classify_3d(p: Polytope) -> Classification:
    """Trichotomy for a full-dimensional lattice polytope in ``Z^3``."""
    if p.ambient_dim != 3 or p.affine_dim != 3:
        raise ValueError("classify_3d needs a 3-dimensional polytope in Z^3")
    inner = p.lattice_points.interior
    wr = lattice_width(p)
    if inner:
        return Classification(HAS_INTERIOR, inner, wr.width)
    cay = is_cayley(p)
    if cay is not None:
        return Classification(CAYLEY, 0, 1, certificate=cay.certificate, slabs=(cay.lower, cay.upper))
    proj = projects_onto_2delta2(p)
    if proj is not None:
        return Classification(PROJECTS, 0, wr.width, projection=proj)
    return Classification(EXCEPTIONAL, 0, wr.width, containers=exceptional_containers(p))
