"""Affine unimodular canonical forms, equivalence witnesses and embeddings.

The canonical form of a polytope is the lexicographically smallest matrix
obtained by choosing a vertex order ``v_0, ..., v_{m-1}``, translating
``v_0`` to the origin and bringing the differences ``v_i - v_0`` (as columns)
into row-style Hermite normal form.  Because the leading columns of that
normal form depend only on the leading columns of the input, the minimum can
be found vertex by vertex, keeping every partial order that ties for the
smallest column so far.  Only orders that list vertices by nondecreasing
vertex invariant are considered, which is itself an invariant restriction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattice import (
    IntMatrix,
    IntPoint,
    UnimodularAffineMap,
    _xgcd,
    det,
    dot,
    identity,
    matvec,
    primitive_part,
    scale,
    sub,
)
from .polytope import Polytope, ResourceLimitError, facet_point_counts, hull, int_dtype

MAX_CANONICAL_VERTICES = 16
DEFAULT_TUPLE_LIMIT = 5_000_000


@dataclass(frozen=True)
class CanonicalForm:
    """Vertex rows in canonical coordinates plus the invariant vector.

    ``invariants`` is ``(affine_dim, vertex count, Vol, lattice points,
    interior points, sorted facet lattice-point counts)``.
    """

    matrix: IntMatrix
    invariants: tuple
    to_canonical: UnimodularAffineMap = field(compare=False, hash=False, repr=False)

    def polytope(self) -> Polytope:
        return hull(self.matrix)

    def to_text(self) -> str:
        inv = self.invariants
        head = (
            f"# dim={inv[0]} vertices={inv[1]} vol={inv[2]} points={inv[3]} "
            f"interior={inv[4]} facet_points={list(inv[5])}"
        )
        return "\n".join([head] + [" ".join(map(str, r)) for r in self.matrix]) + "\n"

    def key(self) -> tuple:
        return (self.invariants, self.matrix)


def invariant_vector(p: Polytope) -> tuple:
    lp = p.lattice_points
    return (
        p.affine_dim,
        len(p.vertices),
        p.volume,
        lp.total,
        lp.interior,
        tuple(sorted(facet_point_counts(p))),
    )


def _vertex_keys(p: Polytope) -> list[tuple]:
    m = len(p.vertices)
    nfacets = [0] * m
    for f in p.facets:
        for i in f.vertices:
            nfacets[i] += 1
    lengths: list[list[int]] = [[] for _ in range(m)]
    if p.affine_dim >= 1:
        for e in p.faces[1]:
            i, j = sorted(e)
            length = primitive_part(sub(p.vertices[j], p.vertices[i]))[1]
            lengths[i].append(length)
            lengths[j].append(length)
    return [(nfacets[i], tuple(sorted(lengths[i]))) for i in range(m)]


def _extend(u: list, r: int, c: Sequence[int]):
    """Append column ``c`` to an incremental echelon form with transform ``u``."""
    n = len(u)
    w = [dot(row, c) for row in u]
    if r < n and any(w[r:]):
        u = [row[:] for row in u]
        for i in range(r + 1, n):
            if w[i] == 0:
                continue
            if w[r] == 0:
                u[r], u[i] = u[i], u[r]
                w[r], w[i] = w[i], w[r]
                continue
            g, s, t = _xgcd(w[r], w[i])
            x, y = w[r] // g, w[i] // g
            ur, ui = u[r], u[i]
            u[r] = [s * a + t * b for a, b in zip(ur, ui)]
            u[i] = [-y * a + x * b for a, b in zip(ur, ui)]
            w[r], w[i] = g, 0
        if w[r] < 0:
            u[r] = [-a for a in u[r]]
            w[r] = -w[r]
        piv = w[r]
        for i in range(r):
            q = w[i] // piv
            if q:
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                w[i] -= q * piv
        r += 1
    return tuple(w), u, r


def canonical_form(p: Polytope, max_vertices: int = MAX_CANONICAL_VERTICES) -> CanonicalForm:
    """Canonical representative of the affine unimodular class of ``p``."""
    m = len(p.vertices)
    if m > max_vertices:
        raise ResourceLimitError(f"canonical form limited to {max_vertices} vertices, got {m}")
    n = p.ambient_dim
    verts = p.vertices
    keys = _vertex_keys(p)
    order = sorted(keys)
    states = [((b,), [list(r) for r in identity(n)], 0) for b in range(m) if keys[b] == order[0]]
    cols: list[IntPoint] = [(0,) * n]
    for depth in range(1, m):
        want = order[depth]
        best = None
        nxt = []
        for perm, u, r in states:
            base = verts[perm[0]]
            used = set(perm)
            for v in range(m):
                if v in used or keys[v] != want:
                    continue
                col, u2, r2 = _extend(u, r, sub(verts[v], base))
                if best is None or col < best:
                    best = col
                    nxt = [(perm + (v,), u2, r2)]
                elif col == best:
                    nxt.append((perm + (v,), u2, r2))
        states = nxt
        cols.append(best)
    perm, u, _ = states[0]
    lin = tuple(map(tuple, u))
    to_canon = UnimodularAffineMap(lin, scale(-1, matvec(lin, verts[perm[0]])))
    return CanonicalForm(tuple(cols), invariant_vector(p), to_canon)


def are_equivalent(p: Polytope, q: Polytope) -> UnimodularAffineMap | None:
    """A map ``f`` with ``f(p) == q``, or ``None`` if none exists."""
    if p.ambient_dim != q.ambient_dim or len(p.vertices) != len(q.vertices):
        return None
    cp, cq = canonical_form(p), canonical_form(q)
    if cp != cq:
        return None
    f = cq.to_canonical.inverse().compose(cp.to_canonical)
    if {f(v) for v in p.vertices} != set(q.vertices):
        raise RuntimeError("equivalence witness failed validation")
    return f


def _content2(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # gcd of the 2x2 minors of rows (u, v[i]) for 3-vectors
    cx = u[1] * v[:, 2] - u[2] * v[:, 1]
    cy = u[2] * v[:, 0] - u[0] * v[:, 2]
    cz = u[0] * v[:, 1] - u[1] * v[:, 0]
    return np.gcd(np.gcd(cx, cy), cz)


def embeds_into(p: Polytope, q: Polytope, limit: int = DEFAULT_TUPLE_LIMIT) -> UnimodularAffineMap | None:
    """A map ``f`` with ``f(p) ⊆ q``, or ``None`` if there is none.

    Four affinely independent vertices of ``p`` are sent, in every admissible
    way, to lattice points of ``q``; admissibility is pruned with the lattice
    invariants of the partial frames (edge lengths, triangle contents,
    tetrahedron volume), and each surviving candidate is checked on all
    vertices of ``p``.
    """
    if p.ambient_dim != 3 or q.ambient_dim != 3 or p.affine_dim != 3 or q.affine_dim != 3:
        raise ValueError("embeds_into needs two 3-dimensional polytopes in Z^3")
    lp, lq = p.lattice_points, q.lattice_points
    if p.volume > q.volume or lp.total > lq.total or lp.interior > lq.interior:
        return None

    verts = p.vertices
    best = None
    for combo in itertools.combinations(range(len(verts)), 4):
        a0 = verts[combo[0]]
        d = abs(det([sub(verts[i], a0) for i in combo[1:]]))
        if d and (best is None or d > best[0]):
            best = (d, combo)
    vol, combo = best
    a = [verts[i] for i in combo]
    da = [sub(x, a[0]) for x in a[1:]]
    g1 = primitive_part(da[0])[1]
    g2 = primitive_part(da[1])[1]
    g21 = primitive_part(sub(a[2], a[1]))[1]
    c2 = math.gcd(*_cross(da[0], da[1]))
    g3 = [primitive_part(sub(a[3], a[i]))[1] for i in range(3)]
    # Columns of the anchor frame; linear part is D_b @ adj(D_a) / det(D_a).
    Da = np.array(da, dtype=object).T
    det_a = det(Da.tolist())
    adj_a = _adjugate(Da.tolist())

    # determinants of difference frames are cubic in the coordinates
    qmax = max(abs(x) for pt in lq.points for x in pt)
    Q = np.array(lq.points, dtype=int_dtype(6 * (2 * qmax + 1) ** 3))
    qset = set(lq.points)
    rest = [v for i, v in enumerate(verts) if i not in combo]
    tested = 0
    for i0 in range(len(Q)):
        b0 = Q[i0]
        D = Q - b0
        gd = np.gcd.reduce(np.abs(D), axis=1)
        c1 = np.nonzero(gd == g1)[0]
        for i1 in c1:
            u = D[i1]
            m2 = (gd == g2) & (np.gcd.reduce(np.abs(Q - Q[i1]), axis=1) == g21)
            m2 &= _content2(u, D) == c2
            for i2 in np.nonzero(m2)[0]:
                v = D[i2]
                cr = np.array([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]], dtype=Q.dtype)
                dets = D @ cr
                m3 = (np.abs(dets) == vol) & (gd == g3[0])
                m3 &= np.gcd.reduce(np.abs(Q - Q[i1]), axis=1) == g3[1]
                m3 &= np.gcd.reduce(np.abs(Q - Q[i2]), axis=1) == g3[2]
                cands = np.nonzero(m3)[0]
                tested += len(cands)
                if tested > limit:
                    raise ResourceLimitError(f"embedding search exceeded {limit} anchor tuples")
                for i3 in cands:
                    db = [D[i1], D[i2], D[i3]]
                    f = _frame_map(a[0], tuple(int(x) for x in b0), db, adj_a, det_a)
                    if f is None:
                        continue
                    if all(f(x) in qset for x in rest):
                        return f
    return None


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _adjugate(m: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(m)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj


def _frame_map(a0, b0, db_rows, adj_a, det_a) -> UnimodularAffineMap | None:
    # D_b has the difference vectors as columns
    Db = [[int(db_rows[c][r]) for c in range(3)] for r in range(3)]
    lin = []
    for r in range(3):
        row = []
        for c in range(3):
            num = sum(Db[r][k] * adj_a[k][c] for k in range(3))
            if num % det_a:
                return None
            row.append(num // det_a)
        lin.append(tuple(row))
    lin = tuple(lin)
    if abs(det(lin)) != 1:
        return None
    t = sub(b0, matvec(lin, a0))
    return UnimodularAffineMap(lin, t)
