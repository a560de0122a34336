"""Exact integer linear algebra on small vectors and matrices.

Points and vectors are tuples of Python ints, matrices are tuples of row
tuples.  Python ints never overflow, so every routine here is exact.
"""

from __future__ import annotations

import math
import operator
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

IntPoint = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]


def as_point(v: Iterable[int]) -> IntPoint:
    try:
        return tuple(operator.index(c) for c in v)
    except TypeError:
        raise TypeError(f"non-integer coordinate in {v!r}") from None


def as_matrix(m: Iterable[Iterable[int]]) -> IntMatrix:
    rows = tuple(as_point(r) for r in m)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("matrix rows have different lengths")
    return rows


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> IntPoint:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> IntPoint:
    return tuple(x - y for x, y in zip(u, v))


def add(u: Sequence[int], v: Sequence[int]) -> IntPoint:
    return tuple(x + y for x, y in zip(u, v))


def scale(k: int, v: Sequence[int]) -> IntPoint:
    return tuple(k * x for x in v)


def primitive_part(v: Sequence[int]) -> tuple[IntPoint, int]:
    """Split ``v`` into a primitive vector and a nonnegative multiplier.

    The direction of ``v`` is kept.  The zero vector maps to ``(0, 0), 0``.

    >>> primitive_part((2, 4, 6))
    ((1, 2, 3), 2)
    >>> primitive_part((-3, 0, 0))
    ((-1, 0, 0), 3)
    """
    v = tuple(int(x) for x in v)
    g = math.gcd(*v) if v else 0
    if g == 0:
        return v, 0
    return tuple(x // g for x in v), g


def content(v: Sequence[int]) -> int:
    """gcd of the entries; the lattice length of ``v``."""
    return math.gcd(*v) if len(v) else 0


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 1:
        return int(m[0][0])
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = m
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    a = [list(map(int, r)) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f, g = a[i][c], a[r][c]
                a[i] = [g * x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull (-1 for the empty set)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]])


def inverse(m: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Rational inverse by Gauss-Jordan elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def integer_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Inverse of a unimodular matrix."""
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, s, t) with s*a + t*b = g >= 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def echelon_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form in upper echelon shape.

    Returns ``(h, u)`` with ``u @ m == h``, ``u`` unimodular, pivots of ``h``
    positive and the entries above each pivot reduced into ``[0, pivot)``.
    The leading ``j`` columns of ``h`` depend only on the leading ``j``
    columns of ``m``; canonical forms rely on this.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [list(map(int, r)) for r in m]
    u = [list(r) for r in identity(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if h[i][c] != 0]
        if not nz:
            continue
        for i in nz:
            if i == r:
                continue
            if h[r][c] == 0:
                h[r], h[i] = h[i], h[r]
                u[r], u[i] = u[i], u[r]
                continue
            a, b = h[r][c], h[i][c]
            g, s, t = _xgcd(a, b)
            x, y = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [s * p + t * q for p, q in zip(hr, hi)]
            h[i] = [-y * p + x * q for p, q in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [s * p + t * q for p, q in zip(ur, ui)]
            u[i] = [-y * p + x * q for p, q in zip(ur, ui)]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            q = h[i][c] // piv
            if q:
                h[i] = [p - q * s for p, s in zip(h[i], h[r])]
                u[i] = [p - q * s for p, s in zip(u[i], u[r])]
        r += 1
    return tuple(map(tuple, h)), tuple(map(tuple, u))


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Lower-triangular Hermite normal form under row operations.

    Returns ``(h, u)`` with ``u @ m == h`` and ``|det u| == 1``.  For a square
    nonsingular ``m``, ``h`` is lower triangular with positive diagonal and
    every sub-diagonal entry in column ``j`` lies in ``[0, h[j][j])``.

    This is the upper echelon form conjugated by the index reversal.
    """
    m = as_matrix(m)
    rev = tuple(tuple(reversed(r)) for r in reversed(m))
    e, v = echelon_form(rev)
    h = tuple(tuple(reversed(r)) for r in reversed(e))
    u = tuple(tuple(reversed(r)) for r in reversed(v))
    return h, u


@dataclass(frozen=True)
class AffineChart:
    """Integer coordinates on the lattice points of an affine subspace.

    ``to_local`` is a bijection from ``aff ∩ Z^n`` onto ``Z^k``;
    ``from_local`` inverts it.  ``equations`` cut out the subspace:
    ``equations @ (x - base) == 0``.
    """

    base: IntPoint
    basis: IntMatrix  # k rows, each a vector in Z^n
    projection: IntMatrix  # k x n
    equations: IntMatrix  # (n - k) x n

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.base)

    @property
    def is_identity(self) -> bool:
        return self.dim == self.ambient_dim and self.basis == identity(self.dim) and not any(self.base)

    def to_local(self, x: Sequence[int]) -> IntPoint:
        if self.is_identity:
            return tuple(x)
        return matvec(self.projection, sub(x, self.base))

    def from_local(self, y: Sequence[int]) -> IntPoint:
        if self.is_identity:
            return tuple(y)
        out = list(self.base)
        for c, b in zip(y, self.basis):
            if c:
                for i, bi in enumerate(b):
                    out[i] += c * bi
        return tuple(out)

    def contains(self, x: Sequence[int]) -> bool:
        d = sub(x, self.base)
        return all(dot(e, d) == 0 for e in self.equations)

    @classmethod
    def full(cls, n: int) -> "AffineChart":
        return cls((0,) * n, identity(n), identity(n), ())


def affine_chart(points: Sequence[Sequence[int]]) -> AffineChart:
    """Chart of the affine lattice spanned by ``points``."""
    points = [tuple(p) for p in points]
    n = len(points[0])
    base = points[0]
    diffs = [sub(p, base) for p in points[1:] if p != base]
    if not diffs:
        return AffineChart(base, (), (), identity(n))
    e, u = echelon_form(transpose(diffs))
    k = sum(1 for row in e if any(row))
    if k == n:
        return AffineChart((0,) * n, identity(n), identity(n), ())
    eqs = u[k:]
    # saturated lattice of the subspace: kernel of the equations
    _, u2 = echelon_form(transpose(eqs))
    basis = u2[n - k:]
    inv = integer_inverse(u2)
    projection = tuple(tuple(inv[i][n - k + t] for i in range(n)) for t in range(k))
    return AffineChart(base, basis, projection, eqs)


@dataclass(frozen=True)
class UnimodularAffineMap:
    """``x -> linear @ x + translation`` with ``|det linear| == 1``."""

    linear: IntMatrix
    translation: IntPoint

    def __post_init__(self):
        lin = as_matrix(self.linear)
        t = as_point(self.translation)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", t)
        if len(lin) != len(t) or any(len(r) != len(t) for r in lin):
            raise ValueError("linear part and translation have mismatched dimensions")
        if abs(det(lin)) != 1:
            raise ValueError(f"linear part has determinant {det(lin)}, not ±1")

    @property
    def dim(self) -> int:
        return len(self.translation)

    @classmethod
    def identity(cls, n: int) -> "UnimodularAffineMap":
        return cls(identity(n), (0,) * n)

    @classmethod
    def translation_by(cls, t: Sequence[int]) -> "UnimodularAffineMap":
        return cls(identity(len(t)), tuple(t))

    def __call__(self, p: Sequence[int]) -> IntPoint:
        return self.apply(p)

    def apply(self, p: Sequence[int]) -> IntPoint:
        if len(p) != self.dim:
            raise ValueError(f"point of dimension {len(p)} given to a map on Z^{self.dim}")
        return add(matvec(self.linear, p), self.translation)

    def compose(self, other: "UnimodularAffineMap") -> "UnimodularAffineMap":
        """``self ∘ other``: apply ``other`` first."""
        return UnimodularAffineMap(
            matmul(self.linear, other.linear),
            add(matvec(self.linear, other.translation), self.translation),
        )

    def inverse(self) -> "UnimodularAffineMap":
        inv = integer_inverse(self.linear)
        return UnimodularAffineMap(inv, scale(-1, matvec(inv, self.translation)))

    def dual(self, y: Sequence[int]) -> IntPoint:
        """Pull a functional back through the linear part: ``y -> y @ linear^{-1}``.

        If ``y`` has spread ``w`` on ``P`` then ``dual(y)`` has spread ``w`` on
        the image of ``P``.
        """
        inv = integer_inverse(self.linear)
        return tuple(dot(y, col) for col in zip(*inv))

    def to_json(self) -> dict:
        return {"linear": [list(r) for r in self.linear], "translation": list(self.translation)}


def random_unimodular(n: int, rng: random.Random, steps: int = 6, bound: int = 2) -> IntMatrix:
    """Random unimodular matrix from elementary row operations."""
    m = [list(r) for r in identity(n)]
    for _ in range(steps):
        op = rng.random()
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if op < 0.15 and n > 1:
            m[i], m[j] = m[j], m[i]
        elif op < 0.3:
            m[i] = [-x for x in m[i]]
        elif n > 1:
            c = rng.choice([k for k in range(-bound, bound + 1) if k])
            m[i] = [x + c * y for x, y in zip(m[i], m[j])]
    return tuple(map(tuple, m))


def random_unimodular_map(n: int, rng: random.Random, steps: int = 6, bound: int = 2, shift: int = 5) -> UnimodularAffineMap:
    lin = random_unimodular(n, rng, steps, bound)
    return UnimodularAffineMap(lin, tuple(rng.randint(-shift, shift) for _ in range(n)))
