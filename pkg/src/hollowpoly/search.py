"""Bounded enumeration engines with canonical-form deduplication.

Every engine streams candidates through a :class:`CensusStore`, keyed by
canonical form, so each equivalence class is kept once and the final
contents do not depend on the order in which workers finish.

Completeness arguments:

* Simplices.  A 3-simplex ``conv(0, v1, v2, v3)`` is equivalent to the
  simplex spanned by the columns of the row-style lower Hermite normal form
  of its edge matrix, so the finitely many such matrices of determinant
  ``V`` cover every class of volume ``V``.
* Sub-polytopes.  A lattice polytope strictly inside ``R`` misses some
  vertex ``v`` of ``R`` and therefore lies in the hull of the remaining
  lattice points of ``R``.  Descending by deleting one vertex at a time
  reaches every sub-polytope; the set of sub-polytopes depends only on the
  class of ``R``, so memoizing on canonical forms loses nothing.
* Polygons.  Deleting a vertex of a polygon with at least four lattice
  points off a common line leaves a polygon, and the deleted vertex lies at
  lattice distance at most ``Vol`` beyond every edge it sees.  Growing from
  triangles through that bounded region therefore reaches every polygon.
"""

from __future__ import annotations

import itertools
import math
import os
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .catalog import SIMPLEX_INDICES, catalog
from .classify import (
    CAYLEY,
    EXCEPTIONAL,
    HAS_INTERIOR,
    PROJECTS,
    Classification,
    classify_3d,
    functionals_up_to,
    is_two_delta2,
    _surjective,
)
from .equivalence import CanonicalForm, canonical_form
from .lattice import IntPoint, dot, inverse
from .polytope import (
    Polytope,
    ResourceLimitError,
    degree,
    hull,
    is_empty_polytope,
    is_white,
    scan_box,
)

JOBS_ENV = "HOLLOWPOLY_JOBS"
DEFAULT_VOL_MAX = 40
DEFAULT_POINT_LIMIT = 40
DEFAULT_K_MAX = 120
DEFAULT_CENSUS_LIMIT = 20_000

PICK_POLYGONS: tuple[tuple[IntPoint, ...], ...] = (
    ((1, 0), (0, 1), (-1, -1)),
    ((1, 0), (-1, 0), (0, 2)),
    ((1, 0), (-1, 0), (0, 1), (0, -1)),
    ((1, 0), (0, 1), (1, 1), (-1, -1)),
)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class CensusRecord:
    canonical: CanonicalForm
    classification: Classification | None
    source: str

    def polytope(self) -> Polytope:
        return self.canonical.polytope()

    def to_json(self) -> dict:
        inv = self.canonical.invariants
        return {
            "format": 1,
            "matrix": [list(r) for r in self.canonical.matrix],
            "invariants": {
                "dim": inv[0],
                "vertices": inv[1],
                "vol": inv[2],
                "points": inv[3],
                "interior": inv[4],
                "facet_points": list(inv[5]),
            },
            "classification": self.classification.to_json() if self.classification else None,
            "source": self.source,
        }


@dataclass
class SearchReport:
    parameters: dict
    counts: dict = field(default_factory=dict)
    extremal: dict = field(default_factory=dict)
    anomalies: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "parameters": self.parameters,
            "counts": self.counts,
            "extremal": self.extremal,
            "anomalies": self.anomalies,
            "details": self.details,
        }


class CensusStore:
    """Insert-if-absent store keyed by canonical form."""

    def __init__(self):
        self._lock = threading.Lock()
        self._records: dict[tuple, CensusRecord] = {}

    def add(self, rec: CensusRecord) -> bool:
        key = rec.canonical.key()
        with self._lock:
            if key in self._records:
                return False
            self._records[key] = rec
            return True

    def __contains__(self, cf: CanonicalForm) -> bool:
        return cf.key() in self._records

    def __len__(self) -> int:
        return len(self._records)

    def records(self) -> list[CensusRecord]:
        return [self._records[k] for k in sorted(self._records)]


def report_for(records: Sequence[CensusRecord], parameters: dict) -> SearchReport:
    counts: dict[str, int] = {}
    anomalies = []
    for r in records:
        tag = r.classification.tag if r.classification else "unclassified"
        counts[tag] = counts.get(tag, 0) + 1
        if r.classification and r.classification.tag == EXCEPTIONAL and not r.classification.containers:
            anomalies.append({"kind": "exceptional-without-container", "matrix": [list(x) for x in r.canonical.matrix]})
    vols = [r.canonical.invariants[2] for r in records]
    return SearchReport(parameters, counts, {"max_volume": max(vols, default=0)}, anomalies)


def _map(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# ---------------------------------------------------------------------------
# simplices


def hnf_simplices(volume: int) -> Iterable[tuple[IntPoint, ...]]:
    """Vertex lists ``0, (a,x,y), (0,b,z), (0,0,c)`` with ``abc = volume``.

    ``0 <= x, y < a`` and ``0 <= z < b``: the columns of every lower
    triangular Hermite normal form of determinant ``volume``.
    """
    for a in range(1, volume + 1):
        if volume % a:
            continue
        for b in range(1, volume // a + 1):
            if (volume // a) % b:
                continue
            c = volume // (a * b)
            for x in range(a):
                for y in range(a):
                    for z in range(b):
                        yield ((0, 0, 0), (a, x, y), (0, b, z), (0, 0, c))


def _simplex_task(args) -> list[tuple[CanonicalForm, Classification | None]]:
    volume, filt, classify = args
    out = {}
    for verts in hnf_simplices(volume):
        p = hull(verts)
        if filt is not None and not filt(p):
            continue
        cf = canonical_form(p)
        if cf.key() not in out:
            out[cf.key()] = cf
    return [(cf, classify_3d(cf.polytope()) if classify else None) for cf in out.values()]


def enumerate_simplices(
    vol_max: int,
    filter: Callable[[Polytope], bool] | None = None,
    *,
    classify: bool = True,
    jobs: int = 1,
    vol_limit: int = DEFAULT_VOL_MAX,
) -> list[CensusRecord]:
    """One record per class of 3-simplices with ``Vol <= vol_max`` passing ``filter``.

    ``filter`` must be picklable (a module-level function) when ``jobs > 1``.
    """
    if vol_max < 1:
        raise ValueError("vol_max must be positive")
    if vol_max > vol_limit:
        raise ResourceLimitError(f"vol_max {vol_max} exceeds the limit {vol_limit}")
    store = CensusStore()
    tasks = [(v, filter, classify) for v in range(1, vol_max + 1)]
    for (v, _, _), found in zip(tasks, _map(_simplex_task, tasks, jobs)):
        for cf, cls in found:
            store.add(CensusRecord(cf, cls, f"simplices vol={v}"))
    return store.records()


# ---------------------------------------------------------------------------
# growth regions


def outer_candidates(p: Polytope, depth: int) -> list[IntPoint]:
    """Lattice points outside ``p`` at lattice distance ``<= depth`` beyond every facet they see.

    This is the set of lattice points of ``{x : <n_F, x> >= c_F - depth}``
    not in ``p``; the body is bounded since it has the facet normals of ``p``.
    Only for full-dimensional ``p``.
    """
    if not p.is_full_dimensional:
        raise ValueError("growth needs a full-dimensional polytope")
    n = p.ambient_dim
    normals = [f.normal for f in p.facets]
    offsets = [f.offset - depth for f in p.facets]
    lo: list[Fraction | None] = [None] * n
    hi: list[Fraction | None] = [None] * n
    for rows in itertools.combinations(range(len(normals)), n):
        try:
            inv = inverse([normals[i] for i in rows])
        except ZeroDivisionError:
            continue
        x = [sum(inv[j][k] * offsets[rows[k]] for k in range(n)) for j in range(n)]
        if any(sum(a * b for a, b in zip(nr, x)) < o for nr, o in zip(normals, offsets)):
            continue
        for j in range(n):
            lo[j] = x[j] if lo[j] is None else min(lo[j], x[j])
            hi[j] = x[j] if hi[j] is None else max(hi[j], x[j])
    lo_i = [math.ceil(v) for v in lo]
    hi_i = [math.floor(v) for v in hi]
    # facets live in chart coordinates; scan there and map back
    pts = scan_box(normals, offsets, lo_i, hi_i)
    inside = set(p.lattice_points.points)
    out = []
    for row in pts:
        x = p.chart.from_local(tuple(int(v) for v in row))
        if x not in inside:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# polygons


def enumerate_polygons(vol_max: int, jobs: int = 1) -> list[CensusRecord]:
    """Every class of lattice polygons with ``Vol <= vol_max``."""
    if vol_max < 1:
        raise ValueError("vol_max must be positive")
    store = CensusStore()
    frontier: list[Polytope] = []
    for v in range(1, vol_max + 1):
        for a in range(1, v + 1):
            if v % a:
                continue
            b = v // a
            for x in range(a):
                p = hull([(0, 0), (a, x), (0, b)])
                cf = canonical_form(p)
                if store.add(CensusRecord(cf, None, f"triangle vol={v}")):
                    frontier.append(cf.polytope())
    while frontier:
        nxt = []
        for p in frontier:
            for x in outer_candidates(p, vol_max):
                q = hull(list(p.vertices) + [x])
                if q.volume > vol_max:
                    continue
                cf = canonical_form(q)
                if store.add(CensusRecord(cf, None, "polygon growth")):
                    nxt.append(cf.polytope())
        frontier = nxt
    return store.records()


# ---------------------------------------------------------------------------
# sub-polytopes of a container


def subpolytope_census(
    q: Polytope,
    *,
    point_limit: int = DEFAULT_POINT_LIMIT,
    class_limit: int = DEFAULT_CENSUS_LIMIT,
    classify: bool = True,
    jobs: int = 1,
) -> list[CensusRecord]:
    """Every class of full-dimensional lattice polytopes ``conv(S)``, ``S ⊆ q ∩ Z^3``."""
    if q.ambient_dim != 3 or q.affine_dim != 3:
        raise ValueError("subpolytope_census needs a 3-dimensional polytope in Z^3")
    total = q.lattice_points.total
    if total > point_limit:
        raise ResourceLimitError(f"container has {total} lattice points, limit is {point_limit}")
    seen_sets: set[frozenset] = set()
    forms: dict[tuple, CanonicalForm] = {}
    stack = [frozenset(q.lattice_points.points)]
    while stack:
        pts = stack.pop()
        if pts in seen_sets:
            continue
        seen_sets.add(pts)
        p = hull(pts)
        if p.affine_dim != 3:
            continue
        cf = canonical_form(p)
        if cf.key() in forms:
            continue
        if len(forms) >= class_limit:
            raise ResourceLimitError(f"more than {class_limit} sub-polytope classes")
        forms[cf.key()] = cf
        # descend from the canonical representative so memoized sets coincide
        canon = cf.polytope()
        cpts = frozenset(canon.lattice_points.points)
        for v in canon.vertices:
            stack.append(cpts - {v})
    cfs = [forms[k] for k in sorted(forms)]
    classes = _map(classify_3d, [cf.polytope() for cf in cfs], jobs) if classify else [None] * len(cfs)
    label = f"subpolytopes of {list(map(list, q.vertices))}"
    return [CensusRecord(cf, cls, label) for cf, cls in zip(cfs, classes)]


def subsimplex_forms(q: Polytope) -> list[CanonicalForm]:
    """Classes of lattice 3-simplices with vertices among the lattice points of ``q``.

    Direct enumeration of 4-subsets; it agrees with the simplex part of
    :func:`subpolytope_census` and is much cheaper.
    """
    pts = q.lattice_points.points
    forms: dict[tuple, CanonicalForm] = {}
    for quad in itertools.combinations(pts, 4):
        p = hull(quad)
        if p.affine_dim != 3 or len(p.vertices) != 4:
            continue
        cf = canonical_form(p)
        forms.setdefault(cf.key(), cf)
    return [forms[k] for k in sorted(forms)]


def _exceptional_task(cf: CanonicalForm) -> Classification:
    return classify_3d(cf.polytope())


def exceptional_simplex_census(
    indices: Sequence[int] = SIMPLEX_INDICES, jobs: int = 1
) -> list[CensusRecord]:
    """Exceptional simplex classes among sub-simplices of the catalog simplices."""
    store = CensusStore()
    cat = catalog()
    for i in indices:
        cfs = [cf for cf in subsimplex_forms(cat[i]) if cf not in store]
        for cf, cls in zip(cfs, _map(_exceptional_task, cfs, jobs)):
            if cls.tag == EXCEPTIONAL:
                store.add(CensusRecord(cf, cls, f"sub-simplex of P{i}"))
    return store.records()


# ---------------------------------------------------------------------------
# apex search over the four smallest polygons with an interior point


def _apex_admissible(p: Polytope, base_normal: IntPoint) -> bool:
    if p.lattice_points.interior:
        return False
    for f in p.facets:
        if f.normal == base_normal and f.offset == 0:
            continue
        face = hull([p.vertices[i] for i in f.vertices])
        if face.lattice_points.interior:
            return False
    return True


def _apex_task(args) -> list[tuple[int, IntPoint]]:
    idx, d3 = args
    base = [(x, y, 0) for x, y in PICK_POLYGONS[idx]]
    found = []
    for d1 in range(d3):
        for d2 in range(d3):
            d = (d1, d2, d3)
            p = hull(base + [d])
            if _apex_admissible(p, (0, 0, 1)):
                found.append((idx, d))
    return found


def hensley_apex_search(height_max: int, jobs: int = 1) -> SearchReport:
    """Apexes ``d`` over the four polygons ``F`` making ``conv(F, d)`` hollow with hollow side facets.

    Shearing along ``F`` reduces ``d1, d2`` modulo ``d3``, so ``0 <= d1, d2 < d3``
    covers every apex up to equivalence fixing ``F``.
    """
    if height_max < 7:
        raise ValueError("height_max must be at least 7 to test the bound")
    tasks = [(i, h) for i in range(len(PICK_POLYGONS)) for h in range(1, height_max + 1)]
    found = [x for part in _map(_apex_task, tasks, jobs) for x in part]
    max_h = max((d[2] for _, d in found), default=0)
    per_height: dict[int, int] = {}
    for _, d in found:
        per_height[d[2]] = per_height.get(d[2], 0) + 1
    report = SearchReport(
        {"height_max": height_max, "bases": [list(map(list, b)) for b in PICK_POLYGONS]},
        counts={"admissible": len(found)},
        extremal={"max_apex_height": max_h},
    )
    report.details = {
        "admissible_per_height": {str(h): per_height[h] for h in sorted(per_height)},
        "max_height_apexes": [{"base": i, "apex": list(d)} for i, d in found if d[2] == max_h],
    }
    report.anomalies = [{"base": i, "apex": list(d)} for i, d in found if d[2] >= 7]
    return report


# ---------------------------------------------------------------------------
# higher-dimensional examples


def haase_ziegler_simplex(k: int) -> Polytope:
    """``conv(e1, e2, e3, e4, 2e1 + 2e2 + 3e3 + (k - 6)e4)`` in ``Z^4``."""
    return hull([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (2, 2, 3, k - 6)])


def haase_ziegler_5d() -> Polytope:
    return hull(
        [
            (0, 0, 0, 0, 0),
            (1, 0, 0, 0, 0),
            (0, 1, 0, 0, 0),
            (0, 0, 1, 0, 0),
            (1, 1, 1, 6, 0),
            (2, 3, 4, 0, 9),
        ]
    )


def projection_onto_2delta2(p: Polytope) -> tuple[IntPoint, IntPoint] | None:
    """A surjective ``Z^n -> Z^2`` mapping a full-dimensional ``p`` onto ``2Δ2``.

    Same search as the three-dimensional version, for any ambient dimension.
    """
    cands = [y for y, s in functionals_up_to(p, 2) if s == 2]
    images = {y: [dot(y, v) for v in p.vertices] for y in cands}
    for y1, y2 in itertools.combinations(cands, 2):
        if not _surjective((y1, y2)):
            continue
        pts = set(zip(images[y1], images[y2]))
        if len(pts) >= 3 and is_two_delta2(hull(pts)):
            return (y1, y2)
    return None


def _hz_task(k: int) -> dict:
    s = haase_ziegler_simplex(k)
    empty = is_empty_polytope(s)
    proj = projection_onto_2delta2(s)
    return {
        "k": k,
        "empty": empty,
        "expected_empty": math.gcd(k, 6) == 1,
        "projection": [list(r) for r in proj] if proj else None,
    }


def verify_haase_ziegler(k_min: int, k_max: int, jobs: int = 1, k_limit: int = DEFAULT_K_MAX) -> SearchReport:
    if not 7 <= k_min <= k_max:
        raise ValueError("need 7 <= k_min <= k_max")
    if k_max > k_limit:
        raise ResourceLimitError(f"k_max {k_max} exceeds the limit {k_limit}")
    rows = _map(_hz_task, list(range(k_min, k_max + 1)), jobs)
    five = haase_ziegler_5d()
    lp5 = five.lattice_points
    proj5 = projection_onto_2delta2(five)
    mismatches = [r["k"] for r in rows if r["empty"] != r["expected_empty"]]
    missing = [r["k"] for r in rows if r["projection"] is None]
    report = SearchReport({"k_min": k_min, "k_max": k_max})
    report.counts = {
        "empty": sum(r["empty"] for r in rows),
        "nonempty": sum(not r["empty"] for r in rows),
    }
    report.details = {
        "family": rows,
        "five_dim": {
            "points": lp5.total,
            "vertices": len(five.vertices),
            "only_vertices": lp5.total == len(five.vertices),
            "projection": [list(r) for r in proj5] if proj5 else None,
        },
    }
    report.anomalies = (
        [{"kind": "emptiness-mismatch", "k": k} for k in mismatches]
        + [{"kind": "no-projection", "k": k} for k in missing]
        + ([] if lp5.total == len(five.vertices) else [{"kind": "five-dim-not-empty"}])
        + ([] if proj5 else [{"kind": "five-dim-no-projection"}])
    )
    return report


# ---------------------------------------------------------------------------
# hollow corpus


def _is_empty(p: Polytope) -> bool:
    return is_empty_polytope(p)


def _is_hollow(p: Polytope) -> bool:
    return p.lattice_points.interior == 0


def _is_white(p: Polytope) -> bool:
    return is_white(p)


# module-level so they pickle for worker processes
SIMPLEX_FILTERS: dict[str, Callable[[Polytope], bool] | None] = {
    "all": None,
    "empty": _is_empty,
    "hollow": _is_hollow,
    "white": _is_white,
}


def hollow_census(
    point_budget: int,
    *,
    vol_max: int = 6,
    depth: int = 2,
    class_limit: int = DEFAULT_CENSUS_LIMIT,
    classify: bool = True,
    jobs: int = 1,
) -> list[CensusRecord]:
    """Hollow 3-polytopes grown from empty simplices.

    Seeds are the empty simplex classes with ``Vol <= vol_max``; a class is
    extended by one lattice point at distance ``<= depth`` beyond its facets
    whenever the hull stays hollow with at most ``point_budget`` lattice
    points.  Exhaustive for this growth rule only, not for hollow polytopes
    in general.
    """
    if point_budget < 5:
        raise ValueError("point_budget must be at least 5")
    seeds = enumerate_simplices(vol_max, _is_empty, classify=False, jobs=jobs)
    store = CensusStore()
    frontier = []
    for rec in seeds:
        store.add(CensusRecord(rec.canonical, None, "empty simplex seed"))
        frontier.append(rec.polytope())
    while frontier:
        nxt = []
        for p in frontier:
            for x in outer_candidates(p, depth):
                q = hull(list(p.vertices) + [x])
                lp = q.lattice_points
                if lp.interior or lp.total > point_budget:
                    continue
                cf = canonical_form(q)
                if cf in store:
                    continue
                if len(store) >= class_limit:
                    raise ResourceLimitError(f"more than {class_limit} hollow classes")
                store.add(CensusRecord(cf, None, "hollow growth"))
                nxt.append(cf.polytope())
        frontier = nxt
    recs = store.records()
    if not classify:
        return recs
    classes = _map(classify_3d, [r.polytope() for r in recs], jobs)
    return [CensusRecord(r.canonical, c, r.source) for r, c in zip(recs, classes)]


def degree_corollary_violations(records: Sequence[CensusRecord]) -> list[CensusRecord]:
    """Records of degree at most 1 that are neither Cayley nor project onto ``2Δ2``."""
    bad = []
    for r in records:
        p = r.polytope()
        if degree(p) <= 1:
            cls = r.classification or classify_3d(p)
            if cls.tag not in (CAYLEY, PROJECTS):
                bad.append(r)
    return bad


__all__ = [
    "CAYLEY",
    "EXCEPTIONAL",
    "HAS_INTERIOR",
    "PROJECTS",
    "CensusRecord",
    "CensusStore",
    "SIMPLEX_FILTERS",
    "SearchReport",
    "PICK_POLYGONS",
    "degree_corollary_violations",
    "enumerate_polygons",
    "enumerate_simplices",
    "exceptional_simplex_census",
    "haase_ziegler_5d",
    "haase_ziegler_simplex",
    "hensley_apex_search",
    "hnf_simplices",
    "hollow_census",
    "outer_candidates",
    "projection_onto_2delta2",
    "report_for",
    "subpolytope_census",
    "verify_haase_ziegler",
]
