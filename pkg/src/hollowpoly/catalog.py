"""The nine known maximal exceptional hollow 3-polytopes.

``P8`` is written with a ``±`` shorthand in its usual presentation,
``conv(±e1, 2e2, e1 + 2e3 ± e1, e1 + 2e2 + 2e3)``; the middle term is read
as the two points ``2e3`` and ``2e1 + 2e3``.  :func:`check_entry` reports
whether an entry really is hollow, of width at least 2 and without a
projection onto ``2Δ2``; nothing is adjusted silently.
"""

from __future__ import annotations

from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

from .polytope import Polytope, hull

CATALOG_VERTICES: Mapping[int, tuple[tuple[int, int, int], ...]] = MappingProxyType({
    1: ((0, 0, 0), (1, 0, 0), (2, 5, 0), (3, 0, 5)),
    2: ((0, 0, 0), (3, 0, 0), (1, 3, 0), (2, 0, 3)),
    3: ((0, 0, 0), (3, 0, 0), (0, 3, 0), (0, 0, 3)),
    4: ((0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 2)),
    5: ((0, 0, 0), (4, 0, 0), (2, 4, 0), (1, 0, 2)),
    6: ((0, 0, 0), (6, 0, 0), (0, 3, 0), (0, 0, 2)),
    7: ((2, 0, 0), (-2, 0, 0), (0, 2, 0), (0, -2, 0), (1, 1, 2)),
    8: ((1, 0, 0), (-1, 0, 0), (0, 2, 0), (0, 0, 2), (2, 0, 2), (1, 2, 2)),
    9: ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (2, 1, 2), (0, 1, 2), (1, 2, 2), (1, 0, 2)),
})

SIMPLEX_INDICES = (1, 2, 3, 4, 5, 6)
AMBIGUOUS_INDICES = (8,)


@lru_cache(maxsize=None)
def _catalog() -> Mapping[int, Polytope]:
    return MappingProxyType({i: hull(v) for i, v in CATALOG_VERTICES.items()})


def catalog() -> Mapping[int, Polytope]:
    """``{1: P1, ..., 9: P9}``, indexed as in the literature."""
    return _catalog()


def check_entry(p: Polytope) -> dict:
    """Facts that make a polytope a sound catalog entry."""
    from .classify import lattice_width, projects_onto_2delta2

    lp = p.lattice_points
    width = lattice_width(p).width
    proj = projects_onto_2delta2(p)
    return {
        "interior": lp.interior,
        "width": width,
        "projects": proj is not None,
        "ok": lp.interior == 0 and width >= 2 and proj is None,
    }
