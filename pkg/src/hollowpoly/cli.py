"""Command-line interface.

Exit codes: 0 success, 1 a checked claim failed, 2 parse error,
3 precondition violated (wrong dimension and the like), 4 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import formats
from .catalog import catalog
from .classify import classify_3d, lattice_width, projects_onto_2delta2
from .equivalence import are_equivalent, embeds_into
from .polytope import Polytope, ResourceLimitError, degree, is_empty_polytope, is_white
from .search import (
    SIMPLEX_FILTERS,
    default_jobs,
    enumerate_simplices,
    hollow_census,
    report_for,
    subpolytope_census,
)
from .verify import FAIL, Bounds, run_all

EXIT_OK, EXIT_CLAIM, EXIT_PARSE, EXIT_PRECONDITION, EXIT_RESOURCE = 0, 1, 2, 3, 4


class PreconditionError(ValueError):
    pass


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise formats.ParseError(f"{path}: {e.strerror}") from None


def _load(path: str) -> Polytope:
    try:
        return formats.parse_polytope(_read(path))
    except formats.ParseError as e:
        raise formats.ParseError(f"{path}: {e}") from None


def _need_3d(p: Polytope, what: str) -> None:
    if p.ambient_dim != 3 or p.affine_dim != 3:
        raise PreconditionError(
            f"{what} needs a full-dimensional polytope in Z^3, got affine dimension "
            f"{p.affine_dim} in Z^{p.ambient_dim}"
        )


def _need_full(p: Polytope, what: str) -> None:
    if not p.is_full_dimensional:
        raise PreconditionError(f"{what} needs a full-dimensional polytope")


def _emit(args, doc: dict, text_lines: Sequence[str] | None = None) -> None:
    if args.format == "json" or text_lines is None:
        print(json.dumps(doc, sort_keys=False))
    else:
        print("\n".join(text_lines))


def _aligned(pairs: Sequence[tuple[str, object]]) -> list[str]:
    w = max(len(k) for k, _ in pairs)
    return [f"{k.ljust(w)}  {v}" for k, v in pairs]


# ---------------------------------------------------------------------------


def cmd_info(args) -> int:
    p = _load(args.input)
    lp = p.lattice_points
    doc = {
        "format": 1,
        "dim": p.ambient_dim,
        "affine_dim": p.affine_dim,
        "vertices": len(p.vertices),
        "vol": p.volume,
        "points": lp.total,
        "interior": lp.interior,
        "boundary": lp.boundary,
        "degree": degree(p),
        "width": lattice_width(p).width if p.is_full_dimensional else None,
        "empty": is_empty_polytope(p),
        "white": is_white(p) if p.affine_dim == 3 else None,
    }
    _emit(args, doc, _aligned([(k, v) for k, v in doc.items() if k != "format"]))
    return EXIT_OK


def cmd_classify(args) -> int:
    p = _load(args.input)
    _need_3d(p, "classify")
    cls = classify_3d(p)
    doc = cls.to_json()
    lines = [f"tag       {cls.tag}", f"interior  {cls.interior}", f"width     {cls.width}"]
    lines += [f"witness   {json.dumps(doc['witness'])}"]
    if cls.tag == "Exceptional":
        lines.append(f"containers {list(cls.containers) or 'none (not contained in any catalog entry)'}")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_equiv(args) -> int:
    p, q = _load(args.first), _load(args.second)
    f = are_equivalent(p, q)
    doc = {"format": 1, "equivalent": f is not None, "map": f.to_json() if f else None}
    lines = [f"equivalent  {f is not None}"]
    if f:
        lines += [f"linear      {[list(r) for r in f.linear]}", f"translation {list(f.translation)}"]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_embed(args) -> int:
    p, q = _load(args.first), _load(args.second)
    _need_3d(p, "embed")
    _need_3d(q, "embed")
    f = embeds_into(p, q)
    doc = {"format": 1, "embeds": f is not None, "map": f.to_json() if f else None}
    lines = [f"embeds      {f is not None}"]
    if f:
        lines += [f"linear      {[list(r) for r in f.linear]}", f"translation {list(f.translation)}"]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_width(args) -> int:
    p = _load(args.input)
    _need_full(p, "width")
    wr = lattice_width(p)
    doc = {"format": 1, "width": wr.width, "certificates": [list(y) for y in wr.certificates]}
    _emit(args, doc, [f"width  {wr.width}"] + [f"  {list(y)}" for y in wr.certificates])
    return EXIT_OK


def cmd_project(args) -> int:
    p = _load(args.input)
    _need_3d(p, "project")
    m = projects_onto_2delta2(p)
    doc = {"format": 1, "projects": m is not None, "projection": [list(r) for r in m] if m else None}
    _emit(args, doc, [f"projects    {m is not None}"] + ([f"projection  {[list(r) for r in m]}"] if m else []))
    return EXIT_OK


def _write_records(args, recs) -> None:
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        for r in recs:
            out.write(json.dumps(r.to_json()) + "\n")
    finally:
        if args.output:
            out.close()


def cmd_enumerate(args) -> int:
    recs = enumerate_simplices(args.vol_max, SIMPLEX_FILTERS[args.filter], jobs=args.jobs)
    _write_records(args, recs)
    if args.output:
        params = {"vol_max": args.vol_max, "filter": args.filter}
        print(json.dumps(report_for(recs, params).to_json()))
    return EXIT_OK


def cmd_census(args) -> int:
    if args.hollow is not None:
        recs = hollow_census(args.hollow, jobs=args.jobs)
        params = {"hollow_budget": args.hollow}
    else:
        if args.catalog_index is not None:
            q = catalog()[args.catalog_index]
        elif args.container:
            q = _load(args.container)
        else:
            raise PreconditionError("census needs --container, --catalog-index or --hollow")
        _need_3d(q, "census")
        recs = subpolytope_census(q, jobs=args.jobs)
        params = {"container": [list(v) for v in q.vertices]}
    _write_records(args, recs)
    if args.output:
        print(json.dumps(report_for(recs, params).to_json()))
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    bounds = Bounds.fast() if args.fast else Bounds()
    as_json = args.format == "json"

    def emit(r):
        if as_json:
            print(json.dumps({"name": r.name, "claim": r.claim, "status": r.status, "detail": r.detail}), flush=True)
        else:
            print(r.line(), flush=True)

    results = run_all(bounds, emit)
    return EXIT_CLAIM if any(r.status == FAIL for r in results) else EXIT_OK


def cmd_catalog(args) -> int:
    cat = catalog()
    idx = [args.index] if args.index is not None else sorted(cat)
    if args.format == "json":
        print(json.dumps({"format": 1, "catalog": {str(i): json.loads(formats.to_json(cat[i])) for i in idx}}))
    else:
        for i in idx:
            sys.stdout.write(f"# P{i}\n" + formats.to_text(cat[i]))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default from HOLLOWPOLY_JOBS, else 1)")

    ap = argparse.ArgumentParser(prog="hollowpoly", description="Hollow lattice polytope toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    add("info", cmd_info, "invariants of a polytope").add_argument("input")
    add("classify", cmd_classify, "Cayley / projects onto 2Δ2 / exceptional").add_argument("input")
    sp = add("equiv", cmd_equiv, "affine unimodular equivalence with witness")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("embed", cmd_embed, "find a unimodular image of FIRST inside SECOND")
    sp.add_argument("first")
    sp.add_argument("second")
    add("width", cmd_width, "lattice width and all minimizing functionals").add_argument("input")
    add("project", cmd_project, "search a lattice projection onto 2Δ2").add_argument("input")
    sp = add("enumerate", cmd_enumerate, "classes of 3-simplices up to a volume")
    sp.add_argument("--vol-max", type=int, required=True)
    sp.add_argument("--filter", choices=sorted(SIMPLEX_FILTERS), default="all")
    sp.add_argument("--output", help="JSON-lines file (default stdout)")
    sp = add("census", cmd_census, "sub-polytope census of a container, or the hollow growth census")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--container")
    g.add_argument("--catalog-index", type=int, choices=range(1, 10), metavar="{1..9}")
    g.add_argument("--hollow", type=int, metavar="POINT_BUDGET")
    sp.add_argument("--output", help="JSON-lines file (default stdout)")
    sp = add("verify-paper", cmd_verify_paper, "run every desk-scale check")
    m = sp.add_mutually_exclusive_group()
    m.add_argument("--fast", action="store_true")
    m.add_argument("--full", action="store_true")
    sp = add("catalog", cmd_catalog, "export the nine catalog polytopes")
    sp.add_argument("--index", type=int, choices=range(1, 10), metavar="{1..9}")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.jobs is None:
        args.jobs = default_jobs()
    elif args.jobs < 1:
        ap.error("--jobs must be positive")
    try:
        return args.func(args)
    except formats.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as e:
        print(f"precondition: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
