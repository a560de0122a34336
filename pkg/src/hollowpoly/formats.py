"""Polytope file formats.

JSON: ``{"dim": n, "vertices": [[...], ...]}``.
Text: one vertex per line as whitespace-separated integers, terminated by a
blank line or end of input; lines starting with ``#`` are comments.
"""

from __future__ import annotations

import json
import re

from .polytope import Polytope, hull

MIN_DIM, MAX_DIM = 2, 5
_INT = re.compile(r"[+-]?\d+\Z")


class ParseError(ValueError):
    pass


def _check_dim(n: int, where: str) -> None:
    if not MIN_DIM <= n <= MAX_DIM:
        raise ParseError(f"{where}: dimension {n} is outside {MIN_DIM}..{MAX_DIM}")


def _parse_json(text: str) -> list[tuple[int, ...]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: invalid JSON ({e.msg})") from None
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object with 'dim' and 'vertices'")
    if "vertices" not in doc:
        raise ParseError("field 'vertices': missing")
    verts = doc["vertices"]
    if not isinstance(verts, list) or not verts:
        raise ParseError("field 'vertices': expected a nonempty list")
    dim = doc.get("dim")
    if dim is not None and (type(dim) is not int):
        raise ParseError(f"field 'dim': expected an integer, got {dim!r}")
    out = []
    for i, v in enumerate(verts):
        if not isinstance(v, list):
            raise ParseError(f"vertices[{i}]: expected a list of integers")
        for j, x in enumerate(v):
            if type(x) is not int:
                raise ParseError(f"vertices[{i}][{j}]: {x!r} is not an integer")
        out.append(tuple(v))
    n = dim if dim is not None else len(out[0])
    _check_dim(n, "field 'dim'")
    for i, v in enumerate(out):
        if len(v) != n:
            raise ParseError(f"vertices[{i}]: has {len(v)} coordinates, expected {n}")
    return out


def _parse_text(text: str) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    n = None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("#"):
            continue
        if not s:
            if out:
                break
            continue
        toks = s.split()
        for col, t in enumerate(toks, 1):
            if not _INT.match(t):
                raise ParseError(f"line {lineno}, field {col}: {t!r} is not an integer")
        v = tuple(int(t) for t in toks)
        if n is None:
            n = len(v)
            _check_dim(n, f"line {lineno}")
        elif len(v) != n:
            raise ParseError(f"line {lineno}: has {len(v)} coordinates, expected {n}")
        out.append(v)
    if not out:
        raise ParseError("no vertices found")
    return out


def parse_points(data: bytes | str) -> list[tuple[int, ...]]:
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    if text.lstrip().startswith(("{", "[")):
        return _parse_json(text)
    return _parse_text(text)


def parse_polytope(data: bytes | str, *, full_dimensional: bool = False) -> Polytope:
    """Polytope from either file format.

    With ``full_dimensional`` the points must span their ambient space.
    """
    p = hull(parse_points(data))
    if full_dimensional and not p.is_full_dimensional:
        raise ParseError(
            f"points span a {p.affine_dim}-dimensional affine subspace of Z^{p.ambient_dim}"
        )
    return p


def to_json(p: Polytope) -> str:
    return json.dumps({"dim": p.ambient_dim, "vertices": [list(v) for v in p.vertices]})


def to_text(p: Polytope) -> str:
    return "\n".join(" ".join(map(str, v)) for v in p.vertices) + "\n\n"
