import json
import random

import pytest

import hollowpoly.verify as verify
from hollowpoly.catalog import catalog
from hollowpoly.cli import main
from hollowpoly.formats import ParseError, parse_points, parse_polytope, to_json, to_text
from hollowpoly.lattice import random_unimodular_map
from hollowpoly.polytope import simplex_polytope


def test_parse_text_and_json():
    text = "# a triangle\n0 0\n2 0\n\n0 2\n"
    assert parse_points(text) == [(0, 0), (2, 0)]
    assert parse_points('{"dim": 2, "vertices": [[0,0],[2,0],[0,2]]}') == [(0, 0), (2, 0), (0, 2)]
    assert parse_points(b"1 2 3\n-4 +5 6\n") == [(1, 2, 3), (-4, 5, 6)]


@pytest.mark.parametrize(
    "data,fragment",
    [
        ("0 0 0\n1 0 1.5\n", "line 2, field 3: '1.5' is not an integer"),
        ('{"vertices": [[0, 0], [1, 1.5]]}', "vertices[1][1]: 1.5 is not an integer"),
        ('{"vertices": [[0, 0], [1, 0]', "line 1"),
        ("0\n1\n", "dimension 1"),
        ("0 0 0 0 0 0\n", "dimension 6"),
        ("0 0\n1 0 0\n", "line 2: has 3 coordinates"),
        ("# nothing\n", "no vertices"),
    ],
)
def test_parse_errors(data, fragment):
    with pytest.raises(ParseError) as e:
        parse_points(data)
    assert fragment in str(e.value)


def test_full_dimensional_flag():
    with pytest.raises(ParseError):
        parse_polytope("0 0 0\n1 0 0\n0 1 0\n", full_dimensional=True)
    assert parse_polytope("0 0\n1 0\n0 1\n", full_dimensional=True).affine_dim == 2


@pytest.mark.parametrize("i", range(1, 10))
def test_round_trip(i):
    p = catalog()[i]
    assert parse_polytope(to_json(p)) == p
    assert parse_polytope(to_text(p)) == p


@pytest.fixture
def write(tmp_path):
    def _write(name, p):
        path = tmp_path / name
        path.write_text(to_text(p) if not isinstance(p, str) else p)
        return str(path)

    return _write


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_info_on_three_delta3(write, capsys):
    path = write("p3.txt", simplex_polytope(3, 3))
    assert main(["info", path, "--format", "json"]) == 0
    doc = _json_out(capsys)
    assert (doc["vol"], doc["degree"], doc["width"], doc["points"], doc["interior"]) == (27, 2, 3, 20, 0)
    assert main(["info", path]) == 0
    assert "vol" in capsys.readouterr().out


def test_classify_p1(write, capsys):
    path = write("p1.txt", catalog()[1])
    assert main(["classify", path, "--format", "json"]) == 0
    doc = _json_out(capsys)
    assert doc["tag"] == "Exceptional" and doc["containers"] == [1]


def test_classify_tag_stable_under_maps(write, capsys):
    rng = random.Random(11)
    for i in (2, 5):
        q = catalog()[i].transform(random_unimodular_map(3, rng))
        assert main(["classify", write(f"q{i}.txt", q), "--format", "json"]) == 0
        assert _json_out(capsys)["containers"] == [i]
    q = simplex_polytope(3, 2).transform(random_unimodular_map(3, rng))
    assert main(["classify", write("t.txt", q), "--format", "json"]) == 0
    assert _json_out(capsys)["tag"] == "ProjectsTo2Delta2"


def test_equiv_embed_width_project(write, capsys):
    a = write("a.txt", simplex_polytope(3, 2))
    b = write("b.txt", simplex_polytope(3, 2).transform(random_unimodular_map(3, random.Random(2))))
    c = write("c.txt", simplex_polytope(3, 3))
    assert main(["equiv", a, b, "--format", "json"]) == 0
    assert _json_out(capsys)["equivalent"] is True
    assert main(["embed", a, c, "--format", "json"]) == 0
    assert _json_out(capsys)["embeds"] is True
    assert main(["embed", c, a, "--format", "json"]) == 0
    assert _json_out(capsys)["embeds"] is False
    assert main(["width", c, "--format", "json"]) == 0
    assert _json_out(capsys)["width"] == 3
    assert main(["project", a, "--format", "json"]) == 0
    assert _json_out(capsys)["projects"] is True


def test_enumerate_to_file(tmp_path, capsys):
    out = tmp_path / "s.jsonl"
    assert main(["enumerate", "--vol-max", "3", "--filter", "empty", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert json.loads(capsys.readouterr().out)["counts"]


def test_census_and_catalog(write, capsys):
    assert main(["census", "--container", write("t.txt", simplex_polytope(3, 2)), "--format", "json"]) == 0
    recs = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert any(r["invariants"]["vol"] == 8 for r in recs)
    assert any(r["invariants"]["vol"] == 1 for r in recs)
    assert main(["catalog", "--index", "6", "--format", "json"]) == 0
    assert _json_out(capsys)["catalog"]["6"]["dim"] == 3


def test_exit_parse(write, capsys):
    assert main(["info", write("bad.txt", "0 0 0\n1 x 0\n")]) == 2
    assert "line 2, field 2" in capsys.readouterr().err
    assert main(["info", "/nonexistent/file"]) == 2


def test_exit_precondition(write):
    flat = write("flat.txt", "0 0 0\n3 0 0\n0 3 0\n")
    assert main(["classify", flat]) == 3
    assert main(["project", write("tri.txt", simplex_polytope(2, 2))]) == 3
    assert main(["census"]) == 3


def test_exit_resource():
    assert main(["enumerate", "--vol-max", "1000"]) == 4


def test_verify_reports_corrupted_catalog(monkeypatch, capsys):
    broken = dict(catalog())
    broken[2] = simplex_polytope(3, 4)
    result = verify.check_catalog(verify.Bounds.fast(), entries=broken)
    assert result.status == verify.FAIL
    assert verify.check_catalog(verify.Bounds.fast()).status in (verify.PASS, verify.REPORT)

    monkeypatch.setattr(verify, "catalog", lambda: broken)
    monkeypatch.setattr(verify, "CHECKS", [verify.check_catalog])
    assert main(["verify-paper", "--fast"]) == 1
    assert capsys.readouterr().out.startswith("FAIL")
