import json
import subprocess
import sys

import jsonschema
import pytest

from bicircle import cli

UNLINKED = {"schema_version": "1.0", "circles": [
    {"center": [0, 0, 0], "radius": 1, "normal": [0, 0, 1]},
    {"center": [3, 0, 0], "radius": 1, "normal": [0, 1, 0]}]}
OLOID = {"circles": [
    {"center": [0, 0, 0], "radius": 1, "normal": [0, 0, 1]},
    {"center": [1, 0, 0], "radius": 1, "normal": [0, 1, 0]}]}


def scene(tmp_path, doc, name="scene.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def call(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out, json.loads(out)


def test_classify_the_unlinked_pair(tmp_path, capsys):
    code, _, rep = call(["classify", scene(tmp_path, UNLINKED)], capsys)
    assert code == 0 and rep["status"] == "ok"
    res = rep["result"]
    assert res["order_type"]["tag"] == "(1,1,2,2)"
    assert res["curve"]["label"] == "smooth genus one"
    assert res["curve"]["real_components"] == 2
    assert res["spectrahedron"]["is_spectrahedron"] is False


def test_surface_degree_example(tmp_path, capsys):
    code, _, rep = call(["surface-degree", scene(tmp_path, UNLINKED), "--line", "0,0.1,0.1:1,0.1,0.1"], capsys)
    assert code == 0
    assert rep["result"]["total"] == 8 and rep["result"]["real"] == 8


def test_oloid_mesh_writes_obj(tmp_path, capsys):
    obj = tmp_path / "oloid.obj"
    code, _, rep = call(["mesh", scene(tmp_path, OLOID), "--resolution", "1024", "--out", str(obj)], capsys)
    assert code == 0
    assert float(rep["result"]["area"]) == pytest.approx(12.566, rel=5e-3)
    assert rep["result"]["open_edges"] == 0
    lines = obj.read_text().splitlines()
    nv = sum(1 for s in lines if s.startswith("v "))
    faces = [s for s in lines if s.startswith("f ")]
    assert nv == rep["result"]["vertices"] and len(faces) == rep["result"]["triangles"]
    assert any(s.startswith("g ") for s in lines)
    assert all(1 <= int(i) <= nv for s in faces for i in s.split()[1:])


def test_dual_command(tmp_path, capsys):
    obj = tmp_path / "dual.obj"
    code, _, rep = call(["dual", scene(tmp_path, UNLINKED), "--origin", "auto", "--out", str(obj)], capsys)
    assert code == 0
    assert rep["result"]["patches"] == {"C1": 1, "C2": 1}
    assert obj.exists()
    code, _, rep = call(["dual", scene(tmp_path, UNLINKED), "--origin", "10,0,0"], capsys)
    assert code == 3 and rep["error"]["code"] == "origin_not_interior"


@pytest.mark.parametrize("argv, key", [
    (["bisecants", "--param", "1,1"], "variant"),
    (["member", "--point", "1.5,0,0"], "verdict"),
    (["support", "--dir", "1,0,0"], "value"),
    (["edge-curve"], "curve_type"),
    (["lmi"], "is_spectrahedron"),
])
def test_every_command_reports(tmp_path, capsys, argv, key):
    code, _, rep = call([argv[0], scene(tmp_path, UNLINKED), *argv[1:]], capsys)
    assert code == 0 and key in rep["result"]


def test_coplanar_circles_exit_three(tmp_path, capsys):
    doc = {"circles": [{"center": [0, 0, 0], "radius": 1, "normal": [0, 0, 1]},
                       {"center": [5, 0, 0], "radius": 1, "normal": [0, 0, 2]}]}
    code, _, rep = call(["classify", scene(tmp_path, doc)], capsys)
    assert code == 3
    assert rep["error"]["code"] == "coplanar_circles" and rep["error"]["exit_code"] == 3


@pytest.mark.parametrize("doc", [
    {"circles": [{"center": [0, 0, 0], "radius": 1, "normal": [0, 0, 1]}]},
    {"circles": [{"center": [0, 0], "radius": 1, "normal": [0, 0, 1]}] * 2},
    {"circles": [{"center": [0, 0, 0], "radius": -1, "normal": [0, 0, 1]},
                 {"center": [3, 0, 0], "radius": 1, "normal": [0, 1, 0]}]},
    {"circles": [{"center": [0, 0, 0], "radius": 1, "normal": [0, 0, 0]},
                 {"center": [3, 0, 0], "radius": 1, "normal": [0, 1, 0]}]},
    {"circles": [{"center": [0, 0, 0], "radius": 1, "normal": [1, 1, 0]},
                 {"center": [3, 0, 0], "radius": 1, "normal": [0, 1, 0]}]},
    {"mode": "fast", "circles": UNLINKED["circles"]},
])
def test_invalid_configs_exit_two(tmp_path, capsys, doc):
    code, _, rep = call(["classify", scene(tmp_path, doc)], capsys)
    assert code == 2 and rep["status"] == "error"


def test_bad_flags_and_paths_exit_two(tmp_path, capsys):
    code, _, _ = call(["classify", str(tmp_path / "missing.json")], capsys)
    assert code == 2
    code, _, _ = call(["member", scene(tmp_path, UNLINKED), "--point", "1,2"], capsys)
    assert code == 2


def test_float_mode_accepts_irrational_normals(tmp_path, capsys):
    doc = {"mode": "float", "circles": [{"center": [0, 0, 0], "radius": 1, "normal": [1, 1, 0]},
                                        {"center": [3, 0, 0], "radius": 1, "normal": [0, 1, 0]}]}
    code, _, rep = call(["classify", scene(tmp_path, doc)], capsys)
    assert code == 0


def test_rational_strings_are_accepted(tmp_path, capsys):
    doc = {"circles": [{"center": ["0", "0", "0"], "radius": "1", "normal": ["3/5", "0", "4/5"]},
                       {"center": [3, 0, 0], "radius": "1/2", "normal": [0, 1, 0]}]}
    code, _, _ = call(["classify", scene(tmp_path, doc)], capsys)
    assert code == 0


def test_reports_validate_and_repeat_byte_for_byte(tmp_path, capsys):
    path = scene(tmp_path, UNLINKED)
    schema = cli._schema("report.schema.json")
    for argv in (["classify", path], ["edge-curve", path], ["fuzz", "--seed", "3", "--count", "20"]):
        _, first, rep = call(argv, capsys)
        _, second, _ = call(argv, capsys)
        assert first == second
        jsonschema.validate(rep, schema)


def test_report_file_option(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["lmi", scene(tmp_path, UNLINKED), "--report", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(out.read_text())["command"] == "lmi"


def test_exact_reports_carry_rationals(tmp_path, capsys):
    _, _, rep = call(["edge-curve", scene(tmp_path, UNLINKED)], capsys)
    text = json.dumps(rep["result"]["discriminant_st"])
    assert '"exact"' in text


def test_fuzz_never_sees_excluded_types(capsys):
    code, _, rep = call(["fuzz", "--seed", "1", "--count", "100"], capsys)
    assert code == 0
    assert rep["result"]["excluded_types_seen"] == {"Cuspidal": 0, "FourLines": 0}
    assert rep["result"]["errors"] == []


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "bicircle.cli", "support", scene(tmp_path, UNLINKED),
                           "--dir", "1,0,0"], capture_output=True, text=True, timeout=120,
                          env={"BICIRCLE_THREADS": "1", "PATH": ""})
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"] == "4"
