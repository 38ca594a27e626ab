from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from knotcalc import cli


def run(*argv, stdin=None, monkeypatch=None):
    buf = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.run(list(argv), stdout=buf)
    return code, buf.getvalue()


def report(*argv, **kw):
    code, text = run(*argv, **kw)
    return code, json.loads(text)


def test_plen():
    code, rep = report("plen", "<a,b | abaBAB>")
    assert code == 0
    assert rep["command"] == "plen" and rep["outputs"]["length"] == 4
    assert set(rep) == {"command", "inputs", "outputs", "certificates", "diagnostics"}


def test_plen_parse_error_is_positioned():
    code, rep = report("plen", "<a | ab>")
    assert code == 1
    (d,) = rep["diagnostics"]
    assert d["severity"] == "error" and d["position"] == 6


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        cli.run(["frobnicate"])
    assert err.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_triangulate():
    code, rep = report("triangulate", "<a,b | abaBAB>")
    assert code == 0
    assert rep["outputs"]["length"] == 4 and rep["outputs"]["generators"] == 5
    assert "presentation length preserved" in rep["certificates"]


def test_snf_round_trip_from_stdin(monkeypatch):
    code, rep = report("snf", '{"rows": 2, "cols": 2, "entries": [2, 4, 6, 8]}')
    assert code == 0 and rep["outputs"]["d"] == [2, 4]
    # the report itself is accepted as input
    code2, rep2 = report("snf", "-", stdin=json.dumps(rep), monkeypatch=monkeypatch)
    assert code2 == 0 and rep2["inputs"] == rep["inputs"]


def test_matrix_from_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("[[1, 1, -2]]")
    code, rep = report("kernel-basis", str(path))
    assert code == 0
    assert rep["outputs"]["solutions"] == [[-1, 1, 0], [2, 0, 1]]
    assert rep["outputs"]["entry_bound"] == 3


def test_bad_matrix_json():
    code, rep = report("snf", "[[1, 2], [3]]")
    assert code == 1 and rep["diagnostics"][0]["severity"] == "error"


def test_cycles_and_torsion(tmp_path):
    cx = {"cells": [{"id": c, "kind": "monkey-handle"} for c in "xyz"],
          "fibers": ["p"],
          "contributions": [{"cell": "x", "fiber": "p", "value": 1},
                            {"cell": "y", "fiber": "p", "value": 1},
                            {"cell": "z", "fiber": "p", "value": -2}]}
    path = tmp_path / "cx.json"
    path.write_text(json.dumps(cx))
    code, rep = report("cycles", str(path), "--plen", "3", "--torsion-rows", "[[2,0],[0,2],[1,1]]")
    assert code == 0
    assert [g["coefficients"] for g in rep["outputs"]["generators"]] == [{"x": -1, "y": 1}, {"x": 2, "z": 1}]
    assert rep["outputs"]["torsion"] == {"max_order": 2, "bound": 6, "ok": True, "wide_rows": 1}


def test_cycles_invalid_complex_exits_1():
    cx = {"cells": [{"id": "B", "kind": "one-handle"}], "fibers": ["f"],
          "contributions": [{"cell": "B", "fiber": "f", "value": 1}]}
    code, rep = report("cycles", json.dumps(cx))
    assert code == 1
    assert rep["diagnostics"][0]["message"] == "one-handle must contribute 0 or ±2"


def test_zeta():
    code, rep = report("zeta", "--omega", "2,3", "--m", "3")
    assert code == 0
    out = rep["outputs"]
    assert out["zeta"] == [1, 0] and out["phi_omega_over_m"] == 1 and out["phi_omega"] == 3


def test_zeta_non_primitive():
    code, rep = report("zeta", "--omega", "2,4", "--m", "3")
    assert code == 1


def test_enum_knots_and_tree_round_trip(tmp_path):
    code, rep = report("enum-knots", "--max-vertices", "1", "--max-p", "3", "--max-q", "3")
    assert code == 0 and rep["outputs"]["count"] == 2
    code, rep = report("enum-knots", "--max-vertices", "2", "--max-p", "3", "--max-q", "3")
    assert rep["outputs"]["count"] == 18
    entry = next(t for t in rep["outputs"]["trees"] if t["code"] == "C(3,2)[T(-3,2)]")
    path = tmp_path / "t.json"
    path.write_text(json.dumps(entry["tree"]))
    code, val = report("validate", str(path))
    assert code == 0 and val["outputs"]["code"] == entry["code"]
    # validate's own report round-trips
    path.write_text(json.dumps(val))
    code, val2 = report("validate", str(path))
    assert val2["outputs"] == val["outputs"]


def test_desatellite_and_winding(tmp_path):
    tree = {"root": "c", "nodes": [{"id": "c", "kind": "cable", "params": {"p": 5, "q": 3}},
                                   {"id": "x", "kind": "torus-knot", "params": {"p": 3, "q": 2}}],
            "edges": [{"parent": "c", "child": "x", "slot": 0}]}
    path = tmp_path / "t.json"
    path.write_text(json.dumps(tree))
    code, rep = report("desatellite", str(path), "--edge", "x")
    assert code == 0 and rep["outputs"]["code"] == "T(5,3)"
    code, rep = report("winding", str(path), "--node", "x")
    assert code == 0 and rep["outputs"]["divisibility"] == 3


def test_validate_reports_diagnostics():
    tree = {"root": "c", "nodes": [{"id": "c", "kind": "cable", "params": {"p": 1, "q": 3}}], "edges": []}
    code, rep = report("validate", json.dumps(tree))
    assert code == 1
    assert rep["outputs"]["valid"] is False
    assert rep["diagnostics"][0]["message"] == "cable requires exactly one child, has 0"


def test_catalog_flag(tmp_path):
    cat = tmp_path / "cat.json"
    cat.write_text(json.dumps({"entries": [{"catalog_id": "fig8", "boundary_count": 1,
                                            "volume": "2.029883212819307"}]}))
    code, rep = report("--catalog", str(cat), "enum-knots", "--max-vertices", "1", "--max-p", "1",
                       "--max-q", "2", "--codes-only")
    assert code == 0 and rep["outputs"]["codes"] == ["H(fig8;m0;l;f)[]"]
    # global flags are also accepted after the subcommand
    code, rep2 = report("enum-knots", "--max-vertices", "1", "--max-p", "1", "--max-q", "2",
                        "--codes-only", "--catalog", str(cat))
    assert rep2 == rep


def test_bounds_report():
    code, rep = report("bounds", "--plen", "1")
    out = rep["outputs"]
    assert code == 0
    assert out["T"]["value"] == 6 and out["A_over_pi"]["value"] == 351
    assert out["critical_geodesic_length"]["value"].startswith("0.000391568")
    assert out["critical_cone_order"]["value"] == 118
    assert all("formula" in v for v in out.values())


def test_bounds_with_vol_eps_and_precision():
    code, rep = report("--precision", "30", "bounds", "--plen", "4", "--vol", "2.0", "--eps", "0.1")
    out = rep["outputs"]
    assert code == 0
    assert out["degree_bound"]["value"] == 6
    assert {"omega", "diam_thick", "diam_total"} <= set(out)
    assert len(out["volume_bound"]["value"].replace(".", "")) <= 31


def test_text_format():
    code, text = run("--format", "text", "plen", "<a,b | abaBAB>")
    assert code == 0 and "length: 4" in text.splitlines()


def test_reports_are_deterministic():
    argv = ["bounds", "--plen", "3", "--eps", "0.05", "--vol", "1.5"]
    assert run(*argv) == run(*argv)


def test_certificate_failure_exits_3(monkeypatch):
    from knotcalc.errors import CertificateError

    def broken(*_a, **_k):
        raise CertificateError("A*u != 0")

    monkeypatch.setattr(cli.linalg, "bounded_kernel_basis", broken)
    code, rep = report("kernel-basis", "[[1, 1]]")
    assert code == 3
    assert rep["diagnostics"][0]["kind"] == "certificate"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "knotcalc", "plen", "<a | aaaa>"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outputs"]["length"] == 2


def test_large_plen_bounds_in_log_space():
    proc = subprocess.run([sys.executable, "-m", "knotcalc", "--precision", "20", "bounds", "--plen", "10000"],
                          capture_output=True, text=True, check=False, timeout=60)
    assert proc.returncode == 0, proc.stderr
    out = json.loads(proc.stdout, parse_int=str)["outputs"]
    assert len(out["A_over_pi"]["value"]) > 14000
    assert "e-14324" in out["critical_geodesic_length"]["value"]
    assert len(out["critical_cone_order"]["value"]) > 7000
