from __future__ import annotations

import json
import subprocess
import sys

import pytest

from paragray.cli import main, suite_decompose, suite_verify_gray


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def test_verify_main_dim4(capsys):
    code, rep = run_json(capsys, "verify-main", "--dim", "4")
    assert code == 0 and rep["status"] == "pass"
    assert rep["details"]["dims"] == {"A": 20, "P": 18, "W7": 2, "W7_perp": 18, "W_G": 18}
    assert rep["structure"] == {"dim": 4, "kind": "para-hermitian"}
    assert set(rep) == {"suite", "structure", "status", "records", "details", "timing", "version"}


def test_module_table_and_transfer(capsys):
    code, rep = run_json(capsys, "module-table", "--dim", "4")
    assert code == 0 and rep["details"]["module_count"] == 7
    code, rep = run_json(capsys, "module-table", "--dim", "4", "--kind", "hermitian")
    assert code == 0
    code, rep = run_json(capsys, "transfer", "--dim", "4")
    assert code == 0 and all(r["status"] == "pass" for r in rep["records"])


def test_unsupported_dimension_is_usage_error(capsys):
    assert main(["verify-gray", "--dim", "2"]) == 2
    assert "UnsupportedDimension" in capsys.readouterr().err
    assert main(["verify-main", "--dim", "10"]) == 2


def test_unknown_label(capsys):
    assert main(["catalog", "L9.9"]) == 2
    assert "UnknownLabel" in capsys.readouterr().err


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["verify-main"])
    assert info.value.code == 2


def test_catalog_entry_passes(capsys):
    code, rep = run_json(capsys, "catalog", "L5.2-W3")
    assert code == 0 and rep["status"] == "pass"


def test_catalog_failure_sets_exit_code(capsys):
    code, rep = run_json(capsys, "catalog", "L5.2-W6")
    assert code == 1
    failed = [r for r in rep["records"] if r["status"] == "fail"]
    assert [r["name"] for r in failed] == ["L5.2-8: nonzero W6 component"]
    assert "W10" in failed[0]["witness"]


def test_export_then_decompose_w10(tmp_path, capsys):
    path = tmp_path / "w10.txt"
    assert main(["catalog", "L5.2-W10", "--export", str(path)]) == 0
    capsys.readouterr()
    code, rep = run_json(capsys, "decompose", str(path), "--dim", "6")
    assert code == 0
    assert rep["details"]["nonzero_components"] == ["W10"]
    assert rep["details"]["tau"] == "0" and rep["details"]["tau_star"] == "0"


def test_decompose_zero_tensor(tmp_path, capsys):
    path = tmp_path / "zero.txt"
    path.write_text("# nothing\n")
    code, rep = run_json(capsys, "decompose", str(path), "--dim", "4")
    assert code == 0 and rep["details"]["nonzero_components"] == []


def test_decompose_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 1 2 1\n1 2 oops\n")
    assert main(["decompose", str(bad), "--dim", "4"]) == 2
    assert "line 2" in capsys.readouterr().err
    notcurv = tmp_path / "notcurv.txt"
    notcurv.write_text("1 2 1 2 1\n")
    assert main(["decompose", str(notcurv), "--dim", "4"]) == 2
    assert "NotCurvatureTensor" in capsys.readouterr().err
    assert main(["decompose", str(tmp_path / "missing.txt"), "--dim", "4"]) == 2


def test_reports_are_deterministic(tmp_path, capsys):
    a = suite_verify_gray(4, seed=3, samples=2, points=2, poly_metrics=2).to_json()
    b = suite_verify_gray(4, seed=3, samples=2, points=2, poly_metrics=2).to_json()
    assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)
    out = tmp_path / "r.json"
    main(["verify-main", "--dim", "4", "--out", str(out)])
    text = capsys.readouterr().out
    assert "overall: pass" in text
    assert json.loads(out.read_text())["suite"] == "verify-main"


def test_verify_gray_records(capsys):
    code, rep = run_json(capsys, "verify-gray", "--dim", "4", "--samples", "2", "--points", "2")
    names = {r["name"].split(" [")[0]: r["status"] for r in rep["records"]}
    assert names["para-Gray identity for realization metrics at random points"] == "pass"
    assert names["para-Gray identity for degree 3/4 polynomial metrics at random points"] == "pass"
    assert names["d Omega vanishes at origin for realization metrics"] == "pass"
    assert rep["details"]["origin_curvature_equals_2P"] is True
    # the literal identity with P(theta) fails, so the suite exits non-zero
    assert names["curvature of realization metric at origin equals P(theta)"] == "fail"
    assert code == 1


def test_console_entry_point_runs():
    res = subprocess.run(
        [sys.executable, "-m", "paragray.cli", "verify-main", "--dim", "4", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["status"] == "pass"


def test_suite_decompose_direct():
    rep = suite_decompose("", 4)
    assert rep.passed


def test_metric_file_round_trip(tmp_path, capsys):
    import random

    from paragray.model import standard_para_hermitian
    from paragray.realize import random_para_metric

    m = random_para_metric(standard_para_hermitian(2), 3, random.Random(5))
    path = tmp_path / "metric.json"
    path.write_text(json.dumps(m.to_json()))
    code, rep = run_json(capsys, "metric", str(path), "--points", "4")
    assert code == 0, rep["records"]
    assert rep["suite"] == "metric" and rep["details"]["max_degree"] >= 2


def test_metric_file_not_para(tmp_path, capsys):
    comps = [{"i": a, "j": a, "terms": [[[0, 0, 0, 0], "1"]]} for a in range(1, 5)]
    path = tmp_path / "euclid.json"
    path.write_text(json.dumps({"dim": 4, "components": comps}))
    code, rep = run_json(capsys, "metric", str(path), "--points", "2")
    assert code == 1
    failed = [r["name"] for r in rep["records"] if r["status"] == "fail"]
    assert failed == ["J*g = -g"]


def test_metric_file_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["metric", str(path)]) == 2
    assert "ParseError" in capsys.readouterr().err
