import json

import numpy as np
import pytest

from cusp_atlas.cli.main import main
from cusp_atlas.core.catalog import FamilyLabel, algebra_basis
from cusp_atlas.core.config import settings
from cusp_atlas.core.mat4core import elementary


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def _write_basis(tmp_path, matrices, name="basis.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"version": 1, "matrices": [np.asarray(m).tolist() for m in matrices]}))
    return str(path)


def test_normalize_e(capsys):
    code, report = _run(capsys, "normalize", "E", "-2", "0.6")
    assert code == 0
    assert report["canonical_params"] == pytest.approx([0.3])
    assert report["certificate"]["factors"] == ["P", "Q"]
    assert report["certificate"]["passed"]


def test_normalize_c(capsys):
    code, report = _run(capsys, "normalize", "C", "1", "2", "3")
    assert code == 0
    assert report["family"] == "Cusp:C"
    assert report["canonical_params"] == pytest.approx(list(np.array([3.0, 2.0, 1.0]) / np.sqrt(14.0)))


def test_normalize_not_convex(capsys):
    code, _ = _run(capsys, "normalize", "E", "1", "0.8")
    assert code == 3


def test_normalize_wrong_arity(capsys):
    code, _ = _run(capsys, "normalize", "F", "1")
    assert code == 3


def test_classify_file(tmp_path, capsys):
    path = _write_basis(tmp_path, list(algebra_basis(FamilyLabel.N6)))
    code, report = _run(capsys, "classify", path)
    assert code == 0
    assert report["label"] == "N6"
    assert report["evidence"]["pairing_rank"] == 1


def test_classify_cusp_file(tmp_path, capsys):
    path = _write_basis(tmp_path, list(algebra_basis(FamilyLabel.CUSP_F)))
    code, report = _run(capsys, "classify", path)
    assert code == 0
    assert report["label"] == "Cusp:F"


def test_classify_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _ = _run(capsys, "classify", str(path))
    assert code == 2


def test_classify_missing_file(tmp_path, capsys):
    code, _ = _run(capsys, "classify", str(tmp_path / "missing.json"))
    assert code == 2


def test_classify_not_abelian(tmp_path, capsys):
    path = _write_basis(tmp_path, [elementary(1, 2), elementary(2, 1)])
    code, _ = _run(capsys, "classify", path)
    assert code == 3


def test_curvature(capsys):
    code, report = _run(capsys, "curvature", "N4'")
    assert code == 0
    assert report["verdict"] == "Convex"
    assert report["det_closed"] == 1.0


def test_curvature_non_convex_e_plane(capsys):
    code, report = _run(capsys, "curvature", "E1", "1", "0.8", "--point", "1", "2", "1")
    assert code == 0
    assert report["verdict"] == "Concave-direction"
    assert report["det_closed"] < 0.0


def test_unknown_label(capsys):
    code, _ = _run(capsys, "curvature", "N9")
    assert code == 2


def test_orbit_closure(capsys):
    code, report = _run(capsys, "orbit-closure", "C")
    assert code == 0
    assert report["signature"]["generic_dim"] == 3
    assert all(check["passed"] for check in report["table"])


def test_region(tmp_path, capsys):
    csv_path = tmp_path / "region.csv"
    code, report = _run(capsys, "region", "--resolution", "16", "--csv", str(csv_path))
    assert code == 0
    assert report["total"] == 256
    assert csv_path.exists()


def test_region_too_coarse(capsys):
    code, _ = _run(capsys, "region", "--resolution", "8")
    assert code == 3


def test_mesh(tmp_path, capsys):
    obj_path = tmp_path / "leaf.obj"
    code, report = _run(capsys, "mesh", "Cusp:E", "0.25", "--k", "2", "--grid", "4", "--obj", str(obj_path))
    assert code == 0
    assert report["vertices"] == 16
    assert report["height"] == pytest.approx(report["expected_height"], abs=1e-9)
    assert report["min_curvature"] > 0.0
    assert obj_path.exists()


def test_mesh_rejects_families(capsys):
    code, _ = _run(capsys, "mesh", "E1", "1", "0.2", "--k", "2")
    assert code == 3


def test_verify(capsys):
    code, report = _run(capsys, "--seed", "5", "verify", "normalforms", "--samples", "1")
    assert code == 0
    assert report["summary"]["failed"] == 0
    assert "records" not in report
    assert report["seed"] == 5
    assert settings.SEED == 5


def test_verify_jsonl(tmp_path, capsys):
    path = tmp_path / "records.jsonl"
    code, report = _run(capsys, "verify", "horosphere", "--samples", "1", "--jsonl", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == report["summary"]["total"] == 9
    assert json.loads(lines[0])["suite"] == "horosphere"


def test_bad_tolerance(capsys):
    code, _ = _run(capsys, "--tol", "2", "verify", "normalforms")
    assert code == 2


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "cusp-atlas" in capsys.readouterr().out


def test_missing_command(capsys):
    assert main([]) == 2
