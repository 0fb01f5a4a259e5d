import json
import subprocess
import sys

import pytest

from curvcert.cli import EXIT_IO, EXIT_OK, EXIT_PRECONDITION, main
from curvcert.generators import fubini_study_cp2, minkowski_fs_block, random_curvature
from curvcert.exterior import ScalarSpace
from curvcert.report import parse_spec, spec_from_tensor, tensor_from_spec


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write_spec(tmp_path, C, name="t.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec_from_tensor(C).to_dict()))
    return path


def test_topology(capsys):
    code, out, _ = run(capsys, "topology", "T4#T4#CP2#CP2", "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert (rep["chi"], rep["sigma"], rep["p1_integral"]) == (0, 2, 6)
    assert rep["verdict"] == "Lorentzian yes; globally PE/PM no"


def test_topology_text_format(capsys):
    code, out, _ = run(capsys, "topology", "CP2")
    assert code == EXIT_OK and "chi: 3" in out


def test_zero_spec(tmp_path, capsys):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"dimension": 4, "signs": [-1, 1, 1, 1], "components": []}))
    code, out, _ = run(capsys, "pontryagin", path, "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["forms"][0]["zero"] and rep["forms"][0]["routes_agree"]


def test_fubini_study_pontryagin(tmp_path, capsys):
    path = write_spec(tmp_path, fubini_study_cp2())
    code, out, _ = run(capsys, "pontryagin", path, "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["forms"][0]["top_coefficient"] == "24"


def test_parse_error_has_location(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dimension": 4, "signs": [1, 1, 1, 1],
                                "components": [{"indices": [1, 2, 3, 9], "value": "1"}]}))
    code, out, err = run(capsys, "decompose", path)
    assert code == EXIT_IO and out == ""
    assert "components[0].indices" in err


def test_bianchi_violation_is_a_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dimension": 4, "signs": [1, 1, 1, 1],
                                "components": [{"indices": [1, 2, 3, 4], "value": "1"}]}))
    code, _, err = run(capsys, "decompose", path)
    assert code == EXIT_IO and "components" in err


def test_malformed_json_and_missing_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"dimension": 4,\n "signs": [1, 1, 1, 1]\n')
    code, _, err = run(capsys, "decompose", path)
    assert code == EXIT_IO and "line" in err
    code, _, _ = run(capsys, "decompose", tmp_path / "missing.json")
    assert code == EXIT_IO


def test_precondition_exit(tmp_path, capsys):
    path = write_spec(tmp_path, fubini_study_cp2())
    code, _, err = run(capsys, "certify", path, "--alpha", "1", "--axis", "0,1,0,0")
    assert code == EXIT_PRECONDITION and "neither" in err
    code, _, _ = run(capsys, "petrov", path)
    assert code == EXIT_PRECONDITION  # Riemannian input


def test_certify_block_tensor(tmp_path, capsys):
    path = write_spec(tmp_path, minkowski_fs_block())
    code, out, _ = run(capsys, "certify", path, "--alpha", "1,1", "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["certificates"][0]["valid"]


def test_certify_generated(capsys):
    code, out, _ = run(capsys, "certify", "--gen", "--n", "4", "--alpha", "1", "--count", "3", "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK and len(rep["certificates"]) == 6


def test_report_echo_round_trip(tmp_path, capsys):
    C = random_curvature(ScalarSpace((-1, 1, 1, 1, 1)), 4)
    path = write_spec(tmp_path, C)
    code, out, _ = run(capsys, "decompose", path, "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["reconstruction_exact"]
    assert tensor_from_spec(parse_spec(rep["input"])) == C
    # the echo is itself a valid input, and the second report is identical
    path2 = tmp_path / "echo.json"
    path2.write_text(json.dumps(rep["input"]))
    _, out2, _ = run(capsys, "decompose", path2, "--format", "structured")
    assert out2 == out


def test_em_and_petrov(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "petrov", "--type", "II", "--eigen", "0:1")
    assert code == EXIT_OK
    path = tmp_path / "w.json"
    path.write_text(out)
    code, out, _ = run(capsys, "petrov", path, "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["petrov"]["type"] == "II" and rep["petrov"]["subtype"] == "allImaginary"
    assert rep["theorem"]["vanishes"]
    # type D with imaginary eigenvalues is purely magnetic along the time axis
    _, out, _ = run(capsys, "gen", "petrov", "--type", "D", "--eigen", "0:1")
    path.write_text(out)
    code, out, _ = run(capsys, "em", path, "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["purely_magnetic"] and not rep["purely_electric"]
    assert rep["electric"] == [] and rep["commutation_sign"] == -1


@pytest.mark.parametrize("name,extra", [
    ("constant-curvature", ["--n", "5", "--kappa", "2/3"]),
    ("random", ["--signs", "1,-1,1,1,1,1"]),
    ("random-parity", ["--n", "4", "--parity", "odd"]),
    ("fubini-study", []),
    ("minkowski-fs", []),
    ("petrov", ["--type", "I", "--eigen", "1:1,2,-3:-1"]),
])
def test_gen_output_reparses_and_is_deterministic(name, extra, capsys):
    code, out, _ = run(capsys, "gen", name, *extra)
    assert code == EXIT_OK
    C = tensor_from_spec(parse_spec(out))
    assert C.n >= 4
    _, again, _ = run(capsys, "gen", name, *extra)
    assert again == out


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "topology", "T4", "--out", target, "--format", "structured")
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["chi"] == 0


def test_selfcheck_small(capsys):
    code, out, _ = run(capsys, "selfcheck", "--sizes", "small", "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["passed"]
    assert [c["number"] for c in rep["criteria"]] == list(range(1, 9))
    _, again, _ = run(capsys, "selfcheck", "--sizes", "small", "--format", "structured")
    assert again == out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "curvcert", "topology", "T4#CP2"], capture_output=True, text=True)
    assert res.returncode == 0 and "sigma: 1" in res.stdout


def test_pontryagin_in_dimension_eight(tmp_path, capsys):
    path = write_spec(tmp_path, minkowski_fs_block())
    code, out, _ = run(capsys, "pontryagin", path, "--alpha", "1,1", "--format", "structured")
    rep = json.loads(out)
    assert code == EXIT_OK
    k1, k2 = rep["forms"]
    assert k1["top_coefficient"] is None and not k1["zero"] and k1["routes_agree"]
    assert k2["top_coefficient"] == "0"
    assert rep["products"][0]["zero"]
