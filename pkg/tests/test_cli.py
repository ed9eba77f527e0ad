import json

import pytest

import cones
from cli import EXIT_FALSE, EXIT_INPUT, EXIT_LIMIT, EXIT_OK, bundled_names, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_bundled_data_is_listed():
    assert bundled_names() == ["c2_split", "gl3_split", "sl2_weil2", "sl2_weil3", "u3_inert"]


def test_describe_gl3_split(capsys):
    code, doc = run_json(capsys, "describe", "gl3_split")
    assert code == EXIT_OK
    assert doc["name"] == "gl3_split"
    assert doc["I"] == ["alpha1"]
    assert doc["Delta_P"] == ["alpha2"]
    assert doc["delta"] == {"alpha2": ["0", "-1/2", "1/2"]}
    assert doc["hasse_type"] is True
    assert doc["weyl_order"] == 6
    assert doc["dual_basis"] == [["-2/3", "-2/3", "4/3"]]
    assert doc["eff_free_monoid"] is True


def test_describe_u3_inert(capsys):
    code, doc = run_json(capsys, "describe", "u3_inert")
    assert code == EXIT_OK
    assert doc["m"] == {"alpha2": 2}
    assert doc["d"] == {"alpha2": 2}
    assert doc["hasse_type"] is False


def test_describe_reads_a_file_path(capsys, tmp_path):
    path = tmp_path / "sl2.json"
    path.write_text(json.dumps({"p": 5, "rank": 1, "simple_roots": [[2]], "simple_coroots": [[1]],
                                "sigma_char": [[1]], "mu": [1]}))
    code, doc = run_json(capsys, "describe", str(path))
    assert code == EXIT_OK
    assert doc["delta"] == {"alpha1": ["-1/4"]}


def test_strata_json_and_dot(capsys):
    code, doc = run_json(capsys, "strata", "gl3_split")
    assert code == EXIT_OK
    assert len(doc["elements"]) == 3
    assert doc["dim_G"] == 9
    code, out, _ = run(capsys, "strata", "gl3_split", "--format", "dot")
    assert code == EXIT_OK
    assert out.startswith("digraph strata {")


def test_cone_commands(capsys):
    code, doc = run_json(capsys, "eff-cone", "gl3_split")
    assert code == EXIT_OK
    assert doc["cone"] == "eff"
    assert doc["rays"] == [[-1, -1, 0]]
    code, doc = run_json(capsys, "pha-cone", "u3_inert")
    assert code == EXIT_OK
    assert sorted(doc["rays"]) == [[1, 0, 3], [4, 1, 3]]
    assert [4, 4, 4] in doc["generators"]
    code, doc = run_json(capsys, "gs-cone", "gl3_split", "--hilbert")
    assert code == EXIT_OK
    assert "hilbert_basis" in doc


def test_hilbert_basis_command(capsys):
    code, doc = run_json(capsys, "hilbert-basis", "gl3_split", "--cone", "dominant")
    assert code == EXIT_OK
    assert len(doc["hilbert_basis"]) == 4


def test_hasse_check_exit_codes(capsys):
    code, doc = run_json(capsys, "hasse-check", "u3_inert", "--lambda", "4,4,12")
    assert code == EXIT_OK
    assert doc["h0_exact"] == "true"
    code, doc = run_json(capsys, "hasse-check", "gl3_split", "--lambda", "1,1,0")
    assert code == EXIT_FALSE
    assert doc["mu_ordinary_hasse"] is False


def test_input_errors_exit_with_2(capsys):
    code, out, err = run(capsys, "hasse-check", "gl3_split", "--lambda", "1,0,0")
    assert code == EXIT_INPUT
    assert out == ""
    assert "not a character of L" in json.loads(err)["error"]
    code, _, err = run(capsys, "describe", "no_such_datum")
    assert code == EXIT_INPUT
    code, _, _ = run(capsys, "hasse-check", "gl3_split", "--lambda", "a,b,c")
    assert code == EXIT_INPUT


def test_malformed_json_reports_the_position(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"p": 3,\n  "rank": }')
    code, _, err = run(capsys, "describe", str(path))
    assert code == EXIT_INPUT
    assert "line 2" in json.loads(err)["error"]


def test_resource_limit_exits_with_3(capsys, monkeypatch):
    monkeypatch.setattr(cones, "HILBERT_VOLUME_LIMIT", 0)
    code, _, err = run(capsys, "hilbert-basis", "gl3_split", "--cone", "dominant")
    assert code == EXIT_LIMIT
    assert "limit" in json.loads(err)["error"]


def test_u3_commands(capsys):
    code, doc = run_json(capsys, "u3", "dim", "--lambda", "1,0,3", "--p", "3")
    assert code == EXIT_OK
    assert doc["dim"] == 1
    assert doc["indices"] == [0]
    assert doc["F"] == "0"
    code, doc = run_json(capsys, "u3", "decompose", "--lambda", "4,4,12", "--p", "3")
    assert code == EXIT_OK
    assert doc["decompositions"] == [{"i": 0, "k1": 0, "k2": 0, "k_mu": 1, "k_det": 0, "nu": [4, 4, 12]}]
    code, doc = run_json(capsys, "u3", "decompose", "--lambda", "0,0,1", "--p", "3")
    assert code == EXIT_FALSE
    code, doc = run_json(capsys, "u3", "split", "--lambda", "3,1,0")
    assert doc["symplectic_weight"] == [3, 1]
    code, _, _ = run(capsys, "u3", "dim", "--lambda", "1,0,3", "--p", "6")
    assert code == EXIT_INPUT


def test_u3_czip_scan(capsys):
    code, doc = run_json(capsys, "u3", "czip-scan", "--p", "2", "--box", "4")
    assert code == EXIT_OK
    assert doc["ok"] is True


def test_verify_equivariance(capsys):
    code, doc = run_json(capsys, "verify-equivariance", "--p", "3", "--degree", "2", "--trials", "4")
    assert code == EXIT_OK
    assert [r["section"] for r in doc["reports"]] == ["Ha1", "Ha2", "HaMu", "Det"]
    assert doc["field"]["modulus"] == [1, 0, 1]


def test_verify_equivariance_reports_failures(capsys):
    code, doc = run_json(capsys, "verify-equivariance", "--p", "3", "--degree", "2", "--trials", "30",
                         "--section", "Ha2Printed")
    assert code == EXIT_FALSE
    assert doc["passed"] is False
    assert "counterexample" in doc["reports"][0]


def test_verify_equivariance_split_determinant(capsys):
    code, doc = run_json(capsys, "verify-equivariance", "--case", "split", "--p", "5", "--degree", "2",
                         "--trials", "4")
    assert code == EXIT_OK
    assert doc["reports"][0]["weight"] == [-4, -4, -4]


def test_unknown_command_is_an_argparse_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2
