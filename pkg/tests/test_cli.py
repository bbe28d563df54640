import json
import math
from pathlib import Path

import pytest

from mfd.cli import main

PHI = (1 + math.sqrt(5)) / 2
FIXTURES = Path(__file__).resolve().parent.parent / "docs" / "fixtures"
A4 = str(FIXTURES / "a4.json")
HOMOG = str(FIXTURES / "homog.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def write_spec(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_perron_a4(capsys):
    report = run_json(capsys, "perron", "--input", A4)
    assert report["command"] == "perron"
    assert report["mode"] == "rational"
    assert len(report["input_digest"]) == 64
    assert abs(float(report["result"]["d"]) - PHI) < 1e-12
    sigma = report["result"]["sigma"]
    assert abs(float(sigma[0][0]) - PHI ** 2) < 1e-12
    assert abs(float(sigma[1][1]) - 1) < 1e-12


def test_perron_integer_dimension(capsys, tmp_path):
    spec = write_spec(tmp_path, "t.json", {"D": [[3]]})
    report = run_json(capsys, "perron", "--input", spec)
    assert report["result"]["d"] == "3"
    assert report["result"]["alpha"] == ["1"]


def test_extend_a4(capsys):
    report = run_json(capsys, "extend", "--input", A4)
    res = report["result"]
    assert res["delta_complete"] == [["2", "1"], ["2", "1"]]
    assert res["eta"] == ["1", "1"]
    assert res["xi"] == ["2", "1"]
    assert report["diagnostics"]["objects"] == "4"
    assert len(res["groupoid_values"]) == 4


def test_extend_requires_delta(capsys, tmp_path):
    spec = write_spec(tmp_path, "t.json", {"D": [[1, 0], [1, 1]]})
    code, out, err = run(capsys, "extend", "--input", spec)
    assert code == 2
    assert json.loads(err)["error"] == "ParseError"


def test_markov_trace_a4(capsys):
    report = run_json(capsys, "markov-trace", "--input", A4)
    res = report["result"]
    assert res["T"] == [["1/2", "0"], ["1/2", "1"]]
    assert res["T_tilde"] == [["2", "2"], ["0", "1"]]
    assert abs(float(res["d_squared"]) - PHI ** 2) < 1e-10
    assert abs(float(res["trace_A"][0]) - PHI ** -2) < 1e-10


def test_markov_trace_float_mode(capsys):
    report = run_json(capsys, "markov-trace", "--input", A4,
                      "--mode", "float")
    assert report["mode"] == "float"
    assert report["result"]["T"][0][0] == "0.5"


def test_markov_trace_domain_error_exit_code(capsys, tmp_path):
    spec = write_spec(tmp_path, "t.json",
                      {"D": [[1], [1]], "delta": [[1], [1]]})
    code, out, err = run(capsys, "markov-trace", "--input", spec)
    assert code == 1
    assert json.loads(err)["error"] == "ColumnNormalizationViolation"


def test_tower_steps(capsys):
    report = run_json(capsys, "tower", "--input", A4, "--steps", "3")
    levels = report["result"]["levels"]
    assert levels[0]["matrix"] == [["2", "1"], ["2", "1"]]
    assert levels[1]["matrix"] == [["5/2", "3/2"], ["5/3", "1"]]
    assert levels[2]["matrix"] == [["13/5", "8/5"], ["13/8", "1"]]
    assert levels[3]["matrix"] == [["34/13", "21/13"], ["34/21", "1"]]
    assert report["flags"]["steps"] == "3"
    assert report["diagnostics"]["steps"] == "3"


def test_tower_iterate(capsys):
    report = run_json(capsys, "tower", "--input", A4)
    assert report["diagnostics"]["converged"] is True
    iters = int(report["diagnostics"]["iterations"])
    assert 0 < iters <= 60
    assert float(report["result"]["residual_to_standard"]) <= 1e-9
    levels = report["result"]["levels"]
    assert len(levels) == iters + 1


def test_tower_table_format(capsys):
    code, out, err = run(capsys, "tower", "--input", A4, "--steps", "1",
                         "--format", "table")
    assert code == 0
    assert "5/2" in out and "3/2" in out and "5/3" in out
    # matrix rows are aligned into columns
    assert any("  " in line for line in out.splitlines() if "5/2" in line)


def test_downward_strict(capsys):
    report = run_json(capsys, "downward", "--input", A4)
    res = report["result"]
    assert res["status"] == "Infeasible"
    assert res["mode"] == "strict"
    assert res["certificate"]["candidate_pi"] == ["1/2", "0"]
    assert res["certificate"]["zero_columns"] == ["1"]
    assert "gamma" not in res


def test_downward_tunnel(capsys):
    report = run_json(capsys, "downward", "--input", A4, "--markov-tunnel")
    res = report["result"]
    assert res["status"] == "MarkovTunnelOnly"
    assert res["pi"] == ["1/2", "0"]
    assert report["flags"]["markov_tunnel"] is True


def test_downward_feasible_includes_gamma(capsys, tmp_path):
    spec = write_spec(tmp_path, "t.json", {"D": [[1], [1]],
                                           "delta": [[2], [2]]})
    report = run_json(capsys, "downward", "--input", spec)
    res = report["result"]
    assert res["status"] == "Feasible"
    assert res["pi"] == ["1/2"]
    assert res["gamma"] == [["1", "1"]]


def test_homogeneity_homog(capsys):
    report = run_json(capsys, "homogeneity", "--input", HOMOG)
    res = report["result"]
    assert res["homogeneous"] is True
    assert res["row_sums"] == ["2", "2"]
    assert report["diagnostics"]["all_flags_agree"] is True


def test_homogeneity_tolerance_sources(capsys, monkeypatch):
    report = run_json(capsys, "homogeneity", "--input", A4)
    assert report["result"]["homogeneous"] is False
    # an absurdly loose env tolerance flips every check; float mode keeps
    # the comparisons tolerance-based instead of exact
    monkeypatch.setenv("MFD_TOLERANCE", "0.5")
    loose = run_json(capsys, "homogeneity", "--input", A4, "--mode", "float")
    assert loose["result"]["homogeneous"] is True
    # an explicit flag wins over the environment
    strict = run_json(capsys, "homogeneity", "--input", A4, "--tol", "1e-9")
    assert strict["result"]["homogeneous"] is False
    monkeypatch.setenv("MFD_TOLERANCE", "not-a-number")
    code, out, err = run(capsys, "homogeneity", "--input", A4)
    assert code == 2


def test_realizable(capsys):
    report = run_json(capsys, "realizable", "--input", A4)
    res = report["result"]
    assert res["realizable"] is True
    assert res["eta"] == ["1", "1"] and res["xi"] == ["2", "1"]
    assert "violation" not in res


def test_morita_rescale_explicit_rho(capsys):
    report = run_json(capsys, "morita-rescale", "--input", A4,
                      "--rho", "1,2")
    res = report["result"]
    assert res["rho"] == ["1", "2"]
    assert res["delta_rescaled"] == [["3", "2"], ["3/2", "1"]]


def test_morita_rescale_to_standard(capsys):
    report = run_json(capsys, "morita-rescale", "--input", A4)
    res = report["result"]
    rho = [float(x) for x in res["rho"]]
    assert abs(rho[0] - 1) < 1e-10 and abs(rho[1] - PHI) < 1e-10
    assert float(res["residual_to_standard"]) < 1e-10


def test_morita_rescale_bad_rho(capsys):
    code, out, err = run(capsys, "morita-rescale", "--input", A4,
                         "--rho", "1,2,3")
    assert code == 2


def test_loopbasis_verify(capsys):
    report = run_json(capsys, "loopbasis-verify", "--input", A4)
    res = report["result"]
    assert res["ok"] is True
    assert res["loop_counts"] == {"N0": "5", "N1": "13"}
    assert res["transfer_matrix"] == [["1", "2"], ["1/2", "2"]]
    assert float(res["watatani_deviation"]) <= 1e-10
    assert float(res["pp_deviation"]) <= 1e-10
    assert report["diagnostics"]["basis_size"] == "7"
    assert abs(float(res["h_inf"][0]) - (1 + 2 * PHI) / (2 + PHI)) < 1e-10


def test_loopbasis_verify_needs_m0(capsys, tmp_path):
    spec = write_spec(tmp_path, "t.json", {"D": [[1, 0], [1, 1]]})
    code, out, err = run(capsys, "loopbasis-verify", "--input", spec)
    assert code == 2


def test_report_all_sections_and_stability(capsys):
    code, first, err = run(capsys, "report-all", "--input", A4)
    assert code == 0
    code, second, err = run(capsys, "report-all", "--input", A4)
    assert first == second  # byte-stable output
    report = json.loads(first)
    sections = report["result"]
    assert sections["validate"] == {"a": "2", "b": "2", "edges": "3",
                                    "connected": True}
    assert sections["extremality"] == {"E1": True, "E2": True, "E3": True,
                                       "extremal": True}
    assert sections["homogeneity"]["homogeneous"] is False
    assert sections["downward"]["strict"]["status"] == "Infeasible"
    assert sections["downward"]["markov_tunnel"]["status"] == "MarkovTunnelOnly"
    assert sections["realizability"]["realizable"] is True
    assert float(sections["standard_fixed_point_residual"]) < 1e-12
    assert sections["tower_preview"][0]["matrix"] == \
        [["5/2", "3/2"], ["5/3", "1"]]
    fd = sections["finite_dimensional"]
    assert fd["m1"] == ["3", "2"]
    assert fd["super_extremal"] is False
    assert report["diagnostics"]["delta_source"] == "explicit"


def test_report_all_standard_delta_source(capsys, tmp_path):
    spec = write_spec(tmp_path, "t.json", {"D": [[1, 0], [1, 1]],
                                           "tolerance": 1e-9})
    report = run_json(capsys, "report-all", "--input", spec)
    assert report["diagnostics"]["delta_source"] == "standard"
    assert report["result"]["homogeneity"]["homogeneous"] is True


def test_rational_pair_entries(capsys, tmp_path):
    spec = write_spec(tmp_path, "t.json",
                      {"D": [[1, 1]], "delta": [[[5, 2], "1"]]})
    report = run_json(capsys, "extend", "--input", spec)
    assert report["result"]["delta_complete"] == [["5/2", "1"]]
    bad = write_spec(tmp_path, "bad.json",
                     {"D": [[1]], "delta": [[[1, 0]]]})
    code, out, err = run(capsys, "extend", "--input", bad)
    assert code == 2
    worse = write_spec(tmp_path, "worse.json",
                       {"D": [[1]], "delta": [[[1, 2, 3]]]})
    code, out, err = run(capsys, "extend", "--input", worse)
    assert code == 2


def test_parse_errors_exit_2(capsys, tmp_path):
    missing = str(tmp_path / "missing.json")
    code, out, err = run(capsys, "perron", "--input", missing)
    assert code == 2
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    code, out, err = run(capsys, "perron", "--input", str(garbled))
    assert code == 2
    nodim = write_spec(tmp_path, "nodim.json", {"delta": [[1]]})
    code, out, err = run(capsys, "perron", "--input", nodim)
    assert code == 2
    badshape = write_spec(tmp_path, "badshape.json",
                          {"a": 3, "D": [[1, 0], [1, 1]]})
    code, out, err = run(capsys, "perron", "--input", badshape)
    assert code == 2


def test_batch(capsys, tmp_path):
    batch_dir = tmp_path / "specs"
    batch_dir.mkdir()
    (batch_dir / "a4.json").write_text(Path(A4).read_text())
    (batch_dir / "homog.json").write_text(Path(HOMOG).read_text())
    (batch_dir / "broken.json").write_text("{oops")
    (batch_dir / "ignored.txt").write_text("not a spec")
    report = run_json(capsys, "batch", "--input", str(batch_dir),
                      "--command", "perron")
    assert report["command"] == "batch"
    assert report["sub_command"] == "perron"
    assert report["summary"] == {"total": "3", "ok": "2",
                                 "domain_error": "0", "parse_error": "1"}
    assert report["reports"]["broken.json"]["error"] == "ParseError"
    assert abs(float(report["reports"]["a4.json"]["result"]["d"]) - PHI) < 1e-12


def test_batch_domain_error_isolation(capsys, tmp_path):
    batch_dir = tmp_path / "specs"
    batch_dir.mkdir()
    (batch_dir / "ok.json").write_text(json.dumps({"D": [[2]]}))
    (batch_dir / "bad.json").write_text(
        json.dumps({"D": [[1], [1]], "delta": [[1], [1]]}))
    report = run_json(capsys, "batch", "--input", str(batch_dir),
                      "--command", "markov-trace")
    assert report["summary"]["ok"] == "1"
    assert report["summary"]["domain_error"] == "1"
    assert report["reports"]["bad.json"]["error"] == \
        "ColumnNormalizationViolation"


def test_batch_requires_directory(capsys):
    code, out, err = run(capsys, "batch", "--input", A4,
                         "--command", "perron")
    assert code == 2


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["no-such-command", "--input", A4])
    assert info.value.code == 2
