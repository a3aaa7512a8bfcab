import json

import pytest

from cyclotome.cli import JobSpec, main, run
from cyclotome.presentations import zoo


def report(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def table(rep, key):
    return {e["degree"]: e["dimension"] for e in rep["results"][key]["entries"] if e["trusted"]}


def test_hh_of_ground_field(capsys):
    code, rep = report(capsys, "hh", "--zoo", "k", "--window", "4")
    assert code == 0 and rep["status"] == "ok"
    assert table(rep, "HH") == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}
    assert rep["schema"] == 1 and rep["tool"]["name"] == "cyclotome"


def test_validate_broken_file_lists_violations(tmp_path, capsys):
    doc = zoo("dual_numbers").to_json()
    doc["compositions"][0]["result"] = [[2, "1"]]
    f = tmp_path / "broken.json"
    f.write_text(json.dumps(doc))
    code, rep = report(capsys, "validate", "--input", str(f))
    assert code == 1 and rep["status"] == "invalid"
    assert rep["results"]["violations"]


def test_parse_error_reports_line_and_column(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"objects": ["x"],\n  "homs": [}\n')
    code, rep = report(capsys, "validate", "--input", str(f))
    assert code == 1
    assert "line 2 column" in rep["errors"][0]


def test_resource_cap_exit_code(capsys):
    code, rep = report(capsys, "hh", "--zoo", "kronecker", "--max-basis", "50")
    assert code == 2 and rep["status"] == "resource_cap"


def test_invalid_prime_is_rejected(capsys):
    code, rep = report(capsys, "hh", "--zoo", "k", "--field", "Fp:4")
    assert code == 1 and rep["status"] == "error"


def test_field_option_changes_the_answer(capsys):
    _, q = report(capsys, "hh", "--zoo", "dual_numbers", "--window", "2")
    _, f2 = report(capsys, "hh", "--zoo", "dual_numbers", "--window", "2", "--field", "Fp:2")
    assert table(q, "HH") == {0: 2, 1: 1, 2: 1}
    assert table(f2, "HH") == {0: 2, 1: 2, 2: 2}


def test_tilting_kronecker_passes(capsys):
    code, rep = report(capsys, "tilting", "--zoo", "kronecker", "--window", "5")
    assert code == 0 and rep["status"] == "pass"
    assert rep["results"]["dims"] == {str(n): 2 if n % 2 == 0 else 0 for n in range(6)}


def test_reports_are_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["hc", "--zoo", "T2", "--window", "3", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_timings_only_on_request():
    rep = run(JobSpec("hh", zoo="k", window=1))
    assert "wall_clock_seconds" not in rep["statistics"]
    rep = run(JobSpec("hh", zoo="k", window=1, timings=True))
    assert "wall_clock_seconds" in rep["statistics"]


def test_csv_output(capsys):
    assert main(["hh", "--zoo", "k2", "--window", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "degree,dimension,trusted"
    assert lines[1] == "0,2,true"


def test_text_output(capsys):
    assert main(["hc", "--zoo", "k", "--window", "2", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "hc -> ok" in out


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"zoo": "k2", "window": 1, "format": "csv"}))
    code, rep = report(capsys, "hh", "--config", str(cfg), "--format", "json")
    assert code == 0
    assert rep["job"]["window"] == 1 and rep["job"]["zoo"] == "k2"


def test_zoo_parameters(capsys):
    code, rep = report(capsys, "hh", "--zoo", "truncated_poly", "--param", "m=3", "--window", "1")
    assert table(rep, "HH") == {0: 3, 1: 2}


def test_perfect_complex_input(tmp_path, capsys):
    from cyclotome.charclasses import graded_vector_space
    f = tmp_path / "p.json"
    f.write_text(graded_vector_space({0: 2, 1: 1}).dumps())
    code, rep = report(capsys, "euler", "--input", str(f))
    assert code == 0
    assert rep["results"]["euler_characteristic"] == 1
    code, rep = report(capsys, "chern", "--input", str(f))
    assert code == 0
    assert all(r["generator_multiple"] == 1 for r in rep["results"]["records"] if r["stable"])


@pytest.mark.parametrize("argv", [
    ["hcminus", "--zoo", "k", "--window", "2"],
    ["hcper", "--zoo", "k", "--window", "2"],
    ["sbi", "--zoo", "dual_numbers", "--window", "2"],
    ["bicomplex", "--zoo", "k2", "--window", "2"],
    ["euler", "--zoo", "T2", "--count", "2"],
    ["chern", "--zoo", "k", "--ranks", "0:1,1:2"],
    ["morita", "--zoo", "dual_numbers", "--window", "2"],
    ["ce-verify", "--zoo", "T2", "--count", "1"],
    ["ml-verify", "--count", "3"],
])
def test_every_command_succeeds(argv, capsys):
    code, rep = report(capsys, *argv)
    assert code == 0, rep
    assert rep["status"] in ("ok", "pass")


def test_perfect_complex_is_not_a_category(tmp_path, capsys):
    from cyclotome.charclasses import free_module
    f = tmp_path / "p.json"
    f.write_text(free_module(zoo("k"), 1).dumps())
    code, rep = report(capsys, "hh", "--input", str(f))
    assert code == 1


def test_chern_refuses_noncentral_differential(tmp_path, capsys):
    from cyclotome.charclasses import PerfectComplexPresentation
    a = zoo("T2")
    arrow = next(i for i in range(a.dim) if a.basis_name(i) not in a.meta["vertices"])
    p = PerfectComplexPresentation(a, {0: 1, 1: 1}, {0: [[{arrow: 1}]]}, {}, "arrow").check()
    f = tmp_path / "p.json"
    f.write_text(p.dumps())
    code, rep = report(capsys, "chern", "--input", str(f))
    assert code == 1 and rep["status"] == "error"
    assert "supertrace" in rep["errors"][0]
