import json

import pytest
from hypothesis import given, strategies as st

from foliate.cli import EXIT_INVALID, EXIT_OK, EXIT_STAGE_FAILED, main
from foliate.errors import ParseError
from foliate.report import dump_request, emit, parse_request, run_pipeline

SADDLE_NODE = {"one_form": {"A": [[0, 2, "-1", "0"]], "B": [[1, 0, "1", "0"]]},
               "options": {"commands": ["classify", "index"]}}
NODE = {"one_form": {"A": [[0, 1, "1", "0"]], "B": [[1, 0, "1", "0"]]},
        "options": {"commands": ["reduce", "verify-index"]}}
CUSP = {"one_form": {"A": [[2, 0, "-3", "0"]], "B": [[0, 1, "2", "0"]]},
        "options": {"commands": ["classify", "reduce"], "max_depth": 5}}

CORPUS = [SADDLE_NODE, NODE, CUSP,
          {"one_form": {"A": [[0, 1, "-7/3", "1/2"]], "B": [[1, 0, "1"]]},
           "options": {"field": "approx", "sector": [0.1, -1.0, 1.0], "commands": ["classify"]}}]


def test_saddle_node_request():
    report = run_pipeline(SADDLE_NODE)
    assert report.stages["classify"]["tag"] == "SaddleNode" and report.stages["classify"]["p"] == 1
    assert report.stages["index"]["y=0"] == {"mode": "exact", "value": "0"}


def test_node_corners_sum():
    report = run_pipeline(NODE)
    body = report.stages["verify-index"]
    values = sorted(v["value"] for s in body["singularities"] for v in s["indices"].values())
    assert values == ["-1/2", "-1/2"]
    assert body["index_theorem"][0]["match"] and body["index_theorem"][0]["sum_of_indices"]["value"] == "-1"


def test_malformed_rational_names_field():
    bad = {"one_form": {"A": [[0, 1, "1/0", "0"]], "B": []}}
    with pytest.raises(ParseError) as info:
        parse_request(bad)
    assert info.value.location == "one_form.A[0].re"


@pytest.mark.parametrize("bad,where", [
    ({"one_form": {"A": [[20, 0, "1"]], "B": []}}, "one_form.A[0]"),
    ({"one_form": {"A": [], "B": []}, "options": {"field": "float"}}, "options.field"),
    ({"one_form": {"A": [], "B": []}, "options": {"commands": ["fly"]}}, "options.commands[0]"),
    ({"one_form": {"A": [[-1, 0, "1"]], "B": []}}, "one_form.A[0].i"),
    ({"options": {}}, "one_form"),
])
def test_validation_locations(bad, where):
    with pytest.raises(ParseError) as info:
        parse_request(bad)
    assert info.value.location == where


@pytest.mark.parametrize("entry", CORPUS)
def test_round_trip(entry):
    req = parse_request(entry)
    assert parse_request(dump_request(req)) == req


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-9, 9), st.integers(1, 9)), max_size=6))
def test_round_trip_random(terms):
    mon = [[i, j, f"{p}/{q}", "0"] for i, j, p, q in terms]
    req = parse_request({"one_form": {"A": mon, "B": mon[::-1]}})
    assert parse_request(dump_request(req)) == req


def test_deterministic_json():
    assert emit(run_pipeline(CUSP), "json") == emit(run_pipeline(CUSP), "json")
    body = json.loads(emit(run_pipeline(CUSP), "json"))
    assert body["stages"]["reduce"]["verdict"] == "AllIrreducible"


def test_dot_and_text():
    dot = emit(run_pipeline(CUSP), "dot").decode()
    assert 'E1 [label="E1\\n-3"]' in dot
    text = emit(run_pipeline(CUSP), "text").decode()
    assert text.splitlines()[0].startswith("classify: ")
    assert any(line.startswith("reduce: AllIrreducible") for line in text.splitlines())


def test_stage_errors_are_local():
    req = {**CUSP, "options": {"commands": ["classify", "holonomy"]}}
    report = run_pipeline(req)
    assert "error" in report.stages["holonomy"] and "tag" in report.stages["classify"]


def test_depth_cap_warning():
    req = {**CUSP, "options": {"commands": ["reduce"], "max_depth": 20}}
    report = run_pipeline(req)
    assert any("capped" in w for w in report.warnings)


def _write(tmp_path, data):
    p = tmp_path / "req.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["classify", _write(tmp_path, SADDLE_NODE), "--out", "text"]) == EXIT_OK
    assert "SaddleNode" in capsys.readouterr().out
    assert main(["reduce", _write(tmp_path, CUSP), "--max-depth", "5", "--out", "dot"]) == EXIT_OK
    assert "graph divisor" in capsys.readouterr().out
    bad = {"one_form": {"A": [[0, 1, "1/0"]], "B": []}}
    assert main(["classify", _write(tmp_path, bad)]) == EXIT_INVALID
    assert main(["holonomy", _write(tmp_path, CUSP)]) == EXIT_STAGE_FAILED
    capsys.readouterr()


def test_cli_flags_override(tmp_path, capsys):
    path = _write(tmp_path, SADDLE_NODE)
    assert main(["index", path, "--field", "approx", "--truncation", "8", "--sector", "0.1,-1,1"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert body["request"]["options"]["field"] == "approx"
    assert body["request"]["options"]["sector"] == [0.1, -1.0, 1.0]


def test_cli_case_studies(tmp_path, capsys):
    csv_path = tmp_path / "c.csv"
    assert main(["asymptotics", "euler", "--out", "text", "--csv", str(csv_path)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "asymptotics euler: Bounded"
    assert csv_path.read_text().startswith("k,shell,radius,C")
    assert main(["asymptotics", "cos-counterexample"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["verdict"] == "Diverging"
    assert main(["asymptotics", "saddle-node", "--out", "text"]) == EXIT_OK
    assert "Bounded" in capsys.readouterr().out


def test_report_subcommand(tmp_path, capsys):
    code = main(["report", _write(tmp_path, SADDLE_NODE), "--out", "text"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "holonomy: multiplier" in out and "asymptotics: Bounded" in out
