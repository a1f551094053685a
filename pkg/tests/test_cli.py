import io
import json
import os
import subprocess
import sys

import pytest

from dilatorlab.cli import cli_run
from dilatorlab.errors import BadSpec, DuplicateName, IoError
from dilatorlab.spec import Registry, load_spec, loads_spec
from dilatorlab.theorylab import s12_probe
from dilatorlab.linorder import Finite

SAMPLE = os.path.join(os.path.dirname(__file__), os.pardir, "samples", "toy.json")
ARROW2 = '{"op":"arrow","args":[{"kind":"finite","n":2},{"kind":"omegastar"}]}'


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_apply_lists_instances_in_order():
    obj = run_json("apply", "--dilator", "id", "--order", '{"kind":"finite","n":3}', "--list", "3")
    assert [e["args"] for e in obj["elements"]] == [[0], [1], [2]]


def test_diagrams_count():
    assert run_json("diagrams", "--left", "1", "--right", "1")["count"] == 3
    assert run_json("diagrams", "--left", "2", "--right", "2")["count"] == 13


def test_climax_verb():
    obj = run_json("climax", "--expr", ARROW2, "--grid", "finite:0..5", "--depth", "12", "--width", "200")
    assert obj["inferred_climax"] == {"kind": "finite", "n": 2}
    assert obj["bounds"] == {"depth": 12, "width": 200}


def test_descend_and_cmp():
    obj = run_json("descend", "--dilator", "revpseudo", "--order", "omega", "--depth", "6")
    assert obj["verdict"] == "witness" and len(obj["witness"]) == 6
    obj = run_json("cmp", "--dilator", "colexpair", "--order", "finite:4",
                   "--x", '{"term":"p","args":[0,3]}', "--y", '{"term":"p","args":[1,2]}')
    assert obj["cmp"] == "Greater"


def test_check_verb_reports():
    obj = run_json("check", "--dilator", "reverse", "--window", "10", "--cap", "2")
    verdicts = {r["check"]: r["verdict"] for r in obj["reports"]}
    assert verdicts == {"axioms": "pass", "monotone": "fail"}
    obj = run_json("check", "--dilator", "colexpair", "--trace")
    assert [r["verdict"] for r in obj["reports"]] == ["pass", "pass", "pass"]


def test_grow_verb():
    a3 = ARROW2.replace('"n":2', '"n":3')
    obj = run_json("grow", "--d0", a3, "--d1", ARROW2, "--grid", "finite:0..4")
    assert obj["verdict"] == "counterexample" and obj["counterexample"] == {"kind": "finite", "n": 2}


def test_theory_file_end_to_end():
    obj = run_json("theory", "--spec", SAMPLE, "--theory", "T1", "--grid", "finite:0..5", "--strict")
    assert obj["strictly_larger"] is True
    assert obj["before"]["marker"] == {"kind": "finite", "n": 3}
    assert obj["pi11_norm"]["type"] == [[1, 1]]


def test_table_output_is_text():
    code, out, _ = run("diagrams", "--left", "0", "--right", "0", "--table")
    assert code == 0 and out.splitlines()[0] == "1 diagrams (0, 0)"


# -- errors and exit codes -----------------------------------------------------


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["frobnicate"], "unknown verb"),
        (["apply", "--dilator", "{oops", "--order", "omega"], "malformed JSON"),
        (["apply", "--dilator", "nosuch", "--order", "omega"], "unknown dilator"),
        (["climax", "--expr", "id", "--depth", "0"], "--depth"),
        (["descend", "--dilator", "id", "--order", "omega", "--width", "-3"], "--width"),
        (["apply", "--order", "omega"], "required"),
        (["climax", "--expr", "id", "--grid", "finite:3", "--grid", "finite:1"], "longer grid point"),
        (["theory", "--spec", "/nonexistent/spec.json", "--theory", "T"], "cannot read"),
    ],
)
def test_user_errors_exit_one(argv, needle):
    code, out, err = run(*argv)
    assert code == 1 and out == ""
    assert needle in err


def test_bad_cnf_names_the_path():
    code, _, err = run("apply", "--dilator", "id", "--order", '{"kind":"cnf","term":[[1,0]]}')
    assert code == 1 and "[0][1]" in err


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "dilatorlab", "diagrams", "--left", "1", "--right", "0"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 1


# -- spec files ----------------------------------------------------------------


def test_sample_spec_registers_and_probes():
    reg = load_spec(SAMPLE)
    assert set(reg.dilators) == {"ident", "arrow2", "arrow3"}
    rep = s12_probe(reg.theories["T1"], [Finite(i) for i in range(5)])
    assert rep.marker == Finite(3)


def test_spec_round_trip():
    reg = load_spec(SAMPLE)
    again = Registry().load(json.loads(json.dumps(reg.to_json())))
    assert again.orders == reg.orders
    assert again.dilators == reg.dilators
    assert again.to_json() == reg.to_json()


def test_spec_rejects_duplicates():
    with pytest.raises(DuplicateName):
        loads_spec('{"dilators": {"a": {"op": "id"}, "a": {"op": "id"}}}')
    with pytest.raises(DuplicateName):
        loads_spec('{"orders": {"x": {"kind": "omega"}}, "dilators": {"x": {"op": "id"}}}')
    with pytest.raises(DuplicateName):
        loads_spec('{"dilators": {"reverse": {"op": "id"}}}')


def test_spec_errors():
    with pytest.raises(BadSpec, match="unknown sections"):
        loads_spec('{"widgets": {}}')
    with pytest.raises(BadSpec, match=r"dilators\.bad\.op"):
        loads_spec('{"dilators": {"bad": {"op": "nope"}}}')
    with pytest.raises(BadSpec, match=r"\$\.orders\.w\.term"):
        loads_spec('{"orders": {"w": {"kind": "cnf", "term": [[1, 0]]}}}')
    with pytest.raises(IoError):
        load_spec("/nonexistent/spec.json")


def test_explicit_finite_table_in_spec():
    reg = loads_spec(json.dumps({"dilators": {"tab": {
        "op": "finite", "name": "tab", "terms": [["z", 0], ["u", 1]],
        "less": [["z", "u", [], [0]], ["u", "u", [0], [1]]],
    }}}))
    D = reg.dilators["tab"]
    code, out, err = run("check", "--dilator", json.dumps(D.to_json()), "--trace")
    assert code == 0, err
    assert all(r["verdict"] == "pass" for r in json.loads(out)["reports"])


def test_invariant_violation_exits_two(monkeypatch):
    import dilatorlab.cli as cli
    from dilatorlab.errors import InvariantError

    def broken(*a, **k):
        raise InvariantError("witness failed verification")

    monkeypatch.setattr(cli, "lo_descend_probe", broken)
    code, out, err = run("descend", "--dilator", "id", "--order", "omega")
    assert code == 2 and "internal error" in err
