"""Command line driver: outputs, exit codes, schemas, determinism."""

import io
import json
import pathlib
import subprocess
import sys

import pytest

from weylkit import reports
from weylkit.cli import run

DOCS = pathlib.Path(__file__).resolve().parent.parent / "docs"


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code, rep = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def report_schema():
    return json.loads((DOCS / "report.schema.json").read_text())


@pytest.fixture(scope="module")
def module_schema():
    return json.loads((DOCS / "module.schema.json").read_text())


def validate(data, schema):
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(data, schema)


CASES = [
    (["rootsys", "--type", "A2"], 0),
    (["fpoly", "--type", "A1"], 0),
    (["schubert", "--type", "A2", "--closed", "e,s1,s2"], 0),
    (["flatness", "--type", "A1~", "--interval", "s0 s1 s0", "--denoms", "2", "--generic", "3"], 0),
    (["fiber", "--type", "A1~", "--lattice", "weight", "--point", "1"], 0),
    (["stab", "--type", "A1", "--lattice", "weight", "--point", "1/2"], 0),
]


@pytest.mark.parametrize("argv,code", CASES)
def test_commands_produce_valid_reports(argv, code, report_schema):
    got, out, err = invoke(*argv)
    assert got == code, err
    data = json.loads(out)
    validate(data, report_schema)
    assert data["command"] == argv[0]
    assert reports.parse(out) == reports.parse(reports.render(reports.parse(out)))


def test_fiber_output():
    code, out, _ = invoke("fiber", "--type", "A1~", "--lattice", "weight", "--point", "1")
    data = json.loads(out)
    assert data["human"].startswith("1 coset, coinvariant dim 2")


def test_schubert_basis():
    code, out, _ = invoke("schubert", "--type", "A2", "--closed", "e,s1,s2")
    m = json.loads(out)["machine"]
    assert m["dim_J_S"] == 3
    assert sorted(m["basis"]) == sorted(["s1 s2", "s2 s1", "s1 s2 s1"])


def test_fpoly_value():
    code, out, _ = invoke("fpoly", "--type", "A1")
    assert "1/2*x1 - 1/2*y1" in out


@pytest.mark.parametrize("argv,code", [
    ([], 64),
    (["bogus"], 64),
    (["rootsys"], 64),
    (["rootsys", "--type", "E8"], 65),
    (["schubert", "--type", "A2", "--closed", "e,s1s2"], 65),
    (["stab", "--type", "A2", "--point", "1/2"], 65),
    (["stab", "--type", "A1", "--point", "1/0"], 65),
    (["flatness", "--type", "A1~", "--subset", "e;s1 s0"], 65),
    (["descend", "--module", "/nonexistent.json"], 65),
])
def test_exit_codes(argv, code):
    assert invoke(*argv)[0] == code


def a1_module(tmp_path, action, relations, group=True):
    data = {"variables": ["x1"], "module": {"degrees": [0], "action": [[[action]]]},
            "relations": relations}
    if group:
        data["group"] = {"name": "A1", "coxeter": True, "generators": [[["-1"]]]}
    p = tmp_path / "m.json"
    p.write_text(json.dumps(data))
    return p, data


def test_descend_files(tmp_path, module_schema, report_schema):
    p, data = a1_module(tmp_path, "1", [["x1^2"]])
    validate(data, module_schema)
    code, out, _ = invoke("descend", "--module", str(p))
    assert code == 0
    validate(json.loads(out), report_schema)
    assert json.loads(out)["machine"]["verdict"] == "descends"
    p, _ = a1_module(tmp_path, "1", [["x1"]])
    assert invoke("descend", "--module", str(p))[0] == 1
    p, _ = a1_module(tmp_path, "-1", [], group=False)
    assert invoke("descend", "--type", "A1", "--module", str(p), "--mode", "simple")[0] == 1
    assert invoke("descend", "--module", str(p))[0] == 65


def test_descend_disagreement_exit_code(tmp_path, monkeypatch):
    import weylkit.descent.criteria as crit
    monkeypatch.setattr(crit, "TOR1_TWIST_EXPONENT", 0)
    p, _ = a1_module(tmp_path, "1", [["x1"]])
    code, out, _ = invoke("descend", "--module", str(p))
    assert code == 2
    assert json.loads(out)["machine"]["verdict"] == "disagree"


def test_dump_and_load_round_trip(tmp_path):
    from weylkit.descent.corpus import random_module
    EM = random_module("A2", 0, 3)
    data = reports.dump_module(EM)
    back = reports.load_module(json.loads(json.dumps(data)))
    assert reports.dump_module(back) == data


def test_determinism(tmp_path):
    argv = ["selftest", "--type", "A1", "--count", "4", "--seed", "3"]
    first = invoke(*argv)
    second = invoke(*argv)
    assert first[0] == 0
    assert first[1] == second[1]


def test_selftest_parallel_matches_serial():
    serial = json.loads(invoke("selftest", "--type", "A1", "--count", "4")[1])
    parallel = json.loads(invoke("selftest", "--type", "A1", "--count", "4", "--jobs", "2")[1])
    assert serial == parallel


def test_out_flag(tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = invoke("rootsys", "--type", "B2", "--out", str(target))
    assert code == 0
    assert json.loads(target.read_text())["command"] == "rootsys"
    assert out.strip() == json.loads(target.read_text())["human"].strip()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "weylkit", "rootsys", "--type", "A1"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["machine"]["order"] == 2
