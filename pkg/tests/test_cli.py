import json
import subprocess
import sys

import numpy as np
import pytest

from canrel.cli import Config, dispatch
from canrel.formats import decode_relation, dump_json, encode_matrix, encode_relation, load_json
from canrel.lab import converse_relation, normal_form
from canrel.linalg import random_symplectic, rotation
from canrel.relations import from_graph, identity_relation, power
from test_spectral import non_semisimple_elliptic


def write(tmp_path, name, obj):
    path = tmp_path / name
    dump_json(obj, path)
    return str(path)


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_relation_info_converse(tmp_path, capsys):
    f = write(tmp_path, "converse.json", encode_relation(converse_relation()))
    code, out, _ = run(["relation", "info", f], capsys)
    assert code == 0
    assert json.loads(out)["invariants"] == {"kappa": 1, "r": 1, "k": 2, "n": 3}
    assert json.loads(out)["in_H"] is True


def test_rho_identity(tmp_path, capsys):
    f = write(tmp_path, "identity.json", encode_matrix(np.eye(4)))
    code, out, _ = run(["rho", f, "--json"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["rho"] == [1.0, 0.0] and report["rho_squared"] == [1.0, 0.0]


def test_rho_of_relation(tmp_path, capsys):
    f = write(tmp_path, "nf.json", encode_relation(normal_form(2, 1, rotation(0.5))))
    code, out, _ = run(["rho", f, "--json"], capsys)
    assert code == 0
    assert json.loads(out)["rho_hat_angle"] == pytest.approx(1.0, abs=1e-11)


def test_index_rotation_loop_with_trace(tmp_path, capsys):
    f = write(tmp_path, "loop.json", {"kind": "rotation_loop", "n": 1, "w": 1})
    trace = tmp_path / "trace.csv"
    code, out, _ = run(["index", f, "--trace", str(trace), "--power", "3"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["delta_hat"] == 2.0
    assert report["delta_hat_power"] == pytest.approx(6.0, abs=1e-9)
    lines = trace.read_text().splitlines()
    assert lines[0] == "t,re,im,theta"
    assert len(lines) == report["samples"] + 1


def test_round_trip_of_written_relation(tmp_path, capsys):
    rel = from_graph(random_symplectic(2, 3, 1.0))
    f = write(tmp_path, "g.json", encode_relation(rel))
    out_path = tmp_path / "p.json"
    code, _, _ = run(["relation", "power", f, "-k", "3", "-o", str(out_path)], capsys)
    assert code == 0
    assert decode_relation(load_json(out_path)).distance(power(rel, 3)) < 1e-12


def test_compose_and_decompose(tmp_path, capsys):
    a = write(tmp_path, "a.json", encode_relation(normal_form(2, 1, rotation(0.3))))
    b = write(tmp_path, "b.json", encode_relation(identity_relation(2)))
    code, out, _ = run(["relation", "compose", a, b], capsys)
    assert code == 0 and json.loads(out)["invariants"]["k"] == 1
    code, out, _ = run(["relation", "decompose", a], capsys)
    assert code == 0 and json.loads(out)["graph_unique"] is True
    c = write(tmp_path, "c.json", encode_relation(converse_relation()))
    code, out, _ = run(["relation", "decompose", c, "--extended"], capsys)
    assert code == 0 and json.loads(out)["graph_unique"] is False


def test_output_is_byte_identical(tmp_path, capsys):
    f = write(tmp_path, "nf.json", encode_relation(normal_form(3, 1)))
    first = run(["relation", "info", f, "--tol", "1e-10"], capsys)[1]
    second = run(["relation", "info", f, "--tol", "1e-10"], capsys)[1]
    assert first == second


def test_inputs_are_not_mutated(tmp_path, capsys):
    f = write(tmp_path, "g.json", encode_relation(identity_relation(1)))
    before = open(f, "rb").read()
    run(["relation", "power", f, "-k", "2"], capsys)
    assert open(f, "rb").read() == before


@pytest.mark.parametrize("argv_tail,name", [
    (["relation", "power", "{c}", "-k", "2"], "ExceptionalInput"),
    (["rho", "{c}"], "ExceptionalInput"),
    (["rho", "{ns}"], "NonSemisimpleElliptic"),
    (["index", "{under}"], "Undersampled"),
])
def test_domain_errors_exit_one(tmp_path, capsys, argv_tail, name):
    files = {
        "c": write(tmp_path, "c.json", encode_relation(converse_relation())),
        "ns": write(tmp_path, "ns.json", encode_matrix(non_semisimple_elliptic(0.9))),
        "under": write(tmp_path, "u.json", {"kind": "samples", "relations": [
            encode_matrix(rotation(t)) for t in (0.0, 2.0, 4.0)]}),
    }
    code, _, err = run([a.format(**files) for a in argv_tail], capsys)
    assert code == 1
    assert err.startswith(name)


def test_io_and_parse_errors_exit_two(tmp_path, capsys):
    assert run(["relation", "info", str(tmp_path / "missing.json")], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["rho", str(bad)], capsys)[0] == 2
    wrong = write(tmp_path, "wrong.json", {"n": 1, "basis": encode_matrix(np.eye(3))})
    assert run(["relation", "info", wrong], capsys)[0] == 2


def test_nonpositive_tolerance_rejected(tmp_path, capsys):
    f = write(tmp_path, "g.json", encode_relation(identity_relation(1)))
    assert run(["relation", "info", f, "--tol", "-1"], capsys)[0] == 2
    with pytest.raises(ValueError):
        Config(tol=0.0)


def test_env_tolerance(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CANREL_TOL", "1e-11")
    f = write(tmp_path, "g.json", encode_relation(identity_relation(1)))
    assert run(["relation", "info", f], capsys)[0] == 0


def test_lab_run_json_report(tmp_path, capsys):
    report = tmp_path / "report.json"
    code, out, _ = run(["lab", "run", "squared_example", "--json", str(report)], capsys)
    assert code == 0
    assert out.startswith("PASS squared_example")
    assert load_json(report)[0]["metrics"]["rho_A_exact"] is True


def test_lab_run_failing_scenario_exits_one(capsys):
    code, out, _ = run(["lab", "run", "converse_example"], capsys)
    assert code == 1 and out.startswith("FAIL converse_example")


def test_console_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "canrel", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for word in ("relation", "rho", "index", "lab", "--tol", "--seed", "--json"):
        assert word in proc.stdout
