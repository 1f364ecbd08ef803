import json
import subprocess
import sys

from doca.cli import cli_dispatch, main
from doca.fixtures import fixture_path
from doca.model import decode
from doca.semantics import Plain, run


def path(name):
    return str(fixture_path(name))


def report(argv):
    code, rep = cli_dispatch(argv)
    return code, json.loads(rep.to_json())


def test_eq_d2_json(capsys):
    code = main(["eq", path("D2"), "--left", "p", "--right", "q", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 10
    assert out["eqlevel"] == 1 and out["witness"] == "aa" and out["verdict"] == "inequivalent"
    assert set(out) == {"command", "verdict", "eqlevel", "witness", "bound", "caps", "timing_ms",
                        "decisions", "details"}


def test_eq_same_state():
    code, out = report(["eq", path("D1"), "--left", "p", "--right", "p"])
    assert code == 0 and out["verdict"] == "equivalent-up-to-bound"
    assert out["bound"] == 64 and "bound 64" in out["decisions"][0]


def test_regular_d1():
    code, out = report(["regular", path("D1"), "--state", "p"])
    assert code == 10 and out["verdict"] == "non-regular"
    assert out["details"]["certificate"]["q1"] == "p"


def test_regular_p2():
    code, out = report(["regular", path("P2"), "--state", "cnt", "--bound", "60"])
    assert code == 0 and out["verdict"] == "regular-up-to-caps" and out["caps"]["counter"] > 0


def test_text_and_json_agree(capsys):
    main(["eq", path("D3"), "--left", "p", "--right", "q"])
    text = capsys.readouterr().out
    main(["eq", path("D3"), "--left", "p", "--right", "q", "--json"])
    js = json.loads(capsys.readouterr().out)
    assert f"verdict: {js['verdict']}" in text and f"witness: {js['witness']}" in text


def test_witness_replays():
    A = decode(fixture_path("D2").read_bytes())
    _, out = report(["eq", path("D2"), "--left", "p", "--right", "q"])
    ends = [run(A, Plain(s, 0), out["witness"]) for s in ("p", "q")]
    assert ends.count(None) == 1
    code, r = report(["run", path("D2"), "--state", "p", out["witness"]])
    assert r["verdict"] == "enabled"
    code, r = report(["run", path("D2"), "--state", "q", out["witness"]])
    assert r["verdict"] == "disabled"


def test_misc_commands(tmp_path):
    assert report(["validate", path("D1")])[0] == 0
    assert report(["enabled", path("D4"), "--state", "p", "--counter", "3"])[1]["details"]["letters"] == ["a"]
    assert report(["enabled", path("D4"), "--state", "p", "--mod"])[1]["details"]["letters"] == ["a"]
    code, out = report(["il", path("D4"), "--state", "p", "--counter", "3", "--forms"])
    assert out["eqlevel"] == 3 and out["details"]["forms"][0]["rho"] == "1"
    code, out = report(["tuple", path("D4"), "--left", "p", "--counter", "2", "--right", "p",
                        "--right-counter", "2", "--bound", "40"])
    assert out["details"]["tuple"] == {"b": ">=40", "l": "2", "r": "2", "o": ">=40", "dL": "2", "dR": "2"}
    code, out = report(["zero-eqlevels", path("D2")])
    assert out["details"]["levels"] == {"p,q": 1, "p,r": 0, "q,r": 0}
    code, out = report(["path", path("D4"), "--left", "p", "--counter", "5", "--right", "p"])
    assert out["details"]["length"] == 5 and out["details"]["cycle"] == "a"
    code, out = report(["oracle-eq", path("D2"), "--left", "p", "--right", "q", "--depth", "4"])
    assert code == 10 and out["eqlevel"] == 1
    code, out = report(["oracle-traces", path("D1"), "--state", "p", "--depth", "3"])
    assert out["details"]["count"] == 6
    out_file = tmp_path / "g.doca"
    assert report(["gen", "random", "--seed", "4", "-o", str(out_file)])[0] == 0
    assert decode(out_file.read_bytes()).stable_states
    assert "doca" in report(["gen", "primes", "2"])[1]["details"]


def test_convert_and_instance(tmp_path):
    code, out = report(["convert", path("C3")])
    assert code == 0 and out["details"]["acceptance_letter"] == "acc__t"
    assert decode(out["details"]["doca"]).reset_states
    code, out = report(["instance", path("C3"), path("C3"), "--bound", "11"])
    assert code == 0 and out["verdict"] == "equivalent-up-to-bound"


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.doca"
    bad.write_text("doca\nalphabet a\nstable p\nrule p a 0 -> z 0\n")
    code, out = report(["eq", str(bad)])
    assert code == 2 and out["details"]["code"] == "parse-error"
    code, out = report(["eq", path("D1"), "--left", "nope"])
    assert code == 2 and out["details"]["code"] == "unknown-state"
    assert report(["oracle-traces", path("D1"), "--depth", "20"])[1]["details"]["code"] == "depth-too-large"
    assert report(["gen", "random"])[0] == 2
    assert report(["instance", path("D1"), path("D1")])[0] == 2
    invalid = tmp_path / "inv.doca"
    invalid.write_text("doca\nalphabet a\nstable p\nreset s per 3 goto 0 p 1 p 2 p\n")
    assert report(["validate", str(invalid)])[0] == 2


def test_inconclusive(monkeypatch):
    from doca import equivalence
    monkeypatch.setattr(equivalence, "DEFAULT_STATE_CAP", 5)
    monkeypatch.setattr(equivalence.eqlevel, "__kwdefaults__", {"state_cap": 5})
    code, out = report(["eq", path("D1"), "--left", "p", "--right", "p", "--bound", "100"])
    assert code == 3 and out["details"]["code"] == "bound-exceeded-memory"


def test_report_to_file(tmp_path):
    target = tmp_path / "r.json"
    assert main(["eq", path("D2"), "--left", "p", "--right", "q", "--json", "-o", str(target)]) == 10
    assert json.loads(target.read_text())["eqlevel"] == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "doca", "eq", path("D2"), "--left", "p", "--right", "q"],
                         capture_output=True, text=True)
    assert out.returncode == 10 and "eqlevel: 1" in out.stdout
