import io
import json
import subprocess
import sys

import pytest

from ewe import __version__
from ewe.cli import input_digest, main
from ewe.core import canonical
from ewe.syntax import parse_ewe
from helpers import XXY_ZWZ, data


def run(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], stdout=buf)
    return code, buf.getvalue()


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("EWE_COLOR", "0")


def test_check_xxy_zwz():
    code, text = run("check", data("xxy_zwz.ewe"))
    assert code == 0 and "coherent:   yes" in text and "X=" in text


def test_check_xyz_wyv():
    code, text = run("check", data("xyz_wyv.ewe"))
    assert code == 2 and "incoherent" in text and "cover" in text


def test_check_malformed(capsys):
    code, _ = run("check", data("malformed.ewe"))
    assert code == 1
    assert ":2:32:" in capsys.readouterr().err


def test_check_missing_file(capsys):
    code, _ = run("check", data("nope.ewe"))
    assert code == 1


def test_check_json_envelope():
    code, text = run("check", data("xxy_zwz.ewe"), "--json")
    doc = json.loads(text)
    assert code == 0
    assert set(doc) == {"tool_version", "command", "input_digest", "result"}
    assert doc["tool_version"] == __version__ and doc["command"] == "check"
    assert doc["input_digest"] == input_digest(XXY_ZWZ)
    assert parse_ewe(doc["result"]["ewe"]) == XXY_ZWZ


def test_digest_ignores_renaming(tmp_path):
    p = tmp_path / "renamed.ewe"
    p.write_text(data("xxy_zwz.ewe").read_text().replace("X", "Q"))
    a = json.loads(run("check", data("xxy_zwz.ewe"), "--json")[1])["input_digest"]
    b = json.loads(run("check", p, "--json")[1])["input_digest"]
    assert a == b


def test_successors_xxy_zwz():
    code, text = run("successors", data("xxy_zwz.ewe"))
    assert code == 0 and text.startswith("CaseII: 3 successor(s)")
    assert text.count("coherent") == 3


def test_successors_json_round_trip():
    code, text = run("successors", data("xxy_zwz.ewe"), "--json")
    doc = json.loads(text)
    got = [parse_ewe(s["ewe"]) for s in doc["result"]["successors"]]
    assert len(got) == 3 and all((s.u1, s.u2) == (tuple("XZXY"), tuple("WZ")) for s in got)


def test_successors_xx_yy():
    code, text = run("successors", data("xx_yy.ewe"), "--coherent-only")
    assert code == 0 and "CaseI: 1 successor(s)" in text


def test_successors_trivial():
    code, text = run("successors", data("trivial.ewe"))
    assert code == 0 and "no ENT applicable" in text


def test_successors_incoherent():
    assert run("successors", data("xyz_wyv.ewe"))[0] == 2


def test_cutgraph_dot_xxy_zwz():
    code, text = run("cutgraph", data("xxy_zwz.ewe"))
    assert code == 0 and text.count("->") == 7
    assert text == run("cutgraph", data("xxy_zwz.ewe"))[1]


def test_cutgraph_trivial():
    code, text = run("cutgraph", data("trivial.ewe"))
    assert text == "digraph cutgraph {\n}\n"


def test_cutgraph_json_xx_yy():
    doc = json.loads(run("cutgraph", data("xx_yy.ewe"), "--format", "json")[1])
    edges = doc["result"]["edges"]
    assert len(edges) == 4 and ["(1,1)", "(2,2)"] in edges and ["(2,2)", "(1,1)"] in edges
    assert doc["result"]["cyclic"] is True


def test_analyze_exit_codes():
    assert run("analyze", data("acyclic.ewe"))[0] == 0
    code, text = run("analyze", data("selfloop.ewe"))
    assert code == 3 and "LassoWitness" in text
    code, text = run("analyze", data("large.ewe"), "--max-states", "3")
    assert code == 4 and "Unknown" in text
    assert run("analyze", data("xyz_wyv.ewe"))[0] == 2


def test_analyze_json():
    doc = json.loads(run("analyze", data("acyclic.ewe"), "--json")[1])
    assert doc["result"] == {"status": "Terminating",
                             "certificate": {"kind": "MeasureCertificate", "measure": 4, "bound": 16}}
    doc = json.loads(run("analyze", data("selfloop.ewe"), "--json")[1])
    for s in doc["result"]["certificate"]["states"]:
        e = parse_ewe(s)
        assert canonical(e)[0] == e


def test_run_command():
    code, text = run("run", data("xxy_zwz.ewe"), "--steps", "3")
    assert code == 0 and len(text.strip().splitlines()) == 3
    assert "FAIL" not in text
    assert run("run", data("acyclic.ewe"))[0] == 2
    doc = json.loads(run("run", data("xxy_zwz.ewe"), "--steps", "2", "--json")[1])
    assert len(doc["result"]["steps"]) == 2


def test_oracle_commands():
    code, text = run("oracle", "orders", data("xxy_zwz.ewe"))
    assert code == 0 and len(text.strip().splitlines()) == 13
    assert run("oracle", "coherence", data("xxy_zwz.ewe"), "--max-len", "4")[0] == 0
    assert run("oracle", "coherence", data("xyz_wyv.ewe"), "--max-len", "3")[0] == 2
    code, text = run("oracle", "successors", data("xxy_zwz.ewe"))
    assert len(text.strip().splitlines()) == 3
    code, text = run("oracle", "enumerate", 4, 2)
    assert text.strip().endswith("50 equation(s)")


def test_color(monkeypatch):
    monkeypatch.setenv("EWE_COLOR", "1")
    assert "\033[32m" in run("check", data("xxy_zwz.ewe"))[1]
    monkeypatch.setenv("EWE_COLOR", "0")
    assert "\033" not in run("check", data("xxy_zwz.ewe"))[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ewe", "check", str(data("xx_yy.ewe"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "coherent" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "ewe", "--version"], capture_output=True, text=True)
    assert __version__ in proc.stdout
