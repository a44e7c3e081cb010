"""Network documents, DOT export and the command-line tool."""

import io
import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from disknet import generators as gen
from disknet.cli import main
from disknet.document import (
    dumps_network,
    load_network,
    loads_network,
    matrix_from_json,
    matrix_to_json,
    network_dot,
)
from disknet.errors import ParseError
from disknet.netcore import canonical_code
from disknet.response import response

FIX = Path(__file__).parent / "fixtures"


def _run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("net", [gen.example1(), gen.figure1_rnpd(), gen.spider(5), gen.random_network(3, extras=3)])
def test_document_round_trip(net):
    text = dumps_network(net)
    back = loads_network(text)
    assert canonical_code(back) == canonical_code(net)
    assert dumps_network(back) == text


def test_fixture_files_load():
    assert canonical_code(load_network(FIX / "example1.json")) == canonical_code(gen.example1())
    assert canonical_code(load_network(FIX / "fig1-rnpd.json")) == canonical_code(gen.figure1_rnpd())


def test_parse_error_json_syntax():
    with pytest.raises(ParseError) as info:
        loads_network('{\n  "version": 1,\n  "vertices": [,]\n}')
    assert (info.value.line, info.value.column) == (3, 16)


def test_parse_error_points_at_bad_edge():
    doc = json.loads(dumps_network(gen.example1()))
    doc["edges"][2]["conductance"] = "x/y"
    text = json.dumps(doc, indent=2)
    with pytest.raises(ParseError) as info:
        loads_network(text)
    assert "bad conductance" in str(info.value)
    line = text.splitlines()[info.value.line - 1]
    assert line.strip() == "{"
    assert text.splitlines()[info.value.line].strip() == '"id": 2,'


def test_parse_error_bad_kind_and_rotation():
    doc = json.loads(dumps_network(gen.example1()))
    doc["vertices"][1]["kind"] = "Corner"
    with pytest.raises(ParseError, match="unknown vertex kind"):
        loads_network(json.dumps(doc, indent=2))
    doc = json.loads(dumps_network(gen.example1()))
    doc["rotation"]["0"] = doc["rotation"]["0"][:-1]  # drop an edge end
    with pytest.raises(ParseError) as info:
        loads_network(json.dumps(doc, indent=2))
    assert info.value.line is not None
    with pytest.raises(ParseError, match="missing key"):
        loads_network('{"vertices": []}')


def test_matrix_json():
    m = response(gen.example1()).matrix
    assert matrix_from_json(matrix_to_json(m)) == m
    assert matrix_from_json({"matrix": matrix_to_json(m)}) == m
    with pytest.raises(ParseError):
        matrix_from_json([["1", "q"]])


def test_network_dot_styles():
    dot = network_dot(gen.figure1_rnpd())
    assert dot.count("doublecircle") == 1
    assert dot.count("fillcolor=black") == 2
    assert dot.count(" -- ") == gen.figure1_rnpd().n_edges


def test_cli_generate_respond_pipeline(capsys, monkeypatch):
    code, text, _ = _run(capsys, monkeypatch, ["generate", "spider", "3", "--conductance", "ones"])
    assert code == 0
    code, out, _ = _run(capsys, monkeypatch, ["respond"], stdin=text)
    assert code == 0
    assert json.loads(out) == json.loads((FIX / "spider3-ones-response.json").read_text())


def test_cli_respond_example1(capsys, monkeypatch):
    code, out, _ = _run(capsys, monkeypatch, ["respond", str(FIX / "example1.json")])
    assert code == 0
    assert json.loads(out)["matrix"] == [["-43/15", "43/15"], ["43/15", "-43/15"]]


def test_cli_zseq(capsys, monkeypatch):
    code, out, _ = _run(capsys, monkeypatch, ["zseq", str(FIX / "fig1-rnpd.json")])
    assert (code, out.strip()) == (0, "1~+ 2~- 2~+ 1~-")


def test_cli_solve(capsys, monkeypatch):
    code, out, _ = _run(capsys, monkeypatch, ["solve", str(FIX / "example1.json"), "--potentials", "1,0"])
    assert code == 0
    assert json.loads(out)["boundary_currents"] == ["-43/15", "43/15"]


def test_cli_medial_and_irreducible(capsys, monkeypatch):
    code, out, _ = _run(capsys, monkeypatch, ["medial", str(FIX / "example1.json")])
    assert code == 0 and len(json.loads(out)["strands"]) == 2
    code, out, _ = _run(capsys, monkeypatch, ["check-irreducible"], stdin=dumps_network(gen.spider(4)))
    assert json.loads(out)["ok"] is True
    code, out, _ = _run(capsys, monkeypatch, ["medial", "--dot", str(FIX / "example1.json")])
    assert out.startswith("graph medial")


def test_cli_move(capsys, monkeypatch):
    text = dumps_network(gen.example1())
    code, out, _ = _run(capsys, monkeypatch, ["move", "--kind", "Parallel", "--list-sites"], stdin=text)
    assert code == 0 and len(json.loads(out)) == 1
    code, out, _ = _run(capsys, monkeypatch, ["move", "--kind", "Parallel"], stdin=text)
    assert response(loads_network(out)) == response(gen.example1())
    code, _, err = _run(capsys, monkeypatch, ["move", "--kind", "Series", "--site", "5"], stdin=text)
    assert code == 1 and "out of range" in err
    code, out, _ = _run(capsys, monkeypatch, ["move", "--kind", "YToDelta", "--walk", "3", "--seed", "2"], stdin=text)
    assert code == 0 and "trace" in json.loads(out)


def test_cli_connections_and_critical(capsys, monkeypatch):
    text = dumps_network(gen.four_periodic(4))
    code, out, _ = _run(capsys, monkeypatch, ["connections"], stdin=text)
    assert code == 0 and len(json.loads(out)) == 8
    code, out, _ = _run(capsys, monkeypatch, ["critical"], stdin=text)
    assert json.loads(out)["critical"] is True
    code, _, err = _run(capsys, monkeypatch, ["connections", "--P", "0,2", "--Q", "1,3"], stdin=text)
    assert code == 1


def test_cli_recover(tmp_path, capsys, monkeypatch):
    net = gen.random_conductances(gen.spider(4), random.Random(1))
    (tmp_path / "net.json").write_text(dumps_network(net))
    (tmp_path / "lam.json").write_text(json.dumps({"matrix": matrix_to_json(response(net).matrix)}))
    code, out, _ = _run(capsys, monkeypatch, ["recover", str(tmp_path / "net.json"), str(tmp_path / "lam.json")])
    assert code == 0
    got = json.loads(out)["conductances"]
    assert [got[str(e.id)] for e in net.edges] == [str(c) for c in net.conductances()]


def test_cli_algorithm1(capsys, monkeypatch):
    text = dumps_network(gen.spider(5))
    code, out, _ = _run(capsys, monkeypatch, ["algorithm1", "--check"], stdin=text)
    assert code == 0 and json.loads(out)["ok"] is True
    code, out, _ = _run(capsys, monkeypatch, ["algorithm1"], stdin=text)
    assert json.loads(out)["removed"] == ["b"]


def test_cli_verify_moves(capsys, monkeypatch):
    code, out, _ = _run(capsys, monkeypatch, ["verify-moves", "--kind", "Series,TriangleCond", "--trials", "5"])
    assert code == 0
    assert [r["preserved"] for r in json.loads(out)["results"]] == [5, 5]


def test_cli_export_dot(capsys, monkeypatch):
    code, out, _ = _run(capsys, monkeypatch, ["export-dot", str(FIX / "fig1-rnpd.json")])
    assert code == 0 and "doublecircle" in out
    code, out, _ = _run(capsys, monkeypatch, ["export-dot", "--medial", str(FIX / "fig1-rnpd.json")])
    assert out.startswith("graph medial")


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    assert _run(capsys, monkeypatch, ["frobnicate"])[0] == 2
    assert _run(capsys, monkeypatch, ["generate", "spider"])[0] == 2
    assert _run(capsys, monkeypatch, ["generate", "spider", "2"])[0] == 1
    assert _run(capsys, monkeypatch, ["respond", str(tmp_path / "missing.json")])[0] == 1
    code, _, err = _run(capsys, monkeypatch, ["respond"], stdin="{ nope")
    assert code == 1 and "parse error" in err and "line 1" in err
    assert _run(capsys, monkeypatch, ["solve", "--potentials", "a,b"], stdin=dumps_network(gen.example1()))[0] == 2


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "disknet", "zseq", str(FIX / "fig1-rnpd.json")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1~+ 2~- 2~+ 1~-"
