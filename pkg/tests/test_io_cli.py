import json

import numpy as np
import pytest

from zxcheck import cli
from zxcheck.diagram import chain, is_isomorphic, xs, zs
from zxcheck.incompleteness import build_counterexample
from zxcheck.io import diagram_from_json, diagram_to_json, save_diagram
from zxcheck.diagram import DiagramError
from zxcheck.phase import Phase


def test_diagram_round_trip_canonical():
    d1, _ = build_counterexample()
    doc = diagram_to_json(d1)
    back = diagram_from_json(doc)
    assert is_isomorphic(back, d1)
    assert diagram_to_json(back) == doc


def test_parse_errors():
    with pytest.raises(DiagramError):
        diagram_from_json({"nodes": [{"id": "a", "kind": "B"}], "edges": [["a", "b"]]})
    with pytest.raises(DiagramError):
        diagram_from_json({"nodes": [{"id": "a", "kind": "H", "phase": {"pi_num": 1}}], "edges": []})


@pytest.fixture
def pair(tmp_path):
    d1, d2 = build_counterexample()
    save_diagram(d1, tmp_path / "d1.zx")
    save_diagram(d2, tmp_path / "d2.zx")
    return str(tmp_path / "d1.zx"), str(tmp_path / "d2.zx")


def test_equal_exit_codes(pair):
    a, b = pair
    assert cli.main(["equal", a, b, "--mode", "exact"]) == 0
    assert cli.main(["equal", a, b, "--mode", "scalar", "--k", "-3"]) == 1


def test_eval_wire(tmp_path, capsys):
    p = tmp_path / "wire.zx"
    p.write_text(json.dumps({"nodes": [{"id": "i", "kind": "B"}, {"id": "o", "kind": "B"}],
                             "edges": [["i", "o"]], "inputs": ["i"], "outputs": ["o"]}))
    assert cli.main(["eval", str(p), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["shape"] == [2, 2]
    assert np.allclose(np.array(doc["data"])[..., 0].reshape(2, 2), np.eye(2))


def test_bad_inputs_exit_two(tmp_path):
    bad = tmp_path / "bad.zx"
    bad.write_text("{not json")
    assert cli.main(["eval", str(bad)]) == 2
    assert cli.main(["eval", str(tmp_path / "missing.zx")]) == 2
    assert cli.main(["equal"]) == 2
    assert cli.main(["frobnicate"]) == 2


def test_simplify_writes_file(tmp_path):
    p, out = tmp_path / "c.zx", tmp_path / "s.zx"
    save_diagram(chain([zs(Phase.pi(1, 4)), zs(Phase.pi(1, 4)), xs()]), p)
    assert cli.main(["simplify", str(p), "-o", str(out)]) == 0
    assert is_isomorphic(diagram_from_json(json.loads(out.read_text())), chain([zs(Phase.pi(1, 2))]))


def test_certificate_command(tmp_path):
    out = tmp_path / "cert.json"
    assert cli.main(["incompleteness-cert", "--out", str(out), "--write-diagrams", str(tmp_path)]) == 0
    assert json.loads(out.read_text())["verdict"] == "certified"
    assert (tmp_path / "d1.zx").exists()
    assert cli.main(["incompleteness-cert", "--floor", "5"]) == 1


def test_rules_check_command():
    assert cli.main(["rules-check", "--k", "1", "--samples", "3"]) == 0
    assert cli.main(["rules-check", "--k", "2", "--samples", "3"]) == 1
    assert cli.main(["rules", "--json"]) == 0


def test_euler_command(tmp_path, capsys):
    m = tmp_path / "h.json"
    s = 1 / np.sqrt(2)
    m.write_text(json.dumps({"shape": [2, 2], "data": [[s, 0], [s, 0], [s, 0], [-s, 0]]}))
    assert cli.main(["euler", "--order", "zxz", "--matrix", str(m), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["reconstruction_error"] < 1e-9
    t = tmp_path / "t.json"
    t.write_text(json.dumps(doc["triple"]))
    d = tmp_path / "e.zx"
    assert cli.main(["euler", "--order", "xzx", "--triple", str(t), "--diagram-out", str(d)]) == 0
    assert d.exists()
    m.write_text(json.dumps([[1, 2], [3, 4]]))
    assert cli.main(["euler", "--order", "zxz", "--matrix", str(m)]) == 2


def test_search_command(tmp_path, pair, capsys):
    from zxcheck.incompleteness import d1_chain, d2_chain
    save_diagram(d1_chain(), tmp_path / "c1.zx")
    save_diagram(d2_chain(), tmp_path / "c2.zx")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"budget": 1, "alphabet": ["0", "pi/2"], "probes": [-3],
                               "seeds": [str(tmp_path / "c1.zx"), str(tmp_path / "c2.zx")]}))
    outdir = tmp_path / "cands"
    assert cli.main(["search", "--config", str(cfg), "--output-dir", str(outdir)]) == 0
    assert "1 candidate(s)" in capsys.readouterr().out
    assert sorted(p.name for p in outdir.iterdir()) == ["candidate_000_lhs.zx", "candidate_000_rhs.zx"]
    cfg.write_text(json.dumps({"probes": [3]}))
    assert cli.main(["search", "--config", str(cfg)]) == 2


def test_fixture_command():
    assert cli.main(["fixture", "flowers"]) == 0
    assert cli.main(["fixture", "fences", "--k", "3"]) == 2
