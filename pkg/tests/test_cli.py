import json
import subprocess
import sys

import pytest

from toric_wci import cli
from toric_wci.io import (
    CORPUS_DIR,
    fan_from_document,
    fan_to_document,
    load_json,
    spec_from_document,
    spec_to_document,
)
from toric_wci.paperchecks import ANCHORS, compare, compute_anchor, load_golden

FANS = sorted(p.name for p in CORPUS_DIR.glob("*.fan"))
SPECS = sorted(p.name for p in CORPUS_DIR.glob("*.spec"))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cl_example2(capsys):
    code, out, _ = run(capsys, "cl", "example2.fan")
    assert code == 0
    assert "Cl = Z ⊕ Z/5; D = C* × Z/5" in out
    assert "terminal true" in out


def test_cl_p2(capsys):
    code, out, _ = run(capsys, "cl", "p2.fan")
    assert "Cl = Z; weights grading (1,1,1)" in out


@pytest.mark.parametrize(
    "name, expected",
    [
        ("example2.fan", "quotient of P^3 by Z/5"),
        ("example4_p5.fan", "quotient of P^4 by Z/5"),
        ("p1xp1.fan", "not a generalized weighted projective space (b ≠ N+1)"),
    ],
)
def test_classify(capsys, name, expected):
    code, out, _ = run(capsys, "classify", name)
    assert code == 0 and out.strip() == expected


@pytest.mark.parametrize(
    "name, expected",
    [
        ("x6_p111123.spec", "well formed, Fano index 3, Fano"),
        ("x4_p122.spec", "weights (1,2,2) not well formed"),
        ("x5_p1111.spec", "well formed, Fano index -1, not Fano"),
    ],
)
def test_wf(capsys, name, expected):
    code, out, _ = run(capsys, "wf", name)
    assert code == 0 and out.splitlines()[0] == expected


def test_betti(capsys):
    code, out, _ = run(capsys, "betti", "quintic_p4.spec")
    assert code == 0 and "(1,0,1)" in out
    code, out, _ = run(capsys, "betti", "--json", "p1xp1.fan")
    assert json.loads(out)["betti"]["ambient"] == [1, 0, 2, 0, 1]


def test_verdict_json(capsys):
    code, out, _ = run(capsys, "verdict", "--json", "general_type_example4.spec")
    doc = json.loads(out)
    assert code == 0
    assert doc["failed"] == ["fano"] and doc["fano_index"] == -2
    assert doc["conclusion"] == "hypotheses-not-met"


VERDICT_SPECS = [s for s in SPECS if s != "x4_p122.spec"]


def test_verdict_refuses_ill_formed_weights(capsys):
    code, _, err = run(capsys, "verdict", "x4_p122.spec")
    assert code == 2 and "not well formed" in err


@pytest.mark.parametrize(
    "cmd, name",
    [("cl", f) for f in FANS] + [("verdict", s) for s in VERDICT_SPECS] + [("wf", s) for s in SPECS],
)
def test_json_output_is_deterministic(capsys, cmd, name):
    _, first, _ = run(capsys, cmd, "--json", name)
    _, second, _ = run(capsys, cmd, "--json", name)
    assert first == second
    json.loads(first)


@pytest.mark.parametrize("name", FANS)
def test_fan_round_trip(name):
    fan = fan_from_document(load_json(CORPUS_DIR / name))
    again = fan_from_document(json.loads(json.dumps(fan_to_document(fan))))
    assert again == fan


@pytest.mark.parametrize("name", SPECS)
def test_spec_round_trip(name):
    loaded = spec_from_document(load_json(CORPUS_DIR / name), base=CORPUS_DIR)
    doc = json.loads(json.dumps(spec_to_document(loaded.spec)))
    again = spec_from_document(doc)
    assert again.spec == loaded.spec


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.fan"
    bad.write_text('{"lattice_rank": 2, "rays": [[1, 0]')
    code, _, err = run(capsys, "cl", str(bad))
    assert code == 2 and "bad.fan:1:" in err
    bad.write_text('{"lattice_rank": 2, "rays": [[1, 0], [0, 0.5]], "max_cones": [[0, 1]]}')
    assert run(capsys, "cl", str(bad))[0] == 2
    bad.write_text('{"lattice_rank": 2, "rays": [[1, 0], [0, 1]], "max_cones": [[0, 1]]}')
    code, _, err = run(capsys, "cl", str(bad))
    assert code == 2 and "not-complete" not in err and "cover" in err
    assert run(capsys, "cl", str(tmp_path / "missing.fan"))[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_budget(capsys, monkeypatch):
    assert run(capsys, "cl", "--budget", "2", "example2.fan")[0] == 3
    monkeypatch.setenv("TORIC_WCI_BUDGET", "2")
    assert run(capsys, "cl", "example2.fan")[0] == 3
    assert run(capsys, "cl", "--budget", "100", "example2.fan")[0] == 0
    monkeypatch.setenv("TORIC_WCI_BUDGET", "many")
    assert run(capsys, "cl", "example2.fan")[0] == 2


def test_verify_paper_filter(capsys):
    code, out, _ = run(capsys, "verify-paper", "--filter", "example3")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split()[:2] == ["ERRATUM", "example3"]
    assert lines[-1] == "1 anchors: 0 pass, 1 erratum, 0 fail"
    assert run(capsys, "verify-paper", "--filter", "nope")[0] == 2


def test_tampered_golden_names_example2(capsys, tmp_path):
    g = load_golden()
    g["example2"]["cl_torsion"] = [7]
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(g))
    code, out, _ = run(capsys, "verify-paper", "--golden", str(path), "--filter", "example2")
    assert code == 1
    assert "FAIL     example2" in out and "cl_torsion: expected [7], got [5]" in out


def _perturb(x):
    if isinstance(x, bool):
        return not x
    if isinstance(x, int):
        return x + 1
    if isinstance(x, str):
        return x + "?"
    if isinstance(x, list):
        return x + [0] if not x else [_perturb(x[0])] + x[1:]
    if x is None:
        return 0
    raise TypeError(x)


def _leaves(doc, path=()):
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from _leaves(v, path + (k,))
    else:
        yield path


def _set(doc, path, value):
    for k in path[:-1]:
        doc = doc[k]
    doc[path[-1]] = value


def _get(doc, path):
    for k in path:
        doc = doc[k]
    return doc


FAST = [n for n in ANCHORS if n != "relation-roundtrip"]


@pytest.mark.parametrize("name", FAST)
def test_every_golden_leaf_is_load_bearing(name):
    golden = load_golden()[name]
    actual = compute_anchor(name)
    assert compare(name, golden, actual).status in ("PASS", "ERRATUM")
    for path in _leaves(golden):
        if path[-1] in ("printed", "erratum"):
            continue  # documentation of the printed claim, not compared
        g = json.loads(json.dumps(golden))
        _set(g, path, _perturb(_get(g, path)))
        res = compare(name, g, actual)
        assert res.status == "FAIL", path
        assert res.name == name


def test_console_script_runs():
    out = subprocess.run(
        [sys.executable, "-m", "toric_wci.cli", "classify", "example2.fan"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "quotient of P^3 by Z/5"
