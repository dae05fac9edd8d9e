import json
import subprocess
import sys

import pytest

from cartankit import cli


def strip_seconds(doc):
    for r in doc["reports"]:
        r.pop("seconds")
    return doc


def test_tractor_ok(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert cli.main(["tractor", "--trials", "20", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["seed"] == 0 and doc["backend"] in ("cython", "python")
    assert doc["reports"][0]["payload"]["signature"] == [4, 3]
    assert "1/1 checks passed" in capsys.readouterr().out


def test_json_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["octonion", "classify", "--planes", "3", "--seed", "4", "--json", str(a)])
    cli.main(["octonion", "classify", "--planes", "3", "--seed", "4", "--json", str(b)])
    assert strip_seconds(json.loads(a.read_text())) == strip_seconds(json.loads(b.read_text()))


def test_failing_check_exits_1(capsys):
    # the multiplication table check disagrees with the stated table in one sign
    assert cli.main(["octonion", "table"]) == 1
    assert "failed: octonion.table" in capsys.readouterr().out


def test_holonomy_preset_lookup(capsys):
    assert cli.main(["holonomy", "--model", "n4_single"]) == 0
    assert "Y34" in capsys.readouterr().out


def test_holonomy_model_file(tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"n": 4, "modification": "general", "beta": [[3, 4, 1]]}))
    assert cli.main(["holonomy", "--model", str(f)]) == 0


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"n": 4, "modification": "weird"}'])
def test_bad_model_exits_3(tmp_path, content):
    f = tmp_path / "bad.json"
    f.write_text(content)
    assert cli.main(["holonomy", "--model", str(f)]) == 3


def test_missing_model_exits_3():
    assert cli.main(["holonomy", "--model", "/nonexistent/zzz.json"]) == 3


def test_max_n_env(tmp_path, monkeypatch):
    f = tmp_path / "big.json"
    f.write_text(json.dumps({"n": 6}))
    monkeypatch.setenv("CARTANKIT_MAX_N", "5")
    assert cli.main(["holonomy", "--model", str(f)]) == 3


@pytest.mark.parametrize("argv", [[], ["bogus"], ["homology"], ["homology", "--n", "9"],
                                  ["octonion", "cube"], ["inclusions", "--case", "nope"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_homology_small(capsys):
    assert cli.main(["homology", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "homology.n2" in out and "homology.codiff_square" in out


def test_inclusions_single_case():
    assert cli.main(["inclusions", "--case", "cr"]) == 0


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "cartankit.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "cartankit" in r.stdout
