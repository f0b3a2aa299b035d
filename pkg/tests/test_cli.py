from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from stacklab.cli import (
    EXIT_EXHAUSTED,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_VALIDATION,
    main,
)
from stacklab.config import ConfigError, config_hash, load_config, parse_rational

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TINY_DOC = json.loads((FIXTURES / "entropy_tiny.json").read_text())


def test_parse_rational():
    assert parse_rational("3/2", "x") == Fraction(3, 2)
    assert parse_rational(2, "x") == 2
    with pytest.raises(ConfigError, match="x"):
        parse_rational("3//2", "x")


def test_load_config_validations():
    with pytest.raises(ConfigError, match="operations"):
        load_config({"seed": 1})
    doc = json.loads(json.dumps(TINY_DOC))
    doc["operations"] = []
    with pytest.raises(ConfigError, match="operations"):
        load_config(doc)
    doc = json.loads(json.dumps(TINY_DOC))
    doc["operations"][0].pop("length")
    with pytest.raises(ConfigError, match="length"):
        load_config(doc)
    doc = json.loads(json.dumps(TINY_DOC))
    doc["stacking"]["spacer_cap"] = 0
    with pytest.raises(ConfigError, match="spacer_cap"):
        load_config(doc)
    doc = json.loads(json.dumps(TINY_DOC))
    doc["operations"][0]["op"] = "unknown"
    with pytest.raises(ConfigError, match="unknown"):
        load_config(doc)


def test_seed_override_changes_hash():
    cfg1 = load_config(TINY_DOC)
    cfg2 = load_config(TINY_DOC, seed_override=99)
    assert cfg1.hash != cfg2.hash
    assert cfg2.seed == 99


def test_describe_lists_heights(capsys):
    code = main(["describe", "--config", str(FIXTURES / "entropy_tiny.json")])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "heights: 2, 5" in out


def test_describe_recipe_flex(capsys, tmp_path):
    doc = {
        "seed": 0,
        "operations": [{"op": "recipe", "name": "flex", "h": 2, "beta": "1", "kappa": "2", "L": 3}],
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    code = main(["describe", "--config", str(path)])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "q=5" in out


def test_run_golden_fixture(tmp_path):
    out = tmp_path / "run"
    code = main(["run", "--config", str(FIXTURES / "entropy_tiny.json"), "--out", str(out)])
    assert code == EXIT_OK
    got = (out / "entropy.csv").read_bytes()
    expected = (FIXTURES / "golden" / "entropy_tiny__entropy.csv").read_bytes()
    assert got == expected
    got = (out / "summary.txt").read_bytes()
    expected = (FIXTURES / "golden" / "entropy_tiny__summary.txt").read_bytes()
    assert got == expected
    meta = json.loads((out / "meta.json").read_text())
    assert meta["config_hash"] == config_hash(json.loads((out / "config.json").read_text()))


def test_run_golden_determinism_fixture(tmp_path):
    out = tmp_path / "run"
    code = main(
        ["run", "--config", str(FIXTURES / "acceptance_determinism.json"), "--out", str(out)]
    )
    assert code == EXIT_OK
    for name in (
        "entropy.csv",
        "entropy_2.csv",
        "generic.csv",
        "markov.csv",
        "seq.csv",
        "summary.txt",
    ):
        got = (out / name).read_bytes()
        expected = (FIXTURES / "golden" / f"acceptance_determinism__{name}").read_bytes()
        assert got == expected, name


def test_run_contains_expected_entropy_row(tmp_path):
    out = tmp_path / "run"
    main(["run", "--config", str(FIXTURES / "entropy_tiny.json"), "--out", str(out)])
    body = (out / "entropy.csv").read_text().splitlines()
    header = body[1].split(",")
    row = body[2].split(",")
    h_per_n = float(row[header.index("H_per_N")])
    assert abs(h_per_n - 0.34657359027997264) < 1e-12


def test_validation_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"seed": 1, "operations": []}))
    assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == EXIT_VALIDATION
    assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == EXIT_VALIDATION


def test_word_cap_exit_code(tmp_path):
    doc = json.loads(json.dumps(TINY_DOC))
    out = tmp_path / "o"
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    code = main(["run", "--config", str(path), "--out", str(out), "--cap-words", "1"])
    assert code == EXIT_RESOURCE


def test_generic_exhausted_exit_code(tmp_path):
    # Impossible cap: N large, N0 = 0, so counts must be <= a tiny fraction.
    doc = {
        "stacking": {"initial_height": 2, "spacer_cap": 2, "stages": []},
        "sequence": {"kind": "explicit", "values": [1, 2, 3]},
        "seed": 5,
        "operations": [
            {
                "op": "generic",
                "length": 3,
                "floor_length": 0,
                "q": 4,
                "alphabet": 2,
                "trial_cap": 6,
            }
        ],
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    code = main(["generic", "--config", str(path), "--out", str(tmp_path / "o")])
    assert code == EXIT_EXHAUSTED
    body = (tmp_path / "o" / "generic.csv").read_text().splitlines()
    assert len(body) == 2 + 6  # hash line + header + one row per trial


def test_verify_detects_tampering(tmp_path):
    out = tmp_path / "run"
    main(["run", "--config", str(FIXTURES / "entropy_tiny.json"), "--out", str(out)])
    assert main(["verify", "--out", str(out)]) == EXIT_OK
    csv = out / "entropy.csv"
    text = csv.read_text().replace(config_hash(TINY_DOC), "0" * 64)
    csv.write_text(text)
    assert main(["verify", "--out", str(out)]) == EXIT_VALIDATION


def test_bounds_subcommand(tmp_path):
    doc = {
        "stacking": {"initial_height": 2, "spacer_cap": 2, "stages": [{"q": 2, "spacers": [1]}]},
        "sequence": {"kind": "power", "alpha": "3/2", "horizon": 200},
        "seed": 0,
        "operations": [{"op": "bounds", "phi": "log", "cuts": "constant", "horizon": 100}],
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "o"
    assert main(["bounds", "--config", str(path), "--out", str(out)]) == EXIT_OK
    body = (out / "bounds.csv").read_text().splitlines()
    assert body[1] == "n,c_n,diag_balance,diag_phi,diag_binom,tau"
    assert len(body) == 2 + 99  # n runs 2..100


def test_seq_subcommands(capsys, tmp_path):
    # no operations needed for pure sequence diagnostics
    doc = {
        "sequence": {"kind": "power", "alpha": "2", "horizon": 16},
        "seed": 0,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    assert main(["seq", "gaps", "--config", str(path), "--limit", "4"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "index,value,gap"
    assert out[1] == "1,1,"
    assert out[4] == "4,16,7"
    assert main(["seq", "kvalue", "--config", str(path), "--r", "0", "--n", "5"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[1] == "0,5,1/1,1.000000000000"
    assert main(["seq", "describe", "--config", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "dilating on horizon" in out


def test_markov_subcommand(capsys):
    assert main(["markov", "--period", "3"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "state,stationary,exact"
    assert out[1].endswith("2/7")
    assert out[4].endswith("1/7")


def test_recipe_subcommand(capsys):
    code = main(
        ["recipe", "--name", "poly", "--h", "4", "--beta", "1", "--alpha", "2"]
    )
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "q=32" in out and "N0=5" in out and "N=8" in out


def test_profile_op_via_config(tmp_path):
    doc = {
        "stacking": {"initial_height": 2, "spacer_cap": 2, "stages": [{"q": 2, "spacers": [1]}]},
        "sequence": {"kind": "explicit", "values": [1, 2]},
        "seed": 0,
        "operations": [{"op": "profile", "lengths": [1, 2], "cuts": 100}],
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "o"
    assert main(["run", "--config", str(path), "--out", str(out)]) == EXIT_OK
    body = (out / "profile.csv").read_text().splitlines()
    assert body[1].startswith("N,stage,")
    assert len(body) == 4
    # lambda-form selection rule
    doc["operations"] = [{"op": "profile", "lengths": [2], "rule": "lambda", "lam": "5"}]
    path.write_text(json.dumps(doc))
    assert main(["run", "--config", str(path), "--out", str(tmp_path / "o2")]) == EXIT_OK


def test_entropy_run_filter(tmp_path):
    out = tmp_path / "o"
    code = main(
        [
            "entropy",
            "run",
            "--config",
            str(FIXTURES / "acceptance_determinism.json"),
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    names = {p.name for p in out.glob("*.csv")}
    assert "entropy.csv" in names and "entropy_2.csv" in names
    assert "generic.csv" not in names
