"""Unit tests for the command-line interface."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from cantor_moments import moments
from cantor_moments.cli import main


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# constant
# ---------------------------------------------------------------------------


def test_constant_json_schema(capsys):
    code, out, _ = run_cli(capsys, ["constant", "--digits", "10", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert list(payload) == ["constant", "digits", "certified_error", "budget"]
    assert payload["digits"] == 10
    assert payload["constant"] == "3.3646507281"
    assert set(payload["budget"]) == {
        "target_digits",
        "guard_digits",
        "series_cutoff",
        "exact_switch",
        "em_order",
    }


def test_constant_human_mode(capsys):
    code, out, err = run_cli(capsys, ["constant", "--digits", "5"])
    assert code == 0
    assert "constant = 3.36465" in out
    assert "certified error" in out
    assert "wall time" in err  # stderr only, keeping stdout deterministic


def test_constant_digit_range_errors(capsys):
    for digits in ("0", "61", "-3"):
        code, _, err = run_cli(capsys, ["constant", "--digits", digits])
        assert code == 2
        assert "--digits must be in [1, 60]" in err


def test_constant_json_deterministic(capsys):
    _, first, _ = run_cli(capsys, ["constant", "--digits", "15", "--json"])
    _, second, _ = run_cli(capsys, ["constant", "--digits", "15", "--json"])
    assert first == second


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def test_moments_csv_rows(capsys):
    code, out, _ = run_cli(capsys, ["moments", "--max-n", "2", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,num,den,decimal"
    assert lines[1] == "0,1,1,1.00000000000000000000"
    assert lines[2] == "1,1,2,0.50000000000000000000"
    assert lines[3] == "2,3,10,0.30000000000000000000"


def test_moments_zero_gives_single_row(capsys):
    code, out, _ = run_cli(capsys, ["moments", "--max-n", "0", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2  # header + the n = 0 row
    assert lines[1].startswith("0,1,1,")


def test_moments_json_fields(capsys):
    code, out, _ = run_cli(capsys, ["moments", "--max-n", "5", "--format", "json"])
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 6
    assert rows[5] == {
        "n": 5,
        "num": 5,
        "den": 46,
        "decimal": "0.10869565217391304348",
    }
    for row in rows:
        assert Fraction(row["num"], row["den"]) == moments.moment_bernoulli(row["n"])


def test_moments_range_error(capsys):
    code, _, err = run_cli(capsys, ["moments", "--max-n", "513", "--format", "csv"])
    assert code == 2
    assert "--max-n must be in [0, 512]" in err


def test_moments_csv_deterministic(capsys):
    _, first, _ = run_cli(capsys, ["moments", "--max-n", "8", "--format", "csv"])
    _, second, _ = run_cli(capsys, ["moments", "--max-n", "8", "--format", "csv"])
    assert first == second


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_oracle_suite(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--suite", "oracle", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "verify"
    assert payload["all_pass"] is True
    assert len(payload["checks"]) == 65
    for check in payload["checks"]:
        assert set(check) == {"name", "status", "measured", "tolerance"}
        assert check["status"] == "pass"


def test_verify_identity_suite(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--suite", "identity", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["all_pass"] is True
    assert len(payload["checks"]) == 12


def test_verify_decay_suite_human(capsys):
    code, out, _ = run_cli(capsys, ["verify", "--suite", "decay"])
    assert code == 0
    assert "[PASS] decay_slope_band" in out
    assert "3/3 checks passed" in out


def test_verify_json_deterministic(capsys):
    _, first, _ = run_cli(capsys, ["verify", "--suite", "decay", "--json"])
    _, second, _ = run_cli(capsys, ["verify", "--suite", "decay", "--json"])
    assert first == second


def test_verify_failure_exit_code(capsys, monkeypatch):
    # Sabotage one oracle so the suite records a failing check.
    real = moments.moment_recursive

    def broken(n):
        return Fraction(1, 7) if n == 3 else real(n)

    monkeypatch.setattr(moments, "moment_recursive", broken)
    code, out, _ = run_cli(capsys, ["verify", "--suite", "oracle", "--json"])
    assert code == 1
    payload = json.loads(out)
    assert payload["all_pass"] is False
    failing = [c for c in payload["checks"] if c["status"] == "fail"]
    assert [c["name"] for c in failing] == ["moment_oracle_n3"]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "--suite", "bogus"])
    assert excinfo.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as excinfo:
        main(["moments", "--max-n", "2", "--format", "xml"])
    assert excinfo.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def test_cache_roundtrip(capsys, tmp_path):
    cache = tmp_path / "cache.json"
    code, first, _ = run_cli(
        capsys,
        ["--cache-path", str(cache), "moments", "--max-n", "30", "--format", "csv"],
    )
    assert code == 0
    assert cache.exists()
    payload = json.loads(cache.read_text())
    assert set(payload) == {"bernoulli", "moment_bernoulli", "moment_recursive"}
    assert payload["moment_bernoulli"]["0"] == "1/1"
    # second run loads the cache and reproduces the output byte-for-byte
    code, second, _ = run_cli(
        capsys,
        ["--cache-path", str(cache), "moments", "--max-n", "30", "--format", "csv"],
    )
    assert code == 0
    assert first == second


def test_cache_env_variable(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "env-cache.json"
    monkeypatch.setenv("CANTOR_CACHE", str(cache))
    code, _, _ = run_cli(capsys, ["moments", "--max-n", "4", "--format", "csv"])
    assert code == 0
    assert cache.exists()


def test_cache_flag_overrides_env(capsys, tmp_path, monkeypatch):
    env_cache = tmp_path / "env.json"
    flag_cache = tmp_path / "flag.json"
    monkeypatch.setenv("CANTOR_CACHE", str(env_cache))
    code, _, _ = run_cli(
        capsys,
        ["--cache-path", str(flag_cache), "moments", "--max-n", "4", "--format", "csv"],
    )
    assert code == 0
    assert flag_cache.exists()
    assert not env_cache.exists()


def test_cache_corrupt_file_ignored(capsys, tmp_path):
    cache = tmp_path / "corrupt.json"
    cache.write_text("this is not json")
    code, out, err = run_cli(
        capsys,
        ["--cache-path", str(cache), "moments", "--max-n", "2", "--format", "csv"],
    )
    assert code == 0
    assert "warning: ignoring unreadable cache" in err
    assert "0,1,1," in out
    # the run rewrites a valid cache afterward
    json.loads(cache.read_text())


def test_cache_inconsistent_table_rejected(capsys, tmp_path):
    cache = tmp_path / "bad.json"
    cache.write_text(
        json.dumps(
            {
                "bernoulli": ["1/1", "-1/2"],
                "moment_bernoulli": {"0": "2/1"},
                "moment_recursive": ["1/1"],
            }
        )
    )
    code, out, err = run_cli(
        capsys,
        ["--cache-path", str(cache), "moments", "--max-n", "2", "--format", "csv"],
    )
    assert code == 0
    assert "warning: ignoring unreadable cache" in err
    assert "2,3,10," in out
