import json

import pytest

from heckeal.cli import RunConfig, build_parser, main, run_murmur
from heckeal.errors import DomainError


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_trace_subcommand(capsys):
    code, out, _ = run_cli(["trace", "-k", "12", "-N", "1", "-n", "2"], capsys)
    assert code == 0
    assert out.strip() == "-24"


def test_trace_with_involution(capsys):
    code, out, _ = run_cli(["trace", "-k", "2", "-N", "11", "-Q", "11"], capsys)
    assert code == 0
    assert out.strip() == "-1"


def test_trace_new_subcommand(capsys):
    code, out, _ = run_cli(["trace-new", "-k", "2", "-N", "37", "-n", "2"], capsys)
    assert code == 0
    assert out.strip() == "-2"


def test_dims_subcommand(capsys):
    code, out, _ = run_cli(["dims", "-k", "2", "-N", "37"], capsys)
    assert code == 0
    assert out.split() == ["2", "2", "1", "1"]


def test_usage_errors(capsys):
    code, _, err = run_cli(["trace", "-k", "3", "-N", "1"], capsys)
    assert code == 2 and "weight" in err
    code, _, err = run_cli(["trace", "-k", "4", "-N", "12", "-Q", "2"], capsys)
    assert code == 2
    code, _, err = run_cli(["murmur", "-k", "2", "--levels", "7", "--primes", "5"], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_io_error(tmp_path, capsys):
    missing_dir = tmp_path / "does" / "not" / "exist" / "out.csv"
    code, _, err = run_cli(
        ["hurwitz", "--max", "5", "-o", str(missing_dir)], capsys
    )
    assert code == 4
    assert "i/o" in err


def test_hurwitz_table_output(tmp_path, capsys):
    out = tmp_path / "h.csv"
    code, _, _ = run_cli(["hurwitz", "--max", "8", "-o", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,twelve_H"
    assert lines[1] == "0,-1"
    assert lines[4] == "3,4"
    assert lines[5] == "4,6"
    assert len(lines) == 10


def test_selftest_subcommand(tmp_path, capsys):
    report = tmp_path / "report.json"
    code, out, _ = run_cli(["selftest", "--json", str(report)], capsys)
    assert code == 0
    assert "OK" in out
    payload = json.loads(report.read_text())
    assert payload["ok"] is True


def test_run_config_validation():
    with pytest.raises(DomainError):
        RunConfig(k=3, n_min=1, n_max=10, prime_bound=5).validate()
    with pytest.raises(DomainError):
        RunConfig(k=2, n_min=10, n_max=1, prime_bound=5).validate()
    with pytest.raises(DomainError):
        RunConfig(k=2, n_min=1, n_max=10, prime_bound=1).validate()
    RunConfig(k=2, n_min=1, n_max=10, prime_bound=5).validate()


def test_murmur_row_identities():
    config = RunConfig(k=2, n_min=1, n_max=60, prime_bound=12)
    rows, aggregates = run_murmur(config)
    assert rows, "window should contain nonzero newspaces"
    for row in rows:
        assert row["dim_plus"] + row["dim_minus"] == row["dim_new"]
        assert row["tr_plus"] + row["tr_minus"] == row["tr_Tp_new"]
        assert row["tr_plus"] - row["tr_minus"] == row["tr_TpWN_new"]
        assert row["p_divides_N"] == int(row["N"] % row["p"] == 0)
        assert row["dim_new"] > 0
    for agg in aggregates:
        p = agg["p"]
        assert agg["sum_tr_plus"] == sum(r["tr_plus"] for r in rows if r["p"] == p)
        assert agg["sum_dim_minus"] == sum(
            r["dim_minus"] for r in rows if r["p"] == p
        )


def test_murmur_level_filters():
    base = dict(k=2, n_min=1, n_max=60, prime_bound=5)
    all_rows, _ = run_murmur(RunConfig(**base))
    sf_rows, _ = run_murmur(RunConfig(**base, level_filter="squarefree"))
    pr_rows, _ = run_murmur(RunConfig(**base, level_filter="prime"))
    sf_levels = {r["N"] for r in sf_rows}
    pr_levels = {r["N"] for r in pr_rows}
    assert pr_levels <= sf_levels <= {r["N"] for r in all_rows}
    assert 49 not in sf_levels and 37 in pr_levels


def test_murmur_csv_and_workers_identical(tmp_path, capsys):
    out1 = tmp_path / "one.csv"
    out2 = tmp_path / "two.csv"
    base = ["murmur", "-k", "2", "--levels", "1:40", "--primes", "10"]
    assert run_cli(base + ["-o", str(out1)], capsys)[0] == 0
    assert run_cli(base + ["--workers", "3", "-o", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()
    agg1 = (tmp_path / "one.csv.agg.csv").read_bytes()
    agg2 = (tmp_path / "two.csv.agg.csv").read_bytes()
    assert agg1 == agg2
    header = out1.read_text().splitlines()[0]
    assert header == (
        "N,k,p,p_divides_N,dim_new,dim_plus,dim_minus,"
        "tr_Tp_new,tr_TpWN_new,tr_plus,tr_minus"
    )


def test_murmur_json_format(tmp_path, capsys):
    out = tmp_path / "rows.json"
    code, _, _ = run_cli(
        ["murmur", "-k", "2", "--levels", "1:30", "--primes", "5",
         "--format", "json", "-o", str(out)],
        capsys,
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert set(payload) == {"rows", "aggregates"}
    assert all(r["N"] <= 30 for r in payload["rows"])


def test_murmur_cache_roundtrip(tmp_path, capsys):
    cache = tmp_path / "cache.json"
    out1 = tmp_path / "cold.csv"
    out2 = tmp_path / "warm.csv"
    base = ["murmur", "-k", "2", "--levels", "1:40", "--primes", "10",
            "--cache", str(cache)]
    assert run_cli(base + ["-o", str(out1)], capsys)[0] == 0
    assert cache.exists()
    assert run_cli(base + ["-o", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_murmur_cache_env_var(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "envcache.json"
    monkeypatch.setenv("HECKEAL_CACHE", str(cache))
    out = tmp_path / "out.csv"
    code, _, _ = run_cli(
        ["murmur", "-k", "2", "--levels", "1:20", "--primes", "5", "-o", str(out)],
        capsys,
    )
    assert code == 0
    assert cache.exists()


def test_murmur_stdout_agg_comments(capsys):
    code, out, _ = run_cli(["murmur", "-k", "2", "--levels", "1:20", "--primes", "3"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("N,k,p")
    assert any(line.startswith("# p,sum_tr_plus") for line in lines)


def test_parser_structure():
    parser = build_parser()
    names = {a.dest for a in parser._subparsers._group_actions[0].choices[
        "murmur"
    ]._actions}
    assert {"k", "levels", "primes", "workers", "cache"} <= names
