"""Command-line interface: exit codes, report shape, determinism and configuration sources."""

import json

import pytest

from affschur.cli import ENV_PREFIX, SUBCOMMANDS, env_var, main, parse_config, run


def test_example_gl2_exits_zero_and_reports_relation_kinds(capsys):
    code, report = run(["example-gl2"])
    assert code == 0 and report["ok"]
    names = " ".join(c["name"] for c in report["checks"])
    for kind in ("split∘merge", "merge∘split", "commutes"):
        assert kind in names
    assert json.loads(capsys.readouterr().out)["suite"] == "example-gl2"


def test_hecke_small_run_passes(capsys):
    code, report = run(["verify-hecke", "--n", "2", "--ell", "3", "--q", "5"])
    assert code == 0
    assert report["passed"] == report["total"] > 0


@pytest.mark.parametrize("argv", [
    ["verify-hecke", "--ell", "3", "--q", "4"],
    ["verify-hecke", "--ell", "4", "--q", "3"],
    ["verify-hecke", "--bogus"],
    ["no-such-suite"],
    ["verify-hecke", "--n", "0"],
])
def test_bad_invocations_exit_two(argv, capsys):
    code, report = run(argv)
    assert code == 2 and report is None


def test_same_seed_gives_identical_reports(capsys):
    argv = ["verify-demazure", "--ell", "3", "--q", "5", "--seed", "7", "--n", "3"]
    first, second = run(argv)[1], run(argv)[1]
    assert first == second
    assert first["seed"] == 7


def test_environment_overrides_defaults_and_flags_override_environment():
    env = {f"{ENV_PREFIX}ELL": "7", f"{ENV_PREFIX}Q": "2"}
    assert (parse_config(["verify-hecke"], env).ell, parse_config(["verify-hecke"], env).q) == (7, 2)
    assert parse_config(["verify-hecke", "--ell", "3"], env).ell == 3


def test_malformed_environment_value_is_a_usage_error(capsys):
    code, _ = run(["verify-hecke"], env={f"{ENV_PREFIX}ELL": "three"})
    assert code == 2


def test_text_format(capsys):
    code, _ = run(["example-gl2", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0].startswith("suite example-gl2: PASS")
    assert all(line.startswith(("PASS", "FAIL")) for line in out.splitlines()[1:])


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, report = run(["example-gl2", "--output", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text()) == report


def test_main_returns_exit_code(capsys):
    assert main(["example-gl2", "--format", "text"]) == 0


def test_every_subcommand_has_a_parser():
    for name in SUBCOMMANDS:
        assert parse_config([name]).subcommand == name


def test_rank_and_truncation_have_distinct_environment_variables():
    assert env_var("n") != env_var("N")
    cfg = parse_config(["verify-klr"], {env_var("n"): "3", env_var("N"): "4"})
    assert (cfg.n, cfg.N) == (3, 4)
