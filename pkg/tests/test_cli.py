# tests/test_cli.py
import json

import pytest

import hamlim.cli.common as common_module
import hamlim.services.matcore as matcore_module
import hamlim.services.norms as norms_module
from hamlim.core.config import Settings
from hamlim.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, create_parser, main
from hamlim.services.serialization import loads_matrix


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_parser_registers_every_command():
    parser = create_parser()
    commands = parser._subparsers._group_actions[0].choices

    assert set(commands) == {
        "make",
        "norms",
        "chain",
        "cost",
        "evolve",
        "decompose",
        "trotter",
        "parity-demo",
        "sign-demo",
        "fastforward",
        "line-demo",
        "scaling",
        "tail",
        "promise",
        "adversary",
        "avg-bound",
    }


def test_help_exits_cleanly(capsys):
    code, out = _run(capsys, "--help")

    assert code == EXIT_OK
    assert "chain" in out


def test_unknown_option_is_a_usage_error(capsys):
    code, _ = _run(capsys, "chain", "--bogus")

    assert code == EXIT_USAGE


def test_chain_on_hadamard_power(capsys):
    code, out = _run(capsys, "chain", "--make", "hadamard", "--n", "4")
    profile = json.loads(out)["profile"]

    assert code == EXIT_OK
    assert profile["abs_spectral"] / profile["spectral"] == pytest.approx(4.0, rel=1e-9)


def test_chain_csv_projection(capsys):
    code, out = _run(capsys, "chain", "--make", "line", "--n", "4", "--format", "csv")
    lines = out.splitlines()

    assert code == EXIT_OK
    assert lines[0] == "name,lhs,rhs,slack,ok"
    assert len(lines) == 16


def test_make_writes_the_same_bytes_to_out(capsys, tmp_path):
    path = tmp_path / "line.json"

    code, out = _run(capsys, "make", "line", "--n", "3", "--out", str(path))

    assert code == EXIT_OK
    assert path.read_text() == out
    assert loads_matrix(out).n == 4


def test_norms_reads_a_matrix_file(capsys, tmp_path):
    path = tmp_path / "h.json"
    _run(capsys, "make", "witness", "--witness", "all_ones", "--n", "4", "--out", str(path))

    code, out = _run(capsys, "norms", "--in", str(path))
    profile = json.loads(out)

    assert code == EXIT_OK
    assert profile["one_norm"] == pytest.approx(4.0)
    assert profile["mcn"] == pytest.approx(2.0)


def test_missing_input_file_is_a_usage_error(capsys, tmp_path):
    code, out = _run(capsys, "norms", "--in", str(tmp_path / "missing.json"))

    assert code == EXIT_USAGE
    assert out == ""


def test_invalid_values_are_usage_errors(capsys):
    assert _run(capsys, "adversary", "--M", "5", "--B", "2")[0] == EXIT_USAGE
    assert _run(capsys, "sign-demo", "--signs", "+-")[0] == EXIT_USAGE
    assert _run(capsys, "norms", "--make", "line", "--log-level", "LOUD")[0] == EXIT_USAGE


def test_adversary_small_case(capsys):
    code, out = _run(capsys, "adversary", "--M", "4", "--B", "2")

    assert code == EXIT_OK
    assert json.loads(out)["ratio"] == "3/2"


def test_failed_checks_exit_one(monkeypatch, capsys):
    monkeypatch.setattr(norms_module, "get_settings", lambda: Settings(CHAIN_RELATIVE_SLACK=-1.0))

    code, out = _run(capsys, "chain", "--make", "line", "--n", "4")

    assert code == EXIT_FAILED
    assert json.loads(out)["general_chain_ok"] is False


def test_eigensolver_failure_exits_one(monkeypatch, capsys):
    monkeypatch.setattr(matcore_module, "EIGH_DRIVERS", ())

    code, out = _run(capsys, "norms", "--make", "line", "--n", "3")

    assert code == EXIT_FAILED
    assert out == ""


def test_no_timestamp_runs_are_byte_identical(capsys):
    argv = ("parity-demo", "--n", "4", "--count", "3", "--seed", "11", "--no-timestamp")

    first = _run(capsys, *argv)
    second = _run(capsys, *argv)

    assert first == second
    assert first[0] == EXIT_OK
    assert "generated_at" not in first[1]
    assert json.loads(first[1])["pass"] is True


def test_timestamps_are_reported_by_default(capsys):
    code, out = _run(capsys, "line-demo", "--n", "4")
    data = json.loads(out)

    assert code == EXIT_OK
    assert "generated_at" in data
    assert "wall_time_seconds" in data


def test_tail_is_seeded(capsys):
    argv = ("tail", "--M", "51", "--trials", "200", "--seed", "5")

    assert _run(capsys, *argv) == _run(capsys, *argv)
    assert _run(capsys, *argv, "--workers", "3") == _run(capsys, *argv)


def test_seed_defaults_to_settings(monkeypatch, capsys):
    explicit = _run(capsys, "make", "random", "--n", "3", "--seed", "7")
    unseeded = _run(capsys, "make", "random", "--n", "3")

    monkeypatch.setattr(common_module, "get_settings", lambda: Settings(HAMLIM_SEED=7))
    from_settings = _run(capsys, "make", "random", "--n", "3")

    assert from_settings == explicit
    assert unseeded != explicit


def test_decompose_defaults_to_a_tree_and_evolve_writes_csv(capsys):
    code, out = _run(capsys, "decompose", "--n", "16", "--seed", "2")
    report = json.loads(out)["report"]

    assert code == EXIT_OK
    assert report["k_prime"] == 1
    assert report["passed"] is True

    code, out = _run(capsys, "evolve", "--make", "line", "--n", "2", "--t", "3.14159", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "index,re,im"


def test_trotter_on_a_star_exits_cleanly(capsys):
    code, out = _run(capsys, "trotter", "--make", "star", "--n", "5", "--seed", "1")

    assert code == EXIT_OK
    assert json.loads(out)["metrics"]["exact_formula"] is True


def test_extreme_bound_arguments_never_crash(capsys):
    code, out = _run(capsys, "promise", "--M", "1100", "--B", "1100")
    assert code == EXIT_OK
    assert json.loads(out)["exact_float"] == 0.0

    code, out = _run(capsys, "tail", "--M", "51", "--d", "20", "--trials", "10", "--seed", "0")
    assert code == EXIT_OK
    assert json.loads(out)["bound_lemma"] == 0.0

    code, out = _run(capsys, "avg-bound", "--M", "1000000", "--c", "200", "--d", "2")
    assert code == EXIT_USAGE
    assert out == ""
