import io
import os

import pytest

from streamcolor.cli import expand_bench_config, main, parse_bench_config


def run_cli(*argv):
    return main(list(argv))


def test_gen_run_verify_round_trip(tmp_path, capsys):
    stream = tmp_path / "s.txt"
    out = tmp_path / "out.txt"
    assert run_cli(
        "gen", "--family", "regular-bipartite", "--n", "32", "--delta", "4",
        "--mode", "vertex-one-sided", "--seed", "1", "-o", str(stream),
    ) == 0
    assert run_cli("run", str(stream), "--alg", "one-sided", "-o", str(out)) == 0
    assert run_cli("verify", str(stream), str(out)) == 0
    captured = capsys.readouterr()
    assert "proper: true" in captured.out
    assert "declared color budget:" in captured.err
    lines = out.read_text().splitlines()
    assert lines[-1].startswith("T ")
    assert all(line.startswith("c ") for line in lines[:-1])
    assert len(lines) - 1 == 32 * 4


def test_gen_rejects_infeasible_spec(tmp_path):
    assert run_cli(
        "gen", "--family", "regular-bipartite", "--n", "4", "--delta", "9",
        "--mode", "edge", "--seed", "1", "-o", str(tmp_path / "x.txt"),
    ) == 2


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ["gen", "--family", "random-bipartite", "--n", "20", "--delta", "3",
            "--mode", "edge", "--seed", "7"]
    run_cli(*args, "-o", str(a))
    run_cli(*args, "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_run_rejects_wrong_mode(tmp_path):
    stream = tmp_path / "s.txt"
    run_cli("gen", "--family", "regular-bipartite", "--n", "16", "--delta", "4",
            "--mode", "vertex-one-sided", "--seed", "1", "-o", str(stream))
    assert run_cli("run", str(stream), "--alg", "edge-sqrt",
                   "-o", str(tmp_path / "o.txt")) == 3


def test_run_rejects_degree_violations(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("H 4 0 1 edge 0 1\ne 0 1\ne 0 2\n")
    assert run_cli("run", str(bad), "--alg", "edge-sqrt",
                   "-o", str(tmp_path / "o.txt")) == 3


def test_verify_detects_corrupted_output(tmp_path):
    stream = tmp_path / "s.txt"
    out = tmp_path / "out.txt"
    run_cli("gen", "--family", "regular-bipartite", "--n", "16", "--delta", "2",
            "--mode", "edge", "--seed", "2", "-o", str(stream))
    run_cli("run", str(stream), "--alg", "edge-sqrt", "-o", str(out))
    lines = out.read_text().splitlines()
    # drop one assignment: verification must fail with exit 1
    del lines[0]
    out.write_text("\n".join(lines) + "\n")
    assert run_cli("verify", str(stream), str(out)) == 1


def test_verify_parse_error_exit_code(tmp_path):
    stream = tmp_path / "s.txt"
    stream.write_text("H 4 0 2 edge 0 1\ne 0 1\n")
    bad = tmp_path / "o.txt"
    bad.write_text("c 0 1\n")
    assert run_cli("verify", str(stream), str(bad)) == 5


def test_offline_baselines_run_on_any_mode(tmp_path):
    stream = tmp_path / "s.txt"
    out = tmp_path / "o.txt"
    run_cli("gen", "--family", "regular-general", "--n", "16", "--delta", "4",
            "--mode", "edge", "--seed", "3", "-o", str(stream))
    assert run_cli("run", str(stream), "--alg", "offline-greedy", "-o", str(out)) == 0
    assert run_cli("verify", str(stream), str(out)) == 0


def test_internal_bound_violation_exits_four(tmp_path, monkeypatch):
    import streamcolor.cli as cli_mod
    from streamcolor.errors import BoundViolation

    stream = tmp_path / "s.txt"
    run_cli("gen", "--family", "regular-bipartite", "--n", "16", "--delta", "4",
            "--mode", "edge", "--seed", "1", "-o", str(stream))

    def boom(*args, **kwargs):
        raise BoundViolation("a sub-colorer saw too much degree")

    monkeypatch.setattr(cli_mod, "run_stream", boom)
    assert run_cli("run", str(stream), "--alg", "edge-sqrt",
                   "-o", str(tmp_path / "o.txt")) == 4


def test_env_seed_overrides_flag(tmp_path, monkeypatch):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    args = ["gen", "--family", "regular-bipartite", "--n", "16", "--delta", "2",
            "--mode", "edge"]
    monkeypatch.setenv("STREAMCOLOR_SEED", "123")
    run_cli(*args, "--seed", "1", "-o", str(a))
    run_cli(*args, "--seed", "2", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_kout_csv_schema(capsys):
    assert run_cli("kout", "--n", "8", "--c", "3.0", "--trials", "50", "--seed", "4") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n,u_size,k,trials,seed,failures,rate,ci_low,ci_high"
    fields = out[1].split(",")
    assert fields[0] == "8" and fields[1] == "24"


def test_bench_config_parsing():
    text = """
    # grid
    jobs = 2
    force_stream = true

    [run]
    preset = "one-sided"
    families = ["regular-bipartite", "random-bipartite"]
    mode = "vertex-one-sided"
    n = [8, 16]
    delta = 2
    seeds = 3
    """
    top, blocks = parse_bench_config(text)
    assert top == {"jobs": 2, "force_stream": True}
    assert len(blocks) == 1
    requests, _ = expand_bench_config(text)
    assert len(requests) == 2 * 2 * 1 * 3
    assert all(r.force_stream for r in requests)
    assert requests[0].spec.family == "regular-bipartite"


def test_bench_runs_a_tiny_grid(tmp_path, capsys):
    cfg = tmp_path / "grid.cfg"
    cfg.write_text(
        "[run]\n"
        "preset = \"one-sided\"\n"
        "families = \"regular-bipartite\"\n"
        "mode = \"vertex-one-sided\"\n"
        "n = 16\n"
        "delta = 4\n"
        "seeds = 2\n"
    )
    assert run_cli("bench", "--config", str(cfg)) == 0
    out = capsys.readouterr().out.splitlines()
    header_at = next(i for i, line in enumerate(out) if line.startswith("preset,"))
    rows = out[header_at + 1 :]
    assert len(rows) == 2
    assert all(",true," in row for row in rows)
