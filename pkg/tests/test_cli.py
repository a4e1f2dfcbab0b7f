import csv
import json
import logging

import networkx as nx
import pytest
from click.testing import CliRunner

from config import db
from config.config import Config
from mcentrality.main import cli


@pytest.fixture(autouse=True)
def restore_root_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def karate_file(tmp_path):
    path = tmp_path / "karate.txt"
    h = nx.karate_club_graph()
    path.write_text("# karate club\n" + "".join(f"n{u} n{v}\n" for u, v in h.edges()))
    return path


@pytest.fixture
def split_file(tmp_path):
    path = tmp_path / "split.txt"
    path.write_text("a b\nb c\nc a\nc d\nx y\n")
    return path


def invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", *map(str, args)])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_stats_of_triangle(runner, tmp_path):
    src = tmp_path / "tri.txt"
    src.write_text("a b\nb c\nc a\n")
    result = invoke(runner, "stats", src, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    (row,) = read_csv(tmp_path / "tri_stats.csv")
    assert (row["n"], row["m"], row["mean_degree"], row["max_coreness"]) == ("3", "3", "2", "2")


def test_stats_reports_the_whole_graph(runner, split_file, tmp_path):
    result = invoke(runner, "stats", split_file, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    (row,) = read_csv(tmp_path / "split_stats.csv")
    assert row["n"] == "6"
    assert row["giant_size"] == "4"


def test_empty_file_exit_code(runner, tmp_path):
    src = tmp_path / "empty.txt"
    src.write_text("# no edges\n")
    result = invoke(runner, "stats", src, "--output-dir", tmp_path)
    assert result.exit_code == 3


def test_parse_error_exit_code(runner, tmp_path):
    src = tmp_path / "bad.txt"
    src.write_text("a b\nc\n")
    result = invoke(runner, "rank", src, "--output-dir", tmp_path)
    assert result.exit_code == 4
    assert "line 2" in result.output


def test_invalid_utf8_exit_code(runner, tmp_path):
    src = tmp_path / "binary.txt"
    src.write_bytes(b"a b\n\xff\xfe c\n")
    result = invoke(runner, "stats", src, "--output-dir", tmp_path)
    assert result.exit_code == 4
    assert "line 2" in result.output


def test_m_ranking_reports_coreness_and_degree_variation(runner, karate_file, tmp_path):
    result = invoke(runner, "rank", karate_file, "--method", "m,degree", "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    m_rows = read_csv(tmp_path / "karate_rank_m.csv")
    assert list(m_rows[0]) == ["label", "ks", "delta_d", "m_score", "rank"]
    assert m_rows[0]["rank"] == "1"
    assert list(read_csv(tmp_path / "karate_rank_degree.csv")[0]) == ["label", "score", "rank"]


def test_unknown_method_is_a_usage_error(runner, karate_file, tmp_path):
    result = invoke(runner, "rank", karate_file, "--method", "nope", "--output-dir", tmp_path)
    assert result.exit_code == 2


def test_rank_writes_one_file_per_method_and_honours_top(runner, karate_file, tmp_path):
    result = invoke(
        runner,
        "rank",
        karate_file,
        "--method",
        "m,gravity,ppr",
        "--top",
        "15",
        "--output-dir",
        tmp_path,
    )
    assert result.exit_code == 0, result.output
    for method in ("m", "gravity", "ppr"):
        rows = read_csv(tmp_path / f"karate_rank_{method}.csv")
        assert len(rows) == 15
        assert rows[0]["rank"] == "1"


def test_mu_zero_ranks_like_delta_d(runner, karate_file, tmp_path):
    invoke(runner, "rank", karate_file, "--mu", "0", "--output-dir", tmp_path / "a")
    invoke(runner, "rank", karate_file, "--method", "deltad", "--output-dir", tmp_path / "b")
    m_rows = read_csv(tmp_path / "a" / "karate_rank_m.csv")
    d_rows = read_csv(tmp_path / "b" / "karate_rank_deltad.csv")
    assert [(r["label"], r["rank"]) for r in m_rows] == [(r["label"], r["rank"]) for r in d_rows]


def test_lcc_flag(runner, split_file, tmp_path):
    invoke(runner, "rank", split_file, "--method", "degree", "--output-dir", tmp_path / "lcc")
    invoke(
        runner,
        "rank",
        split_file,
        "--method",
        "degree",
        "--no-lcc",
        "--output-dir",
        tmp_path / "all",
    )
    assert len(read_csv(tmp_path / "lcc" / "split_rank_degree.csv")) == 4
    assert len(read_csv(tmp_path / "all" / "split_rank_degree.csv")) == 6


def test_json_output_and_precision(runner, karate_file, tmp_path):
    result = invoke(
        runner,
        "weights",
        karate_file,
        "--format",
        "json",
        "--precision",
        "2",
        "--output-dir",
        tmp_path,
    )
    assert result.exit_code == 0, result.output
    payload = json.loads((tmp_path / "karate_weights.json").read_text())
    (record,) = payload["records"]
    assert payload["command"] == "weights"
    assert 0.0 <= record["mu"] <= 1.0
    assert record["mu"] == round(record["mu"], 2)


def test_output_dir_from_environment(runner, karate_file, tmp_path, monkeypatch):
    monkeypatch.setenv("MCENTRALITY_OUTPUT_DIR", str(tmp_path / "env"))
    result = invoke(runner, "weights", karate_file)
    assert result.exit_code == 0, result.output
    assert (tmp_path / "env" / "karate_weights.csv").is_file()


def test_mu_sweep_endpoint_matches_coreness(runner, karate_file, tmp_path):
    result = invoke(
        runner, "mu-sweep", karate_file, "--mu", "0,1", "--top", "34", "--output-dir", tmp_path
    )
    assert result.exit_code == 0, result.output
    rows = read_csv(tmp_path / "karate_mu_sweep_m.csv")
    assert list(rows[0]) == ["rank", "mu=0", "mu=1"]
    assert len(rows) == 34

    invoke(runner, "rank", karate_file, "--method", "kshell", "--output-dir", tmp_path)
    kshell = [r["label"] for r in read_csv(tmp_path / "karate_rank_kshell.csv")]
    assert [r["mu=1"] for r in rows] == kshell


def test_attack_without_steps(runner, karate_file, tmp_path):
    result = invoke(runner, "attack", karate_file, "--steps", "0", "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    (row,) = read_csv(tmp_path / "karate_attack_m.csv")
    assert row["nu"] == "0"
    assert row["components"] == "1"


def test_attack_from_order_file(runner, tmp_path):
    src = tmp_path / "path.txt"
    src.write_text("a b\nb c\n")
    order = tmp_path / "order.txt"
    order.write_text("# hubs first\nb\n")
    result = invoke(
        runner, "attack", src, "--steps", "1", "--order", order, "--output-dir", tmp_path
    )
    assert result.exit_code == 0, result.output
    rows = read_csv(tmp_path / "path_attack_order.csv")
    assert list(rows[0]) == ["step", "removed_label", "components", "eta", "nu", "giant"]
    assert rows[1]["removed_label"] == "b"
    assert rows[1]["nu"] == "1"
    assert rows[1]["components"] == "2"


def test_sir_is_deterministic(runner, karate_file, tmp_path):
    args = ["sir", karate_file, "--method", "m,degree", "--runs", "2", "--seed", "7"]
    invoke(runner, *args, "--beta-frac", "0.5,1", "--output-dir", tmp_path / "one")
    invoke(
        runner, *args, "--beta-frac", "0.5,1", "--workers", "2", "--output-dir", tmp_path / "two"
    )
    first = (tmp_path / "one" / "karate_sir.csv").read_bytes()
    assert first == (tmp_path / "two" / "karate_sir.csv").read_bytes()
    assert len(read_csv(tmp_path / "one" / "karate_sir.csv")) == 4


def test_sir_zero_fraction_is_degenerate(runner, karate_file, tmp_path):
    result = invoke(
        runner, "sir", karate_file, "--beta-frac", "0", "--runs", "1", "--output-dir", tmp_path
    )
    assert result.exit_code == 0, result.output
    assert {r["degenerate"] for r in read_csv(tmp_path / "karate_sir.csv")} == {"true"}


def test_sir_rejects_decreasing_grid(runner, karate_file, tmp_path):
    result = invoke(
        runner, "sir", karate_file, "--beta-frac", "1,0.5", "--output-dir", tmp_path
    )
    assert result.exit_code == 1


def test_rbo_against_itself(runner, karate_file, tmp_path):
    result = invoke(
        runner, "rbo", karate_file, "--method", "m", "--against", "m", "--output-dir", tmp_path
    )
    assert result.exit_code == 0, result.output
    rows = read_csv(tmp_path / "karate_rbo_m_vs_m.csv")
    assert [r["p"] for r in rows] == ["0.4", "0.5", "0.6", "0.7", "0.8", "0.9"]
    for row in rows:
        assert float(row["rbo"]) == pytest.approx(1 - float(row["p"]) ** 34, abs=1e-5)


def test_compare(runner, karate_file, tmp_path):
    result = invoke(runner, "compare", karate_file, "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    rows = {r["method"]: r for r in read_csv(tmp_path / "karate_compare_vs_m.csv")}
    assert set(rows) == {"m", "deltad", "kshell", "degree", "gravity", "ci", "clusterrank", "dil", "ppr"}
    assert rows["m"]["tau"] == "1"


def test_config_file_supplies_defaults(runner, karate_file, tmp_path):
    cfg = tmp_path / "experiment.toml"
    cfg.write_text(
        f'[common]\noutput_dir = "{tmp_path / "from_file"}"\n\n[rank]\nmethods = "dil"\ntop = 3\n'
    )
    result = runner.invoke(cli, ["--config", str(cfg), "rank", str(karate_file)])
    assert result.exit_code == 0, result.output
    assert len(read_csv(tmp_path / "from_file" / "karate_rank_dil.csv")) == 3


def test_flags_override_config_file(runner, karate_file, tmp_path):
    cfg = tmp_path / "experiment.toml"
    cfg.write_text('[rank]\nmethods = "dil"\n')
    result = runner.invoke(
        cli,
        ["--config", str(cfg), "rank", str(karate_file), "--method", "ci", "--output-dir", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
    assert (tmp_path / "karate_rank_ci.csv").is_file()
    assert not (tmp_path / "karate_rank_dil.csv").exists()


@pytest.fixture
def record_db(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "DATABASE_URL", f"sqlite:///{tmp_path / 'runs.db'}")
    db.get_engine.cache_clear()
    db.get_session_factory.cache_clear()
    yield
    db.get_engine.cache_clear()
    db.get_session_factory.cache_clear()


def test_record_persists_run(runner, karate_file, tmp_path, record_db):
    from mcentrality.db_models import ResultRow, RunRow
    from mcentrality.services.base import BaseService

    result = invoke(runner, "weights", karate_file, "--record", "--output-dir", tmp_path)
    assert result.exit_code == 0, result.output
    (run,) = BaseService(RunRow).list()
    assert run.command == "weights"
    keys = {row.key for row in BaseService(ResultRow).list(run_id=run.id)}
    assert keys == {"mu", "entropy_global", "entropy_local"}


def test_record_keeps_full_width_seed(runner, karate_file, tmp_path, record_db):
    from mcentrality.db_models import RunRow
    from mcentrality.services.base import BaseService

    seed = 2**64 - 1
    result = invoke(
        runner, "sir", karate_file, "--method", "degree", "--beta-frac", "1", "--runs", "1",
        "--seed", seed, "--record", "--output-dir", tmp_path,
    )
    assert result.exit_code == 0, result.output
    (run,) = BaseService(RunRow).list()
    assert int(run.master_seed) == seed
