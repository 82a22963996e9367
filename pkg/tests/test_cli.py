import csv
import os

import pytest

from spagraph.cli import main
from spagraph.generator import GrownGraph, ModelParams
from spagraph.graph_io import write_graph

ARGS = ["--n", "400", "--p", "0.7", "--a1", "1.0", "--a2", "4.285714285714286"]


def run(argv):
    return main(argv)


def test_generate_writes_graph_and_manifest(tmp_path):
    out = str(tmp_path)
    assert run(["generate", *ARGS, "--seed", "3", "--out", out]) == 0
    files = sorted(os.listdir(out))
    assert files == ["spa_n400_p0.7_seed3.manifest.json", "spa_n400_p0.7_seed3.tsv"]


def test_generate_deterministic(tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    run(["generate", *ARGS, "--seed", "3", "--out", a])
    run(["generate", *ARGS, "--seed", "3", "--out", b])
    name = "spa_n400_p0.7_seed3.tsv"
    assert open(os.path.join(a, name), "rb").read() == open(os.path.join(b, name), "rb").read()


def test_generate_replicas_distinct_seeds(tmp_path):
    out = str(tmp_path)
    assert run(["generate", *ARGS, "--seed", "10", "--replicas", "3", "--out", out]) == 0
    graphs = [f for f in os.listdir(out) if f.endswith(".tsv")]
    assert len(graphs) == 3
    assert {f.split("seed")[1].split(".")[0] for f in graphs} == {"10", "11", "12"}


def test_generate_rejects_duplicate_seeds(tmp_path, capsys):
    code = run(["generate", *ARGS, "--seeds", "5,5", "--out", str(tmp_path)])
    assert code == 1
    assert "distinct" in capsys.readouterr().err


def test_invalid_params_exit_code_1(tmp_path, capsys):
    code = run(["generate", "--n", "10", "--p", "0.9", "--a1", "2.0", "--out", str(tmp_path)])
    assert code == 1
    assert "p*a1" in capsys.readouterr().err


def test_unreadable_graph_exit_code_2(tmp_path, capsys):
    missing = str(tmp_path / "nope.tsv")
    assert run(["stats", missing, "--out", str(tmp_path)]) == 2


def test_corrupt_graph_exit_code_2(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("%spa-graph v1\np=0.7\n%edges\nall wrong\n")
    assert run(["stats", str(bad), "--out", str(tmp_path)]) == 2
    assert "byte offset" in capsys.readouterr().err


def test_stats_emits_all_reports(tmp_path):
    out = str(tmp_path)
    run(["generate", *ARGS, "--seed", "3", "--out", out])
    graph = os.path.join(out, "spa_n400_p0.7_seed3.tsv")
    reports = str(tmp_path / "reports")
    assert run(["stats", graph, "--out", reports, "--d-min", "3"]) == 0
    names = sorted(os.listdir(reports))
    stem = "spa_n400_p0.7_seed3"
    assert names == [
        f"census_{stem}.csv",
        "curves_pooled.csv",
        f"curves_{stem}.csv",
        f"exponent_{stem}.csv",
        f"scatter_{stem}.csv",
        f"trajectories_{stem}.csv",
    ]
    with open(os.path.join(reports, f"curves_{stem}.csv")) as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["variant", "d", "count", "mean_c"]
    variants = {row[0] for row in rows[1:]}
    assert {"directed", "undirected", "old", "new", "directed_band"} <= variants


def test_stats_pooled_curve_merges_replicas(tmp_path):
    out = str(tmp_path)
    run(["generate", *ARGS, "--seed", "1", "--replicas", "2", "--out", out])
    graphs = sorted(
        os.path.join(out, f) for f in os.listdir(out) if f.endswith(".tsv")
    )
    reports = str(tmp_path / "r")
    assert run(["stats", *graphs, "--out", reports, "--d-min", "3"]) == 0
    with open(os.path.join(reports, "curves_pooled.csv")) as handle:
        pooled = {
            (row["variant"], row["d"]): (int(row["count"]), float(row["mean_c"]))
            for row in csv.DictReader(handle)
        }
    singles = []
    for graph in graphs:
        stem = os.path.splitext(os.path.basename(graph))[0]
        with open(os.path.join(reports, f"curves_{stem}.csv")) as handle:
            singles.append({
                (row["variant"], row["d"]): (int(row["count"]), float(row["mean_c"]))
                for row in csv.DictReader(handle)
            })
    key = ("directed", "2")
    count = sum(s[key][0] for s in singles if key in s)
    weighted = sum(s[key][0] * s[key][1] for s in singles if key in s)
    assert pooled[key][0] == count
    assert pooled[key][1] == pytest.approx(weighted / count, rel=1e-12)


def test_stats_handcrafted_values(tmp_path):
    # hub vertex 1: in-neighbors {2,3,4,5}, edges (3,2),(4,2),(5,4) among
    # them -> c = 3/6; vertex 2: in-neighbors {3,4}, no edge -> c = 0
    params = ModelParams(n=7, p=0.7, a1=1.0, a2=30 / 7, seed=0)
    edges = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 4), (6, 5), (7, 6)]
    path = str(tmp_path / "hand.tsv")
    write_graph(GrownGraph.from_edges(params, edges), path, include_positions=False)
    out = str(tmp_path / "r")
    assert run(["stats", path, "--out", out, "--top", "2"]) == 0
    with open(os.path.join(out, "curves_hand.csv")) as handle:
        curve = {
            (row["variant"], row["d"]): (row["count"], row["mean_c"])
            for row in csv.DictReader(handle)
        }
    assert curve[("directed", "4")] == ("1", "0.5")
    assert curve[("directed", "2")] == ("1", "0.0")
    with open(os.path.join(out, "census_hand.csv")) as handle:
        census = {row["degree"]: row["count"] for row in csv.DictReader(handle)}
    assert census == {"0": "2", "1": "3", "2": "1", "4": "1"}


def test_verify_command_pass(capsys):
    assert run(["verify", "--n", "300", "--seed", "2", "--replicas", "2"]) == 0
    assert "ok" in capsys.readouterr().out


def test_sweep_formula_and_output(tmp_path):
    out = str(tmp_path)
    assert run([
        "sweep", "--p-list", "0.5", "--n", "300", "--replicas", "2", "--out", out,
    ]) == 0
    with open(os.path.join(out, "sweep.csv")) as handle:
        rows = list(csv.DictReader(handle))
    assert {row["variant"] for row in rows} == {"directed", "undirected"}
    assert all(row["p"] == "0.5" for row in rows)


def test_scatter_command(tmp_path):
    out = str(tmp_path)
    run(["generate", *ARGS, "--seed", "3", "--out", out])
    graph = os.path.join(out, "spa_n400_p0.7_seed3.tsv")
    assert run(["scatter", graph, "--variant", "directed", "--out", out]) == 0
    with open(os.path.join(out, "scatter_spa_n400_p0.7_seed3.csv")) as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["variant", "degree", "c"]
    assert len(rows) > 10


def test_trajectory_command(tmp_path):
    out = str(tmp_path)
    run(["generate", *ARGS, "--seed", "3", "--out", out])
    graph = os.path.join(out, "spa_n400_p0.7_seed3.tsv")
    assert run(["trajectory", graph, "--top", "5", "--out", out]) == 0
    with open(os.path.join(out, "trajectories_spa_n400_p0.7_seed3.csv")) as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == list(
        ("vertex", "final_degree", "onset_time", "ratio_min", "ratio_max", "vacuous")
    )
    assert len(rows) == 6


def test_generate_from_config_file(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("n=200\np=0.6\na1=1.0\na2=5.0\nseed=4\nreplicas=2\noutput_dir=.\n")
    out = str(tmp_path / "out")
    assert run(["generate", "--config", str(config), "--out", out]) == 0
    graphs = [f for f in os.listdir(out) if f.endswith(".tsv")]
    assert len(graphs) == 2


def test_generate_config_output_dir_used_without_out_flag(tmp_path, monkeypatch):
    target = tmp_path / "from-config"
    config = tmp_path / "run.cfg"
    config.write_text(f"n=50\na2=1.0\nseed=2\noutput_dir={target}\n")
    monkeypatch.chdir(tmp_path)
    assert run(["generate", "--config", str(config)]) == 0
    assert any(f.endswith(".tsv") for f in os.listdir(target))


def test_config_rejects_unknown_keys(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("n=50\na2=1.0\nbogus=1\n")
    assert run(["generate", "--config", str(config), "--out", str(tmp_path)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_parallel_replicas_match_sequential(tmp_path, monkeypatch):
    seq, par = str(tmp_path / "seq"), str(tmp_path / "par")
    run(["generate", *ARGS, "--seed", "1", "--replicas", "2", "--out", seq])
    monkeypatch.setenv("SPA_JOBS", "2")
    run(["generate", *ARGS, "--seed", "1", "--replicas", "2", "--out", par])
    for name in sorted(os.listdir(seq)):
        if name.endswith(".tsv"):
            with open(os.path.join(seq, name), "rb") as a, \
                 open(os.path.join(par, name), "rb") as b:
                assert a.read() == b.read()
