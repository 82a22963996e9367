import json
import os

import numpy as np
import pytest

from spagraph import graph_io, stats
from spagraph.errors import ParameterError, ParseError, UsageError
from spagraph.generator import ModelParams, generate
from spagraph.geometry import Norm

PARAMS = dict(p=0.7, a1=1.0, a2=30 / 7)


def make(n, seed=0, **overrides):
    return ModelParams(n=n, seed=seed, **{**PARAMS, **overrides})


@pytest.fixture(scope="module")
def grown():
    return generate(make(300, seed=5))


def test_round_trip_byte_identity(grown, tmp_path):
    path = str(tmp_path / "g.tsv")
    graph_io.write_graph(grown, path)
    first = open(path, "rb").read()
    parsed = graph_io.read_graph(path)
    graph_io.write_graph(parsed, path)
    assert open(path, "rb").read() == first
    assert np.array_equal(parsed.out_targets, grown.out_targets)
    assert np.array_equal(parsed.positions[1:], grown.positions[1:])
    assert parsed.params == grown.params


def test_round_trip_gzip(grown, tmp_path):
    path = str(tmp_path / "g.tsv.gz")
    graph_io.write_graph(grown, path)
    first = open(path, "rb").read()
    parsed = graph_io.read_graph(path)
    graph_io.write_graph(parsed, path)
    assert open(path, "rb").read() == first


def test_round_trip_without_positions(grown, tmp_path):
    path = str(tmp_path / "g.tsv")
    graph_io.write_graph(grown, path, include_positions=False)
    parsed = graph_io.read_graph(path)
    assert parsed.positions is None
    assert np.array_equal(parsed.out_targets, grown.out_targets)


def test_trajectory_section_round_trip(grown, tmp_path):
    path = str(tmp_path / "g.tsv")
    hub = int(np.argmax(grown.in_degree))
    graph_io.write_graph(grown, path, trajectory_ids=[hub])
    text = open(path, "r").read()
    assert "%trajectories" in text
    steps, degrees = grown.trajectory(hub)
    assert f"{hub}\t{steps[0]}\t1\n" in text
    graph_io.write_graph(graph_io.read_graph(path), path, trajectory_ids=[hub])
    assert open(path, "r").read() == text


def test_parse_error_reports_byte_offset(grown, tmp_path):
    path = str(tmp_path / "g.tsv")
    graph_io.write_graph(grown, path, include_positions=False)
    data = open(path, "rb").read()
    corrupted = data.replace(b"%edges\n", b"%edges\nnot-an-edge\n", 1)
    with pytest.raises(ParseError) as info:
        graph_io.parse_graph(corrupted)
    expected_offset = corrupted.index(b"not-an-edge")
    assert info.value.byte_offset == expected_offset


def test_parse_rejects_wrong_header():
    with pytest.raises(ParseError):
        graph_io.parse_graph(b"%spa-graph v2\n")


def test_parse_rejects_missing_params():
    with pytest.raises(ParseError, match="missing parameter"):
        graph_io.parse_graph(b"%spa-graph v1\np=0.7\n%edges\n")


def test_manifest_reproduces_graph(grown, tmp_path):
    graph_path = str(tmp_path / "g.tsv")
    manifest_path = str(tmp_path / "g.manifest.json")
    graph_io.write_graph(grown, graph_path)
    graph_io.write_manifest(manifest_path, grown, "g.tsv", wall_time_s=1.25)
    manifest = json.load(open(manifest_path))
    assert manifest["edge_count"] == grown.num_edges
    params = graph_io.params_from_manifest(manifest_path)
    regenerated = generate(params)
    regen_path = str(tmp_path / "regen.tsv")
    graph_io.write_graph(regenerated, regen_path)
    assert open(regen_path, "rb").read() == open(graph_path, "rb").read()


def test_config_parse_round_trip(tmp_path):
    text = """
    # campaign settings
    n=1500
    p=0.5
    a1=1.0
    a2=10.0
    dimension=2
    norm=linf
    seed=7
    replicas=3
    delta=0.2
    split=half
    output_dir=out
    """
    config = graph_io.parse_config(text)
    assert config.model.n == 1500
    assert config.model.a2 == 10.0
    assert config.seed_list() == (7, 8, 9)
    assert config.split == "half"
    assert config.delta == 0.2


def test_config_explicit_seeds_and_validation():
    config = graph_io.parse_config("n=10\nseeds=4,5,6\nreplicas=3\na2=1.0")
    assert config.seed_list() == (4, 5, 6)
    with pytest.raises(ParameterError):
        graph_io.parse_config("n=10\nseeds=4,4\na2=1.0")
    with pytest.raises(ParameterError):
        graph_io.parse_config("n=10\ndelta=0.7\na2=1.0")
    with pytest.raises(ParameterError):
        graph_io.parse_config("n=10\nbroken line\na2=1.0")


def test_write_csv_schema(tmp_path):
    path = str(tmp_path / "curve.csv")
    graph_io.write_csv(path, graph_io.CURVE_COLUMNS, [("directed", 2, 10, "0.5")])
    lines = open(path).read().splitlines()
    assert lines[0] == "variant,d,count,mean_c"
    assert lines[1] == "directed,2,10,0.5"


def test_atomic_write_leaves_no_temp_files(grown, tmp_path):
    path = str(tmp_path / "g.tsv")
    graph_io.write_graph(grown, path)
    assert sorted(os.listdir(tmp_path)) == ["g.tsv"]


def test_round_trip_l2_dimension_3(tmp_path):
    g = generate(ModelParams(n=60, seed=1, p=0.5, a1=1.0, a2=2.0,
                             dimension=3, norm=Norm.L2))
    path = str(tmp_path / "g3.tsv")
    graph_io.write_graph(g, path)
    parsed = graph_io.read_graph(path)
    assert parsed.params == g.params
    assert np.array_equal(parsed.positions[1:], g.positions[1:])


def test_round_trip_single_vertex(tmp_path):
    g = generate(make(1))
    path = str(tmp_path / "one.tsv")
    graph_io.write_graph(g, path)
    parsed = graph_io.read_graph(path)
    assert parsed.n == 1 and parsed.num_edges == 0


def test_positionless_graph_rejects_ball_census(grown, tmp_path):
    path = str(tmp_path / "g.tsv")
    graph_io.write_graph(grown, path, include_positions=False)
    parsed = graph_io.read_graph(path)
    with pytest.raises(UsageError, match="positions"):
        stats.ball_census(parsed, [0.5, 0.5], 0.1)
