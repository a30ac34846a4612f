import json
from fractions import Fraction

import pytest

from diagnostics.cogrowth import count_closed_paths
from diagnostics.walks import return_probabilities
from groups.balls import cayley_ball
from groups.exceptions import PreconditionError
from report.config import InstanceConfig
from report.pipeline import run_pipeline
from schreier.cosets import schreier_ball
from storage.export import (
    canonicalize,
    cogrowth_csv,
    export_dot,
    export_json,
    load_json,
    return_series_csv,
    schreier_graph_for_dot,
    stabilization_csv,
    write_report,
)


@pytest.fixture(scope="module")
def report():
    config = InstanceConfig(name="cyclic", subgroup=("a",), radius=8, n_max=16, geometry_radius=3)
    return run_pipeline(config)


def test_canonical_numbers():
    assert canonicalize(Fraction(3, 4)) == {"num": 3, "den": 4}
    assert canonicalize(1 / 3) == 0.333333333333
    assert canonicalize({"b": (1, 2), 3: True}) == {"b": [1, 2], "3": True}
    assert canonicalize(float("inf")) == "inf"


def test_json_round_trip(report):
    text = export_json(report)
    assert json.loads(text) == canonicalize(report.to_dict())
    assert text.endswith("\n")


def test_csv_rows(f2, report):
    returns = return_series_csv(report.returns).splitlines()
    assert returns[0] == "n,p_n_num,p_n_den,p_n_float"
    assert len(returns) == report.returns.n_max + 2
    cog = cogrowth_csv(count_closed_paths(schreier_ball(f2, [], 3), 6)).splitlines()
    assert cog[0] == "n,a_n,b_n"
    assert cog[3] == "2,0,4"
    assert stabilization_csv([(3, 0), (4, 0)]).splitlines() == ["R,value", "3,0", "4,0"]


def test_exact_terms_keep_fractions(f2):
    rows = return_series_csv(return_probabilities(schreier_ball(f2, [], 2), 4)).splitlines()
    assert rows[3] == "2,1,4,0.25"


def test_dot_of_tree(f2):
    ball = cayley_ball(f2, 3)
    text = export_dot(ball, "tree")
    nodes = [line for line in text.splitlines() if "shape=" in line]
    edges = [line for line in text.splitlines() if "->" in line]
    assert len(nodes) == 53
    assert len(edges) == ball.n_edges
    assert sum("doublecircle" in line for line in nodes) == 1
    with pytest.raises(PreconditionError):
        export_dot(ball, "tree", limit=10)


def test_dot_refuses_large_schreier_ball(f2):
    with pytest.raises(PreconditionError):
        schreier_graph_for_dot(schreier_ball(f2, [], 9))


def test_write_report(tmp_path, report):
    (path,) = write_report(report, tmp_path, "json")
    assert load_json(path)["verdict"] == report.verdict
    csv_files = write_report(report, tmp_path, "csv")
    assert sorted(p.name for p in csv_files) == ["cyclic_cogrowth.csv", "cyclic_returns.csv"]
    (dot,) = write_report(report, tmp_path, "dot")
    assert dot.read_text().startswith('digraph "cyclic"')
    with pytest.raises(PreconditionError):
        write_report(report, tmp_path, "xml")
