import json

import numpy as np
import pandas as pd

from mcentrality.dtos import CentralityVector, MCentralityVector, OutputFormat
from mcentrality.evaluation import rank_nodes
from mcentrality.report import (Table, format_number, output_path, ranking_table,
                                render)
from tests.conftest import make_graph


def test_format_number():
    assert format_number(1 / 3) == "0.333333"
    assert format_number(1 / 3, precision=2) == "0.33"
    assert format_number(1234567.0) == "1.23457e+06"
    assert format_number(0.0) == "0"


def test_render_csv_and_json():
    frame = pd.DataFrame({"method": ["m", "ci"], "tau": [0.5, float("nan")], "flat": [False, True]})
    table = Table("compare", frame)
    assert render(table, OutputFormat.CSV) == "method,tau,flat\nm,0.5,false\nci,nan,true\n"
    payload = json.loads(render(table, OutputFormat.JSON))
    assert payload["records"] == [
        {"method": "m", "tau": 0.5, "flat": False},
        {"method": "ci", "tau": None, "flat": True},
    ]


def test_precision_applies_to_floats_only():
    table = Table("stats", pd.DataFrame({"n": [7], "mean_degree": [2.0 / 3.0]}))
    assert render(table, OutputFormat.CSV, precision=3) == "n,mean_degree\n7,0.667\n"
    assert render(table, OutputFormat.CSV) == "n,mean_degree\n7,0.666667\n"
    payload = json.loads(render(table, OutputFormat.JSON, precision=2))
    assert payload["records"] == [{"n": 7, "mean_degree": 0.67}]


def test_output_path_names_command_and_method():
    table = Table("mu-sweep", pd.DataFrame({"rank": []}), method="m")
    assert output_path("out", "/data/dolphins.txt", table, OutputFormat.CSV) == (
        "out/dolphins_mu_sweep_m.csv"
    )


def test_m_ranking_carries_both_attributes():
    g = make_graph(3, [(0, 1), (1, 2)])
    parts = MCentralityVector(
        scores=np.array([0.5, 2.0, 0.5]),
        mu_used=0.5,
        coreness=np.array([1, 1, 1]),
        delta_d=np.array([0.0, 3.0, 0.0]),
    )
    vec = parts.as_centrality()
    table = ranking_table(g, vec, rank_nodes(vec), parts=parts)
    assert table.columns == ["label", "ks", "delta_d", "m_score", "rank"]
    assert render(table, OutputFormat.CSV).splitlines()[1] == "1,1,3,2,1"


def test_other_rankings_report_a_single_score():
    g = make_graph(2, [(0, 1)])
    vec = CentralityVector("degree", np.array([1.0, 1.0]))
    table = ranking_table(g, vec, rank_nodes(vec), top=1)
    assert table.columns == ["label", "score", "rank"]
    assert len(table) == 1
