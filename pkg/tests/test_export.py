import xml.etree.ElementTree as ET

import numpy as np
import pytest

from gra.analysis import EvolutionTrace
from gra.engine import divide_vertex
from gra.export import (
    graph_to_dot,
    graph_to_graphml,
    parse_series_csv,
    render_graph,
    trace_to_csv,
)
from gra.graph import k4_one_alive, parse_graph_text


def make_trace(orders):
    orders = np.asarray(orders, dtype=np.int64)
    return EvolutionTrace(
        orders=orders,
        increments=np.diff(orders),
        fingerprints=[],
        stop_reason="max-steps",
    )


class TestDot:
    def test_k4_golden(self):
        dot = graph_to_dot(k4_one_alive())
        assert dot.count(" -- ") == 6
        assert dot.count("[state=") == 4
        assert dot.count("state=1") == 1
        assert dot.startswith("graph G {")

    def test_deterministic(self):
        assert graph_to_dot(k4_one_alive()) == graph_to_dot(k4_one_alive())


class TestGraphml:
    def test_divided_graph_counts(self):
        g = divide_vertex(k4_one_alive(), 1)
        xml = graph_to_graphml(g)
        root = ET.fromstring(xml)
        ns = "{http://graphml.graphdrawing.org/xmlns}"
        nodes = root.findall(f".//{ns}node")
        edges = root.findall(f".//{ns}edge")
        assert len(nodes) == 6
        assert len(edges) == 9

    def test_states_attached(self):
        xml = graph_to_graphml(k4_one_alive())
        root = ET.fromstring(xml)
        ns = "{http://graphml.graphdrawing.org/xmlns}"
        states = [d.text for d in root.findall(f".//{ns}data") if d.get("key") == "state"]
        assert states == ["1", "0", "0", "0"]


class TestEdgeList:
    def test_round_trip(self):
        g = divide_vertex(k4_one_alive(), 2)
        text = render_graph(g, "edge-list")
        assert parse_graph_text(text) == g

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render_graph(k4_one_alive(), "png")


class TestSeriesCsv:
    def test_golden(self):
        trace = make_trace([4, 4, 10, 10, 12])
        csv = trace_to_csv(trace)
        assert csv.splitlines() == [
            "t,order,increment",
            "0,4,0",
            "1,4,0",
            "2,10,6",
            "3,10,0",
            "4,12,2",
        ]

    def test_round_trip(self):
        trace = make_trace([4, 6, 6, 12])
        orders, increments = parse_series_csv(trace_to_csv(trace))
        assert orders == [4, 6, 6, 12]
        assert increments == [2, 0, 6]

    def test_header_required(self):
        with pytest.raises(ValueError):
            parse_series_csv("0,4,0\n1,6,2\n")
