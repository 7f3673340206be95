"""Deterministic file exports: graphs for external rendering, traces as data.

Same labeled graph in, byte-identical file out.  DOT and GraphML carry the
vertex state both as a raw attribute and as a fill color (alive purple,
dead orange) so stock tools reproduce the two-color rendering directly.
"""

import json
from xml.sax.saxutils import escape

from .analysis import EvolutionTrace
from .graph import Graph, graph_to_edge_text

EXPORT_FORMATS = ("edge-list", "dot", "graphml")

ALIVE_COLOR = "#9467bd"  # purple
DEAD_COLOR = "#ff7f0e"  # orange

_EXTENSION_FORMATS = {
    ".dot": "dot",
    ".gv": "dot",
    ".graphml": "graphml",
    ".xml": "graphml",
    ".txt": "edge-list",
    ".edges": "edge-list",
    ".graph": "edge-list",
}


def graph_to_dot(g: Graph) -> str:
    lines = ["graph G {", "  node [shape=circle style=filled];"]
    for v in range(g.order):
        alive = int(g.states[v])
        color = ALIVE_COLOR if alive else DEAD_COLOR
        label = "alive" if alive else "dead"
        lines.append(f'  {v} [state={alive} tooltip="{label}" fillcolor="{color}"];')
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_graphml(g: Graph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="state" for="node" attr.name="state" attr.type="int"/>',
        '  <key id="color" for="node" attr.name="color" attr.type="string"/>',
        '  <graph id="G" edgedefault="undirected">',
    ]
    for v in range(g.order):
        alive = int(g.states[v])
        color = ALIVE_COLOR if alive else DEAD_COLOR
        lines.append(f'    <node id="n{v}">')
        lines.append(f'      <data key="state">{alive}</data>')
        lines.append(f'      <data key="color">{escape(color)}</data>')
        lines.append("    </node>")
    for i, (u, v) in enumerate(g.edges()):
        lines.append(f'    <edge id="e{i}" source="n{u}" target="n{v}"/>')
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def render_graph(g: Graph, fmt: str) -> str:
    if fmt == "edge-list":
        return graph_to_edge_text(g)
    if fmt == "dot":
        return graph_to_dot(g)
    if fmt == "graphml":
        return graph_to_graphml(g)
    raise ValueError(f"unknown export format {fmt!r} (choose from {EXPORT_FORMATS})")


def format_for_path(path: str, explicit: str | None = None) -> str:
    if explicit:
        return explicit
    for ext, fmt in _EXTENSION_FORMATS.items():
        if str(path).endswith(ext):
            return fmt
    return "edge-list"


def export_graph(g: Graph, fmt: str, path) -> None:
    text = render_graph(g, fmt)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def trace_to_csv(trace: EvolutionTrace) -> str:
    """Order series as CSV. Row t carries the growth into step t, so the
    first row's increment is 0 and row t equals orders[t] - orders[t-1]."""
    lines = ["t,order,increment"]
    for t, order in enumerate(trace.orders):
        inc = int(trace.increments[t - 1]) if t > 0 else 0
        lines.append(f"{t},{int(order)},{inc}")
    return "\n".join(lines) + "\n"


def parse_series_csv(text: str) -> tuple[list[int], list[int]]:
    """Read a t,order,increment CSV back into (orders, increments).

    Increments are recomputed from the order column, so hand-edited or
    truncated increment columns cannot poison the analysis.
    """
    orders: list[int] = []
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].lower().startswith("t,"):
        raise ValueError("expected a header row: t,order,increment")
    for ln in lines[1:]:
        parts = ln.split(",")
        orders.append(int(parts[1]))
    increments = [orders[i + 1] - orders[i] for i in range(len(orders) - 1)]
    return orders, increments


def dump_json(obj) -> str:
    """Canonical JSON rendering used for every report this package writes."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
