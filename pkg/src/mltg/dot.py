"""Graphviz export: one cluster per level, dashed typing edges between them.

Node typing is drawn as a dashed edge from the node to its direct type,
labeled with the type name.  Arrow typing cannot be drawn edge-to-edge in
DOT, so an arrow's direct type is folded into its edge label instead.
Only direct types are shown.
"""

from __future__ import annotations

from .chains import DirectType, direct_type
from .documents import Hierarchy
from .graphs import ARROW, NODE, ElementId, Graph


def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def _node_ref(level: int, name: str) -> str:
    return _quote(f"L{level}:{name}")


def _cluster(lines: list[str], name: str, level: int, graph: Graph, types: dict[ElementId, DirectType]) -> None:
    lines.append(f"  subgraph cluster_L{level} {{")
    lines.append(f"    label={_quote(f'{name} @ L{level}')};")
    for n in sorted(graph.nodes):
        lines.append(f"    {_node_ref(level, n)} [label={_quote(n)}];")
    for a, (s, t) in sorted(graph.arrows.items()):
        dt = types.get(ElementId(ARROW, a))
        label = f"{a} : {dt.element.name}" if dt else a
        lines.append(f"    {_node_ref(level, s)} -> {_node_ref(level, t)} [label={_quote(label)}];")
    lines.append("  }")


def _typing_edges(lines: list[str], level: int, graph: Graph, types: dict[ElementId, DirectType]) -> None:
    for n in sorted(graph.nodes):
        dt = types.get(ElementId(NODE, n))
        if dt:
            lines.append(
                f"  {_node_ref(level, n)} -> {_node_ref(dt.level, dt.element.name)}"
                f" [style=dashed, label={_quote(dt.element.name)}];"
            )


def export_dot(h: Hierarchy) -> str:
    """Render a hierarchy document as a layered DOT digraph."""
    lines = ["digraph hierarchy {", "  compound=true;", "  rankdir=LR;"]
    per_level: list[tuple[str, int, Graph, dict[ElementId, DirectType]]] = []
    for level in range(h.chain.depth + 1):
        graph = h.chain.graph(level)
        types = {}
        if level > 0:
            for elem in graph.elements():
                dt = direct_type(h.chain, level, elem)
                if dt is not None:
                    types[elem] = dt
        per_level.append((h.names[level], level, graph, types))
    if h.has_separate_subject:
        types = {
            elem: dt
            for elem in h.subject.subject.elements()
            if (dt := h.subject.direct_type_of(elem)) is not None
        }
        per_level.append((h.subject_name, h.chain.depth + 1, h.subject.subject, types))

    for name, level, graph, types in per_level:
        _cluster(lines, name, level, graph, types)
    for _, level, graph, types in per_level:
        _typing_edges(lines, level, graph, types)
    lines.append("}")
    return "\n".join(lines) + "\n"
