"""T-balanced nodes and flattening."""

from __future__ import annotations

from .graph import DecoratedGraph, Edge, EdgeClass, Level, validate
from .weights import edge_tangent_weights


class FlattenError(ValueError):
    pass


def _candidate_edges(graph: DecoratedGraph, vid: str) -> tuple[Edge, Edge]:
    v = graph.vertex_map.get(vid)
    if v is None:
        raise FlattenError(f"not a candidate node: no vertex {vid}")
    edges = graph.incident.get(vid, [])
    if v.stable or len(edges) != 2:
        raise FlattenError("not a candidate node")
    return edges[0], edges[1]


def is_candidate(graph: DecoratedGraph, vid: str) -> bool:
    v = graph.vertex_map[vid]
    return not v.stable and len(graph.incident.get(vid, ())) == 2


def is_T_balanced(graph: DecoratedGraph, vid: str) -> bool:
    e, f = _candidate_edges(graph, vid)
    if graph.vertex_map[vid].level is not Level.ONE:
        return False
    if {e.cls, f.cls} != {EdgeClass.E01, EdgeClass.E1INF}:
        return False
    high = e if e.cls is EdgeClass.E1INF else f
    return high.special_at_inf and e.d + f.d == 0


def balance_oracle(graph: DecoratedGraph, vid: str) -> bool:
    """Independent check: the two tangent weights at the node cancel."""
    total = 0
    for e in _candidate_edges(graph, vid):
        w = edge_tangent_weights(e)
        total += w.at_low if e.end_a == vid else w.at_inf_or_high
    return total == 0


def balanced_vertices(graph: DecoratedGraph) -> list[str]:
    return [
        v.id for v in graph.vertices
        if not v.stable and v.level is Level.ONE
        and len(graph.incident.get(v.id, ())) == 2 and is_T_balanced(graph, v.id)
    ]


def flatten_vertex(graph: DecoratedGraph, vid: str) -> DecoratedGraph:
    """Replace one balanced node by a single E0Inf edge."""
    if not is_T_balanced(graph, vid):
        raise FlattenError(f"vertex {vid} is not T-balanced")
    e, f = graph.incident[vid]
    low, high = (e, f) if e.cls is EdgeClass.E01 else (f, e)
    dinf = high.deg_inf
    merged = Edge(
        id=f"({low.id}+{high.id})",
        end_a=low.end_a,
        end_b=high.end_b,
        cls=EdgeClass.E0INF,
        deg0=dinf,
        deg_inf=dinf,
        orbifold_at_inf=False,
        special_at_inf=high.special_at_inf,
    )
    edges = []
    placed = False
    for x in graph.edges:
        if x.id in (low.id, high.id):
            if not placed:
                edges.append(merged)
                placed = True
            continue
        edges.append(x)
    return DecoratedGraph(
        tuple(v for v in graph.vertices if v.id != vid), tuple(edges), graph.legs, graph.deg_l2
    )


def flatten(graph: DecoratedGraph, order: list[str] | None = None) -> DecoratedGraph:
    """Flatten every balanced node.  `order` optionally fixes the processing
    order (used by the confluence checks); the result does not depend on it."""
    problems = validate(graph)
    if problems:
        raise FlattenError("invalid graph: " + problems[0])
    queue = list(order) if order is not None else balanced_vertices(graph)
    for vid in queue:
        if vid in graph.vertex_map and is_T_balanced(graph, vid):
            graph = flatten_vertex(graph, vid)
    # flattening never creates new balanced nodes, but stay safe
    while rest := balanced_vertices(graph):
        graph = flatten_vertex(graph, rest[0])
    return graph
