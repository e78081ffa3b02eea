"""Reduction of irregular flat graphs to the no-string, no-level-1 case, and
the vanishing certificate built on it."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

from .flatten import balanced_vertices
from .graph import (
    DecoratedGraph, Edge, EdgeClass, Leg, Level, Monodromy, Vertex, fresh_id, is_pure_loop,
    is_regular, validate,
)
from .vdim import (
    ChainError, FormulaDomainError, chain_contribution, maximal_chains, residual_contribution,
    strings, vdim,
)


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionStep:
    kind: str  # Decouple | Trim | ForgetLeg | RemoveString | SplitComponents
    elements: tuple[str, ...]
    after: DecoratedGraph


Trace = list[ReductionStep]


def _record(trace: Trace | None, kind: str, elements, after: DecoratedGraph) -> None:
    if trace is not None:
        trace.append(ReductionStep(kind, tuple(elements), after))


def _level_one_end(graph: DecoratedGraph, e: Edge) -> Vertex:
    if e.cls is EdgeClass.E01:
        return graph.vertex_map[e.end_b]
    if e.cls is EdgeClass.E1INF:
        return graph.vertex_map[e.end_a]
    raise ReductionError(f"edge {e.id} has no level-1 end")


def is_leaf(graph: DecoratedGraph, edge_id: str) -> bool:
    """An E01/E1Inf edge is a leaf when its level-1 end is unstable and holds no other edge."""
    e = graph.edge_map[edge_id]
    v1 = _level_one_end(graph, e)
    return not v1.stable and len(graph.incident[v1.id]) == 1


def _append_legs(graph: DecoratedGraph, new: list[tuple[str, Monodromy]]) -> list[Leg]:
    legs = list(graph.legs)
    taken = {l.id for l in legs}
    for vid, mono in new:
        lid = fresh_id(taken, f"l{len(legs)}")
        taken.add(lid)
        legs.append(Leg(lid, vid, len(legs), mono))
    return legs


def decouple(graph: DecoratedGraph, edge_id: str, trace: Trace | None = None) -> DecoratedGraph:
    """Detach edge `edge_id` from its level-1 vertex onto a fresh unstable twin."""
    e = graph.edge_map.get(edge_id)
    if e is None:
        raise ReductionError(f"no edge {edge_id}")
    if is_leaf(graph, edge_id):
        raise ReductionError("leaf edges are trimmed, not decoupled")
    v1 = _level_one_end(graph, e)
    twin = Vertex(
        fresh_id(graph.vertex_map, f"{v1.id}/{e.id}"), Level.ONE, stable=False, hour=v1.hour
    )
    moved_id = fresh_id(graph.edge_map, f"{e.id}'")
    if e.cls is EdgeClass.E01:
        moved = replace(e, id=moved_id, end_b=twin.id)
    else:
        moved = replace(e, id=moved_id, end_a=twin.id)
    edges = tuple(moved if x.id == edge_id else x for x in graph.edges)
    legs = _append_legs(graph, [(v1.id, Monodromy.ONE_PHI), (twin.id, Monodromy.ONE_PHI)])
    out = DecoratedGraph(graph.vertices + (twin,), edges, tuple(legs), graph.deg_l2)
    _record(trace, "Decouple", (edge_id, v1.id), out)
    return out


def decouple_all(graph: DecoratedGraph, trace: Trace | None = None) -> DecoratedGraph:
    while True:
        target = next(
            (e.id for e in graph.edges
             if e.cls is not EdgeClass.E0INF and not is_leaf(graph, e.id)),
            None,
        )
        if target is None:
            return graph
        graph = decouple(graph, target, trace)


def trim(graph: DecoratedGraph, trace: Trace | None = None) -> DecoratedGraph:
    """Remove every leaf E01/E1Inf edge with its level-1 end, leaving a leg behind."""
    leaves = [e for e in graph.edges if e.cls is not EdgeClass.E0INF]
    for e in leaves:
        if not is_leaf(graph, e.id):
            raise ReductionError(f"graph is not fully decoupled: edge {e.id}")
    for e in leaves:
        v1 = _level_one_end(graph, e)
        if e.cls is EdgeClass.E01:
            anchor, mono = e.end_a, Monodromy.ONE_RHO
        else:
            anchor, mono = e.end_b, Monodromy.ONE_PHI
        legs = [l for l in _append_legs(graph, [(anchor, mono)]) if l.vertex != v1.id]
        graph = DecoratedGraph.build(
            [v for v in graph.vertices if v.id != v1.id],
            [x for x in graph.edges if x.id != e.id],
            legs,
            graph.deg_l2,
        )
        _record(trace, "Trim", (e.id,), graph)
    return graph


def split_components(graph: DecoratedGraph, trace: Trace | None = None):
    """Split into (level 0/inf part, level-1 part)."""
    if any(e.cls is not EdgeClass.E0INF for e in graph.edges):
        raise ReductionError("split needs a graph without E01/E1Inf edges")
    ones = {v.id for v in graph.vertices if v.level is Level.ONE}
    rest = [v.id for v in graph.vertices if v.id not in ones]
    zero_inf, level_one = graph.subgraph(rest), graph.subgraph(ones)
    _record(trace, "SplitComponents", [v.id for v in level_one.vertices], zero_inf)
    return zero_inf, level_one


def refresh_special(graph: DecoratedGraph) -> DecoratedGraph:
    """Recompute specialAtInf from the current valency of each inf end."""
    changed = False
    edges = []
    for e in graph.edges:
        if e.cls is not EdgeClass.E01:
            flag = graph.is_special_point(e.end_b)
            if flag != e.special_at_inf:
                e = replace(e, special_at_inf=flag)
                changed = True
        edges.append(e)
    if not changed:
        return graph
    return DecoratedGraph(graph.vertices, tuple(edges), graph.legs, graph.deg_l2)


def forget_legs(graph: DecoratedGraph, trace: Trace | None = None) -> DecoratedGraph:
    """Drop m=1 and (1,rho) legs, then discard unstable vertices left bare."""
    for l in graph.legs:
        if l.monodromy in (Monodromy.M1, Monodromy.ONE_RHO):
            graph = DecoratedGraph.build(
                graph.vertices, graph.edges, [x for x in graph.legs if x.id != l.id], graph.deg_l2
            )
            _record(trace, "ForgetLeg", (l.id,), graph)
    bare = [v.id for v in graph.vertices if not v.stable and graph.valency(v.id) == 0]
    if bare:
        graph = DecoratedGraph(
            tuple(v for v in graph.vertices if v.id not in bare), graph.edges, graph.legs,
            graph.deg_l2,
        )
    return refresh_special(graph)


def remove_strings(graph: DecoratedGraph, trace: Trace | None = None) -> DecoratedGraph:
    """Cut each string, keeping a (1,phi) leg at its inf end."""
    while found := strings(graph):
        e = graph.edge_map[found[0]]
        v0 = e.end_a
        legs = [l for l in _append_legs(graph, [(e.end_b, Monodromy.ONE_PHI)]) if l.vertex != v0]
        graph = DecoratedGraph.build(
            [v for v in graph.vertices if v.id != v0],
            [x for x in graph.edges if x.id != e.id],
            legs,
            graph.deg_l2,
        )
        _record(trace, "RemoveString", (e.id,), graph)
    return refresh_special(graph)


def reduce_to_special(graph: DecoratedGraph, trace: Trace | None = None):
    """Full pipeline.  Returns (terminal level 0/inf graph, level-1 part)."""
    g = trim(decouple_all(graph, trace), trace)
    zero_inf, level_one = split_components(g, trace)
    while True:
        nxt = remove_strings(forget_legs(zero_inf, trace), trace)
        if nxt == zero_inf:
            return zero_inf, level_one
        zero_inf = nxt


class Verdict(enum.Enum):
    PURE_LOOP = "PureLoop"
    VANISHES = "Vanishes"
    REGULAR_NOT_COVERED = "RegularNotCovered"
    INVALID = "Invalid"


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    trace: tuple[ReductionStep, ...] = ()
    terminal_vdims: tuple[Fraction, ...] = ()
    reason: str | None = None


def certify_vanishing(graph: DecoratedGraph) -> Certificate:
    problems = validate(graph)
    if problems:
        return Certificate(Verdict.INVALID, reason=problems[0])
    if balanced_vertices(graph):
        raise ReductionError("flatten first")
    if is_pure_loop(graph):
        return Certificate(Verdict.PURE_LOOP)
    if is_regular(graph):
        return Certificate(Verdict.REGULAR_NOT_COVERED)

    # components of the terminal graph that descend from the E0Inf part
    marked = {x for e in graph.edges if e.cls is EdgeClass.E0INF for x in (e.end_a, e.end_b)}
    trace: Trace = []
    terminal, _ = reduce_to_special(graph, trace)
    vdims = []
    try:
        for comp in terminal.components:
            if not marked.intersection(comp):
                continue
            sub = terminal.subgraph(comp)
            shares = [chain_contribution(sub, c) for c in maximal_chains(sub)]
            value = vdim(sub)
            vdims.append(value)
            # the closed form must agree with its chain-by-chain rebuild
            if any(s != -1 for s in shares):
                return Certificate(Verdict.INVALID, tuple(trace), tuple(vdims),
                                   "chain share other than -1")
            if sum(shares) + residual_contribution(sub) != value:
                return Certificate(Verdict.INVALID, tuple(trace), tuple(vdims),
                                   "chain sum disagrees with vdim")
    except (ChainError, FormulaDomainError) as exc:
        return Certificate(Verdict.INVALID, tuple(trace), tuple(vdims), str(exc))
    if not vdims:
        return Certificate(Verdict.INVALID, tuple(trace), (), "no terminal component")
    if all(x < 0 for x in vdims):
        return Certificate(Verdict.VANISHES, tuple(trace), tuple(vdims))
    return Certificate(Verdict.INVALID, tuple(trace), tuple(vdims), "non-negative terminal vdim")


def certify_vanishing_nmsp(graph: DecoratedGraph, n: int) -> Certificate:
    """Certificate for an N-MSP graph; hours only have to lie in [1, n]."""
    if n < 1:
        raise ValueError("N must be positive")
    for v in graph.vertices:
        if v.hour is None:
            raise ValueError(f"vertex {v.id}: missing hour")
        if not 1 <= v.hour <= n:
            raise ValueError(f"vertex {v.id}: hour {v.hour} outside [1, {n}]")
    return certify_vanishing(graph)
