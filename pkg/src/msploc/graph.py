"""Decorated localization graphs: types, validation and aggregate invariants."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

Rat = Fraction
ZERO = Fraction(0)


class Level(enum.Enum):
    ZERO = "0"
    ONE = "1"
    INF = "inf"

    @property
    def rank(self) -> int:
        return _LEVEL_RANK[self]


_LEVEL_RANK = {Level.ZERO: 0, Level.ONE: 1, Level.INF: 2}


class Monodromy(enum.Enum):
    """Sector of a marking.  BROAD is the m=0 broad sector, used only by the
    string graph of the de-stringing step."""

    ONE_PHI = "1phi"
    ONE_RHO = "1rho"
    M1 = "m1"
    M2 = "m2"
    BROAD = "broad"

    @property
    def m(self) -> int:
        return _MONODROMY_M[self]


_MONODROMY_M = {
    Monodromy.ONE_PHI: 0,
    Monodromy.ONE_RHO: 0,
    Monodromy.M1: 1,
    Monodromy.M2: 2,
    Monodromy.BROAD: 0,
}


class EdgeClass(enum.Enum):
    E01 = "01"
    E1INF = "1inf"
    E0INF = "0inf"

    @property
    def levels(self) -> tuple[Level, Level]:
        return _CLASS_LEVELS[self]


_CLASS_LEVELS = {
    EdgeClass.E01: (Level.ZERO, Level.ONE),
    EdgeClass.E1INF: (Level.ONE, Level.INF),
    EdgeClass.E0INF: (Level.ZERO, Level.INF),
}


_CLASS_OF_PAIR = {}
for _cls, (_lo, _hi) in _CLASS_LEVELS.items():
    _CLASS_OF_PAIR[_lo, _hi] = _CLASS_OF_PAIR[_hi, _lo] = _cls


def edge_class_between(a: Level, b: Level) -> EdgeClass | None:
    return _CLASS_OF_PAIR.get((a, b))


@dataclass(frozen=True)
class Vertex:
    id: str
    level: Level
    genus: int = 0
    deg0: Fraction = ZERO
    deg_inf: Fraction = ZERO
    stable: bool = True
    hour: int | None = None

    @property
    def d(self) -> Fraction:
        return self.deg0 - self.deg_inf


@dataclass(frozen=True)
class Edge:
    id: str
    end_a: str  # lower-level end
    end_b: str  # higher-level end
    cls: EdgeClass
    deg0: Fraction = ZERO
    deg_inf: Fraction = ZERO
    orbifold_at_inf: bool = False
    special_at_inf: bool = False

    @property
    def d(self) -> Fraction:
        return self.deg0 - self.deg_inf

    def other(self, vid: str) -> str:
        return self.end_b if vid == self.end_a else self.end_a


@dataclass(frozen=True)
class Leg:
    id: str
    vertex: str
    position: int
    monodromy: Monodromy


@dataclass(frozen=True)
class DecoratedGraph:
    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()
    deg_l2: Fraction = ZERO

    @classmethod
    def build(
        cls,
        vertices: Iterable[Vertex] = (),
        edges: Iterable[Edge] = (),
        legs: Iterable[Leg] = (),
        deg_l2: Fraction = ZERO,
    ) -> DecoratedGraph:
        """Construct a graph, sorting legs by position and renumbering them 0..n-1."""
        ordered = sorted(legs, key=lambda l: l.position)
        ordered = [replace(l, position=i) if l.position != i else l for i, l in enumerate(ordered)]
        return cls(tuple(vertices), tuple(edges), tuple(ordered), Fraction(deg_l2))

    @cached_property
    def vertex_map(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def incident(self) -> dict[str, list[Edge]]:
        inc: dict[str, list[Edge]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            for end in (e.end_a, e.end_b):
                inc.setdefault(end, []).append(e)
        return inc

    @cached_property
    def legs_at(self) -> dict[str, list[Leg]]:
        out: dict[str, list[Leg]] = {v.id: [] for v in self.vertices}
        for l in self.legs:
            out.setdefault(l.vertex, []).append(l)
        return out

    def valency(self, vid: str) -> int:
        return len(self.incident.get(vid, ())) + len(self.legs_at.get(vid, ()))

    def is_special_point(self, vid: str) -> bool:
        """Whether vertex `vid` sits at a node or marking of the curve."""
        v = self.vertex_map[vid]
        return v.stable or self.valency(vid) >= 2

    @property
    def has_hours(self) -> bool:
        return any(v.hour is not None for v in self.vertices)

    @cached_property
    def components(self) -> list[list[str]]:
        """Connected components as lists of vertex ids, in vertex order."""
        parent = {v.id: v.id for v in self.vertices}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.end_a in parent and e.end_b in parent:
                ra, rb = find(e.end_a), find(e.end_b)
                if ra != rb:
                    parent[rb] = ra
        groups: dict[str, list[str]] = {}
        for v in self.vertices:
            groups.setdefault(find(v.id), []).append(v.id)
        return list(groups.values())

    def subgraph(self, vids: Iterable[str]) -> DecoratedGraph:
        keep = set(vids)
        return DecoratedGraph.build(
            [v for v in self.vertices if v.id in keep],
            [e for e in self.edges if e.end_a in keep],
            [l for l in self.legs if l.vertex in keep],
            self.deg_l2,
        )

    def relabel(self, prefix: str = "") -> DecoratedGraph:
        """Rename ids to v0.., e0.., l0.. (in current order)."""
        vmap = {v.id: f"{prefix}v{i}" for i, v in enumerate(self.vertices)}
        return DecoratedGraph.build(
            [replace(v, id=vmap[v.id]) for v in self.vertices],
            [
                replace(e, id=f"{prefix}e{i}", end_a=vmap[e.end_a], end_b=vmap[e.end_b])
                for i, e in enumerate(self.edges)
            ],
            [replace(l, id=f"{prefix}l{i}", vertex=vmap[l.vertex]) for i, l in enumerate(self.legs)],
            self.deg_l2,
        )


def fresh_id(taken: Iterable[str], base: str) -> str:
    used = set(taken)
    if base not in used:
        return base
    i = 1
    while f"{base}.{i}" in used:
        i += 1
    return f"{base}.{i}"


# ---------------------------------------------------------------- validation


def validate(graph: DecoratedGraph) -> list[str]:
    """Return every violated decoration constraint; an empty list means valid."""
    out: list[str] = []
    vmap = {v.id: v for v in graph.vertices}
    if len(vmap) != len(graph.vertices):
        out.extend(_duplicates("vertex", graph.vertices))
    if len({e.id for e in graph.edges}) != len(graph.edges):
        out.extend(_duplicates("edge", graph.edges))
    if len({l.id for l in graph.legs}) != len(graph.legs):
        out.extend(_duplicates("leg", graph.legs))
    if graph.deg_l2.denominator not in (1, 3):
        out.append("graph: degL2 denominator must be 1 or 3")

    valency = dict.fromkeys(vmap, 0)
    for e in graph.edges:
        if e.end_a in valency:
            valency[e.end_a] += 1
        if e.end_b in valency:
            valency[e.end_b] += 1
    for l in graph.legs:
        if l.vertex in valency:
            valency[l.vertex] += 1

    with_hour = sum(1 for v in graph.vertices if v.hour is not None)
    if 0 < with_hour < len(graph.vertices):
        out.append("graph: hour must be present on every vertex or on none")

    for v in graph.vertices:
        if v.genus < 0:
            out.append(f"vertex {v.id}: genus must be non-negative")
        if v.deg0.denominator not in (1, 3):
            out.append(f"vertex {v.id}: deg0 denominator must be 1 or 3")
        if v.deg_inf.denominator not in (1, 3):
            out.append(f"vertex {v.id}: degInf denominator must be 1 or 3")
        if v.hour is not None and v.hour < 1:
            out.append(f"vertex {v.id}: hour must be at least 1")
        if not v.stable:
            if v.genus != 0:
                out.append(f"vertex {v.id}: unstable vertex must have genus 0")
            if v.deg0 or v.deg_inf:
                out.append(f"vertex {v.id}: unstable vertex must have degree (0, 0)")
            if not 1 <= valency[v.id] <= 2:
                out.append(f"vertex {v.id}: unstable vertex must have valency 1 or 2")
        level = v.level
        if level is Level.ONE:
            if v.deg0 or v.deg_inf:
                out.append(f"vertex {v.id}: level-1 vertex must have degree (0, 0)")
        elif level is Level.ZERO:
            if v.deg_inf:
                out.append(f"vertex {v.id}: level-0 vertex must have degInf = 0")
            if v.deg0.denominator != 1 or v.deg0 < 0:
                out.append(f"vertex {v.id}: level-0 vertex deg0 must be a non-negative integer")
        elif v.deg0:
            out.append(f"vertex {v.id}: level-inf vertex must have deg0 = 0")

    for e in graph.edges:
        out.extend(_edge_violations(e, vmap, valency))

    for l in graph.legs:
        v = vmap.get(l.vertex)
        if v is None:
            out.append(f"leg {l.id}: vertex {l.vertex} does not exist")
            continue
        mono = l.monodromy
        if mono is Monodromy.ONE_RHO:
            if v.level is Level.INF:
                out.append(f"leg {l.id}: (1,rho) leg cannot sit at level inf")
        elif mono is Monodromy.ONE_PHI:
            if v.level is Level.ZERO:
                out.append(f"leg {l.id}: (1,phi) leg cannot sit at level 0")
        elif v.level is not Level.INF:
            out.append(f"leg {l.id}: {mono.value} leg must sit at level inf")
    for i, l in enumerate(graph.legs):
        if l.position != i:
            out.append("graph: leg positions must be 0..n-1 in order")
            break
    return out


def _duplicates(kind: str, items) -> list[str]:
    seen: set[str] = set()
    out = []
    for x in items:
        if x.id in seen:
            out.append(f"{kind} {x.id}: duplicate id")
        seen.add(x.id)
    return out


def _edge_violations(e: Edge, vmap: dict[str, Vertex], valency: dict[str, int]) -> list[str]:
    tag = f"edge {e.id}"
    out = []
    a, b = vmap.get(e.end_a), vmap.get(e.end_b)
    if a is None or b is None:
        missing = e.end_a if a is None else e.end_b
        out.append(f"{tag}: endpoint {missing} does not exist")
    elif (a.level, b.level) != e.cls.levels:
        out.append(f"{tag}: endpoint levels do not match class {e.cls.value}")
    d0, di = e.deg0, e.deg_inf
    out.extend(f"{tag}: {msg}" for msg in _edge_decoration_violations(
        e.cls, d0.numerator, d0.denominator, di.numerator, di.denominator,
        e.orbifold_at_inf, e.special_at_inf))
    if b is not None and e.cls is not EdgeClass.E01:
        expected = b.stable or valency[b.id] >= 2
        if e.special_at_inf != expected:
            out.append(f"{tag}: specialAtInf must be {str(expected).lower()}")
    return out


@lru_cache(maxsize=4096)
def _edge_decoration_violations(
    cls: EdgeClass, p0: int, q0: int, pinf: int, qinf: int, orbifold: bool, special: bool
) -> tuple[str, ...]:
    """Checks that depend on the edge's own decoration only (cached on
    integer parts: hashing Fractions is slow)."""
    deg0, deg_inf = Fraction(p0, q0), Fraction(pinf, qinf)
    out = []
    if deg0.denominator not in (1, 3):
        out.append("deg0 denominator must be 1 or 3")
    if deg_inf.denominator not in (1, 3):
        out.append("degInf denominator must be 1 or 3")
    d = deg0 - deg_inf
    if cls is EdgeClass.E01:
        if d <= 0:
            out.append("E01 degree must be positive")
        if d.denominator != 1:
            out.append("E01 degree must be an integer")
        if deg_inf:
            out.append("E01 edge must have degInf = 0")
        if orbifold or special:
            out.append("E01 edge does not touch level inf")
    elif cls is EdgeClass.E1INF:
        if d >= 0:
            out.append("E1Inf degree must be negative")
        if deg0:
            out.append("E1Inf edge must have deg0 = 0")
        if not orbifold and d.denominator != 1:
            out.append("E1Inf degree must be an integer at a scheme point")
        if orbifold and not special:
            out.append("orbifold point at inf must be a node or marking")
    else:
        if d:
            out.append("E0Inf edge must have deg0 = degInf")
        if deg_inf <= 0 or deg_inf.denominator != 1:
            out.append("E0Inf degInf must be a positive integer")
        if orbifold:
            out.append("E0Inf edge must end at a scheme point")
    return tuple(out)


def is_valid(graph: DecoratedGraph) -> bool:
    return not validate(graph)


def realizability_violations(graph: DecoratedGraph) -> list[str]:
    """Constraints that hold for graphs of actual fixed MSP fields but are not
    part of the decoration rules.  Used to prune the enumerator."""
    out = []
    for v in graph.vertices:
        if v.stable:
            continue
        edges = graph.incident.get(v.id, [])
        if not edges:
            out.append(f"vertex {v.id}: unstable vertex carries no edge")
        if v.level is Level.INF and len(edges) == 1 and edges[0].cls is EdgeClass.E0INF:
            legs = graph.legs_at.get(v.id, [])
            if len(legs) != 1 or legs[0].monodromy is not Monodromy.ONE_PHI:
                out.append(f"vertex {v.id}: end of an E0Inf edge needs exactly one (1,phi) leg")
    return out


# ---------------------------------------------------------------- invariants


def betti(graph: DecoratedGraph) -> int:
    return len(graph.edges) - len(graph.vertices) + len(graph.components)


def total_genus(graph: DecoratedGraph) -> int:
    return sum(v.genus for v in graph.vertices) + betti(graph)


def total_degree(graph: DecoratedGraph) -> tuple[Fraction, Fraction]:
    parts = (*graph.vertices, *graph.edges)
    d0 = sum((x.deg0 for x in parts if x.deg0), ZERO)
    dinf = sum((x.deg_inf for x in parts if x.deg_inf), ZERO)
    return d0, dinf


def monodromy_vector(graph: DecoratedGraph) -> list[Monodromy]:
    return [l.monodromy for l in sorted(graph.legs, key=lambda l: l.position)]


@dataclass(frozen=True)
class Classification:
    is_flat: bool
    is_regular: bool
    is_pure_loop: bool


def is_regular(graph: DecoratedGraph) -> bool:
    return all(e.cls is not EdgeClass.E0INF for e in graph.edges)


def is_pure_loop(graph: DecoratedGraph) -> bool:
    if graph.legs or not graph.vertices:
        return False
    return all(not v.stable and len(graph.incident[v.id]) == 2 for v in graph.vertices)


def classify(graph: DecoratedGraph) -> Classification:
    from .flatten import balanced_vertices

    return Classification(
        is_flat=not balanced_vertices(graph),
        is_regular=is_regular(graph),
        is_pure_loop=is_pure_loop(graph),
    )


def vertices_at(graph: DecoratedGraph, level: Level) -> Iterator[Vertex]:
    return (v for v in graph.vertices if v.level is level)


def legs_of(graph: DecoratedGraph, kinds: Sequence[Monodromy]) -> list[Leg]:
    return [l for l in graph.legs if l.monodromy in kinds]


__all__ = [
    "Classification", "DecoratedGraph", "Edge", "EdgeClass", "Leg", "Level",
    "Monodromy", "Rat", "Vertex", "betti", "classify", "edge_class_between",
    "fresh_id", "is_pure_loop", "is_regular", "is_valid", "legs_of",
    "monodromy_vector", "realizability_violations", "total_degree",
    "total_genus", "validate", "vertices_at",
]
