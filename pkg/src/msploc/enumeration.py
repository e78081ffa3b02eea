"""Canonical forms and exhaustive generation of small decorated graphs."""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .flatten import balanced_vertices
from .graph import (
    DecoratedGraph, Edge, EdgeClass, Leg, Level, Monodromy, Vertex, classify, edge_class_between,
    realizability_violations, validate,
)

# ------------------------------------------------------------ canonical form


def _rat(x: Fraction) -> tuple[int, int]:
    return (x.numerator, x.denominator)


def _refine(colours: list, adj: list[list[tuple]]) -> list[int]:
    """Colour refinement to the coarsest equitable partition, with canonical colour ids."""
    cols = _rank(colours)
    while True:
        sigs = [(cols[v], tuple(sorted((lab, cols[u]) for lab, u in adj[v]))) for v in range(len(cols))]
        new = _rank(sigs)
        if len(set(new)) == len(set(cols)):
            return new
        cols = new


def _rank(items: list) -> list[int]:
    table = {x: i for i, x in enumerate(sorted(set(items)))}
    return [table[x] for x in items]


def _leaves(colours: list[int], adj: list[list[tuple]]) -> Iterator[list[int]]:
    """Discrete refinements reachable by individualization; each is a vertex order."""
    cols = _refine(colours, adj)
    counts = Counter(cols)
    if len(counts) == len(cols):
        order = sorted(range(len(cols)), key=cols.__getitem__)
        yield order
        return
    target = min(c for c, k in counts.items() if k > 1)
    for v in range(len(cols)):
        if cols[v] == target:
            split = [(c, 0 if i == v else 1) if c == target else (c, 0) for i, c in enumerate(cols)]
            yield from _leaves(split, adj)


def _vertex_label(graph: DecoratedGraph, v: Vertex, ordered_legs: bool) -> tuple:
    legs = graph.legs_at.get(v.id, [])
    if ordered_legs:
        leg_part = tuple((l.position, l.monodromy.value) for l in legs)
    else:
        leg_part = tuple(sorted(l.monodromy.value for l in legs))
    return (
        v.level.rank, v.stable, v.genus, _rat(v.deg0), _rat(v.deg_inf),
        -1 if v.hour is None else v.hour, leg_part,
    )


def _edge_label(e: Edge) -> tuple:
    return (e.cls.value, _rat(e.deg0), _rat(e.deg_inf), e.orbifold_at_inf, e.special_at_inf)


def canonical_key(graph: DecoratedGraph, ordered_legs: bool = True) -> tuple:
    """Isomorphism-invariant key (comparable tuple)."""
    index = {v.id: i for i, v in enumerate(graph.vertices)}
    labels = [_vertex_label(graph, v, ordered_legs) for v in graph.vertices]
    adj: list[list[tuple]] = [[] for _ in graph.vertices]
    elist = []
    for e in graph.edges:
        a, b, lab = index[e.end_a], index[e.end_b], _edge_label(e)
        adj[a].append(((0,) + lab, b))
        adj[b].append(((1,) + lab, a))
        elist.append((a, b, lab))
    best = None
    for order in _leaves(labels, adj):
        pos = {v: i for i, v in enumerate(order)}
        key = (
            tuple(labels[v] for v in order),
            tuple(sorted((pos[a], pos[b], lab) for a, b, lab in elist)),
            _rat(graph.deg_l2),
        )
        if best is None or key < best:
            best = key
    if best is None:
        best = ((), (), _rat(graph.deg_l2))
    return best


def canonical_form(graph: DecoratedGraph, ordered_legs: bool = True) -> bytes:
    """Byte string equal for exactly the isomorphic graphs.

    With `ordered_legs` the leg order is part of the structure; without it
    legs are compared as a multiset per vertex.
    """
    return repr(canonical_key(graph, ordered_legs)).encode()


def is_rigid(graph: DecoratedGraph, ordered_legs: bool = True) -> bool:
    """Whether colour refinement alone separates all vertices (no automorphisms)."""
    index = {v.id: i for i, v in enumerate(graph.vertices)}
    labels = [_vertex_label(graph, v, ordered_legs) for v in graph.vertices]
    adj: list[list[tuple]] = [[] for _ in graph.vertices]
    for e in graph.edges:
        a, b, lab = index[e.end_a], index[e.end_b], _edge_label(e)
        adj[a].append(((0,) + lab, b))
        adj[b].append(((1,) + lab, a))
    cols = _refine(labels, adj)
    return len(set(cols)) == len(cols)


# ---------------------------------------------------------------- skeletons

_LEVELS = (Level.ZERO, Level.ONE, Level.INF)


@dataclass(frozen=True)
class Caps:
    max_genus: int
    max_edges: int
    max_legs: int
    max_degree: int

    def __post_init__(self):
        if min(self.max_genus, self.max_edges, self.max_legs) < 0 or self.max_degree < 1:
            raise ValueError("caps must be non-negative and max_degree at least 1")


@dataclass(frozen=True)
class Skeleton:
    levels: tuple[Level, ...]
    stable: tuple[bool, ...]
    genus: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]  # (lower end, upper end), sorted

    def graph(self) -> DecoratedGraph:
        vs = [
            Vertex(f"v{i}", lv, genus=g, stable=st)
            for i, (lv, st, g) in enumerate(zip(self.levels, self.stable, self.genus))
        ]
        es = [
            Edge(f"e{k}", f"v{a}", f"v{b}", edge_class_between(self.levels[a], self.levels[b]))
            for k, (a, b) in enumerate(self.pairs)
        ]
        return DecoratedGraph(tuple(vs), tuple(es))


def _multigraph_key(levels: Sequence[Level], pairs: Sequence[tuple[int, int]]) -> tuple:
    return canonical_key(Skeleton(tuple(levels), (True,) * len(levels), (0,) * len(levels),
                                  tuple(pairs)).graph())


def level_multigraphs(max_edges: int, max_betti: int) -> list[tuple[tuple[Level, ...], tuple]]:
    """Connected multigraphs with levelled vertices, edges joining distinct
    levels, up to isomorphism.  Each is (levels, sorted (lo, hi) pairs)."""
    layer = {}
    for lv in _LEVELS:
        key = _multigraph_key((lv,), ())
        layer[key] = ((lv,), ())
    found = dict(layer)
    for _ in range(max_edges):
        nxt = {}
        for levels, pairs in layer.values():
            n = len(levels)
            cands = []
            for i in range(n):
                for lv in _LEVELS:
                    if lv is not levels[i]:
                        cands.append((levels + (lv,), (i, n)))
            betti = len(pairs) - n + 1
            if betti < max_betti:
                for i in range(n):
                    for j in range(i + 1, n):
                        if levels[i] is not levels[j]:
                            cands.append((levels, (i, j)))
            for new_levels, (i, j) in cands:
                lo, hi = (i, j) if new_levels[i].rank < new_levels[j].rank else (j, i)
                new_pairs = tuple(sorted(pairs + ((lo, hi),)))
                key = _multigraph_key(new_levels, new_pairs)
                if key not in found and key not in nxt:
                    nxt[key] = (new_levels, new_pairs)
        found.update(nxt)
        layer = nxt
    return [found[k] for k in sorted(found)]


def _genus_splits(slots: int, budget: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `slots` non-negative ints with sum <= budget."""
    if slots == 0:
        yield ()
        return
    for first in range(budget + 1):
        for rest in _genus_splits(slots - 1, budget - first):
            yield (first,) + rest


def _discrete_order(levels: Sequence[Level], pairs: Sequence[tuple[int, int]]) -> list[int] | None:
    """Canonical vertex order of a levelled multigraph when refinement alone
    separates its vertices, else None."""
    g = Skeleton(tuple(levels), (True,) * len(levels), (0,) * len(levels), tuple(pairs)).graph()
    labels = [_vertex_label(g, v, True) for v in g.vertices]
    adj: list[list[tuple]] = [[] for _ in levels]
    for (a, b), e in zip(pairs, g.edges):
        lab = _edge_label(e)
        adj[a].append(((0,) + lab, b))
        adj[b].append(((1,) + lab, a))
    cols = _refine(labels, adj)
    if len(set(cols)) < len(cols):
        return None
    return sorted(range(len(cols)), key=cols.__getitem__)


def skeletons(max_genus: int, max_edges: int) -> list[Skeleton]:
    """Levelled connected multigraphs with stability flags and vertex genera,
    up to isomorphism.  Sorted by edge count, then vertex count, then
    canonical key, so that smaller graphs come first."""
    out = {}
    for mg_index, (levels, pairs) in enumerate(level_multigraphs(max_edges, max_genus)):
        n = len(levels)
        nedges = [0] * n
        for a, b in pairs:
            nedges[a] += 1
            nedges[b] += 1
        budget = max_genus - (len(pairs) - n + 1)
        # without automorphisms every decoration is its own class, and the
        # decoration read in canonical vertex order is a complete key
        order = _discrete_order(levels, pairs)
        for stable in itertools.product((True, False), repeat=n):
            # unstable vertices are points with one or two edges
            if any(not s and not 1 <= k <= 2 for s, k in zip(stable, nedges)):
                continue
            st_idx = [i for i in range(n) if stable[i]]
            for gs in _genus_splits(len(st_idx), budget):
                genus = [0] * n
                for i, g in zip(st_idx, gs):
                    genus[i] = g
                sk = Skeleton(levels, stable, tuple(genus), pairs)
                if order is not None:
                    deco = tuple((not stable[v], genus[v]) for v in order)
                else:
                    deco = canonical_key(sk.graph())
                out.setdefault((len(pairs), n, mg_index, deco), sk)
    return [out[k] for k in sorted(out)]


# ---------------------------------------------------------------- decorations

_LEG_CHOICES = {
    Level.ZERO: (Monodromy.ONE_RHO,),
    Level.ONE: (Monodromy.ONE_PHI, Monodromy.ONE_RHO),
    Level.INF: (Monodromy.ONE_PHI, Monodromy.M1, Monodromy.M2),
}


def _leg_multisets(sk: Skeleton, max_legs: int) -> Iterator[tuple[tuple[int, Monodromy], ...]]:
    slots = [(i, m) for i, lv in enumerate(sk.levels) for m in _LEG_CHOICES[lv]]
    n = len(sk.levels)
    nedges = [0] * n
    for a, b in sk.pairs:
        nedges[a] += 1
        nedges[b] += 1
    for size in range(max_legs + 1):
        for combo in itertools.combinations_with_replacement(slots, size):
            per = Counter(i for i, _ in combo)
            if any(not sk.stable[i] and nedges[i] + per[i] > 2 for i in per):
                continue
            yield combo


@functools.lru_cache(maxsize=None)
def _edge_options(cls: EdgeClass, special: bool, cap: int) -> tuple[tuple[Fraction, Fraction, bool], ...]:
    """(deg0, degInf, orbifold) choices for one edge, each with its degree cost."""
    if cls is EdgeClass.E01:
        return [(Fraction(d), Fraction(0), False) for d in range(1, cap + 1)]
    if cls is EdgeClass.E0INF:
        return [(Fraction(d), Fraction(d), False) for d in range(1, cap + 1)]
    out = []
    for t in range(1, 3 * cap + 1):
        dinf = Fraction(t, 3)
        if t % 3 == 0:
            out.append((Fraction(0), dinf, False))
        if special:
            out.append((Fraction(0), dinf, True))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _option_costs(cls: EdgeClass, special: bool, cap: int) -> tuple[tuple[int, int], ...]:
    return tuple((int(3 * d0), int(3 * di)) for d0, di, _ in _edge_options(cls, special, cap))


def _edge_decorations(
    classes: list[EdgeClass], pairs: Sequence[tuple[int, int]], special: list[bool], cap: int
) -> Iterator[tuple[tuple[Fraction, Fraction, bool], ...]]:
    """Per-edge decorations obeying the total-degree caps.  Parallel edges
    get non-decreasing option indices so each multiset appears once."""
    options = [_edge_options(c, s, cap) for c, s in zip(classes, special)]
    # costs in integer thirds, ascending within each edge's options
    costs = [_option_costs(c, s, cap) for c, s in zip(classes, special)]
    cap3 = 3 * cap
    m = len(pairs)
    chosen: list[int] = [0] * m
    tied = [k > 0 and pairs[k - 1] == pairs[k] for k in range(m)]

    def rec(k: int, deg0: int, deginf: int):
        if k == m:
            yield tuple(options[i][chosen[i]] for i in range(m))
            return
        start = chosen[k - 1] if tied[k] else 0
        ck = costs[k]
        for idx in range(start, len(ck)):
            c0, ci = ck[idx]
            if deg0 + c0 > cap3 or deginf + ci > cap3:
                break
            chosen[k] = idx
            yield from rec(k + 1, deg0 + c0, deginf + ci)

    yield from rec(0, 0, 0)


def _min_cost_exceeds(classes: list[EdgeClass], cap: int) -> bool:
    """Whether every decoration of these edges breaks the degree caps."""
    n01 = classes.count(EdgeClass.E01)
    n1inf = classes.count(EdgeClass.E1INF)
    n0inf = classes.count(EdgeClass.E0INF)
    return n01 + n0inf > cap or 3 * n0inf + n1inf > 3 * cap


def _balance_pairs(sk: Skeleton, classes: list[EdgeClass]) -> list[tuple[int, int]]:
    """(E01 edge, E1Inf edge) index pairs meeting at an unstable level-1 point."""
    at: dict[int, list[int]] = {}
    for k, (a, b) in enumerate(sk.pairs):
        at.setdefault(a, []).append(k)
        at.setdefault(b, []).append(k)
    out = []
    for v, ks in at.items():
        if sk.levels[v] is Level.ONE and not sk.stable[v] and len(ks) == 2:
            k1, k2 = sorted(ks, key=lambda k: classes[k] is not EdgeClass.E01)
            if classes[k1] is EdgeClass.E01 and classes[k2] is EdgeClass.E1INF:
                out.append((k1, k2))
    return out


def _assemble(sk: Skeleton, legs, decos, special, hours=None, classes=None) -> DecoratedGraph:
    if classes is None:
        classes = [edge_class_between(sk.levels[a], sk.levels[b]) for a, b in sk.pairs]
    vs = tuple(
        Vertex(f"v{i}", lv, genus=g, stable=st, hour=None if hours is None else hours[i])
        for i, (lv, st, g) in enumerate(zip(sk.levels, sk.stable, sk.genus))
    )
    es = tuple(
        Edge(f"e{k}", f"v{a}", f"v{b}", classes[k], d0, di, orb, special[k])
        for k, ((a, b), (d0, di, orb)) in enumerate(zip(sk.pairs, decos))
    )
    ls = tuple(Leg(f"l{p}", f"v{i}", p, mono) for p, (i, mono) in enumerate(legs))
    return DecoratedGraph(vs, es, ls)


def _special_flags(sk: Skeleton, legs) -> list[bool]:
    n = len(sk.levels)
    val = [0] * n
    for a, b in sk.pairs:
        val[a] += 1
        val[b] += 1
    for i, _ in legs:
        val[i] += 1
    return [
        sk.levels[b] is Level.INF and (sk.stable[b] or val[b] >= 2) for a, b in sk.pairs
    ]


def enumerate_graphs(
    caps: Caps,
    flat_only: bool = True,
    realizable_only: bool = True,
    accept: Callable[[DecoratedGraph], bool] | None = None,
    skeleton_filter: Callable[[Skeleton], bool] | None = None,
) -> Iterator[DecoratedGraph]:
    """Connected valid graphs within `caps`, one per isomorphism class (legs
    compared as multisets), in a deterministic order."""
    for sk in skeletons(caps.max_genus, caps.max_edges):
        if skeleton_filter is not None and not skeleton_filter(sk):
            continue
        classes = [edge_class_between(sk.levels[a], sk.levels[b]) for a, b in sk.pairs]
        if _min_cost_exceeds(classes, caps.max_degree):
            continue
        bal_pairs = _balance_pairs(sk, classes) if flat_only else []
        rigid = is_rigid(sk.graph())
        seen: set[tuple] = set()
        for legs in _leg_multisets(sk, caps.max_legs):
            special = _special_flags(sk, legs)
            for decos in _edge_decorations(classes, sk.pairs, special, caps.max_degree):
                # a balanced point: special E1Inf end and opposite degrees
                if any(special[k2] and decos[k1][0] == decos[k2][1] for k1, k2 in bal_pairs):
                    continue
                g = _assemble(sk, legs, decos, special, classes=classes)
                if realizable_only and realizability_violations(g):
                    continue
                if accept is not None and not accept(g):
                    continue
                if not rigid:
                    key = canonical_key(g, ordered_legs=False)
                    if key in seen:
                        continue
                    seen.add(key)
                yield g


def enumerate_flat_graphs(caps: Caps) -> Iterator[DecoratedGraph]:
    return enumerate_graphs(caps, flat_only=True)


def pure_loops(caps: Caps, flat_only: bool = True) -> Iterator[DecoratedGraph]:
    """Connected pure loops (cycles of unstable genus-0 vertices, no legs)
    within `caps`, one per isomorphism class, shortest first."""
    if caps.max_genus < 1:
        return
    for length in range(2, caps.max_edges + 1):
        found = {}
        for levels in itertools.product(_LEVELS, repeat=length):
            if any(levels[i] is levels[(i + 1) % length] for i in range(length)):
                continue
            ends = [(i, (i + 1) % length) for i in range(length)] if length > 2 else [(0, 1), (0, 1)]
            pairs = tuple(sorted(
                (a, b) if levels[a].rank < levels[b].rank else (b, a) for a, b in ends
            ))
            sk = Skeleton(levels, (False,) * length, (0,) * length, pairs)
            found.setdefault(canonical_key(sk.graph()), sk)
        for key in sorted(found):
            sk = found[key]
            special = _special_flags(sk, ())
            seen: set[tuple] = set()
            classes = [edge_class_between(sk.levels[a], sk.levels[b]) for a, b in sk.pairs]
            for decos in _edge_decorations(classes, sk.pairs, special, caps.max_degree):
                g = _assemble(sk, (), decos, special, classes=classes)
                if flat_only and balanced_vertices(g):
                    continue
                ck = canonical_key(g)
                if ck not in seen:
                    seen.add(ck)
                    yield g


def balanced_expansions(graph: DecoratedGraph, max_new: int, max_edges: int) -> Iterator[DecoratedGraph]:
    """Graphs that flatten back to `graph` by undoing 1..max_new flattenings.

    Each chosen special E0Inf edge becomes E01 + unstable level-1 vertex +
    E1Inf (scheme or orbifold point at inf), so every output has exactly
    that many balanced vertices.  One graph per isomorphism class.
    """
    pool = [e for e in graph.edges if e.cls is EdgeClass.E0INF and e.special_at_inf]
    room = min(max_new, max_edges - len(graph.edges), len(pool))
    # with no automorphisms, distinct choices give distinct graphs
    shapes = [(e.end_a, e.end_b, _edge_label(e)) for e in pool]
    dedupe = len(set(shapes)) < len(shapes) or not is_rigid(graph, ordered_legs=False)
    seen: set[tuple] = set()
    for k in range(1, room + 1):
        for chosen in itertools.combinations(pool, k):
            for orbs in itertools.product((False, True), repeat=k):
                g = graph
                for e, orb in zip(chosen, orbs):
                    g = _expand_edge(g, e, orb)
                if dedupe:
                    key = canonical_key(g, ordered_legs=False)
                    if key in seen:
                        continue
                    seen.add(key)
                yield g


def _expand_edge(graph: DecoratedGraph, e: Edge, orbifold: bool) -> DecoratedGraph:
    hour = graph.vertex_map[e.end_a].hour
    mid = Vertex(f"{e.id}.q", Level.ONE, stable=False, hour=hour)
    low = Edge(f"{e.id}.a", e.end_a, mid.id, EdgeClass.E01, e.deg_inf, Fraction(0))
    high = Edge(f"{e.id}.b", mid.id, e.end_b, EdgeClass.E1INF, Fraction(0), e.deg_inf,
                orbifold, True)
    edges = []
    for x in graph.edges:
        edges.extend((low, high) if x.id == e.id else (x,))
    return DecoratedGraph(graph.vertices + (mid,), tuple(edges), graph.legs, graph.deg_l2)


def count_by_class(stream: Iterable[DecoratedGraph]) -> dict[tuple[bool, bool], int]:
    table = {(r, p): 0 for r in (False, True) for p in (False, True)}
    for g in stream:
        c = classify(g)
        table[(c.is_regular, c.is_pure_loop)] += 1
    return table


# ---------------------------------------------------------------- naive oracle


def _locally_valid_edges(lo: Level, hi: Level, cap: int) -> list[tuple[Fraction, Fraction, bool, bool]]:
    """Edge decorations with no edge-local violation, found by asking
    `validate` about a two-vertex graph holding just that edge."""
    cls = edge_class_between(lo, hi)
    out = []
    grid = [Fraction(t, 3) for t in range(-3 * cap, 3 * cap + 1)]
    for d0, di in itertools.product(grid, repeat=2):
        for orb, spec in itertools.product((False, True), repeat=2):
            g = DecoratedGraph(
                (Vertex("a", lo), Vertex("b", hi)),
                (Edge("e", "a", "b", cls, d0, di, orb, spec),),
            )
            msgs = [m for m in validate(g) if "specialAtInf must be" not in m]
            if not msgs:
                out.append((d0, di, orb, spec))
    return out


def _locally_valid_legs(level: Level) -> list[Monodromy]:
    out = []
    for mono in Monodromy:
        if mono is Monodromy.BROAD:
            continue
        g = DecoratedGraph((Vertex("a", level),), (), (Leg("l", "a", 0, mono),))
        if not validate(g):
            out.append(mono)
    return out


def naive_flat_graphs(caps: Caps) -> set[bytes]:
    """Brute-force reference for the enumerator.

    Walks every labelled vertex/edge/leg assignment on up to max_edges+1
    vertices, keeps what passes validate, realizability, flatness,
    connectivity and the caps, and deduplicates by canonical form.  Only
    usable for tiny caps.
    """
    from .graph import total_degree, total_genus

    edge_opts = {
        (lo, hi): _locally_valid_edges(lo, hi, caps.max_degree)
        for lo in _LEVELS for hi in _LEVELS if lo.rank < hi.rank
    }
    leg_opts = {lv: _locally_valid_legs(lv) for lv in _LEVELS}
    out: set[bytes] = set()
    for n in range(1, caps.max_edges + 2):
        for levels in itertools.product(_LEVELS, repeat=n):
            pairs_all = [(i, j) for i in range(n) for j in range(n)
                         if levels[i].rank < levels[j].rank]
            leg_slots = [(i, m) for i in range(n) for m in leg_opts[levels[i]]]
            for m in range(caps.max_edges + 1):
                for pairs in itertools.product(pairs_all, repeat=m):
                    probe = Skeleton(levels, (True,) * n, (0,) * n, pairs).graph()
                    if len(probe.components) != 1 or total_genus(probe) > caps.max_genus:
                        continue
                    per_edge = [edge_opts[(levels[a], levels[b])] for a, b in pairs]
                    for stable in itertools.product((True, False), repeat=n):
                        for genus in itertools.product(range(caps.max_genus + 1), repeat=n):
                            if sum(genus) + total_genus(probe) > caps.max_genus:
                                continue
                            vs = tuple(Vertex(f"v{i}", levels[i], genus[i], stable=stable[i])
                                       for i in range(n))
                            for decos in itertools.product(*per_edge):
                                es = tuple(
                                    Edge(f"e{k}", f"v{a}", f"v{b}",
                                         edge_class_between(levels[a], levels[b]), *deco)
                                    for k, ((a, b), deco) in enumerate(zip(pairs, decos))
                                )
                                base = DecoratedGraph(vs, es)
                                d0, dinf = total_degree(base)
                                if d0 > caps.max_degree or dinf > caps.max_degree:
                                    continue
                                for nlegs in range(caps.max_legs + 1):
                                    for legs in itertools.combinations_with_replacement(leg_slots, nlegs):
                                        g = DecoratedGraph(vs, es, tuple(
                                            Leg(f"l{p}", f"v{i}", p, mono)
                                            for p, (i, mono) in enumerate(legs)))
                                        if (validate(g) or realizability_violations(g)
                                                or balanced_vertices(g)):
                                            continue
                                        out.add(canonical_form(g, ordered_legs=False))
    return out
