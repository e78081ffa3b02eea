"""Virtual-dimension counts and the maximal-chain decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import (
    DecoratedGraph, EdgeClass, Level, Monodromy, betti, is_pure_loop, total_degree, total_genus,
)


class FormulaDomainError(ValueError):
    pass


class ChainError(ValueError):
    pass


def special_case_violations(graph: DecoratedGraph, allow_strings: bool = False) -> list[str]:
    """Reasons why `graph` falls outside the no-string, no-level-1 case."""
    out = []
    if any(v.level is Level.ONE for v in graph.vertices):
        out.append("graph has level-1 vertices")
    if any(l.monodromy in (Monodromy.M1, Monodromy.ONE_RHO) for l in graph.legs):
        out.append("graph has m=1 or (1,rho) legs")
    if not allow_strings and strings(graph):
        out.append("graph has strings")
    return out


def strings(graph: DecoratedGraph) -> list[str]:
    """Ids of E0Inf edges whose level-0 end is unstable and carries no other edge."""
    out = []
    for e in graph.edges:
        if e.cls is not EdgeClass.E0INF:
            continue
        v0 = graph.vertex_map[e.end_a]
        if not v0.stable and len(graph.incident[v0.id]) == 1:
            out.append(e.id)
    return out


def _require(graph: DecoratedGraph, allow_strings: bool) -> None:
    problems = special_case_violations(graph, allow_strings)
    if problems:
        raise FormulaDomainError("formula domain: " + problems[0])


def dim_D(graph: DecoratedGraph) -> int:
    _require(graph, allow_strings=True)
    stable = [v for v in graph.vertices if v.stable]
    local = sum(
        3 * v.genus - 3 + len(graph.incident[v.id]) + len(graph.legs_at[v.id]) for v in stable
    )
    return local + sum(3 * v.genus for v in stable) + 3 * betti(graph) - len(graph.edges) - 3


def chi_mu_nu(graph: DecoratedGraph) -> int:
    return sum(1 - v.genus for v in graph.vertices if v.level in (Level.ZERO, Level.INF))


def chi_fields(graph: DecoratedGraph) -> Fraction:
    g = total_genus(graph)
    d0, dinf = total_degree(graph)
    deg_l1 = d0 - dinf
    deg_l2 = graph.deg_l2
    n_phi = sum(1 for l in graph.legs if l.monodromy is Monodromy.ONE_PHI)
    n_rho = sum(1 for l in graph.legs if l.monodromy is Monodromy.ONE_RHO)
    m_sum = sum((Fraction(l.monodromy.m) for l in graph.legs if l.monodromy.m != 0), Fraction(0))
    return (
        -3 * n_phi
        + 3 * (deg_l1 + 1 - g - m_sum / 3)
        + 3 * (deg_l2 + 1 - g)
        + (2 * g - 2 + len(graph.legs) - 3 * deg_l1 - 3 * deg_l2 - n_rho + 1 - g)
    )


@dataclass(frozen=True)
class VdimBreakdown:
    dimD: int
    chiMuNu: int
    chiFields: Fraction
    total: Fraction


def vdim_breakdown(graph: DecoratedGraph) -> VdimBreakdown:
    """The three-part count dim D + chi(mu, nu) + chi(phi, theta, rho).

    Strings are allowed here so that the string graph can be evaluated.
    """
    a, b, c = dim_D(graph), chi_mu_nu(graph), chi_fields(graph)
    return VdimBreakdown(a, b, c, a + b + c)


def _leg_term(graph: DecoratedGraph, vid: str) -> Fraction:
    """Contribution of the legs at one vertex to the closed formula."""
    v = graph.vertex_map[vid]
    total = Fraction(0)
    for l in graph.legs_at[vid]:
        if l.monodromy is Monodromy.ONE_PHI:
            total -= 2
        if l.monodromy.m != 0:
            total -= l.monodromy.m - 2
        if v.stable and v.level is Level.INF and l.monodromy.m == 0:
            total += 1
    return total


def vdim(graph: DecoratedGraph) -> Fraction:
    """Closed-form virtual dimension of a special-case graph.

    Pure loops are accepted whatever their levels; the value is then 0.
    """
    if not is_pure_loop(graph):
        _require(graph, allow_strings=False)
    stable_edges = sum(len(graph.incident[v.id]) for v in graph.vertices if v.stable)
    unstable = sum(1 for v in graph.vertices if not v.stable)
    legs = sum((_leg_term(graph, v.id) for v in graph.vertices), Fraction(0))
    return stable_edges + legs - 3 * (len(graph.edges) - unstable)


@dataclass(frozen=True)
class Chain:
    edges: tuple[str, ...]
    inner: tuple[str, ...]
    ends: tuple[str, str]
    end_stable: tuple[bool, bool]


def _passes_through(graph: DecoratedGraph, vid: str) -> bool:
    return not graph.vertex_map[vid].stable and len(graph.incident[vid]) == 2


def maximal_chains(graph: DecoratedGraph) -> list[Chain]:
    """Split the edge set into maximal paths through unstable 2-edge vertices.

    Chains are oriented so that a stable end, if any, comes first.
    """
    used: set[str] = set()
    chains = []
    for start in graph.edges:
        if start.id in used:
            continue
        # walk backwards to an end of the chain
        prev_v, e = start.end_b, start
        seen = {e.id}
        while True:
            vid = e.other(prev_v)
            if not _passes_through(graph, vid):
                break
            inc = graph.incident[vid]
            nxt = inc[1] if inc[0] is e else inc[0]
            if nxt.id in seen:
                raise ChainError("no chain decomposition")
            seen.add(nxt.id)
            prev_v, e = vid, nxt
        # e is an end edge, e.other(prev_v) is a chain end; walk forward
        head = e.other(prev_v)
        edges, inner = [e.id], []
        cur, here = e, prev_v
        while _passes_through(graph, here):
            inc = graph.incident[here]
            nxt = inc[1] if inc[0] is cur else inc[0]
            inner.append(here)
            edges.append(nxt.id)
            here, cur = nxt.other(here), nxt
        tail = here
        used.update(edges)
        ends = (head, tail)
        stab = (graph.vertex_map[head].stable, graph.vertex_map[tail].stable)
        if not stab[0] and stab[1]:
            ends, stab = (tail, head), (stab[1], stab[0])
            edges.reverse()
            inner.reverse()
        chains.append(Chain(tuple(edges), tuple(inner), ends, stab))
    return chains


def chain_contribution(graph: DecoratedGraph, chain: Chain) -> Fraction:
    """Additive share of a chain (its edges, inner vertices and unstable ends)."""
    total = Fraction(sum(chain.end_stable)) - 3 * len(chain.edges) + 3 * len(chain.inner)
    ends = set(chain.ends)
    for vid, st in zip(chain.ends, chain.end_stable):
        if st or vid not in ends:
            continue
        ends.discard(vid)
        v = graph.vertex_map[vid]
        phis = [l for l in graph.legs_at[vid] if l.monodromy is Monodromy.ONE_PHI]
        if v.level is not Level.INF or len(phis) != 1 or len(graph.legs_at[vid]) != 1:
            raise ChainError("inconsistent decoration")
        total += 3 + _leg_term(graph, vid)
    return total


def residual_contribution(graph: DecoratedGraph) -> Fraction:
    """Leg terms on stable vertices plus the share of isolated unstable vertices."""
    total = Fraction(0)
    for v in graph.vertices:
        if v.stable:
            total += _leg_term(graph, v.id)
        elif not graph.incident[v.id]:
            total += 3 + _leg_term(graph, v.id)
    return total


def chain_sum(graph: DecoratedGraph) -> Fraction:
    """Closed-form vdim rebuilt from chain shares; equals `vdim` on its domain."""
    _require(graph, allow_strings=False)
    return sum(
        (chain_contribution(graph, c) for c in maximal_chains(graph)), Fraction(0)
    ) + residual_contribution(graph)
