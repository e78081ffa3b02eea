from __future__ import annotations

from fractions import Fraction as F

import pytest

from msploc.graph import DecoratedGraph, Edge, EdgeClass, Leg, Level, Monodromy, Vertex

ZERO, ONE, INF = Level.ZERO, Level.ONE, Level.INF
PHI, RHO, M1, M2, BROAD = (
    Monodromy.ONE_PHI, Monodromy.ONE_RHO, Monodromy.M1, Monodromy.M2, Monodromy.BROAD,
)


def V(vid, level, genus=0, stable=True, hour=None, deg0=0, deg_inf=0):
    return Vertex(vid, level, genus=genus, deg0=F(deg0), deg_inf=F(deg_inf), stable=stable, hour=hour)


def U(vid, level, hour=None):
    """Unstable point."""
    return Vertex(vid, level, stable=False, hour=hour)


def e01(eid, a, b, d):
    return Edge(eid, a, b, EdgeClass.E01, F(d), F(0))


def e1inf(eid, a, b, d, special, orbifold=False):
    return Edge(eid, a, b, EdgeClass.E1INF, F(0), -F(d), orbifold, special)


def e0inf(eid, a, b, dinf, special):
    return Edge(eid, a, b, EdgeClass.E0INF, F(dinf), F(dinf), False, special)


def graph(vertices, edges=(), legs=(), deg_l2=0):
    """Legs given as (vertex, monodromy) pairs, numbered in order."""
    ls = [Leg(f"l{i}", v, i, m) for i, (v, m) in enumerate(legs)]
    return DecoratedGraph.build(vertices, edges, ls, F(deg_l2))


def string_graph():
    # one E0Inf edge between unstable ends, broad marking at inf
    return graph(
        [U("p0", ZERO), U("pinf", INF)],
        [e0inf("e", "p0", "pinf", 1, special=True)],
        [("pinf", BROAD)],
    )


def pure_loop(length=4, dinf=1):
    """Cycle of unstable level-0 / level-inf points joined by E0Inf edges."""
    assert length % 2 == 0
    vs = [U(f"u{i}", ZERO if i % 2 == 0 else INF) for i in range(length)]
    es = []
    for i in range(length):
        a, b = f"u{i}", f"u{(i + 1) % length}"
        lo, hi = (a, b) if i % 2 == 0 else (b, a)
        es.append(e0inf(f"e{i}", lo, hi, dinf, special=True))
    return graph(vs, es)


def balanced_path(d=1, orbifold=False):
    """v0 -(E01, d)- q -(E1Inf, -d, special)- vinf, with q balanced."""
    return graph(
        [V("v0", ZERO), U("q", ONE), V("vinf", INF)],
        [e01("a", "v0", "q", d), e1inf("b", "q", "vinf", -d, special=True, orbifold=orbifold)],
    )


def simple_irregular():
    """Stable level-0 vertex joined to a stable level-inf vertex by one E0Inf edge."""
    return graph([V("v0", ZERO), V("vinf", INF)], [e0inf("e", "v0", "vinf", 1, special=True)])


@pytest.fixture
def string():
    return string_graph()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
