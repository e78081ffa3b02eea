"""
A single graph, end to end
==========================

Build a small decorated graph, flatten it, read off its dimension count
and certify that its contribution vanishes.
"""

from fractions import Fraction as F

from msploc import serialize
from msploc.flatten import balanced_vertices, flatten
from msploc.graph import DecoratedGraph, Edge, EdgeClass, Level, Vertex, classify
from msploc.reduce import certify_vanishing
from msploc.vdim import vdim, vdim_breakdown
from msploc.weights import edge_tangent_weights

# a level-0 vertex, an unstable level-1 point, a level-inf vertex
g = DecoratedGraph.build(
    [Vertex("v0", Level.ZERO), Vertex("q", Level.ONE, stable=False), Vertex("vinf", Level.INF)],
    [Edge("a", "v0", "q", EdgeClass.E01, F(2), F(0)),
     Edge("b", "q", "vinf", EdgeClass.E1INF, F(0), F(2), False, True)],
)

# tangent weights at q cancel, so q is balanced
for e in g.edges:
    print(e.id, edge_tangent_weights(e))
print("balanced:", balanced_vertices(g))

# flattening replaces the path through q by one 0-inf edge
flat = flatten(g)
print(serialize.dumps(flat, compact=True))
print(classify(flat))

# the three-part count agrees with the closed form here
b = vdim_breakdown(flat)
print(b.dimD, b.chiMuNu, b.chiFields, "->", b.total, "closed form:", vdim(flat))

cert = certify_vanishing(flat)
print(cert.verdict.value, [str(x) for x in cert.terminal_vdims])
for step in cert.trace:
    print("  ", step.kind, step.elements)
