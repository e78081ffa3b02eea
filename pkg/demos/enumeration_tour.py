"""
Counting flat graphs
====================

Stream flat graphs within small caps, split them by class and certify the
irregular ones.  Raise the caps to watch the counts grow.
"""

import sys
import time
from collections import Counter

from msploc.enumeration import Caps, count_by_class, enumerate_flat_graphs, pure_loops
from msploc.graph import classify
from msploc.reduce import certify_vanishing
from msploc.vdim import vdim

caps = Caps(*(int(x) for x in sys.argv[1:5])) if len(sys.argv) > 4 else Caps(1, 3, 1, 2)
print(caps)

t = time.perf_counter()
graphs = list(enumerate_flat_graphs(caps))
print(len(graphs), "flat graphs in", round(time.perf_counter() - t, 2), "s")
print("by edge count:", dict(sorted(Counter(len(g.edges) for g in graphs).items())))

# keys are (regular, pure loop)
print("by class:", count_by_class(graphs))

verdicts = Counter(
    certify_vanishing(g).verdict.value
    for g in graphs
    if not classify(g).is_regular and not classify(g).is_pure_loop
)
print("irregular verdicts:", dict(verdicts))

# pure loops sit exactly at dimension zero
loops = list(pure_loops(caps))
print(len(loops), "pure loops, vdims:", {str(vdim(g)) for g in loops})
