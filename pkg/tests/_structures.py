"""Shared hand-built nodes used across the test modules."""

from bac import Arrow, Node

EMPTY = Node(())

# one boundaryless object
PT = Node([Arrow({0: 1}, EMPTY)])

# two disjoint boundaryless objects (also the node of a plain segment)
TWO = Node([Arrow({0: 1}, EMPTY), Arrow({0: 2}, EMPTY)])
NSEG = TWO

# a segment: object 1 with endpoints 2 and 3
SEG = Node([Arrow({0: 1, 1: 2, 2: 3}, NSEG)])

# a circle: a segment whose endpoints are glued to one vertex
CIRC = Node([Arrow({0: 1, 1: 2, 2: 2}, NSEG)])

# two segments (1 and 2) sharing the vertex 3
VEE = Node([Arrow({0: 1, 1: 3, 2: 4}, NSEG), Arrow({0: 2, 1: 3, 2: 5}, NSEG)])

# two disjoint segments; splitting VEE's shared vertex lands here
TSD = Node([Arrow({0: 1, 1: 3, 2: 4}, NSEG), Arrow({0: 2, 1: 6, 2: 5}, NSEG)])

# a plane (1) covering a point (2)
PP2 = Node([Arrow({0: 1, 1: 2}, PT), Arrow({0: 2}, EMPTY)])

# a bigon: two segments sharing both endpoints
BIGON = Node([Arrow({0: 1, 1: 3, 2: 4}, NSEG), Arrow({0: 2, 1: 3, 2: 4}, NSEG)])

# the seven-facet cone: volume, lateral face, base disk, rim circle,
# rim arc, rim vertex, apex
CNODE = Node([Arrow({0: 1, 1: 2, 2: 2}, NSEG)])
DNODE = Node([Arrow({0: 1, 1: 2, 2: 3}, CNODE)])
LNODE = Node([Arrow({0: 1, 1: 2, 2: 3}, CNODE), Arrow({0: 4}, EMPTY)])
VNODE = Node([Arrow({0: 1, 1: 3, 2: 4, 3: 5, 4: 6}, LNODE), Arrow({0: 2, 1: 3, 2: 4, 3: 5}, DNODE)])
CONE = Node([Arrow({0: 1, 1: 2, 2: 3, 3: 4, 4: 5, 5: 6, 6: 7}, VNODE)])

# a pinch: object 1 covers object 2 twice and object 3 once
N3 = Node([Arrow({0: 1}, EMPTY), Arrow({0: 2}, EMPTY), Arrow({0: 3}, EMPTY)])
PINCH = Node([Arrow({0: 1, 1: 2, 2: 2, 3: 3}, N3), Arrow({0: 2}, EMPTY), Arrow({0: 3}, EMPTY)])
