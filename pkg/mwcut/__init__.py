"""
mwcut - approximate multiway cuts by LP rounding.

Solves the distance LP relaxation of directed and node-weighted multiway cut
with a multiplicative-weights flow solver and rounds any feasible fractional
solution with near-linear-time ball-cutting schemes: 2-approximate for the
directed edge-weighted problem, 2(1-1/k)-approximate for the node-weighted one.
"""

__version__ = "0.1.0"
