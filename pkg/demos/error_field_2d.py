"""
Where the error lives in 2-D
============================

``u = r^(1/2)`` on ``[-1, 1]^2`` with the artificial interface ``r = 0.5``.
This script solves at ``N = 160``, bins the nodal error by signed distance
to the interface, and writes the full field as ``x,y,value`` lines that any
plotting tool can read.
"""

import sys

import numpy as np

from lowreg import solve_case
from lowreg.harness import builtin_case, emit_field

case = builtin_case("poisson2d-radial", n=160, order=2)
result = solve_case(case)
xy = case.grid.coordinates()
err = result.u_full - case.exact_solution(xy)

print(f"k = {result.k[0]:.10f}   (exact 1)")
print(f"max |error| = {np.abs(err).max():.3e}")

# Signed distance to the circle: negative inside, where the solution is the
# mode expansion k r^(1/2), positive outside.
phi = case.iface.level(xy)
edges = np.arange(-0.5, 0.95, 0.05)
print("\n   distance        max |error|")
for lo, hi in zip(edges, edges[1:]):
    sel = (phi >= lo) & (phi < hi)
    if sel.any():
        print(f"[{lo:+.2f}, {hi:+.2f})   {np.abs(err[sel]).max():.3e}")

if len(sys.argv) > 1:
    emit_field(case.grid, err, sys.argv[1])
    print(f"\nfield written to {sys.argv[1]}")
