"""Normalize a cycle on Q[1/x] and push each piece through the boundary map.

Run with ``python3 demos/boundary_walkthrough.py``.
"""
from __future__ import annotations

from hpcalc.boundary import boundary, normalize_cycle, verify_boundary_via_fiber
from hpcalc.gca import form_ring

Q = form_ring(["x", "y", "z"], u_inverted=True)
x, dx, dy, dz = Q.gen("x"), Q.d_of("x"), Q.d_of("y"), Q.d_of("z")
L = Q.localize(x)

# dx/x + dx dy dz u / x^2 is closed and homogeneous of degree -1
w = L.coerce(dx) * L.inv_f(1) + (L.coerce(dx * dy * dz) * L.inv_f(2)).shift_u(1)
print("cycle on Q[1/x]:", w)

P = form_ring(["x", "y", "z"])
f = P.gen("x")
for c in normalize_cycle(w):
    print(f"\npiece alpha = {c.alpha}, s = {c.s}, l = {c.l}")
    print("  boundary:", boundary(c, f))
    for check in verify_boundary_via_fiber(c, f):
        print(f"  {check.status.upper():5} {check.name}")
