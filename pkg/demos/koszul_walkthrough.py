"""Koszul duality and truncated Koszul homology for small sequences.

Run with ``python3 demos/koszul_walkthrough.py``.
"""
from __future__ import annotations

from hpcalc.gca import form_ring
from hpcalc.linhom import truncated_koszul_homology
from hpcalc.matrix import format_matrix
from hpcalc.mfkoszul import koszul_complex, phi_koszul_dual

P = form_ring(["x", "y"])
x, y = P.gen("x"), P.gen("y")

mf = phi_koszul_dual(koszul_complex([x * x, y]))
print("dual of the Koszul complex on (x^2, y)")
print("  A =", format_matrix(mf.A))
print("  B =", format_matrix(mf.B))
print("  potential =", mf.potential, " AB = BA = pot I:", mf.check())

for fs, label in [([x * x], "(x^2)"), ([x, y], "(x, y)"), ([x, x], "(x, x)")]:
    dims = truncated_koszul_homology(fs, 4)
    regular = all(v == 0 for p, v in dims.items() if p != 0)
    print(f"{label:8} degree <= 4: {dims} {'regular' if regular else 'not regular'}")
