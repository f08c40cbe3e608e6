"""Chern characters of two matrix factorizations and the commuting square.

For each factorization this prints ch1 on Q[1/f], ch0 in the deformation
ring, the boundary of every normalized piece of ch1, and the square checks.

Run with ``python3 demos/chern_walkthrough.py``.
"""
from __future__ import annotations

from hpcalc.boundary import boundary
from hpcalc.matrix import format_matrix
from hpcalc.mfkoszul import ch0_mf, ch1_mf, mf_corpus, square_classes, verify_square

corpus = mf_corpus()
for name in ("x^1,x^1", "rotation"):
    mf = corpus[name]
    print(f"== {name}: f = {mf.potential}")
    print("   A =", format_matrix(mf.A), " B =", format_matrix(mf.B))
    print("   ch1 =", ch1_mf(mf))
    print("   ch0 =", ch0_mf(mf))
    for c in square_classes(mf):
        print(f"   boundary(alpha = {c.alpha}, s = {c.s}, l = {c.l}) = {boundary(c, mf.potential)}")
    for check in verify_square(mf):
        print(f"   {check.status.upper():5} {check.name}")
