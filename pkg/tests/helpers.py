from __future__ import annotations

import random

from hpcalc.gca import form_ring
from hpcalc.sampling import random_element


def forms(*names, u_inverted=True):
    R = form_ring(list(names), u_inverted=u_inverted)
    return R, [R.gen(n) for n in names], [R.d_of(n) for n in names]


def homogeneous_sample(ring, seed, **kw):
    rng = random.Random(seed)
    kw.setdefault("u_range", (-1, 1) if ring.u_inverted else (0, 1))
    return random_element(ring, rng, homogeneous=True, **kw)


def sign(k: int) -> int:
    return -1 if k % 2 else 1
