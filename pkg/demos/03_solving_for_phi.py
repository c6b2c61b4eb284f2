"""Recovering the gauge transformation between two gauge diagrams.

Two gauge diagrams are related by some phi exactly when their curvatures
agree and the row-0 holonomy closes around the ring. The solver builds phi
one row at a time and reports which of the two conditions fails otherwise.
"""
import numpy as np

from gaugeca.lattice import phi_random
from gaugeca.render import render_text
from gaugeca.symmetry import GaugeObstruction, compute_F, gauge_A, solve_gauge
from gaugeca.verify import check_remark1

rng = np.random.default_rng(5)
a = rng.integers(0, 2, (4, 6, 2), dtype=np.uint8)
phi0 = phi_random(6, 5, seed=9)
b = gauge_A(a, phi0)

print("F(a) == F(b):", np.array_equal(compute_F(a), compute_F(b)))
for seed in ("00", "10"):
    phi = solve_gauge(a, b, seed=seed)
    print(f"seed {seed}: phi reproduces b: {np.array_equal(gauge_A(a, phi), b)}")
    print(render_text(phi))

bent = b.copy()
bent[2, 3, 0] ^= 1
try:
    solve_gauge(a, bent)
except GaugeObstruction as exc:
    print("after flipping one edge:", exc)

wound = a.copy()
wound[:, :, 0] ^= 1  # a full turn of A_r: same F, but no phi
print("F unchanged by the winding:", np.array_equal(compute_F(a), compute_F(wound)))
try:
    solve_gauge(a, wound)
except GaugeObstruction as exc:
    print("winding:", exc)
print()

# every pair of N=2, T=1 gauge diagrams, against brute force over all phi
print(check_remark1(n=2, t=1).format(timing=True))
