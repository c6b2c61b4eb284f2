"""The free theory and its two kinds of flip.

A particle on the ring moves one site per step. Flipping every cell keeps the
diagram valid; flipping a single cell does not, and no later correction can
repair it. The J field is the part that survives both flips.
"""
from gaugeca.dynamics import FREE, is_valid
from gaugeca.gallery import globally_flipped, locally_flipped, right_mover, two_particles
from gaugeca.render import render_text
from gaugeca.verify import check_R_not_gauge_invariant

print("a right mover (minus then plus subcell, time upward)")
print(render_text(right_mover()))

print("two particles crossing")
print(render_text(two_particles()))

flipped = globally_flipped()
print("flipped everywhere, valid:", is_valid(FREE, flipped).ok)
print(render_text(flipped))

local = locally_flipped()
v = is_valid(FREE, local)
print(f"flipped at one site, valid: {v.ok} (first bad cell x={v.x}, t={v.t})")
print(render_text(local))

print("the J field is the same for all three")
print(render_text(right_mover(), j_field=True))

# search every initial row and every space-dependent first phi row at N=4, T=2
report = check_R_not_gauge_invariant()
print(report.format())
