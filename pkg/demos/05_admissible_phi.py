"""Which phi fields map every valid diagram of a theory to a valid one.

For the free theory only the constant and checkerboard histories survive
(the last row is unconstrained); once the gauge field is free to absorb the
change, every phi does; a gauge-field rule cuts the set down again.
"""
from gaugeca.dynamics import FREE, MatterRule, SRule, TheorySpec, gauged
from gaugeca.render import render_text
from gaugeca.verify import enumerate_admissible_phi

for spec, n, t in [(FREE, 4, 2), (TheorySpec(MatterRule.GAUGED_R_A, SRule.NONE), 2, 1),
                   (gauged(SRule.ADVECT), 2, 1), (gauged(SRule.ADVECT_FLIP), 2, 1)]:
    adm, report = enumerate_admissible_phi(spec, n, t)
    print(f"{spec.name:14} N={n} T={t}: {adm.count} of {adm.total} phi fields admissible")

adm, _ = enumerate_admissible_phi(FREE, 4, 2)
print("\nthe first admissible phi fields of the free theory:")
for phi in adm.fields()[:4]:
    print(render_text(phi))
