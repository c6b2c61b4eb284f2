"""Coupling a gauge field, and how its own rule shapes the physics.

With the gauge field in place every local flip has a compensating change of
A, so the gauged rule is covariant. The curvature F is the gauge-invariant
content of A; two rules that keep F at zero give the same J field, while a
frozen defect with F != 0 changes it.
"""
import numpy as np

from gaugeca.gallery import gauge_dynamics_examples
from gaugeca.render import render_text
from gaugeca.symmetry import compute_F, compute_J
from gaugeca.verify import check_local_covariance_R_A, mutation_reports

print(check_local_covariance_R_A().format())
print("dropping any single term of the transformation law breaks it:")
for term, report in mutation_reports().items():
    print(f"  without {term:12} {report.verdict.value:5} ({report.details['failing_cases']} of {report.cases})")
print()

runs = gauge_dynamics_examples()
for name, c in runs.items():
    f = compute_F(c.gauge)
    print(f"{name}: plaquettes with F=1: {int(f.sum())}")
    print(render_text(c))

j = {name: compute_J(c.psi) for name, c in runs.items()}
print("J(advect) == J(advect_flip):", np.array_equal(j["advect"], j["advect_flip"]))
print("J(advect) == J(advect_other):", np.array_equal(j["advect"], j["advect_other"]))
print("J(advect) == J(frozen):     ", np.array_equal(j["advect"], j["frozen"]))
print(render_text(runs["frozen"].psi, j_field=True))
