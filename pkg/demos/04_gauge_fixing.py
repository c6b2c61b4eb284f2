"""Two gauge-field rules that describe the same physics.

Advecting A and advecting-then-flipping A both keep F at zero, so every run
of one is a gauge transform of a run of the other and J agrees. A frozen rule
keeps whatever F it starts with, so it is a different theory; the check
refuses to compare it.
"""
from gaugeca.dynamics import SRule
from gaugeca.verify import PreconditionError, check_gauge_fixing_soundness, check_s_rule_curvature

print(check_s_rule_curvature().format())
print(check_gauge_fixing_soundness(SRule.ADVECT, SRule.ADVECT_FLIP).format(timing=True))
print(check_gauge_fixing_soundness(SRule.ADVECT, SRule.ADVECT).format())
try:
    check_gauge_fixing_soundness(SRule.ADVECT, SRule.FROZEN)
except PreconditionError as exc:
    print("advect vs frozen:", exc)
