"""Z2 gauge field coupled to a reversible partitioned cellular automaton."""
from .dynamics import FREE, MatterRule, SRule, TheorySpec, gauged, is_valid, run, step_R, step_R_A, step_S
from .lattice import GaugeCell, JointDiagram, MatterCell
from .symmetry import (GaugeObstruction, ObstructionKind, compute_F, compute_J, gauge_A, gauge_joint,
                       gauge_psi, solve_gauge)
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario

__version__ = "0.1.0"
