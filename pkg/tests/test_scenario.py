import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugeca.dynamics import FREE, MatterRule, SRule, TheorySpec, gauged, run
from gaugeca.lattice import PLUS, JointDiagram, all_rows, single_site
from gaugeca.scenario import (ScenarioError, format_diagram, format_field, format_scenario, load_scenario,
                              parse_diagram, parse_field, parse_scenario)

MINIMAL = "N=4\nT=3\nrule=R\npsi0=00 01 00 00\n"


def test_minimal_free_scenario():
    sc = parse_scenario(MINIMAL)
    assert sc.spec == FREE and (sc.width, sc.horizon) == (4, 3)
    assert np.array_equal(sc.psi0, single_site(4, 1, PLUS))
    assert np.array_equal(sc.run().psi[3], single_site(4, 0, PLUS))


def test_gauged_zero_reproduces_free():
    sc = parse_scenario("N=4\nT=3\nrule=RA\nS=advect\npsi0=00 01 00 00\na0=00 00 00 00\n")
    assert sc.spec == gauged(SRule.ADVECT)
    assert np.array_equal(sc.run().psi, parse_scenario(MINIMAL).run().psi)


def test_bad_phi_token_names_line_and_token():
    text = "N=2\nT=0\nrule=R\npsi0=00 00\nphi=\n  0 1\n  0 2\n"
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert info.value.lineno == 7
    assert "'2'" in str(info.value) and str(info.value).startswith("line 7:")


@pytest.mark.parametrize("text,line", [
    ("N=4\nT=1\nrule=R\npsi0=00 01 00\n", 4),                      # too few cells
    ("N=4\nT=1\nrule=R\nrule=R\npsi0=00 01 00 00\n", 4),           # duplicate key
    ("N=4\nT=1\nrule=R\ncolour=red\npsi0=00 01 00 00\n", 4),       # unknown key
    ("N=4\nT=1\nrule=X\npsi0=00 01 00 00\n", 3),                   # bad rule
    ("N=4\nT=1\nrule=R\nS=advect\npsi0=00 01 00 00\n", 4),         # R only with S=none
    ("N=4\nT=1\nrule=RA\nS=none\npsi0=00 01 00 00\nA=\n  00 00 00 00\n", 6),  # T+1 rows
    ("N=4\nT=1\nrule=R\npsi0=00 01 00 00\nsolve_seed=1\n", 5),     # two chains at even N
    ("N=x\nT=1\nrule=R\npsi0=00 01 00 00\n", 1),
])
def test_errors_carry_line(text, line):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert info.value.lineno == line


def test_missing_key():
    with pytest.raises(ScenarioError, match="psi0"):
        parse_scenario("N=4\nT=1\nrule=R\n")


def test_comments_and_blocks():
    text = ("# external gauge field\nN=3\nT=1\nrule=RA\nS=none\npsi0=00 00 00\n"
            "A=\n  10 00 00  # row 0\n  00 00 00\nphi=site:1,2\nsolve_seed=1\n")
    sc = parse_scenario(text)
    assert sc.gauge.shape == (2, 3, 2) and sc.gauge[0, 0, 0] == 1
    assert sc.phi.shape == (3, 3) and sc.phi[2, 1] == 1
    assert sc.solve_seed == (1,)
    assert parse_scenario(format_scenario(sc)) == sc


@pytest.mark.parametrize("phi", ["const:1", "seed:42", "site:0,0", "\n  1 0 1\n  0 0 0\n  1 1 1"])
def test_phi_forms_round_trip(phi):
    sc = parse_scenario(f"N=3\nT=1\nrule=RA\nS=frozen\npsi0=01 00 00\nphi={phi}\n")
    assert sc.phi.shape == (3, 3)
    assert parse_scenario(format_scenario(sc)) == sc


def test_seeded_phi_is_reproducible():
    text = "N=8\nT=2\nrule=RA\nS=advect\npsi0=" + " ".join(["00"] * 8) + "\nphi=seed:7\n"
    assert np.array_equal(parse_scenario(text).phi, parse_scenario(text).phi)


def test_load_scenario(scenario_file):
    assert load_scenario(scenario_file(MINIMAL)) == parse_scenario(MINIMAL)


@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 3))
def test_joint_diagram_round_trip(i, k, t):
    rows = all_rows(3)
    c = run(gauged(SRule.ADVECT_FLIP), rows[i], rows[k], t)
    kind, back = parse_diagram(format_diagram(c))
    assert kind == "joint" and back == c


def test_gauge_diagram_round_trip():
    g = all_rows(3)[:4]
    kind, back = parse_diagram(format_diagram(g, kind="gauge"))
    assert kind == "gauge" and np.array_equal(back, g)


def test_diagram_errors():
    with pytest.raises(ScenarioError):
        parse_diagram("DIAG N=2 T=1 kind=matter\n00 01\n")
    with pytest.raises(ScenarioError):
        parse_diagram("DIAGRAM\n")
    with pytest.raises(ScenarioError):
        parse_diagram("DIAG N=2 T=0 kind=joint\n00 01 00 00\n")


def test_field_round_trip():
    bits = np.array([[0, 1, 1], [1, 0, 0]], np.uint8)
    name, back = parse_field(format_field("J", bits))
    assert name == "J" and np.array_equal(back, bits)
