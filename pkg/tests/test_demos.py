"""Each demo script runs to completion, and the sample scenarios parse."""
import runpy
from pathlib import Path

import pytest

from gaugeca.cli import main
from gaugeca.scenario import load_scenario

DEMOS = Path(__file__).resolve().parents[1] / "demos"


@pytest.mark.parametrize("script", sorted(DEMOS.glob("*.py")), ids=lambda p: p.stem)
def test_demo_runs(script, capsys):
    runpy.run_path(str(script), run_name="__main__")
    assert capsys.readouterr().out


@pytest.mark.parametrize("scenario", sorted((DEMOS / "scenarios").glob("*.txt")), ids=lambda p: p.stem)
def test_sample_scenarios(scenario, capsys):
    sc = load_scenario(scenario)
    assert sc.run().horizon == sc.horizon
    assert main(["simulate", str(scenario)]) == 0
    assert main(["invariants", str(scenario), "--field", "J"]) == 0
    if sc.phi is not None:
        assert main(["transform", str(scenario)]) == 0
