import xml.etree.ElementTree as ET

import numpy as np

from gaugeca.gallery import gauge_dynamics_examples, right_mover, two_particles
from gaugeca.render import EMPTY, FILLED, render_svg, render_text
from gaugeca.symmetry import compute_J

SVG = "{http://www.w3.org/2000/svg}"


def test_right_mover_text():
    assert render_text(right_mover(4, 2)) == (
        "2 | □□ □□ □■ □□\n"
        "1 | □□ □■ □□ □□\n"
        "0 | □■ □□ □□ □□\n"
    )


def test_vacuum_text_is_empty():
    text = render_text(np.zeros((3, 4, 2), np.uint8))
    assert FILLED not in text and text.count(EMPTY) == 24


def test_two_particles_cross():
    lines = render_text(two_particles(4, 3)).splitlines()[::-1]
    filled = [[i for i, ch in enumerate(line.split("| ")[1].replace(" ", "")) if ch == FILLED] for line in lines]
    # plus subcells (odd) walk right, minus subcells (even) walk left
    assert filled == [[1, 6], [3, 4], [2, 5], [0, 7]]


def test_joint_text_marks_rows():
    text = render_text(gauge_dynamics_examples(4, 1)["frozen"])
    assert text.splitlines()[0].startswith("1 psi |")
    assert text.splitlines()[1].lstrip().startswith("A |")


def test_j_field_text():
    text = render_text(right_mover(4, 1), j_field=True)
    assert text == "1 | □ ■ □ □\n0 | ■ □ □ □\n"


def parse_svg(doc):
    root = ET.fromstring(doc.split("\n", 1)[1])
    assert root.tag == SVG + "svg"
    return root


def test_svg_structure_and_determinism():
    doc = render_svg(right_mover(4, 3))
    assert doc == render_svg(right_mover(4, 3))
    root = parse_svg(doc)
    groups = root.findall(SVG + "g")
    assert [g.get("id") for g in groups] == ["t0", "t1", "t2", "t3"]
    assert all(len(g) == 8 for g in groups)
    black = [r for r in groups[0] if r.get("fill") == "#000000"]
    assert len(black) == 1
    # t = 0 is drawn lowest
    assert float(groups[0][0].get("y")) > float(groups[3][0].get("y"))


def test_svg_j_layer_one_square_per_cell():
    psi = right_mover(4, 2)
    groups = parse_svg(render_svg(psi, layer="J")).findall(SVG + "g")
    assert all(len(g) == 4 for g in groups)
    shaded = [[r.get("fill") == "#000000" for r in g] for g in groups]
    assert np.array_equal(np.array(shaded), compute_J(psi).astype(bool))


def test_svg_single_row():
    groups = parse_svg(render_svg(np.zeros((1, 3, 2), np.uint8))).findall(SVG + "g")
    assert len(groups) == 1


def test_svg_title_escaped():
    doc = render_svg(right_mover(2, 0), title="a < b & c")
    assert parse_svg(doc).find(SVG + "title").text == "a < b & c"


def test_golden_files():
    from pathlib import Path
    golden = Path(__file__).parent / "golden"
    assert render_svg(right_mover(4, 3)) == (golden / "right_mover.svg").read_text(encoding="utf-8")
    assert render_text(right_mover(4, 3)) == (golden / "right_mover.txt").read_text(encoding="utf-8")
