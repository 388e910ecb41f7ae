import xml.etree.ElementTree as ET

import pytest

from flatblock import build_teepee, clearance, decompose_direction, fixture, normalize_for_teepee, render_svg
from flatblock.fixtures import NAMES

NS = "{http://www.w3.org/2000/svg}"


def _count(svg, cls):
    root = ET.fromstring(svg)
    return sum(1 for el in root.iter() if el.get("class") == cls)


@pytest.mark.parametrize("name", NAMES)
def test_well_formed_and_deterministic(name):
    S = fixture(name)
    a, b = render_svg(S), render_svg(fixture(name))
    assert a == b
    root = ET.fromstring(a)
    assert root.tag == NS + "svg"
    assert _count(a, "polygon") == len(S.polygons)
    assert _count(a, "glue") == sum(len(p.vertices) for p in S.polygons)


def test_decomposition_bands():
    S = fixture("L3")
    svg = render_svg(S, {"decomposition": decompose_direction(S, (1, 0))})
    assert _count(svg, "cylinder") == 2
    assert _count(svg, "saddle") >= 3


def test_torus_marks_corner():
    svg = render_svg(fixture("T1"))
    assert _count(svg, "singularity") == 4


def test_teepee_panel():
    setup = normalize_for_teepee(fixture("LX"), (2, 1))
    tp = build_teepee(setup, clearance(setup) / 2)
    svg = render_svg(setup.surface, {"teepee": tp})
    assert _count(svg, "member") == tp.card
    assert _count(svg, "strip") == 1
