import math
import re
import xml.etree.ElementTree as ET

import pytest

from trialbf.bayes import Truncation
from trialbf.effects import LogEffect
from trialbf.sensitivity import GridSpec, grid_eval
from trialbf.svg import ABSENT_FILL, PALETTE, colour_index, render_svg

from conftest import GOLDEN

NS = {"svg": "http://www.w3.org/2000/svg"}


def small_grid():
    effect = LogEffect(-0.04, 0.02)
    spec = GridSpec(math.log(0.5), 0.0, 0.0, 1.0, 2, 2, Truncation.NEGATIVE_ONLY)
    return grid_eval(effect, spec)


def cells(svg: str):
    root = ET.fromstring(svg.encode("utf-8"))
    group = root.find("svg:g[@id='cells']", NS)
    return group.findall("svg:rect", NS)


def test_two_by_two_golden():
    svg = render_svg(small_grid(), design_effect=0.7, scale_name="HR")
    assert len(cells(svg)) == 4
    assert svg == (GOLDEN / "grid_2x2.svg").read_text(encoding="utf-8")


def test_render_is_deterministic(ex2):
    spec = GridSpec.for_effect(ex2, n_mu=15, n_tau=9)
    a = render_svg(grid_eval(ex2, spec), None, "OR")
    b = render_svg(grid_eval(ex2, spec, workers=4), None, "OR")
    assert a == b


def test_one_rect_per_cell_and_absent_cells_grey(ex1):
    g = grid_eval(ex1, GridSpec.for_effect(ex1, n_mu=7, n_tau=5))
    rects = cells(render_svg(g))
    assert len(rects) == 35
    # the tau = 0, mu = 0 point prior sits outside the negative-only support
    assert sum(r.get("fill") == ABSENT_FILL for r in rects) == 1


def test_design_effect_line_only_when_given(ex1):
    g = grid_eval(ex1, GridSpec.for_effect(ex1, n_mu=5, n_tau=3))
    with_line = render_svg(g, 0.7, "HR")
    root = ET.fromstring(with_line.encode("utf-8"))
    line = root.find("svg:line[@id='design-effect']", NS)
    assert line is not None and line.get("stroke-dasharray")
    assert 'id="design-effect"' not in render_svg(g, None, "HR")


def test_max_annotation_text(ex1):
    g = grid_eval(ex1, GridSpec.for_effect(ex1))
    svg = render_svg(g, 0.7, "HR")
    m = re.search(r'id="max-annotation"[^>]*>max BF10 = ([0-9.]+)', svg)
    assert m and abs(float(m.group(1)) - 7.46) <= 0.01


def test_palette_shape():
    assert len(PALETTE) == 256 and len(set(PALETTE)) > 200
    assert PALETTE[0] == "#b2182b" and PALETTE[-1] == "#2166ac"


@pytest.mark.parametrize(
    "bf, idx", [(1e-9, 0), (0.01, 0), (1.0, 128), (100.0, 255), (1e9, 255)]
)
def test_colour_index_clips_at_both_ends(bf, idx):
    assert colour_index(bf, 0.01) == idx


def test_colour_index_monotone():
    idx = [colour_index(10 ** (k / 10), 0.01) for k in range(-30, 31)]
    assert idx == sorted(idx)
