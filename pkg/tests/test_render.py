from rauzy_engine import run_induction
from render import render_ascii, render_svg, trace_rows


def test_rows_follow_reductions(ten_four):
    t = run_induction(ten_four)
    rows = trace_rows(t)
    assert [caption for caption, _ in rows] == ["initial", "b>a", "c>a"]
    assert rows[-1][1] == t.final


def test_svg_has_one_baseline_per_row(ten_four):
    svg = render_svg(run_induction(ten_four))
    assert svg.startswith("<?xml")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count('stroke:#000000;stroke-width:1.50') == 3
    assert "b&gt;a" in svg


def test_ascii_marks_each_pair(ten_four):
    text = render_ascii(run_induction(ten_four), width=30)
    lines = text.splitlines()
    assert lines[0].startswith("  0 initial  [0.000, 15.000]")
    assert any(line.startswith("  c ") for line in lines)
    assert "  2 c>a  [0.000, 10.000]" in lines


def test_render_is_deterministic(ten_four):
    t = run_induction(ten_four)
    assert render_svg(t) == render_svg(t)
