import io

import pytest

from randcarpet.formulas import assouad_spectrum, spectrum_curve
from randcarpet.model import Ensemble, Pattern, generic_example, small_test_pattern
from randcarpet.render import (
    RenderBudgetError, cylinders, emit_dimension_csv, emit_spectrum_csv, render_carpet,
)

SMALL = Ensemble([small_test_pattern()])


def test_single_cell_one_rectangle():
    e = Ensemble([Pattern(2, 4, [(1, 3)])])
    r = render_carpet([1, 1], e, 2, 16)
    # cell (1,3) then (1,3): x in [3/4, 1], y in [15/16, 1] -> top-right strip
    assert r.occupied() == 4 * 1
    assert r.bitmap[0, 12:].all() and not r.bitmap[1:].any()


def test_full_grid_fills_raster():
    e = Ensemble([Pattern.full(2, 3)])
    assert render_carpet([1] * 3, e, 3, 50).bitmap.all()


@pytest.mark.filterwarnings("ignore:column width")
def test_nested_depths():
    e = generic_example()
    w = [2, 1, 1, 2, 1]
    prev = render_carpet(w, e, 1, 256).bitmap
    for d in range(2, 5):
        cur = render_carpet(w, e, d, 256).bitmap
        assert not (cur & ~prev).any()
        prev = cur


def test_fine_columns_warn():
    with pytest.warns(UserWarning, match="below the pixel size"):
        render_carpet([1, 1, 1], generic_example(), 3, 64)


def test_column_projection_counts():
    # at width equal to the column resolution every occupied column is one pixel column
    w = [1, 1, 1]
    r = render_carpet(w, SMALL, 3, 8)
    assert r.bitmap.any(axis=0).sum() == 2 ** 3


def test_cylinder_coordinates():
    x, y, M, N = cylinders([1, 1], SMALL, 2)
    assert (M, N) == (4, 16)
    assert len(x) == 9
    assert sorted(zip(x.tolist(), y.tolist()))[0] == (0, 0)


def test_cylinder_budget():
    import randcarpet.render as rd
    old = rd.MAX_CYLINDERS
    rd.MAX_CYLINDERS = 10
    try:
        with pytest.raises(RenderBudgetError):
            cylinders([1, 1, 1], SMALL, 3)
    finally:
        rd.MAX_CYLINDERS = old


def test_depth_checks():
    with pytest.raises(ValueError):
        cylinders([1], SMALL, 0)
    with pytest.raises(ValueError):
        cylinders([1], SMALL, 2)


def test_pgm_bytes():
    r = render_carpet([1], SMALL, 1, 4)
    data = r.to_pgm("hello")
    head, body = data.split(b"255\n", 1)
    assert head == b"P5\n# hello\n4 4\n"
    assert len(body) == 16
    assert set(body) <= {0, 255}
    assert body.count(0) == r.occupied()


def test_spectrum_csv_columns():
    e = generic_example()
    grid = [0.1, 0.5, 0.9]
    curves = [spectrum_curve(e.single(1), grid, "F1"), spectrum_curve(e, grid, "random")]
    buf = io.StringIO()
    emit_spectrum_csv(curves, buf, header_comment="demo")
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# demo"
    assert lines[1] == "theta,F1,random"
    one, both = (float(v) for v in lines[-1].split(",")[1:])
    assert one == pytest.approx(assouad_spectrum(e.single(1), 0.9), abs=1e-10)
    assert both == pytest.approx(assouad_spectrum(e, 0.9), abs=1e-10)
    assert len(lines) == 5


def test_spectrum_csv_empty_and_mismatch(tmp_path):
    p = tmp_path / "empty.csv"
    emit_spectrum_csv([], p)
    assert p.read_text().strip() == "theta"
    e = generic_example()
    with pytest.raises(ValueError, match="grid mismatch"):
        emit_spectrum_csv([spectrum_curve(e, [0.1, 0.2]), spectrum_curve(e, [0.1, 0.3])], tmp_path / "x")


def test_dimension_csv():
    buf = io.StringIO()
    emit_dimension_csv(spectrum_curve(generic_example(), [0.9]), buf)
    header, row = buf.getvalue().splitlines()
    assert header == "theta,spectrum,box,quasi_assouad,assouad"
    vals = [float(v) for v in row.split(",")]
    assert vals[1] == pytest.approx(1.42601662854)
    assert len(row.split(",")[1].replace(".", "")) <= 12
