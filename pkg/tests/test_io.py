import numpy as np
import pytest
from PIL import Image

from conftest import circle
from leafmatch.dce import extract_features
from leafmatch.geometry import Contour, OpenCurve, signed_area
from leafmatch.io import as_curve, format_curve, read_any, read_curve, read_mask, read_points, trace_boundary, write_curve


class TestText:
    def test_round_trip_is_exact(self, tmp_path, rng):
        c = Contour(circle(3.0, 50).points + rng.normal(scale=1e-3, size=(50, 2)))
        write_curve(tmp_path / "c.txt", c)
        back = read_curve(tmp_path / "c.txt")
        assert isinstance(back, Contour)
        np.testing.assert_array_equal(back.points, c.points)

    def test_open_header(self, tmp_path):
        o = OpenCurve([[0, 0], [1, 0], [2, 1], [3, 3]])
        text = format_curve(o)
        assert text.startswith("# open\n")
        (tmp_path / "o.txt").write_text(text)
        assert isinstance(read_curve(tmp_path / "o.txt"), OpenCurve)

    def test_headerless_is_closed_and_made_ccw(self, tmp_path):
        pts = circle(1.0, 20).points[::-1]
        (tmp_path / "c.txt").write_text("\n".join(f"{x}; {y}" for x, y in pts) + "\n")
        c = read_curve(tmp_path / "c.txt")
        assert isinstance(c, Contour) and signed_area(c.points) > 0

    def test_repeats_and_closing_point_dropped(self):
        pts = np.vstack([circle(1.0, 12).points, circle(1.0, 12).points[:1]])
        pts = np.insert(pts, 3, pts[3], axis=0)
        assert len(as_curve(pts, True)) == 12

    def test_errors(self, tmp_path):
        (tmp_path / "a.txt").write_text("1,2,3\n")
        with pytest.raises(ValueError, match=":1:"):
            read_points(tmp_path / "a.txt")
        (tmp_path / "b.txt").write_text("# closed\n")
        with pytest.raises(ValueError, match="no points"):
            read_points(tmp_path / "b.txt")
        (tmp_path / "c.txt").write_text("1,x\n")
        with pytest.raises(ValueError, match="number"):
            read_points(tmp_path / "c.txt")


def square_mask(size=40, lo=10, hi=30):
    m = np.zeros((size, size), dtype=bool)
    m[lo:hi, lo:hi] = True
    return m


class TestMask:
    def test_square_boundary(self):
        pts = trace_boundary(square_mask())
        # 20x20 block: 76 boundary pixels, each once
        assert len(pts) == 76
        assert len({tuple(p) for p in pts}) == 76
        steps = np.abs(np.diff(np.vstack([pts, pts[:1]]), axis=0)).max(axis=1)
        assert np.all(steps == 1)

    def test_square_corners_after_dce(self, tmp_path):
        Image.fromarray(square_mask().astype(np.uint8) * 255).save(tmp_path / "sq.pgm")
        c = read_any(tmp_path / "sq.pgm")
        assert isinstance(c, Contour) and signed_area(c.points) > 0
        g = extract_features(c, 4)
        corners = {(10.0, -10.0), (29.0, -10.0), (29.0, -29.0), (10.0, -29.0)}
        assert {tuple(p) for p in g.points.tolist()} == corners

    def test_single_pixel_and_blank(self, tmp_path):
        m = np.zeros((5, 5), dtype=bool)
        m[2, 2] = True
        assert trace_boundary(m).tolist() == [[2.0, -2.0]]
        with pytest.raises(ValueError):
            trace_boundary(np.zeros((4, 4)))
        Image.fromarray(np.zeros((8, 8), dtype=np.uint8)).save(tmp_path / "blank.png")
        with pytest.raises(ValueError, match="blank"):
            read_mask(tmp_path / "blank.png")

    def test_disk_area(self, tmp_path):
        yy, xx = np.mgrid[:80, :80]
        m = (xx - 40) ** 2 + (yy - 40) ** 2 <= 25 ** 2
        Image.fromarray(m.astype(np.uint8) * 255).save(tmp_path / "d.png")
        c = read_any(tmp_path / "d.png")
        # the boundary runs through pixel centres, half a pixel inside the edge
        assert signed_area(c.points) == pytest.approx(np.pi * 24.5 ** 2, rel=0.02)
