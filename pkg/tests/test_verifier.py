import math

import pytest

from svgforge.errors import PathCountMismatch, ValidationError
from svgforge.model import (
    CubicTo,
    Document,
    Hex,
    LineTo,
    MoveTo,
    NORMALIZED_VIEW_BOX,
    PathElement,
    Point,
    ShapeElement,
)
from svgforge.normalizer import KAPPA, normalize_document, shape_to_path
from svgforge.parser import parse_document
from svgforge.verifier import (
    DeviationReport,
    Polyline,
    flatten_cubic,
    max_deviation,
    polyline,
    sample_outline,
    set_deviation,
    verify_normalization,
)


class TestFlattenCubic:
    def test_collinear_is_two_points(self):
        out = flatten_cubic(Point(0, 0), Point(1, 1), Point(2, 2), Point(3, 3), 1e-3)
        assert len(out) == 2
        assert out.points == (Point(0, 0), Point(3, 3))

    def test_quarter_circle_stays_near_circle(self):
        k = KAPPA
        out = flatten_cubic(Point(1, 0), Point(1, k), Point(k, 1), Point(0, 1), 1e-3)
        for p in out.points:
            assert abs(math.hypot(p.x, p.y) - 1.0) < 1e-3 + 2.8e-4

    def test_halving_tolerance_never_decreases_points(self):
        k = KAPPA
        counts = []
        tol = 0.1
        for _ in range(8):
            out = flatten_cubic(Point(1, 0), Point(1, k), Point(k, 1), Point(0, 1), tol)
            counts.append(len(out))
            tol /= 2
        for a, b in zip(counts, counts[1:]):
            assert b >= a

    def test_endpoints_exact(self):
        out = flatten_cubic(Point(3, 7), Point(50, -20), Point(-10, 90), Point(11, 13), 0.01)
        assert out.points[0] == Point(3, 7)
        assert out.points[-1] == Point(11, 13)

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValidationError):
            flatten_cubic(Point(0, 0), Point(1, 1), Point(2, 2), Point(3, 3), 0)


class TestSampleOutline:
    def test_unit_circle_points_on_circle(self):
        el = ShapeElement("circle", (("cx", 0.0), ("cy", 0.0), ("r", 1.0)))
        polys = sample_outline(el, n_per_segment=4)
        assert len(polys) == 1
        pts = polys[0].points
        assert len(set(pts)) == 16
        for p in pts:
            assert abs(math.hypot(p.x, p.y) - 1.0) < 1e-12

    def test_line_samples_collinear(self):
        el = ShapeElement("line", (("x1", 0.0), ("y1", 0.0), ("x2", 10.0), ("y2", 5.0)))
        polys = sample_outline(el, 8)
        for p in polys[0].points:
            assert math.isclose(p.y, p.x / 2, abs_tol=1e-12)

    def test_rect_samples_on_boundary(self):
        el = ShapeElement("rect", (("x", 1.0), ("y", 2.0), ("width", 4.0), ("height", 3.0)))
        polys = sample_outline(el, 5)
        for p in polys[0].points:
            on_x = math.isclose(p.x, 1) or math.isclose(p.x, 5)
            on_y = math.isclose(p.y, 2) or math.isclose(p.y, 5)
            assert on_x or on_y

    def test_subpaths_split(self):
        el = PathElement(
            (MoveTo(Point(0, 0)), LineTo(Point(1, 0)),
             MoveTo(Point(5, 5)), LineTo(Point(6, 5))),
            Hex("000000"),
        )
        assert len(sample_outline(el, 4)) == 2

    def test_raw_path_arc_sampled_analytically(self):
        doc, _ = parse_document(
            '<svg viewBox="0 0 100 100"><path d="M10 50A20 20 0 0 1 50 50" fill="#000"/></svg>'
        )
        polys = sample_outline(doc.paths[0], 16)
        center, r = Point(30, 50), 20.0
        for p in polys[0].points:
            assert abs(math.hypot(p.x - center.x, p.y - center.y) - r) < 1e-9

    def test_n_must_be_at_least_two(self):
        el = ShapeElement("line", (("x1", 0.0), ("y1", 0.0), ("x2", 1.0), ("y2", 1.0)))
        with pytest.raises(ValidationError):
            sample_outline(el, 1)


class TestMaxDeviation:
    def _line(self, y):
        return Polyline((Point(0, y), Point(1, y)))

    def test_identical_is_zero(self):
        a = self._line(0)
        assert max_deviation(a, a).max_deviation == 0.0

    def test_parallel_offset(self):
        report = max_deviation(self._line(0), self._line(0.5))
        assert math.isclose(report.max_deviation, 0.5, abs_tol=1e-12)

    def test_symmetric(self):
        a = Polyline((Point(0, 0), Point(2, 0), Point(2, 2)))
        b = Polyline((Point(0, 0.3), Point(2.2, 0)))
        assert math.isclose(
            max_deviation(a, b).max_deviation,
            max_deviation(b, a).max_deviation,
            abs_tol=1e-12,
        )

    def test_circle_vs_four_cubics(self):
        el = ShapeElement("circle", (("cx", 0.0), ("cy", 0.0), ("r", 1.0)))
        analytic = sample_outline(el, 64)
        cmds = list(shape_to_path(el).commands)
        chains = []
        cur = cmds[0].end
        flat = [cur]
        for c in cmds[1:]:
            flat.extend(flatten_cubic(cur, c.c1, c.c2, c.end, 1e-4).points[1:])
            cur = c.end
        chains.append(polyline(flat))
        report = set_deviation(analytic, chains)
        assert report.max_deviation < 3e-4 + 1e-4

    def test_report_fields(self):
        report = max_deviation(self._line(0), self._line(1))
        assert isinstance(report, DeviationReport)
        assert report.samples_used == 4
        assert report.argmax_point.y in (0.0, 1.0)


class TestVerifyNormalization:
    def _roundtrip(self, svg):
        doc, _ = parse_document(svg)
        norm, _ = normalize_document(doc)
        return doc, norm

    def test_pure_lines_deviation_zero(self):
        doc, norm = self._roundtrip(
            '<svg viewBox="0 0 1024 1024"><path d="M0 0L100 0L100 100L0 100Z" fill="#000"/></svg>'
        )
        result = verify_normalization(doc, norm, 0.5)
        assert result.passed and result.worst == 0.0

    def test_circle_fixture_passes_default_tolerance(self):
        doc, norm = self._roundtrip(
            '<svg viewBox="0 0 1024 1024"><circle cx="512" cy="512" r="500" fill="#000"/></svg>'
        )
        assert verify_normalization(doc, norm, 0.5).passed

    def test_tiny_tolerance_fails_on_curves(self):
        doc, norm = self._roundtrip(
            '<svg viewBox="0 0 1024 1024"><circle cx="512" cy="512" r="400" fill="#000"/></svg>'
        )
        assert not verify_normalization(doc, norm, 1e-6).passed

    def test_corrupted_converter_detected(self):
        doc, norm = self._roundtrip(
            '<svg viewBox="0 0 1024 1024"><circle cx="512" cy="512" r="400" fill="#000"/></svg>'
        )
        # scale the cubic handles 1.1x around each anchor, a subtle bug
        mutated_paths = []
        for p in norm.paths:
            cmds = []
            cur = None
            for c in p.commands:
                if isinstance(c, CubicTo):
                    c1 = Point(cur.x + 1.1 * (c.c1.x - cur.x), cur.y + 1.1 * (c.c1.y - cur.y))
                    c2 = Point(c.end.x + 1.1 * (c.c2.x - c.end.x), c.end.y + 1.1 * (c.c2.y - c.end.y))
                    cmds.append(CubicTo(c1, c2, c.end))
                    cur = c.end
                else:
                    cmds.append(c)
                    cur = c.end
            mutated_paths.append(PathElement(tuple(cmds), p.fill))
        mutated = Document(NORMALIZED_VIEW_BOX, tuple(mutated_paths), normalized=True)
        result = verify_normalization(doc, mutated, 0.5)
        assert not result.passed
        assert result.worst > 0.5

    def test_path_count_mismatch(self):
        doc, norm = self._roundtrip(
            '<svg viewBox="0 0 10 10"><path d="M0 0L1 1L1 0Z" fill="#000"/>'
            '<path d="M5 5L6 6L6 5Z" fill="#000"/></svg>'
        )
        truncated = Document(NORMALIZED_VIEW_BOX, norm.paths[:1], normalized=True)
        with pytest.raises(PathCountMismatch):
            verify_normalization(doc, truncated, 0.5)

    def test_dropped_elements_accounted(self):
        doc, norm = self._roundtrip(
            '<svg viewBox="0 0 10 10"><path d="M0 0L9 0L9 9Z" fill="none"/>'
            '<rect x="0" y="0" width="0" height="5"/>'
            '<path d="M0 0L9 0L9 9Z" fill="#000"/></svg>'
        )
        result = verify_normalization(doc, norm, 0.5)
        assert result.passed

    def test_transformed_shapes_verified(self):
        doc, norm = self._roundtrip(
            '<svg viewBox="0 0 100 100"><g transform="rotate(37 50 50) translate(3 1)">'
            '<ellipse cx="50" cy="50" rx="30" ry="12" fill="#000"/></g></svg>'
        )
        result = verify_normalization(doc, norm, 0.5)
        assert result.passed

    def test_corpus_passes(self, corpus):
        for name, text in corpus.items():
            doc, _ = parse_document(text)
            norm, _ = normalize_document(doc)
            result = verify_normalization(doc, norm, 0.5)
            assert result.passed, (name, result.worst)

    def test_flattening_converges_to_true_curve(self):
        p0, c1, c2, p1 = Point(0, 0), Point(120, -80), Point(-40, 160), Point(100, 100)

        def at(t):
            s = 1 - t
            return Point(
                s**3 * p0.x + 3 * s * s * t * c1.x + 3 * s * t * t * c2.x + t**3 * p1.x,
                s**3 * p0.y + 3 * s * s * t * c1.y + 3 * s * t * t * c2.y + t**3 * p1.y,
            )

        true_curve = [polyline(at(i / 4000) for i in range(4001))]
        devs = []
        for tol in (1e-1, 1e-2, 1e-3):
            flat = flatten_cubic(p0, c1, c2, p1, tol)
            devs.append(set_deviation([flat], true_curve).max_deviation)
        assert devs[0] >= devs[1] >= devs[2]
        assert devs[2] < 1e-2
