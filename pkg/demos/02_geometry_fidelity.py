"""Measure how faithfully curved geometry survives conversion.

Three views of the same question: the radial error of the four-cubic
circle, the symmetric deviation between an analytic outline and the
converted path, and the end-to-end verifier on a transformed ellipse.
"""

import math

from svgforge import (
    Point,
    ShapeElement,
    arc_to_cubics,
    flatten_cubic,
    max_deviation,
    normalize_document,
    parse_document,
    sample_outline,
    shape_to_path,
    verify_normalization,
)
from svgforge.verifier import polyline, set_deviation


def radial_error_of_quarter_arc() -> None:
    segs = arc_to_cubics(Point(1, 0), 1, 1, 0, 0, 1, Point(0, 1))
    cubic = segs[0]
    worst_t, worst = 0.0, 0.0
    for i in range(4001):
        t = i / 4000
        s = 1 - t
        x = s**3 + 3 * s * s * t * cubic.c1.x + 3 * s * t * t * cubic.c2.x
        y = 3 * s * s * t * cubic.c1.y + 3 * s * t * t * cubic.c2.y + t**3
        err = abs(math.hypot(x, y) - 1.0)
        if err > worst:
            worst_t, worst = t, err
    print("quarter unit arc as one cubic (handle k = 4/3 tan(pi/8)):")
    print(f"  control points: {cubic.c1}, {cubic.c2}")
    print(f"  max radial error {worst:.3e} at t = {worst_t:.3f}")
    print("  on the 1024 canvas a radius-512 circle is off by "
          f"{worst * 512:.3f} units\n")


def deviation_circle_vs_cubics() -> None:
    circle = ShapeElement("circle", (("cx", 0.0), ("cy", 0.0), ("r", 100.0)))
    analytic = sample_outline(circle, n_per_segment=64)
    converted = shape_to_path(circle)

    pts = [converted.commands[0].end]
    cur = pts[0]
    for cmd in converted.commands[1:]:
        pts.extend(flatten_cubic(cur, cmd.c1, cmd.c2, cmd.end, 1e-4).points[1:])
        cur = cmd.end
    report = set_deviation(analytic, [polyline(pts)])
    print("circle r=100 vs its four-cubic conversion:")
    print(f"  symmetric deviation {report.max_deviation:.4f} "
          f"({report.samples_used} samples)\n")


def flattening_behavior() -> None:
    p0, c1, c2, p1 = Point(0, 0), Point(40, -30), Point(80, 60), Point(120, 0)
    print("adaptive flattening of one cubic:")
    for tol in (1.0, 0.1, 0.01, 0.001):
        flat = flatten_cubic(p0, c1, c2, p1, tol)
        print(f"  tolerance {tol:<6} -> {len(flat.points)} points")
    print()


def end_to_end_verification() -> None:
    svg = (
        '<svg viewBox="0 0 200 100"><g transform="rotate(25 100 50)">'
        '<ellipse cx="100" cy="50" rx="70" ry="25" fill="#264653"/></g></svg>'
    )
    doc, _ = parse_document(svg)
    normalized, _ = normalize_document(doc)
    result = verify_normalization(doc, normalized, tolerance=0.5)
    print("rotated ellipse on a letterboxed canvas:")
    print(f"  verification {'PASS' if result.passed else 'FAIL'}, "
          f"worst deviation {result.worst:.4f} of tolerance {result.tolerance}")

    # a parallel line pair shows what the deviation measure reports
    a = polyline([Point(0, 0), Point(10, 0)])
    b = polyline([Point(0, 0.5), Point(10, 0.5)])
    print(f"  sanity: two lines 0.5 apart measure {max_deviation(a, b).max_deviation}")


if __name__ == "__main__":
    radial_error_of_quarter_arc()
    deviation_circle_vs_cubics()
    flattening_behavior()
    end_to_end_verification()
