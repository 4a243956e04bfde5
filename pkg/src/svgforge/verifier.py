"""Geometric oracle for the normalization pipeline.

Original drawables are sampled analytically (shape outlines by their own
parameterization, arcs by center parameterization, quadratics directly),
converted paths are flattened, and the two point sets are compared with a
symmetric point-to-segment Hausdorff measure. Because the original side
never goes through the command conversions it is checking, a conversion
bug shows up as deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateShape, PathCountMismatch, ValidationError
from .model import (
    AffineTransform,
    Document,
    Drawable,
    LineTo,
    MoveTo,
    PathElement,
    Point,
    ShapeElement,
)
from .normalizer import canvas_transform, convert_element, to_absolute

DEFAULT_TOLERANCE = 0.5


@dataclass(frozen=True)
class Polyline:
    """An ordered point chain; consecutive duplicates are removed."""

    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise ValidationError("polyline needs at least 2 points")

    def __len__(self) -> int:
        return len(self.points)


def polyline(points) -> Polyline | None:
    """Build a polyline, dropping consecutive duplicates.

    Returns ``None`` when fewer than 2 distinct consecutive points remain
    (a degenerate chain with no outline).
    """
    deduped: list[Point] = []
    for p in points:
        if not deduped or p != deduped[-1]:
            deduped.append(p)
    if len(deduped) < 2:
        return None
    return Polyline(tuple(deduped))


@dataclass(frozen=True)
class DeviationReport:
    max_deviation: float
    argmax_point: Point
    samples_used: int


@dataclass(frozen=True)
class VerificationResult:
    passed: bool
    tolerance: float
    reports: tuple[DeviationReport, ...]

    @property
    def worst(self) -> float:
        return max((r.max_deviation for r in self.reports), default=0.0)


# --- flattening ------------------------------------------------------------


def _flatness(p0: Point, c1: Point, c2: Point, p1: Point) -> float:
    # max control-point distance to the chord p0-p1
    dx, dy = p1.x - p0.x, p1.y - p0.y
    norm = math.hypot(dx, dy)
    if norm < 1e-30:
        return max(math.hypot(c1.x - p0.x, c1.y - p0.y),
                   math.hypot(c2.x - p0.x, c2.y - p0.y))
    return max(
        abs(dx * (p0.y - c1.y) - dy * (p0.x - c1.x)),
        abs(dx * (p0.y - c2.y) - dy * (p0.x - c2.x)),
    ) / norm


def _split_cubic(p0, c1, c2, p1):
    # de Casteljau at t = 0.5
    m01 = Point((p0.x + c1.x) / 2, (p0.y + c1.y) / 2)
    m12 = Point((c1.x + c2.x) / 2, (c1.y + c2.y) / 2)
    m23 = Point((c2.x + p1.x) / 2, (c2.y + p1.y) / 2)
    m012 = Point((m01.x + m12.x) / 2, (m01.y + m12.y) / 2)
    m123 = Point((m12.x + m23.x) / 2, (m12.y + m23.y) / 2)
    mid = Point((m012.x + m123.x) / 2, (m012.y + m123.y) / 2)
    return (p0, m01, m012, mid), (mid, m123, m23, p1)


def flatten_cubic(
    p0: Point, c1: Point, c2: Point, p1: Point, tolerance: float
) -> Polyline:
    """Adaptive midpoint subdivision until each piece is chord-flat.

    Endpoints are preserved exactly; halving the tolerance never produces
    fewer points.
    """
    if tolerance <= 0:
        raise ValidationError("tolerance must be positive")
    points: list[Point] = [p0]

    def recurse(a, b, c, d, depth: int) -> None:
        if depth >= 24 or _flatness(a, b, c, d) <= tolerance:
            points.append(d)
            return
        left, right = _split_cubic(a, b, c, d)
        recurse(*left, depth + 1)
        recurse(*right, depth + 1)

    recurse(p0, c1, c2, p1, 0)
    return polyline(points) or Polyline((p0, p1))


def _cubic_point(p0, c1, c2, p1, t: float) -> Point:
    s = 1.0 - t
    return Point(
        s * s * s * p0.x + 3 * s * s * t * c1.x + 3 * s * t * t * c2.x + t * t * t * p1.x,
        s * s * s * p0.y + 3 * s * s * t * c1.y + 3 * s * t * t * c2.y + t * t * t * p1.y,
    )


def _quad_point(p0, q, p1, t: float) -> Point:
    s = 1.0 - t
    return Point(
        s * s * p0.x + 2 * s * t * q.x + t * t * p1.x,
        s * s * p0.y + 2 * s * t * q.y + t * t * p1.y,
    )


# --- analytic sampling -------------------------------------------------------


def _sample_line(p0: Point, p1: Point, n: int) -> list[Point]:
    return [Point(p0.x + (p1.x - p0.x) * i / n, p0.y + (p1.y - p0.y) * i / n)
            for i in range(1, n + 1)]


def _arc_samples(
    cx: float, cy: float, rx: float, ry: float, phi: float,
    theta1: float, delta: float, n: int,
) -> list[Point]:
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    out = []
    for i in range(1, n + 1):
        t = theta1 + delta * i / n
        ct, st = math.cos(t), math.sin(t)
        out.append(Point(cx + rx * ct * cos_phi - ry * st * sin_phi,
                         cy + rx * ct * sin_phi + ry * st * cos_phi))
    return out


def _arc_center(start: Point, rx, ry, rot_deg, large_arc, sweep, end: Point):
    """Endpoint to center parameterization; returns None for degenerate arcs."""
    if start == end or rx == 0 or ry == 0:
        return None
    rx, ry = abs(rx), abs(ry)
    phi = math.radians(rot_deg % 360.0)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    dx2, dy2 = (start.x - end.x) / 2.0, (start.y - end.y) / 2.0
    x1p = cos_phi * dx2 + sin_phi * dy2
    y1p = -sin_phi * dx2 + cos_phi * dy2
    lam = (x1p / rx) ** 2 + (y1p / ry) ** 2
    if lam > 1.0:
        s = math.sqrt(lam)
        rx, ry = rx * s, ry * s
    rx2, ry2 = rx * rx, ry * ry
    num = rx2 * ry2 - rx2 * y1p * y1p - ry2 * x1p * x1p
    den = rx2 * y1p * y1p + ry2 * x1p * x1p
    factor = math.sqrt(max(0.0, num / den)) if den else 0.0
    if bool(large_arc) == bool(sweep):
        factor = -factor
    cxp = factor * rx * y1p / ry
    cyp = -factor * ry * x1p / rx
    cx = cos_phi * cxp - sin_phi * cyp + (start.x + end.x) / 2.0
    cy = sin_phi * cxp + cos_phi * cyp + (start.y + end.y) / 2.0

    def angle(ux, uy, vx, vy):
        dot = ux * vx + uy * vy
        norm = math.hypot(ux, uy) * math.hypot(vx, vy)
        a = math.acos(max(-1.0, min(1.0, dot / norm)))
        return -a if ux * vy - uy * vx < 0 else a

    ux, uy = (x1p - cxp) / rx, (y1p - cyp) / ry
    vx, vy = (-x1p - cxp) / rx, (-y1p - cyp) / ry
    theta1 = angle(1.0, 0.0, ux, uy)
    delta = angle(ux, uy, vx, vy) % (2.0 * math.pi)
    if not sweep and delta > 0:
        delta -= 2.0 * math.pi
    return cx, cy, rx, ry, phi, theta1, delta


def _sample_raw_commands(commands, n: int) -> list[list[Point]]:
    """Analytically sample an absolute raw command walk, one list per subpath."""
    subpaths: list[list[Point]] = []
    current: list[Point] = []
    cur = Point(0.0, 0.0)
    start = cur
    last_c2: Point | None = None
    last_q: Point | None = None

    def begin(p: Point) -> None:
        nonlocal current
        if len(current) > 1:
            subpaths.append(current)
        current = [p]

    for cmd in commands:
        for i, group in enumerate(cmd.groups()):
            op = "L" if cmd.opcode == "M" and i > 0 else cmd.opcode
            next_c2 = next_q = None
            if op == "M":
                cur = start = Point(*group)
                begin(cur)
            elif op in ("L", "H", "V"):
                if op == "L":
                    p1 = Point(*group)
                elif op == "H":
                    p1 = Point(group[0], cur.y)
                else:
                    p1 = Point(cur.x, group[0])
                current.extend(_sample_line(cur, p1, n))
                cur = p1
            elif op in ("C", "S"):
                if op == "C":
                    c1, c2 = Point(group[0], group[1]), Point(group[2], group[3])
                    p1 = Point(group[4], group[5])
                else:
                    c1 = (Point(2 * cur.x - last_c2.x, 2 * cur.y - last_c2.y)
                          if last_c2 is not None else cur)
                    c2, p1 = Point(group[0], group[1]), Point(group[2], group[3])
                current.extend(
                    _cubic_point(cur, c1, c2, p1, i / n) for i in range(1, n + 1)
                )
                cur = p1
                next_c2 = c2
            elif op in ("Q", "T"):
                if op == "Q":
                    q, p1 = Point(group[0], group[1]), Point(group[2], group[3])
                else:
                    q = (Point(2 * cur.x - last_q.x, 2 * cur.y - last_q.y)
                         if last_q is not None else cur)
                    p1 = Point(*group)
                current.extend(
                    _quad_point(cur, q, p1, i / n) for i in range(1, n + 1)
                )
                cur = p1
                next_q = q
            elif op == "A":
                rx, ry, rot, laf, swf, x, y = group
                end = Point(x, y)
                center = _arc_center(cur, rx, ry, rot, laf, swf, end)
                if center is None:
                    if cur != end:
                        current.extend(_sample_line(cur, end, n))
                else:
                    cx, cy, arx, ary, phi, t1, delta = center
                    spans = max(1, math.ceil(abs(delta) / (math.pi / 2.0) - 1e-9))
                    current.extend(
                        _arc_samples(cx, cy, arx, ary, phi, t1, delta, n * spans)
                    )
                    current[-1] = end  # endpoint is exact by construction
                cur = end
            else:  # Z
                if cur != start:
                    current.extend(_sample_line(cur, start, n))
                cur = start
            last_c2, last_q = next_c2, next_q

    if len(current) > 1:
        subpaths.append(current)
    return subpaths


def sample_outline(source: Drawable, n_per_segment: int = 16) -> list[Polyline]:
    """Sample the outline of a drawable, one polyline per subpath.

    Shape elements and raw paths are sampled by their own analytic
    parameterization (independent of any conversion); normalized M/L/C
    paths by uniform t per segment.
    """
    if n_per_segment < 2:
        raise ValidationError("n_per_segment must be >= 2")
    n = n_per_segment

    if isinstance(source, ShapeElement):
        return _sample_shape(source, n)
    if source.is_raw:
        chains = _sample_raw_commands(to_absolute(source.commands), n)
    else:
        chains = []
        current: list[Point] = []
        cur = Point(0.0, 0.0)
        for cmd in source.commands:
            if isinstance(cmd, MoveTo):
                if len(current) > 1:
                    chains.append(current)
                current = [cmd.end]
                cur = cmd.end
            elif isinstance(cmd, LineTo):
                current.extend(_sample_line(cur, cmd.end, n))
                cur = cmd.end
            else:
                current.extend(
                    _cubic_point(cur, cmd.c1, cmd.c2, cmd.end, i / n)
                    for i in range(1, n + 1)
                )
                cur = cmd.end
        if len(current) > 1:
            chains.append(current)
    return [pl for pl in (polyline(c) for c in chains) if pl is not None]


def _sample_shape(el: ShapeElement, n: int) -> list[Polyline]:
    tag = el.tag
    if tag in ("circle", "ellipse"):
        if tag == "circle":
            rx = ry = el.get("r")
        else:
            rx, ry = el.get("rx"), el.get("ry")
        if rx <= 0 or ry <= 0:
            raise DegenerateShape(tag)
        cx, cy = el.get("cx"), el.get("cy")
        pts = [Point(cx + rx, cy)]
        pts.extend(_arc_samples(cx, cy, rx, ry, 0.0, 0.0, 2.0 * math.pi, 4 * n))
        pts[-1] = pts[0]  # close the loop exactly
        pl = polyline(pts)
        return [pl] if pl else []
    if tag == "rect":
        x, y, w, h = el.get("x"), el.get("y"), el.get("width"), el.get("height")
        if w <= 0 or h <= 0:
            raise DegenerateShape(tag)
        rx, ry = el.get("rx", -1.0), el.get("ry", -1.0)
        if rx < 0 and ry < 0:
            rx = ry = 0.0
        elif rx < 0:
            rx = ry
        elif ry < 0:
            ry = rx
        rx, ry = min(rx, w / 2.0), min(ry, h / 2.0)
        if rx > 0 and ry > 0:
            # edge endpoint, then corner-ellipse center and start angle
            edges = [
                (Point(x + w - rx, y), (x + w - rx, y + ry), -math.pi / 2),
                (Point(x + w, y + h - ry), (x + w - rx, y + h - ry), 0.0),
                (Point(x + rx, y + h), (x + rx, y + h - ry), math.pi / 2),
                (Point(x, y + ry), (x + rx, y + ry), math.pi),
            ]
            start = Point(x + rx, y)
            pts = [start]
            cur = start
            for line_end, (ccx, ccy), t1 in edges:
                if line_end != cur:
                    pts.extend(_sample_line(cur, line_end, n))
                pts.extend(_arc_samples(ccx, ccy, rx, ry, 0.0, t1, math.pi / 2, n))
                cur = pts[-1]
            pl = polyline(pts)
            return [pl] if pl else []
        ring = [Point(x, y), Point(x + w, y), Point(x + w, y + h), Point(x, y + h)]
        pts = [ring[0]]
        for a, b in zip(ring, ring[1:] + ring[:1]):
            pts.extend(_sample_line(a, b, n))
        pl = polyline(pts)
        return [pl] if pl else []
    if tag == "line":
        p0 = Point(el.get("x1"), el.get("y1"))
        p1 = Point(el.get("x2"), el.get("y2"))
        pl = polyline([p0, *_sample_line(p0, p1, n)])
        return [pl] if pl else []
    # polyline / polygon
    points = el.get("points", ())
    if not isinstance(points, tuple) or len(points) < 2:
        raise DegenerateShape(tag)
    pts = [points[0]]
    for a, b in zip(points, points[1:]):
        pts.extend(_sample_line(a, b, n))
    if tag == "polygon" and points[-1] != points[0]:
        pts.extend(_sample_line(points[-1], points[0], n))
    pl = polyline(pts)
    return [pl] if pl else []


# --- deviation measurement -----------------------------------------------------


def _points_array(polys: list[Polyline]) -> np.ndarray:
    return np.array(
        [(p.x, p.y) for pl in polys for p in pl.points], dtype=np.float64
    )


def _segments_arrays(polys: list[Polyline]) -> tuple[np.ndarray, np.ndarray]:
    starts, ends = [], []
    for pl in polys:
        for a, b in zip(pl.points, pl.points[1:]):
            starts.append((a.x, a.y))
            ends.append((b.x, b.y))
    return np.array(starts, dtype=np.float64), np.array(ends, dtype=np.float64)


def _dist_points_to_segments(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Min distance from each point to any segment [a_j, b_j]."""
    d = b - a                                    # (m, 2)
    len2 = np.einsum("ij,ij->i", d, d)           # (m,)
    len2 = np.where(len2 < 1e-30, 1.0, len2)
    diff = points[:, None, :] - a[None, :, :]    # (n, m, 2)
    t = np.clip(np.einsum("nmj,mj->nm", diff, d) / len2, 0.0, 1.0)
    proj = a[None, :, :] + t[:, :, None] * d[None, :, :]
    dist = np.linalg.norm(points[:, None, :] - proj, axis=2)
    return dist.min(axis=1)


def _one_sided(polys_a: list[Polyline], polys_b: list[Polyline]) -> tuple[float, Point]:
    pts = _points_array(polys_a)
    seg_a, seg_b = _segments_arrays(polys_b)
    dists = _dist_points_to_segments(pts, seg_a, seg_b)
    i = int(np.argmax(dists))
    return float(dists[i]), Point(float(pts[i, 0]), float(pts[i, 1]))


def set_deviation(polys_a: list[Polyline], polys_b: list[Polyline]) -> DeviationReport:
    """Symmetric point-to-segment Hausdorff measure between polyline sets."""
    if not polys_a or not polys_b:
        raise ValidationError("deviation needs non-empty polyline sets")
    d_ab, w_ab = _one_sided(polys_a, polys_b)
    d_ba, w_ba = _one_sided(polys_b, polys_a)
    samples = sum(len(pl) for pl in polys_a) + sum(len(pl) for pl in polys_b)
    if d_ab >= d_ba:
        return DeviationReport(d_ab, w_ab, samples)
    return DeviationReport(d_ba, w_ba, samples)


def max_deviation(a: Polyline, b: Polyline) -> DeviationReport:
    """Symmetric deviation between two polylines (see :func:`set_deviation`)."""
    return set_deviation([a], [b])


# --- end-to-end verification ----------------------------------------------------


def _transform_polys(polys: list[Polyline], t: AffineTransform) -> list[Polyline]:
    if t.is_identity:
        return polys
    out = []
    for pl in polys:
        moved = polyline(t.apply_point(p) for p in pl.points)
        if moved is not None:
            out.append(moved)
    return out


def _flatten_path(path: PathElement, tolerance: float) -> list[Polyline]:
    chains: list[list[Point]] = []
    current: list[Point] = []
    cur = Point(0.0, 0.0)
    for cmd in path.commands:
        if isinstance(cmd, MoveTo):
            if len(current) > 1:
                chains.append(current)
            current = [cmd.end]
            cur = cmd.end
        elif isinstance(cmd, LineTo):
            current.append(cmd.end)
            cur = cmd.end
        else:
            flat = flatten_cubic(cur, cmd.c1, cmd.c2, cmd.end, tolerance)
            current.extend(flat.points[1:])
            cur = cmd.end
    if len(current) > 1:
        chains.append(current)
    return [pl for pl in (polyline(c) for c in chains) if pl is not None]


def verify_normalization(
    raw_doc: Document,
    normalized_doc: Document,
    tolerance: float = DEFAULT_TOLERANCE,
    n_per_segment: int = 64,
) -> VerificationResult:
    """Check that normalization preserved every drawable's geometry.

    Each surviving original drawable is sampled analytically, mapped
    through its composed transform plus the canvas transform, and compared
    against its converted path. Raises :class:`PathCountMismatch` when the
    surviving-drawable count differs from the normalized path count, which
    signals a pipeline bug rather than a geometric error.
    """
    if tolerance <= 0:
        raise ValidationError("tolerance must be positive")
    kept = [el for el in raw_doc.paths if convert_element(el) is not None]
    if len(kept) != len(normalized_doc.paths):
        raise PathCountMismatch(
            f"{len(kept)} surviving drawables vs {len(normalized_doc.paths)} paths"
        )

    canvas = canvas_transform(raw_doc.view_box)
    # Chords on both sides add to the measured deviation; keep them well
    # below the tolerance so only real conversion error can trip it.
    flatten_tol = min(0.02, max(1e-4, tolerance / 20.0))
    reports: list[DeviationReport] = []
    passed = True
    for el, converted in zip(kept, normalized_doc.paths):
        full = canvas @ el.transform
        original = _transform_polys(sample_outline(el, n_per_segment), full)
        flattened = _flatten_path(converted, flatten_tol)
        if not original and not flattened:
            continue
        report = set_deviation(original, flattened)
        reports.append(report)
        if report.max_deviation > tolerance:
            passed = False
    return VerificationResult(passed, tolerance, tuple(reports))
