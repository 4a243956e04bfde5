"""Path unification: everything becomes absolute M/L/C on a 1024 canvas.

The pipeline per drawable: shapes are rewritten as path commands, raw path
data is made absolute and simplified to the MoveTo/LineTo/CubicTo alphabet,
element transforms are flattened into coordinates, and the whole canvas is
mapped onto (0, 0, 1024, 1024). Every conversion preserves segment
endpoints exactly; curved conversions stay within a tight analytic error
bound (arcs are split at 90 degrees, worst-case radial error about
2.7e-4 of the radius).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DegenerateShape,
    EmptyDocument,
    NoCurrentPoint,
    SingularTransform,
    ValidationError,
)
from .model import (
    BLACK,
    CANVAS_SIZE,
    IDENTITY,
    AffineTransform,
    CubicTo,
    Document,
    Drawable,
    LineTo,
    MoveTo,
    NO_FILL,
    NORMALIZED_VIEW_BOX,
    PathCommand,
    PathElement,
    Point,
    RawCommand,
    ShapeElement,
)

#: Cubic handle length approximating a unit quarter circle: 4/3 * tan(pi/8).
KAPPA = 4.0 / 3.0 * math.tan(math.pi / 8.0)

_CLOSE_EPS = 1e-9
_SINGULAR_EPS = 1e-12


@dataclass
class NormalizeReport:
    """Counters describing what one normalization run had to do."""

    shapes_converted: dict[str, int] = field(default_factory=dict)
    arcs_converted: int = 0
    relative_resolved: int = 0
    transforms_flattened: int = 0
    closures_materialized: int = 0
    paths_dropped: dict[str, int] = field(default_factory=dict)

    def count_shape(self, tag: str) -> None:
        self.shapes_converted[tag] = self.shapes_converted.get(tag, 0) + 1

    def count_drop(self, reason: str) -> None:
        self.paths_dropped[reason] = self.paths_dropped.get(reason, 0) + 1

    def merge(self, other: "NormalizeReport") -> None:
        for k, v in other.shapes_converted.items():
            self.shapes_converted[k] = self.shapes_converted.get(k, 0) + v
        for k, v in other.paths_dropped.items():
            self.paths_dropped[k] = self.paths_dropped.get(k, 0) + v
        self.arcs_converted += other.arcs_converted
        self.relative_resolved += other.relative_resolved
        self.transforms_flattened += other.transforms_flattened
        self.closures_materialized += other.closures_materialized

    def as_dict(self) -> dict:
        return {
            "shapes_converted": dict(sorted(self.shapes_converted.items())),
            "arcs_converted": self.arcs_converted,
            "relative_resolved": self.relative_resolved,
            "transforms_flattened": self.transforms_flattened,
            "closures_materialized": self.closures_materialized,
            "paths_dropped": dict(sorted(self.paths_dropped.items())),
        }


# --- absolute coordinates ------------------------------------------------


def to_absolute(cmds: list[RawCommand] | tuple[RawCommand, ...]) -> list[RawCommand]:
    """Rewrite relative opcodes as absolute, one argument group per command.

    Current-point bookkeeping follows SVG semantics: Z returns the current
    point to the subpath start, and a leading ``m`` is absolute. Raises
    :class:`NoCurrentPoint` when a command requires a current point that
    does not exist yet.
    """
    out: list[RawCommand] = []
    cx = cy = 0.0
    sx = sy = 0.0
    have_point = False

    for cmd in cmds:
        for i, group in enumerate(cmd.groups()):
            op = cmd.opcode
            # repeated moveto groups are implicit linetos per the grammar
            if i > 0 and op in ("M", "m"):
                op = "L" if op == "M" else "l"
            upper = op.upper()
            rel = op.islower() and have_point  # leading "m" is absolute
            if op.islower() and not have_point and upper != "M":
                raise NoCurrentPoint(f"relative {op!r} before any MoveTo")

            if upper == "M":
                x, y = group
                if rel:
                    x, y = cx + x, cy + y
                cx, cy, sx, sy = x, y, x, y
                have_point = True
                out.append(RawCommand("M", (x, y)))
            elif upper == "L":
                if not have_point:
                    raise NoCurrentPoint("L before any MoveTo")
                x, y = group
                if rel:
                    x, y = cx + x, cy + y
                cx, cy = x, y
                out.append(RawCommand("L", (x, y)))
            elif upper == "H":
                if not have_point:
                    raise NoCurrentPoint("H before any MoveTo")
                x = group[0] + (cx if rel else 0.0)
                cx = x
                out.append(RawCommand("H", (x,)))
            elif upper == "V":
                if not have_point:
                    raise NoCurrentPoint("V before any MoveTo")
                y = group[0] + (cy if rel else 0.0)
                cy = y
                out.append(RawCommand("V", (y,)))
            elif upper in ("C", "S", "Q", "T"):
                if not have_point:
                    raise NoCurrentPoint(f"{upper} before any MoveTo")
                if rel:
                    group = tuple(
                        v + (cx if i % 2 == 0 else cy) for i, v in enumerate(group)
                    )
                cx, cy = group[-2], group[-1]
                out.append(RawCommand(upper, group))
            elif upper == "A":
                if not have_point:
                    raise NoCurrentPoint("A before any MoveTo")
                rx, ry, rot, laf, swf, x, y = group
                if rel:
                    x, y = cx + x, cy + y
                cx, cy = x, y
                out.append(RawCommand("A", (rx, ry, rot, laf, swf, x, y)))
            else:  # Z
                if not have_point:
                    raise NoCurrentPoint("Z before any MoveTo")
                cx, cy = sx, sy
                out.append(RawCommand("Z"))
    return out


# --- arc conversion -------------------------------------------------------


def arc_to_cubics(
    start: Point,
    rx: float,
    ry: float,
    x_rotation_deg: float,
    large_arc: bool | float,
    sweep: bool | float,
    end: Point,
) -> list[CubicTo | LineTo]:
    """Convert one endpoint-parameterized elliptical arc to cubic segments.

    Degenerate radii collapse to a single LineTo; identical endpoints
    produce no segments. Otherwise the arc is converted to center
    parameterization, split into spans of at most 90 degrees, and each
    span approximated by one cubic with handle length 4/3*tan(delta/4).
    The first segment starts exactly at ``start`` and the last ends
    exactly at ``end``.
    """
    if start == end:
        return []
    if rx == 0.0 or ry == 0.0:
        return [LineTo(end)]
    rx, ry = abs(rx), abs(ry)

    phi = math.radians(x_rotation_deg % 360.0)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)

    # endpoint -> center parameterization (SVG 1.1 implementation notes)
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

    def angle(ux: float, uy: float, vx: float, vy: float) -> float:
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
    if sweep and delta == 0.0 and large_arc:
        delta = 2.0 * math.pi

    def ellipse_point(theta: float) -> Point:
        ct, st = math.cos(theta), math.sin(theta)
        return Point(
            cx + rx * ct * cos_phi - ry * st * sin_phi,
            cy + rx * ct * sin_phi + ry * st * cos_phi,
        )

    def ellipse_tangent(theta: float) -> tuple[float, float]:
        ct, st = math.cos(theta), math.sin(theta)
        return (
            -rx * st * cos_phi - ry * ct * sin_phi,
            -rx * st * sin_phi + ry * ct * cos_phi,
        )

    segments = max(1, math.ceil(abs(delta) / (math.pi / 2.0) - 1e-9))
    step = delta / segments
    k = 4.0 / 3.0 * math.tan(step / 4.0)

    out: list[CubicTo | LineTo] = []
    p0 = start
    for i in range(segments):
        ta = theta1 + i * step
        tb = ta + step
        p1 = end if i == segments - 1 else ellipse_point(tb)
        d0x, d0y = ellipse_tangent(ta)
        d1x, d1y = ellipse_tangent(tb)
        out.append(
            CubicTo(
                Point(p0.x + k * d0x, p0.y + k * d0y),
                Point(p1.x - k * d1x, p1.y - k * d1y),
                p1,
            )
        )
        p0 = p1
    return out


# --- command simplification ------------------------------------------------


def _elevate_quadratic(p0: Point, q: Point, p1: Point) -> CubicTo:
    # exact degree elevation: c = p + (2/3)(q - p)
    c1 = Point(p0.x + 2.0 * (q.x - p0.x) / 3.0, p0.y + 2.0 * (q.y - p0.y) / 3.0)
    c2 = Point(p1.x + 2.0 * (q.x - p1.x) / 3.0, p1.y + 2.0 * (q.y - p1.y) / 3.0)
    return CubicTo(c1, c2, p1)


def simplify_commands(
    cmds: list[RawCommand] | tuple[RawCommand, ...],
    report: NormalizeReport | None = None,
) -> list[PathCommand]:
    """Reduce an absolute command list to the M/L/C alphabet.

    H/V project onto lines, S/T reflect their implicit control point, Q is
    degree-elevated exactly, arcs go through :func:`arc_to_cubics`, and Z
    materializes as a LineTo back to the subpath start unless the current
    point is already there. Runs of MoveTo collapse to the last one and a
    trailing MoveTo is dropped, so empty subpaths leave no residue.
    """
    out: list[PathCommand] = []
    cur = Point(0.0, 0.0)
    start = cur
    last_cubic_c2: Point | None = None
    last_quad_q: Point | None = None

    for cmd in cmds:
        if cmd.is_relative:
            raise ValidationError(f"simplify_commands needs absolute input, got {cmd.opcode!r}")
        for i, group in enumerate(cmd.groups()):
            op = "L" if cmd.opcode == "M" and i > 0 else cmd.opcode
            next_c2: Point | None = None
            next_q: Point | None = None
            if op == "M":
                cur = start = Point(*group)
                if out and isinstance(out[-1], MoveTo):
                    out[-1] = MoveTo(cur)
                else:
                    out.append(MoveTo(cur))
            elif op == "L":
                cur = Point(*group)
                out.append(LineTo(cur))
            elif op == "H":
                cur = Point(group[0], cur.y)
                out.append(LineTo(cur))
            elif op == "V":
                cur = Point(cur.x, group[0])
                out.append(LineTo(cur))
            elif op == "C":
                c1, c2 = Point(group[0], group[1]), Point(group[2], group[3])
                cur = Point(group[4], group[5])
                out.append(CubicTo(c1, c2, cur))
                next_c2 = c2
            elif op == "S":
                if last_cubic_c2 is not None:
                    c1 = Point(2.0 * cur.x - last_cubic_c2.x, 2.0 * cur.y - last_cubic_c2.y)
                else:
                    c1 = cur
                c2 = Point(group[0], group[1])
                cur = Point(group[2], group[3])
                out.append(CubicTo(c1, c2, cur))
                next_c2 = c2
            elif op == "Q":
                q = Point(group[0], group[1])
                p1 = Point(group[2], group[3])
                out.append(_elevate_quadratic(cur, q, p1))
                cur = p1
                next_q = q
            elif op == "T":
                if last_quad_q is not None:
                    q = Point(2.0 * cur.x - last_quad_q.x, 2.0 * cur.y - last_quad_q.y)
                else:
                    q = cur
                p1 = Point(*group)
                out.append(_elevate_quadratic(cur, q, p1))
                cur = p1
                next_q = q
            elif op == "A":
                rx, ry, rot, laf, swf, x, y = group
                end = Point(x, y)
                out.extend(arc_to_cubics(cur, rx, ry, rot, laf, swf, end))
                cur = end
                if report is not None:
                    report.arcs_converted += 1
            else:  # Z
                if max(abs(cur.x - start.x), abs(cur.y - start.y)) > _CLOSE_EPS:
                    out.append(LineTo(start))
                    if report is not None:
                        report.closures_materialized += 1
                cur = start
            last_cubic_c2 = next_c2
            last_quad_q = next_q

    if out and isinstance(out[-1], MoveTo):
        out.pop()
    return out


# --- shape conversion -------------------------------------------------------


def _rounded_corner(start: Point, rx: float, ry: float, end: Point) -> list[CubicTo]:
    segs = arc_to_cubics(start, rx, ry, 0.0, False, True, end)
    return [s for s in segs if isinstance(s, CubicTo)]


def _ellipse_commands(cx: float, cy: float, rx: float, ry: float) -> list[PathCommand]:
    kx, ky = KAPPA * rx, KAPPA * ry
    return [
        MoveTo(Point(cx + rx, cy)),
        CubicTo(Point(cx + rx, cy + ky), Point(cx + kx, cy + ry), Point(cx, cy + ry)),
        CubicTo(Point(cx - kx, cy + ry), Point(cx - rx, cy + ky), Point(cx - rx, cy)),
        CubicTo(Point(cx - rx, cy - ky), Point(cx - kx, cy - ry), Point(cx, cy - ry)),
        CubicTo(Point(cx + kx, cy - ry), Point(cx + rx, cy - ky), Point(cx + rx, cy)),
    ]


def shape_to_path(element: ShapeElement) -> PathElement:
    """Rewrite a basic shape as an equivalent M/L/C path element.

    Raises :class:`DegenerateShape` for non-positive dimensions (such
    shapes render nothing and are dropped with a diagnostic upstream).
    """
    tag = element.tag
    cmds: list[PathCommand]
    if tag == "rect":
        x, y = element.get("x"), element.get("y")
        w, h = element.get("width"), element.get("height")
        if w <= 0 or h <= 0:
            raise DegenerateShape(f"rect {w}x{h}")
        rx, ry = element.get("rx", -1.0), element.get("ry", -1.0)
        if rx < 0 and ry < 0:
            rx = ry = 0.0
        elif rx < 0:
            rx = ry
        elif ry < 0:
            ry = rx
        rx, ry = min(rx, w / 2.0), min(ry, h / 2.0)
        if rx > 0 and ry > 0:
            cmds = [MoveTo(Point(x + rx, y))]
            edges = [
                (Point(x + w - rx, y), Point(x + w, y + ry)),
                (Point(x + w, y + h - ry), Point(x + w - rx, y + h)),
                (Point(x + rx, y + h), Point(x, y + h - ry)),
                (Point(x, y + ry), Point(x + rx, y)),
            ]
            pos = cmds[0].end
            for line_end, arc_end in edges:
                if line_end != pos:
                    cmds.append(LineTo(line_end))
                    pos = line_end
                cmds.extend(_rounded_corner(pos, rx, ry, arc_end))
                pos = arc_end
        else:
            cmds = [
                MoveTo(Point(x, y)),
                LineTo(Point(x + w, y)),
                LineTo(Point(x + w, y + h)),
                LineTo(Point(x, y + h)),
                LineTo(Point(x, y)),
            ]
    elif tag == "circle":
        r = element.get("r")
        if r <= 0:
            raise DegenerateShape(f"circle r={r}")
        cmds = _ellipse_commands(element.get("cx"), element.get("cy"), r, r)
    elif tag == "ellipse":
        rx, ry = element.get("rx"), element.get("ry")
        if rx <= 0 or ry <= 0:
            raise DegenerateShape(f"ellipse {rx}x{ry}")
        cmds = _ellipse_commands(element.get("cx"), element.get("cy"), rx, ry)
    elif tag == "line":
        cmds = [
            MoveTo(Point(element.get("x1"), element.get("y1"))),
            LineTo(Point(element.get("x2"), element.get("y2"))),
        ]
    else:  # polyline / polygon
        points = element.get("points", ())
        if not isinstance(points, tuple) or len(points) < 2:
            raise DegenerateShape(f"{tag} with fewer than 2 points")
        cmds = [MoveTo(points[0])]
        cmds.extend(LineTo(p) for p in points[1:])
        if tag == "polygon" and points[-1] != points[0]:
            cmds.append(LineTo(points[0]))
    return PathElement(tuple(cmds), element.fill, element.transform)


# --- transforms and canvas ---------------------------------------------------


def apply_transform(path: PathElement, m: AffineTransform) -> PathElement:
    """Map every anchor and control point of a normalized path through ``m``.

    Affine maps commute with Bezier evaluation, so curve geometry is
    transformed exactly. Raises :class:`SingularTransform` for
    non-invertible matrices.
    """
    if abs(m.det) < _SINGULAR_EPS:
        raise SingularTransform(f"determinant {m.det}")
    if path.is_raw:
        raise ValidationError("apply_transform needs a simplified M/L/C path")
    if m.is_identity:
        return path
    ap = m.apply_point
    cmds: list[PathCommand] = []
    for cmd in path.commands:
        if isinstance(cmd, MoveTo):
            cmds.append(MoveTo(ap(cmd.end)))
        elif isinstance(cmd, LineTo):
            cmds.append(LineTo(ap(cmd.end)))
        else:
            cmds.append(CubicTo(ap(cmd.c1), ap(cmd.c2), ap(cmd.end)))
    return PathElement(tuple(cmds), path.fill, path.transform)


def canvas_transform(view_box: tuple[float, float, float, float]) -> AffineTransform:
    """Uniform scale-and-center map from a view box onto (0,0,1024,1024).

    Non-square canvases are letterboxed along the short axis, never
    stretched.
    """
    min_x, min_y, w, h = view_box
    s = CANVAS_SIZE / max(w, h)
    pad_x = (CANVAS_SIZE - w * s) / 2.0
    pad_y = (CANVAS_SIZE - h * s) / 2.0
    return (
        AffineTransform.translate(pad_x, pad_y)
        @ AffineTransform.scale(s)
        @ AffineTransform.translate(-min_x, -min_y)
    )


def normalize_canvas(doc: Document) -> Document:
    """Rescale a document of M/L/C paths onto the 1024-unit canvas."""
    t = canvas_transform(doc.view_box)
    if t.is_identity:
        if doc.view_box == NORMALIZED_VIEW_BOX:
            return doc
        return Document(NORMALIZED_VIEW_BOX, doc.paths, doc.normalized)
    paths = tuple(apply_transform(p, t) for p in doc.paths)
    return Document(NORMALIZED_VIEW_BOX, paths, doc.normalized)


# --- full pipeline ------------------------------------------------------------


def _has_geometry(cmds: list[PathCommand]) -> bool:
    return any(not isinstance(c, MoveTo) for c in cmds)


def convert_element(
    el: Drawable, report: NormalizeReport | None = None
) -> PathElement | None:
    """Convert one raw drawable to a flattened M/L/C path element.

    Returns ``None`` when the element is dropped under the documented
    rules: explicit ``fill="none"``, degenerate shape, singular transform,
    or no drawing commands after simplification. The same predicate drives
    both normalization and geometric verification.
    """
    if el.fill == NO_FILL:
        if report is not None:
            report.count_drop("fill_none")
        return None
    if abs(el.transform.det) < _SINGULAR_EPS:
        if report is not None:
            report.count_drop("singular_transform")
        return None

    if isinstance(el, ShapeElement):
        try:
            path = shape_to_path(el)
        except DegenerateShape:
            if report is not None:
                report.count_drop("degenerate_shape")
            return None
        if report is not None:
            report.count_shape(el.tag)
        cmds = list(path.commands)
    elif el.is_raw:
        if report is not None:
            report.relative_resolved += sum(
                1 for c in el.commands for _ in c.groups() if c.is_relative
            )
        cmds = simplify_commands(to_absolute(el.commands), report)
    else:
        cmds = list(el.commands)

    if not _has_geometry(cmds):
        if report is not None:
            report.count_drop("no_geometry")
        return None

    fill = el.fill if el.fill is not None else BLACK
    flattened = PathElement(tuple(cmds), fill, IDENTITY)
    if not el.transform.is_identity:
        flattened = apply_transform(flattened, el.transform)
        if report is not None:
            report.transforms_flattened += 1
    return flattened


def normalize_document(doc: Document) -> tuple[Document, NormalizeReport]:
    """Run the full unification pipeline over a parsed document.

    Shape conversion, command simplification, transform flattening, canvas
    normalization and fill resolution, in that order. Idempotent up to
    :func:`~svgforge.model.document_equal`. Raises :class:`EmptyDocument`
    when no drawable path survives.
    """
    report = NormalizeReport()
    paths: list[PathElement] = []
    for el in doc.paths:
        converted = convert_element(el, report)
        if converted is not None:
            paths.append(converted)
    if not paths:
        raise EmptyDocument("no drawable path survived normalization")

    staged = Document(doc.view_box, tuple(paths))
    scaled = normalize_canvas(staged)
    return Document(NORMALIZED_VIEW_BOX, scaled.paths, normalized=True), report
