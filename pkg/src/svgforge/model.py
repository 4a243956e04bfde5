"""Shared document model: geometry, paint, commands, documents.

All types are immutable after construction and safe to share between
threads. Coordinates are double-precision floats; canonical rounding to the
0.01-unit serialization grid happens only in :func:`format_number`, never
inside the model itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Union

from .errors import ValidationError

CANVAS_SIZE = 1024.0

#: Parameter count per absolute opcode of the SVG 1.1 path grammar.
PARAM_COUNTS = {
    "M": 2, "L": 2, "H": 1, "V": 1,
    "C": 6, "S": 4, "Q": 4, "T": 2,
    "A": 7, "Z": 0,
}

#: Indices of the large-arc / sweep flags inside one arc parameter group.
ARC_FLAG_INDICES = (3, 4)


class Point(NamedTuple):
    """A 2D point in canvas units (1024-unit canvas)."""

    x: float
    y: float


def format_number(value: float) -> str:
    """Canonical number formatting for serialized output.

    Shortest decimal with at most 2 fractional digits; trailing zeros and
    the dot are stripped and ``-0`` collapses to ``0``.
    """
    s = f"{value:.2f}"
    s = s.rstrip("0").rstrip(".")
    if s in ("-0", ""):
        return "0"
    return s


def _require_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValidationError(f"non-finite coordinate {v!r}")


# --- commands ------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RawCommand:
    """One pre-normalization path command with its original opcode.

    ``args`` must hold a positive multiple of the opcode's parameter
    count (a single command letter may carry repeated argument groups).
    """

    opcode: str
    args: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        n = PARAM_COUNTS.get(self.opcode.upper())
        if n is None:
            raise ValidationError(f"unknown opcode {self.opcode!r}")
        if n == 0:
            if self.args:
                raise ValidationError("Z takes no arguments")
            return
        if not self.args or len(self.args) % n != 0:
            raise ValidationError(
                f"{self.opcode!r} takes a positive multiple of {n} args, "
                f"got {len(self.args)}"
            )
        _require_finite(*self.args)
        if self.opcode.upper() == "A":
            for g in range(0, len(self.args), 7):
                for i in ARC_FLAG_INDICES:
                    flag = self.args[g + i]
                    if flag not in (0.0, 1.0):
                        raise ValidationError(f"arc flag must be 0 or 1, got {flag}")

    @property
    def is_relative(self) -> bool:
        return self.opcode.islower()

    def groups(self) -> list[tuple[float, ...]]:
        """Split repeated argument groups into single-arity tuples."""
        n = PARAM_COUNTS[self.opcode.upper()]
        if n == 0:
            return [()]
        return [self.args[i : i + n] for i in range(0, len(self.args), n)]


@dataclass(frozen=True, slots=True)
class MoveTo:
    end: Point

    def __post_init__(self) -> None:
        _require_finite(*self.end)


@dataclass(frozen=True, slots=True)
class LineTo:
    end: Point

    def __post_init__(self) -> None:
        _require_finite(*self.end)


@dataclass(frozen=True, slots=True)
class CubicTo:
    c1: Point
    c2: Point
    end: Point

    def __post_init__(self) -> None:
        _require_finite(*self.c1, *self.c2, *self.end)


#: The post-normalization command alphabet. Nothing else exists after
#: normalization.
PathCommand = Union[MoveTo, LineTo, CubicTo]


# --- paint ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Hex:
    """A flat color in canonical lowercase 6-digit hex (no ``#``)."""

    value: str

    def __post_init__(self) -> None:
        v = self.value
        if len(v) != 6 or any(c not in "0123456789abcdef" for c in v):
            raise ValidationError(f"hex paint must be 6 lowercase hex digits, got {v!r}")

    @property
    def css(self) -> str:
        return f"#{self.value}"


@dataclass(frozen=True, slots=True)
class NoFill:
    """Explicit ``fill="none"``."""


@dataclass(frozen=True, slots=True)
class Reference:
    """A paint server reference such as ``url(#gradient)``."""

    ref_id: str


Paint = Union[Hex, NoFill, Reference]

BLACK = Hex("000000")
NO_FILL = NoFill()


# --- transforms ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class AffineTransform:
    """2x3 affine matrix mapping (x, y) to (a*x + c*y + e, b*x + d*y + f)."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    e: float = 0.0
    f: float = 0.0

    def __post_init__(self) -> None:
        _require_finite(self.a, self.b, self.c, self.d, self.e, self.f)
        if not math.isfinite(self.det):
            raise ValidationError("transform determinant is not finite")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def is_identity(self) -> bool:
        return self == IDENTITY

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return (self.a * x + self.c * y + self.e, self.b * x + self.d * y + self.f)

    def apply_point(self, p: Point) -> Point:
        return Point(self.a * p.x + self.c * p.y + self.e,
                     self.b * p.x + self.d * p.y + self.f)

    def __matmul__(self, other: AffineTransform) -> AffineTransform:
        """Compose so that ``(m1 @ m2).apply(p) == m1.apply(m2.apply(p))``."""
        return AffineTransform(
            a=self.a * other.a + self.c * other.b,
            b=self.b * other.a + self.d * other.b,
            c=self.a * other.c + self.c * other.d,
            d=self.b * other.c + self.d * other.d,
            e=self.a * other.e + self.c * other.f + self.e,
            f=self.b * other.e + self.d * other.f + self.f,
        )

    @staticmethod
    def translate(tx: float, ty: float = 0.0) -> AffineTransform:
        return AffineTransform(e=tx, f=ty)

    @staticmethod
    def scale(sx: float, sy: float | None = None) -> AffineTransform:
        return AffineTransform(a=sx, d=sx if sy is None else sy)

    @staticmethod
    def rotate_deg(angle: float, cx: float = 0.0, cy: float = 0.0) -> AffineTransform:
        r = math.radians(angle)
        cos_r, sin_r = math.cos(r), math.sin(r)
        rot = AffineTransform(a=cos_r, b=sin_r, c=-sin_r, d=cos_r)
        if cx == 0.0 and cy == 0.0:
            return rot
        return (AffineTransform.translate(cx, cy) @ rot
                @ AffineTransform.translate(-cx, -cy))

    @staticmethod
    def skew_x_deg(angle: float) -> AffineTransform:
        return AffineTransform(c=math.tan(math.radians(angle)))

    @staticmethod
    def skew_y_deg(angle: float) -> AffineTransform:
        return AffineTransform(b=math.tan(math.radians(angle)))


IDENTITY = AffineTransform()


# --- elements ------------------------------------------------------------

#: Shape tags the parser retains for later conversion to paths.
SHAPE_TAGS = frozenset({"rect", "circle", "ellipse", "line", "polyline", "polygon"})


@dataclass(frozen=True, slots=True)
class PathElement:
    """An ordered command list plus its fill.

    Normalized path elements hold only :data:`PathCommand` commands; raw
    documents may instead carry :class:`RawCommand` lists (full command
    alphabet, relative opcodes allowed) along with an unflattened
    ``transform``. ``fill=None`` means the attribute was absent, which is
    distinct from an explicit ``fill="none"`` (:data:`NO_FILL`).
    """

    commands: tuple[RawCommand, ...] | tuple[PathCommand, ...]
    fill: Paint | None = None
    transform: AffineTransform = IDENTITY

    def __post_init__(self) -> None:
        if not self.commands:
            return
        kinds = {isinstance(c, RawCommand) for c in self.commands}
        if len(kinds) > 1:
            raise ValidationError("cannot mix raw and normalized commands")
        if not kinds.pop():
            if not isinstance(self.commands[0], MoveTo):
                raise ValidationError("first command must be MoveTo")
            for prev, cur in zip(self.commands, self.commands[1:]):
                if isinstance(prev, MoveTo) and isinstance(cur, MoveTo):
                    raise ValidationError("consecutive MoveTo commands")

    @property
    def is_raw(self) -> bool:
        return bool(self.commands) and isinstance(self.commands[0], RawCommand)


@dataclass(frozen=True, slots=True)
class ShapeElement:
    """A basic shape (rect/circle/ellipse/line/polyline/polygon) pre-conversion.

    ``params`` holds the numeric geometry attributes; polyline/polygon carry
    ``points`` as a tuple of :class:`Point`.
    """

    tag: str
    params: tuple[tuple[str, float | tuple[Point, ...]], ...]
    fill: Paint | None = None
    transform: AffineTransform = IDENTITY

    def __post_init__(self) -> None:
        if self.tag not in SHAPE_TAGS:
            raise ValidationError(f"unknown shape tag {self.tag!r}")

    def get(self, name: str, default: float = 0.0):
        for key, value in self.params:
            if key == name:
                return value
        return default


Drawable = Union[PathElement, ShapeElement]


# --- document ------------------------------------------------------------


NORMALIZED_VIEW_BOX = (0.0, 0.0, CANVAS_SIZE, CANVAS_SIZE)


@dataclass(frozen=True, slots=True)
class Document:
    """A parsed SVG: canvas metadata plus an ordered list of drawables.

    When ``normalized`` is true the document satisfies the unified form:
    view box (0, 0, 1024, 1024), only path elements containing only
    MoveTo/LineTo/CubicTo, identity transforms, and resolved fills.
    """

    view_box: tuple[float, float, float, float]
    paths: tuple[Drawable, ...] = ()
    normalized: bool = False

    def __post_init__(self) -> None:
        _require_finite(*self.view_box)
        if self.view_box[2] <= 0 or self.view_box[3] <= 0:
            raise ValidationError("view box width and height must be positive")
        if self.normalized:
            self._check_normalized()

    def _check_normalized(self) -> None:
        if self.view_box != NORMALIZED_VIEW_BOX:
            raise ValidationError("normalized documents use view box 0 0 1024 1024")
        for p in self.paths:
            if not isinstance(p, PathElement) or p.is_raw:
                raise ValidationError("normalized documents contain only M/L/C paths")
            if not p.transform.is_identity:
                raise ValidationError("normalized paths carry no transform")
            # References survive normalization (gradients cannot be resolved
            # to a flat color); absent fills must have been resolved.
            if p.fill is None:
                raise ValidationError("normalized paths have resolved fills")


class DifficultyLevel(Enum):
    """The four difficulty classes."""

    MONOCOLOR_EASY = "Monocolor_easy"
    MONOCOLOR_DIFFICULT = "Monocolor_difficult"
    MULTICOLOR_EASY = "Multicolor_easy"
    MULTICOLOR_DIFFICULT = "Multicolor_difficult"


# --- equality ------------------------------------------------------------


def _command_keys(commands) -> list[tuple]:
    keys: list[tuple] = []
    for cmd in commands:
        if isinstance(cmd, RawCommand):
            for group in cmd.groups():
                keys.append((cmd.opcode, tuple(format_number(a) for a in group)))
        elif isinstance(cmd, MoveTo):
            keys.append(("M", (format_number(cmd.end.x), format_number(cmd.end.y))))
        elif isinstance(cmd, LineTo):
            keys.append(("L", (format_number(cmd.end.x), format_number(cmd.end.y))))
        else:
            keys.append(("C", tuple(format_number(v)
                                    for p in (cmd.c1, cmd.c2, cmd.end) for v in p)))
    return keys


def _element_key(el: Drawable) -> tuple:
    t = tuple(format_number(v) for v in
              (el.transform.a, el.transform.b, el.transform.c,
               el.transform.d, el.transform.e, el.transform.f))
    if isinstance(el, PathElement):
        return ("path", tuple(_command_keys(el.commands)), el.fill, t)
    params = tuple(
        (k, tuple((format_number(p.x), format_number(p.y)) for p in v)
         if isinstance(v, tuple) else format_number(v))
        for k, v in el.params
    )
    return (el.tag, params, el.fill, t)


def document_equal(a: Document, b: Document) -> bool:
    """Structural equality up to canonical coordinate rounding.

    View box, drawable order, command sequences and fills must all match;
    the ``normalized`` flag is ignored. Raw absolute M/L/C commands compare
    equal to their normalized counterparts.
    """
    if tuple(format_number(v) for v in a.view_box) != tuple(
        format_number(v) for v in b.view_box
    ):
        return False
    if len(a.paths) != len(b.paths):
        return False
    return all(_element_key(x) == _element_key(y) for x, y in zip(a.paths, b.paths))
