"""
Exact planar geometry for lines and x-monotone polylines.

Every coordinate is a Fraction. A curve is a piecewise-linear function of x,
so the intersections of two curves are the zeros of their difference,
found piece by piece between the merged breakpoints.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import InputError, KViolation, TangencyUnsupported

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, str]


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: Number, y: Number) -> "Point":
        return cls(Fraction(x), Fraction(y))


class Piece(NamedTuple):
    """y = slope*x + intercept on [lo, hi]; None marks an unbounded end"""
    lo: Optional[Fraction]
    hi: Optional[Fraction]
    slope: Fraction
    intercept: Fraction


class Curve:
    """Graph of a piecewise-linear function over an interval of x"""

    id: int
    pieces: Tuple[Piece, ...]

    @property
    def x_min(self) -> Optional[Fraction]:
        return self.pieces[0].lo

    @property
    def x_max(self) -> Optional[Fraction]:
        return self.pieces[-1].hi

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        """Finite piece ends, including the domain ends of a polyline"""
        xs = [p.lo for p in self.pieces if p.lo is not None]
        if self.x_max is not None:
            xs.append(self.x_max)
        return tuple(xs)

    def in_domain(self, x: Fraction) -> bool:
        return (self.x_min is None or x >= self.x_min) and (self.x_max is None or x <= self.x_max)

    def piece_at(self, x: Fraction, side: int = 1) -> Piece:
        """Piece just right of x (side=+1) or just left of it (side=-1)"""
        for piece in self.pieces:
            lo_ok = piece.lo is None or (piece.lo <= x if side > 0 else piece.lo < x)
            hi_ok = piece.hi is None or (piece.hi > x if side > 0 else piece.hi >= x)
            if lo_ok and hi_ok:
                return piece
        raise ValueError(f"curve {self.id} does not extend to the {'right' if side > 0 else 'left'} of x={x}")

    def at(self, x: Fraction) -> Fraction:
        if not self.in_domain(x):
            raise ValueError(f"x={x} outside the domain of curve {self.id}")
        side = 1 if self.x_max is None or x < self.x_max else -1
        piece = self.piece_at(x, side)
        return piece.slope * x + piece.intercept

    def contains(self, point: Point) -> bool:
        return self.in_domain(point.x) and self.at(point.x) == point.y

    def tangent(self, x: Fraction, side: int) -> Tuple[Fraction, Fraction]:
        """Direction of the curve leaving x rightwards (+1) or leftwards (-1)"""
        slope = self.piece_at(x, side).slope
        return (Fraction(1), slope) if side > 0 else (Fraction(-1), -slope)


@dataclass(frozen=True)
class Line(Curve):
    """y = a*x + b"""
    a: Fraction
    b: Fraction
    id: int = 0
    pieces: Tuple[Piece, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "pieces", (Piece(None, None, self.a, self.b),))


@dataclass(frozen=True)
class Polyline(Curve):
    """Chain of vertices with strictly increasing x"""
    vertices: Tuple[Point, ...]
    id: int = 0
    pieces: Tuple[Piece, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple(Point.of(*v) for v in self.vertices)
        if len(verts) < 2:
            raise InputError(f"polyline {self.id} needs at least two vertices")
        for p, q in zip(verts, verts[1:]):
            if q.x <= p.x:
                raise InputError(f"polyline {self.id} is not strictly x-monotone at x={q.x}", witness=self.id)
        pieces = []
        for p, q in zip(verts, verts[1:]):
            slope = (q.y - p.y) / (q.x - p.x)
            pieces.append(Piece(p.x, q.x, slope, p.y - slope * p.x))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "pieces", tuple(pieces))


@dataclass(frozen=True)
class Crossing:
    point: Point
    curves: Tuple[int, int]


def _lower(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _upper(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def intersect(f: Curve, g: Curve) -> List[Point]:
    """
    Transversal crossing points of two curves, sorted by x.

    Raises TangencyUnsupported when the curves overlap on an interval, touch
    without crossing, or meet at an end of either polyline.
    """
    pair = (f.id, g.id)
    if isinstance(f, Line) and isinstance(g, Line):
        if f.a == g.a:
            if f.b == g.b:
                raise TangencyUnsupported(f"lines {pair} coincide", witness=pair)
            return []
        x = (g.b - f.b) / (f.a - g.a)
        return [Point(x, f.a * x + f.b)]

    lo = _lower(f.x_min, g.x_min)
    hi = _upper(f.x_max, g.x_max)
    if lo is not None and hi is not None and lo > hi:
        return []
    if lo is not None and hi is not None and lo == hi:
        if f.at(lo) == g.at(lo):
            raise TangencyUnsupported(f"curves {pair} meet only at an endpoint x={lo}", witness=pair)
        return []

    xs = sorted({x for x in f.breakpoints + g.breakpoints if (lo is None or x >= lo) and (hi is None or x <= hi)})
    found: List[Point] = []

    def diff(x: Fraction, side: int) -> Tuple[Fraction, Fraction]:
        pf, pg = f.piece_at(x, side), g.piece_at(x, side)
        return pf.slope - pg.slope, pf.intercept - pg.intercept

    # open intervals between consecutive breakpoints (and the unbounded ends)
    bounds: List[Tuple[Optional[Fraction], Optional[Fraction]]] = []
    edges = ([lo] if lo is None else []) + xs + ([hi] if hi is None else [])
    if not xs:
        bounds.append((None, None))
    else:
        for a, b in zip(edges, edges[1:]):
            bounds.append((a, b))
    for a, b in bounds:
        if a is None and b is None:
            x0, side = Fraction(0), 1
        elif a is None:
            x0, side = b, -1
        else:
            x0, side = a, 1
        ds, di = diff(x0, side)
        if ds == 0:
            if di == 0:
                raise TangencyUnsupported(f"curves {pair} overlap between x={a} and x={b}", witness=pair)
            continue
        x = -di / ds
        if (a is None or x > a) and (b is None or x < b):
            found.append(Point(x, f.at(x)))

    for x in xs:
        if f.at(x) != g.at(x):
            continue
        if x == lo or x == hi:
            raise TangencyUnsupported(f"curves {pair} meet at a polyline end x={x}", witness=pair)
        left, _ = diff(x, -1)
        right, _ = diff(x, 1)
        if left == 0 or right == 0:
            raise TangencyUnsupported(f"curves {pair} overlap next to x={x}", witness=pair)
        if _sign(left) != _sign(right):
            raise TangencyUnsupported(f"curves {pair} touch without crossing at x={x}", witness=pair)
        found.append(Point(x, f.at(x)))
    return sorted(found)


def validate_k_intersecting(curves: Sequence[Curve], k: int) -> List[Crossing]:
    """
    All pairwise crossings of a curve family, or KViolation for the first
    pair (in index order) that meets more than k times.
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    ids = [c.id for c in curves]
    if len(set(ids)) != len(ids):
        raise InputError("curve ids are not distinct")
    crossings: List[Crossing] = []
    for i, f in enumerate(curves):
        for g in curves[i + 1:]:
            points = intersect(f, g)
            if len(points) > k:
                raise KViolation(
                    f"curves {f.id} and {g.id} meet {len(points)} > {k} times",
                    pair=(f.id, g.id),
                    witnesses=points[:k + 1],
                )
            crossings.extend(Crossing(p, (f.id, g.id)) for p in points)
    logger.debug("%d curves, %d crossings, k=%d", len(curves), len(crossings), k)
    return crossings


def curves_through(point: Point, curves: Iterable[Curve]) -> List[int]:
    return [c.id for c in curves if c.contains(point)]
