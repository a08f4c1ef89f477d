"""
Arrangement graphs of point sets and curve families, and the surgery done
on them before division.

The arrangement graph has the marked points and the pairwise crossings as
vertices and the curve arcs between consecutive vertices as edges. Lines are
clipped to a rational box; the clip ends (and polyline ends) are synthetic
vertices that no count includes.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Collection, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .config import Config
from .errors import (
    BoundViolation, DegreeMismatch, InputError, IsolatedPoint,
    TangencyUnsupported, TripleCrossing, UnorderedInput,
)
from .geometry import Curve, Line, Point, Polyline, intersect, validate_k_intersecting
from .planar import EmbeddedGraph, embed_straight_line

logger = logging.getLogger(__name__)


class VertexKind(str, Enum):
    POINT = "point"
    CROSSING = "crossing"
    SYNTHETIC = "synthetic"
    GADGET = "gadget"


@dataclass(frozen=True, eq=False)
class ArrangementGraph:
    """
    Embedded arrangement with its geometric bookkeeping.

    curve_paths lists, for every curve, its vertices in increasing x; edge
    ids along a curve follow the same order. Ring edges and frame edges
    belong to no curve.
    """
    graph: EmbeddedGraph
    kind: Dict[int, VertexKind]
    position: Dict[int, Point]
    edge_curve: Dict[int, int]
    curve_paths: Dict[int, Tuple[int, ...]]
    crossing_count: int
    point_vertex: Dict[Point, int]
    passes: Dict[int, int]
    rings: Dict[int, Tuple[Tuple[int, ...], ...]] = field(default_factory=dict)

    def vertices_of(self, kind: VertexKind) -> List[int]:
        return sorted(v for v, k in self.kind.items() if k == kind)

    @property
    def point_vertices(self) -> List[int]:
        return self.vertices_of(VertexKind.POINT)

    @property
    def counted_vertices(self) -> List[int]:
        """Every vertex except synthetic clip and frame vertices"""
        return sorted(v for v, k in self.kind.items() if k != VertexKind.SYNTHETIC)


def _box(points: Iterable[Point], curves: Sequence[Curve]) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    xs: List[Fraction] = []
    ys: List[Fraction] = []
    for p in points:
        xs.append(p.x)
        ys.append(p.y)
    for c in curves:
        if isinstance(c, Line):
            xs.append(Fraction(0))
            ys.append(c.b)
        else:
            xs.extend(v.x for v in c.vertices)
            ys.extend(v.y for v in c.vertices)
    return min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1


def _clip(line: Line, box) -> Tuple[Point, Point]:
    xmin, ymin, xmax, ymax = box
    lo, hi = xmin, xmax
    if line.a > 0:
        lo = max(lo, (ymin - line.b) / line.a)
        hi = min(hi, (ymax - line.b) / line.a)
    elif line.a < 0:
        lo = max(lo, (ymax - line.b) / line.a)
        hi = min(hi, (ymin - line.b) / line.a)
    return Point(lo, line.a * lo + line.b), Point(hi, line.a * hi + line.b)


def _frame_key(p: Point, box):
    xmin, ymin, xmax, ymax = box
    if p.y == ymin and p.x < xmax:
        return 0, p.x
    if p.x == xmax and p.y < ymax:
        return 1, p.y
    if p.y == ymax and p.x > xmin:
        return 2, -p.x
    return 3, -p.y


def build_arrangement_graph(
    points: Sequence[Point],
    curves: Sequence[Curve],
    k: int,
    frame: bool = True,
) -> ArrangementGraph:
    """
    Build the embedded arrangement graph.

    Args:
        points: the marked point set P'
        curves: lines and x-monotone polylines, pairwise meeting at most k times
        k: intersection bound, validated
        frame: join the clip ends around the bounding box, making the graph connected

    Returns:
        ArrangementGraph; real vertices (points, then crossings, sorted by
        (x, y)) get ids before synthetic ones
    """
    point_set = set(points)
    if len(point_set) != len(points):
        raise InputError("point list contains duplicates")
    if not curves:
        raise InputError("no curves given")
    crossings = validate_k_intersecting(curves, k)

    through: Dict[Point, Set[int]] = {}
    for c in crossings:
        through.setdefault(c.point, set()).update(c.curves)
    for q, ids in through.items():
        if q not in point_set and len(ids) >= 3:
            raise TripleCrossing(
                f"curves {sorted(ids)} share the point ({q.x}, {q.y})",
                witness={"point": q, "curves": sorted(ids)},
            )
    crossing_points = {q for q in through if q not in point_set}

    on_curve: Dict[int, Set[Point]] = {c.id: set() for c in curves}
    for p in point_set:
        ids = [c.id for c in curves if c.contains(p)]
        if not ids:
            raise IsolatedPoint(f"point ({p.x}, {p.y}) lies on no curve", witness=p)
        for i in ids:
            on_curve[i].add(p)
    for c in crossings:
        for i in c.curves:
            on_curve[i].add(c.point)

    box = _box(list(point_set) + list(through), curves)
    ends: Dict[int, Tuple[Point, Point]] = {}
    synthetic: Set[Point] = set()
    for c in curves:
        if isinstance(c, Line):
            left, right = _clip(c, box)
        else:
            left, right = c.vertices[0], c.vertices[-1]
        ends[c.id] = (left, right)
        synthetic.update(q for q in (left, right) if q not in point_set)
    if frame:
        xmin, ymin, xmax, ymax = box
        synthetic.update([Point(xmin, ymin), Point(xmax, ymin), Point(xmax, ymax), Point(xmin, ymax)])

    real = sorted(point_set | crossing_points)
    order = real + sorted(synthetic - set(real))
    vertex_of = {q: i for i, q in enumerate(order)}
    kind = {}
    for i, q in enumerate(order):
        if q in point_set:
            kind[i] = VertexKind.POINT
        elif q in crossing_points:
            kind[i] = VertexKind.CROSSING
        else:
            kind[i] = VertexKind.SYNTHETIC

    edges: Dict[int, Tuple[int, int]] = {}
    directions: Dict[int, Tuple[Fraction, Fraction]] = {}
    edge_curve: Dict[int, int] = {}
    curve_paths: Dict[int, Tuple[int, ...]] = {}
    passes: Dict[int, int] = {v: 0 for v in vertex_of.values()}
    lowest_bend: Optional[Tuple[Point, int]] = None
    for c in curves:
        left, right = ends[c.id]
        path_points = sorted(on_curve[c.id] | {left, right})
        path = tuple(vertex_of[q] for q in path_points)
        curve_paths[c.id] = path
        for v in path:
            passes[v] += 1
        for a, b in zip(path_points, path_points[1:]):
            e = len(edges)
            edges[e] = (vertex_of[a], vertex_of[b])
            edge_curve[e] = c.id
            directions[2 * e] = c.tangent(a.x, 1)
            directions[2 * e + 1] = c.tangent(b.x, -1)
            if isinstance(c, Polyline):
                for bend in c.vertices[1:-1]:
                    if a.x < bend.x < b.x and (lowest_bend is None or (bend.y, bend.x) < (lowest_bend[0].y, lowest_bend[0].x)):
                        lowest_bend = (bend, e)
    if frame:
        ring = sorted((q for q in order if kind[vertex_of[q]] == VertexKind.SYNTHETIC and _on_box(q, box)),
                      key=lambda q: _frame_key(q, box))
        for a, b in zip(ring, ring[1:] + ring[:1]):
            edges[len(edges)] = (vertex_of[a], vertex_of[b])

    outer_dart = None
    if not frame and lowest_bend is not None:
        bend, e = lowest_bend
        lowest_vertex = min(order, key=lambda q: (q.y, q.x))
        if (bend.y, bend.x) < (lowest_vertex.y, lowest_vertex.x):
            outer_dart = 2 * e + 1

    coords = {i: (q.x, q.y) for i, q in enumerate(order)}
    graph = embed_straight_line(coords, edges, directions=directions, outer_dart=outer_dart)
    logger.info(
        "arrangement: %d points, %d curves, %d crossings, %d vertices, %d edges",
        len(point_set), len(curves), len(crossing_points), graph.num_vertices, graph.num_edges,
    )
    return ArrangementGraph(
        graph=graph,
        kind=kind,
        position={i: q for i, q in enumerate(order)},
        edge_curve=edge_curve,
        curve_paths=curve_paths,
        crossing_count=len(crossing_points),
        point_vertex={q: vertex_of[q] for q in point_set},
        passes=passes,
    )


def _on_box(q: Point, box) -> bool:
    xmin, ymin, xmax, ymax = box
    return q.x in (xmin, xmax) or q.y in (ymin, ymax)


# Truncation

@dataclass(frozen=True)
class Truncation:
    """Split of P into heavy points Q (on at least ell curves) and the rest P'"""
    heavy: Tuple[Point, ...]
    light: Tuple[Point, ...]
    degree: Dict[Point, int]
    heavy_incidences: int
    light_incidences: int
    bound: float
    within_bound: bool


def high_degree_truncation(
    points: Sequence[Point],
    curves: Sequence[Curve],
    ell: int,
    k: int = 1,
    constant: Fraction = Config.TRUNCATION_C,
    strict: bool = False,
) -> Truncation:
    """
    Remove the points incident to at least ell curves.

    The incidences lost are checked exactly against
    constant * (|C|^2 / ell^(1+1/k) + |C|); with strict=True a failed check
    raises BoundViolation, otherwise it is reported.
    """
    if ell < 2:
        raise InputError(f"ell must be at least 2, got {ell}")
    degree = {p: sum(1 for c in curves if c.contains(p)) for p in points}
    heavy = tuple(p for p in points if degree[p] >= ell)
    light = tuple(p for p in points if degree[p] < ell)
    lost = sum(degree[p] for p in heavy)
    kept = sum(degree[p] for p in light)

    m = len(curves)
    c = Fraction(constant)
    lhs = Fraction(lost) / c - m
    within = lhs <= 0 or lhs ** k * Fraction(ell) ** (k + 1) <= Fraction(m) ** (2 * k)
    bound = float(c) * (m * m / ell ** (1 + 1 / k) + m)
    if not within:
        message = f"truncation removed {lost} incidences, above the bound {bound:.1f}"
        if strict:
            raise BoundViolation(message, witness=lost)
        logger.warning(message)
    logger.debug("truncation ell=%d: |Q|=%d, %d incidences removed", ell, len(heavy), lost)
    return Truncation(heavy, light, degree, lost, kept, bound, within)


# Nested cycles

def add_nested_cycles(arrangement: ArrangementGraph, p: int, w: int) -> ArrangementGraph:
    """
    Surround the point vertex p by w nested cycles.

    Every edge-end at p is subdivided by w new vertices; the i-th
    subdivision vertices, in rotation order, form ring i (ring 1 innermost).
    The far piece of each subdivided edge keeps the original edge id.
    """
    if w < 1:
        raise InputError(f"w must be at least 1, got {w}")
    if arrangement.kind.get(p) != VertexKind.POINT:
        raise InputError(f"vertex {p} is not a marked point")
    graph = arrangement.graph
    spokes = list(graph.rotation(p))
    m = len(spokes)
    if m != 2 * arrangement.passes[p]:
        raise DegreeMismatch(
            f"vertex {p} has degree {m}, expected twice its {arrangement.passes[p]} curve passages",
            witness=p,
        )

    ends = {e: graph.endpoints(e) for e in graph.edges}
    rotation = {v: list(graph.rotation(v)) for v in graph.vertices}
    next_vertex = max(graph.vertices) + 1
    next_edge = max(graph.edges) + 1

    sub = [[next_vertex + j * w + i for i in range(w)] for j in range(m)]
    spoke_edge = [[next_edge + j * w + i for i in range(w)] for j in range(m)]
    ring_base = next_edge + m * w
    ring_edge = [[ring_base + j * w + i for i in range(w)] for j in range(m)]

    for j, d in enumerate(spokes):
        e = d >> 1
        far = sub[j][w - 1]
        u, v = ends[e]
        ends[e] = (far, v) if (d & 1) == 0 else (u, far)
        rotation[p][rotation[p].index(d)] = 2 * spoke_edge[j][0]
        for i in range(w):
            inner = p if i == 0 else sub[j][i - 1]
            ends[spoke_edge[j][i]] = (inner, sub[j][i])
            ends[ring_edge[j][i]] = (sub[j][i], sub[(j + 1) % m][i])
    for j, d in enumerate(spokes):
        for i in range(w):
            outward = d if i == w - 1 else 2 * spoke_edge[j][i + 1]
            inward = 2 * spoke_edge[j][i] + 1
            rotation[sub[j][i]] = [
                outward,
                2 * ring_edge[j][i],
                inward,
                2 * ring_edge[(j - 1) % m][i] + 1,
            ]

    coords = graph.coords
    result = EmbeddedGraph(ends, rotation, graph.outer_dart, graph.diagonals, coords, graph.marked)
    if not result.euler_ok():
        raise DegreeMismatch(f"gadget at vertex {p} broke planarity", witness=p)

    kind = dict(arrangement.kind)
    edge_curve = dict(arrangement.edge_curve)
    passes = dict(arrangement.passes)
    paths = dict(arrangement.curve_paths)
    for j, d in enumerate(spokes):
        curve = arrangement.edge_curve.get(d >> 1)
        for i in range(w):
            kind[sub[j][i]] = VertexKind.GADGET
            passes[sub[j][i]] = 1
            if curve is not None:
                edge_curve[spoke_edge[j][i]] = curve
        if curve is None:
            continue
        head = graph.head(d)
        path = list(paths[curve])
        at = _adjacent_index(path, p, head)
        if path[at] == p:
            path[at + 1:at + 1] = sub[j]
        else:
            path[at + 1:at + 1] = list(reversed(sub[j]))
        paths[curve] = tuple(path)

    rings = dict(arrangement.rings)
    rings[p] = tuple(tuple(sub[j][i] for j in range(m)) for i in range(w))
    logger.debug("gadget at %d: |p|=%d, w=%d, +%d vertices", p, m // 2, w, m * w)
    return replace(
        arrangement,
        graph=result,
        kind=kind,
        edge_curve=edge_curve,
        curve_paths=paths,
        passes=passes,
        rings=rings,
    )


def _adjacent_index(path: List[int], a: int, b: int) -> int:
    """Index i with {path[i], path[i+1]} = {a, b}"""
    for i in range(len(path) - 1):
        if {path[i], path[i + 1]} == {a, b}:
            return i
    raise ValueError(f"vertices {a} and {b} are not consecutive on the curve")


def add_gadgets(arrangement: ArrangementGraph, vertices: Iterable[int], w: int) -> ArrangementGraph:
    for p in sorted(vertices):
        arrangement = add_nested_cycles(arrangement, p, w)
    return arrangement


# Block partition

@dataclass(frozen=True)
class BlockPartition:
    """Blocks of s consecutive same-part points along one curve"""
    blocks: Tuple[Tuple[int, ...], ...]
    discarded: int
    boundary_count: int
    runs: int
    s: int
    curve: Optional[int] = None

    @property
    def within_bound(self) -> bool:
        return self.discarded <= self.s * (self.boundary_count + 1)


def block_partition(
    walk: Sequence[int],
    points: Collection[int],
    boundary: Collection[int],
    s: int,
    part_of: Optional[Mapping[int, int]] = None,
    positions: Optional[Mapping[int, Fraction]] = None,
    curve: Optional[int] = None,
) -> BlockPartition:
    """
    Cut the marked points along a curve into blocks of exactly s.

    Args:
        walk: vertices of the curve in order along it
        points: the marked vertices
        boundary: boundary vertices; a block never spans one, and marked
            boundary vertices join no block
        s: block size
        part_of: part index of each marked vertex; a run also ends where the part changes
        positions: x coordinate of each walk vertex, checked to increase strictly
        curve: id recorded on the result

    Returns:
        BlockPartition with the blocks and the number of points left over
    """
    if s < 1:
        raise InputError(f"block size must be positive, got {s}")
    if len(set(walk)) != len(walk):
        raise UnorderedInput("walk repeats a vertex", witness=curve)
    if positions is not None:
        for a, b in zip(walk, walk[1:]):
            if positions[b] <= positions[a]:
                raise UnorderedInput(f"x does not increase from vertex {a} to vertex {b}", witness=(a, b))

    blocks: List[Tuple[int, ...]] = []
    discarded = 0
    runs = 0
    run: List[int] = []
    run_part = None

    def flush():
        nonlocal discarded, runs
        if run:
            runs += 1
            full = len(run) - len(run) % s
            blocks.extend(tuple(run[i:i + s]) for i in range(0, full, s))
            discarded += len(run) - full
            run.clear()

    b_count = 0
    for v in walk:
        if v in boundary:
            b_count += 1
            flush()
            run_part = None
            continue
        if v not in points:
            continue
        part = part_of.get(v) if part_of is not None else None
        if run and part != run_part:
            flush()
        run_part = part
        run.append(v)
    flush()
    return BlockPartition(tuple(blocks), discarded, b_count, runs, s, curve)


# General position

def general_position_subfamily(
    curves: Sequence[Curve],
    points: Collection[Point],
    k: int = 1,
) -> Tuple[List[Curve], List[int]]:
    """
    Greedy subfamily, in input order, in which no three curves share a
    point outside `points` and every pair meets at most k times transversally.

    Returns:
        (kept curves, ids of dropped curves)
    """
    marked = set(points)
    kept: List[Curve] = []
    dropped: List[int] = []
    crossed: Set[Point] = set()
    for c in curves:
        new: List[Point] = []
        ok = True
        for g in kept:
            try:
                hits = intersect(c, g)
            except TangencyUnsupported:
                ok = False
                break
            if len(hits) > k:
                ok = False
                break
            new.extend(q for q in hits if q not in marked)
        if ok and (len(set(new)) != len(new) or any(q in crossed for q in new)):
            ok = False
        if not ok:
            dropped.append(c.id)
            continue
        kept.append(c)
        crossed.update(new)
    if dropped:
        logger.warning("general position: dropped %d of %d curves", len(dropped), len(curves))
    return kept, dropped
