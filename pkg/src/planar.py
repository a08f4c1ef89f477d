"""
Embedded planar multigraphs.

A graph is a rotation system: edge e owns the darts 2e (first endpoint to
second) and 2e+1 (reverse), and every vertex stores its outgoing darts in
counterclockwise order. Faces are traced with next(d) = pred(twin(d)), which
keeps each face on the left of its darts. The outer face is fixed by a
designated dart lying on it.
"""

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import (
    DanglingEdge, Disconnected, NonPlanarEmbedding, NonSimpleCycle,
    RotationMismatch, SelfLoop,
)

logger = logging.getLogger(__name__)

Coord = Tuple[Fraction, Fraction]


def twin(dart: int) -> int:
    return dart ^ 1


def edge_of(dart: int) -> int:
    return dart >> 1


@dataclass(frozen=True)
class FaceWalk:
    """Cyclic sequence of darts bounding one face"""
    id: int
    darts: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class SimpleCycle:
    """Simple cycle given by its vertices and the darts joining them"""
    vertices: Tuple[int, ...]
    darts: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> FrozenSet[int]:
        return frozenset(edge_of(d) for d in self.darts)


@dataclass(frozen=True)
class Region:
    """Edge-induced subgraph"""
    edges: FrozenSet[int]
    vertices: FrozenSet[int]


class EmbeddedGraph:
    """
    Immutable rotation-system embedding.

    Vertex and edge ids are arbitrary integers and survive restriction, so a
    region keeps the ids of the graph it was cut from.
    """

    def __init__(
        self,
        ends: Mapping[int, Tuple[int, int]],
        rotation: Mapping[int, Sequence[int]],
        outer_dart: Optional[int],
        diagonals: Iterable[int] = (),
        coords: Optional[Mapping[int, Coord]] = None,
        marked: Iterable[int] = (),
    ):
        self._ends: Dict[int, Tuple[int, int]] = dict(ends)
        self._rotation: Dict[int, Tuple[int, ...]] = {v: tuple(r) for v, r in rotation.items()}
        self._pos: Dict[int, int] = {}
        for darts in self._rotation.values():
            for i, d in enumerate(darts):
                self._pos[d] = i
        self.outer_dart = outer_dart
        self.diagonals: FrozenSet[int] = frozenset(diagonals)
        self.coords: Optional[Dict[int, Coord]] = dict(coords) if coords is not None else None
        self.marked: FrozenSet[int] = frozenset(marked)
        self._faces: Optional[List[FaceWalk]] = None
        self._face_of: Optional[Dict[int, int]] = None

    # Basic structure

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self._rotation))

    @property
    def edges(self) -> Tuple[int, ...]:
        return tuple(sorted(self._ends))

    @property
    def num_vertices(self) -> int:
        return len(self._rotation)

    @property
    def num_edges(self) -> int:
        return len(self._ends)

    def has_edge(self, e: int) -> bool:
        return e in self._ends

    def has_vertex(self, v: int) -> bool:
        return v in self._rotation

    def endpoints(self, e: int) -> Tuple[int, int]:
        return self._ends[e]

    def origin(self, d: int) -> int:
        return self._ends[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self._ends[d >> 1][(d & 1) ^ 1]

    def rotation(self, v: int) -> Tuple[int, ...]:
        return self._rotation[v]

    def degree(self, v: int) -> int:
        return len(self._rotation[v])

    def succ(self, d: int) -> int:
        """Next dart counterclockwise around origin(d)"""
        darts = self._rotation[self.origin(d)]
        return darts[(self._pos[d] + 1) % len(darts)]

    def pred(self, d: int) -> int:
        darts = self._rotation[self.origin(d)]
        return darts[(self._pos[d] - 1) % len(darts)]

    def face_next(self, d: int) -> int:
        return self.pred(d ^ 1)

    def darts(self) -> List[int]:
        out = []
        for e in self.edges:
            out.append(2 * e)
            out.append(2 * e + 1)
        return out

    def neighbors(self, v: int) -> List[int]:
        return [self.head(d) for d in self._rotation[v]]

    def original_edges(self) -> FrozenSet[int]:
        return frozenset(e for e in self._ends if e not in self.diagonals)

    # Faces

    def faces(self) -> List[FaceWalk]:
        """Face walks, numbered in order of their smallest starting dart"""
        if self._faces is None:
            faces: List[FaceWalk] = []
            face_of: Dict[int, int] = {}
            for start in self.darts():
                if start in face_of:
                    continue
                walk = []
                d = start
                while True:
                    face_of[d] = len(faces)
                    walk.append(d)
                    d = self.face_next(d)
                    if d == start:
                        break
                faces.append(FaceWalk(id=len(faces), darts=tuple(walk)))
            self._faces = faces
            self._face_of = face_of
        return self._faces

    def face_of(self, d: int) -> int:
        """Id of the face on the left of dart d"""
        self.faces()
        return self._face_of[d]

    @property
    def outer_face(self) -> Optional[int]:
        if self.outer_dart is None:
            return None
        return self.face_of(self.outer_dart)

    # Connectivity

    def components(self) -> List[Set[int]]:
        seen: Set[int] = set()
        comps = []
        for root in self.vertices:
            if root in seen:
                continue
            comp = {root}
            seen.add(root)
            queue = deque([root])
            while queue:
                v = queue.popleft()
                for u in self.neighbors(v):
                    if u not in seen:
                        seen.add(u)
                        comp.add(u)
                        queue.append(u)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def euler_ok(self) -> bool:
        """V - E + F = 2 for every component that has an edge"""
        face_count: Dict[int, int] = {}
        edge_count: Dict[int, int] = {}
        comp_of = {}
        comps = self.components()
        for i, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = i
        for e, (u, _) in self._ends.items():
            edge_count[comp_of[u]] = edge_count.get(comp_of[u], 0) + 1
        for face in self.faces():
            c = comp_of[self.origin(face.darts[0])]
            face_count[c] = face_count.get(c, 0) + 1
        for i, comp in enumerate(comps):
            if edge_count.get(i, 0) == 0:
                continue
            if len(comp) - edge_count[i] + face_count.get(i, 0) != 2:
                return False
        return True

    # Derived graphs

    def restrict(self, edge_ids: Iterable[int], outer_dart: Optional[int] = None) -> "EmbeddedGraph":
        """Edge-induced subgraph with the inherited rotations; diagonal marks are dropped"""
        keep = set(edge_ids)
        rotation: Dict[int, List[int]] = {}
        for e in keep:
            for v in self._ends[e]:
                rotation.setdefault(v, [])
        for v in rotation:
            rotation[v] = [d for d in self._rotation[v] if (d >> 1) in keep]
        if outer_dart is not None and (outer_dart >> 1) not in keep:
            raise ValueError(f"outer dart {outer_dart} is not on a kept edge")
        coords = None
        if self.coords is not None:
            coords = {v: self.coords[v] for v in rotation if v in self.coords}
        return EmbeddedGraph(
            ends={e: self._ends[e] for e in keep},
            rotation=rotation,
            outer_dart=outer_dart,
            coords=coords,
            marked=[v for v in self.marked if v in rotation],
        )

    def with_outer_dart(self, outer_dart: int) -> "EmbeddedGraph":
        return EmbeddedGraph(self._ends, self._rotation, outer_dart, self.diagonals, self.coords, self.marked)

    def with_marked(self, marked: Iterable[int]) -> "EmbeddedGraph":
        return EmbeddedGraph(self._ends, self._rotation, self.outer_dart, self.diagonals, self.coords, marked)

    def __repr__(self) -> str:
        return f"EmbeddedGraph(V={self.num_vertices}, E={self.num_edges}, outer_dart={self.outer_dart})"


class GraphBuilder:
    """
    Mutable rotation system used for surgery.

    A builder is exclusive-use: freeze() hands out an immutable EmbeddedGraph
    and the builder should not be shared while it is being modified.
    """

    def __init__(self):
        self._ends: Dict[int, Tuple[int, int]] = {}
        self._rotation: Dict[int, List[int]] = {}
        self._next_edge = 0
        self._next_vertex = 0

    @classmethod
    def from_graph(cls, graph: EmbeddedGraph) -> "GraphBuilder":
        builder = cls()
        for e in graph.edges:
            builder._ends[e] = graph.endpoints(e)
        for v in graph.vertices:
            builder._rotation[v] = list(graph.rotation(v))
        builder._next_edge = max(graph.edges, default=-1) + 1
        builder._next_vertex = max(graph.vertices, default=-1) + 1
        return builder

    @property
    def next_edge_id(self) -> int:
        return self._next_edge

    def reserve_edge_ids(self, base: int):
        self._next_edge = max(self._next_edge, base)

    def add_vertex(self, v: Optional[int] = None) -> int:
        if v is None:
            v = self._next_vertex
        if v in self._rotation:
            raise ValueError(f"vertex {v} already exists")
        self._rotation[v] = []
        self._next_vertex = max(self._next_vertex, v + 1)
        return v

    def add_edge(
        self,
        u: int,
        v: int,
        after_u: Optional[int] = None,
        after_v: Optional[int] = None,
        edge_id: Optional[int] = None,
    ) -> int:
        """
        Insert edge u-v. Its dart out of u goes counterclockwise right after
        after_u (appended when None); likewise at v.
        """
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}", witness=u)
        e = self._next_edge if edge_id is None else edge_id
        if e in self._ends:
            raise ValueError(f"edge id {e} already in use")
        self._ends[e] = (u, v)
        self._next_edge = max(self._next_edge, e + 1)
        self._insert(u, 2 * e, after_u)
        self._insert(v, 2 * e + 1, after_v)
        return e

    def _insert(self, v: int, dart: int, after: Optional[int]):
        darts = self._rotation[v]
        if after is None:
            darts.append(dart)
        else:
            darts.insert(darts.index(after) + 1, dart)

    def replace_dart(self, v: int, old: int, new: int):
        darts = self._rotation[v]
        darts[darts.index(old)] = new

    def set_rotation(self, v: int, darts: Sequence[int]):
        self._rotation[v] = list(darts)

    def remove_edge(self, e: int):
        u, v = self._ends.pop(e)
        self._rotation[u].remove(2 * e)
        self._rotation[v].remove(2 * e + 1)

    def set_ends(self, e: int, u: int, v: int):
        self._ends[e] = (u, v)
        self._next_edge = max(self._next_edge, e + 1)

    def origin(self, d: int) -> int:
        return self._ends[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self._ends[d >> 1][(d & 1) ^ 1]

    def rotation(self, v: int) -> List[int]:
        return self._rotation[v]

    def face_next(self, d: int) -> int:
        t = d ^ 1
        darts = self._rotation[self.origin(t)]
        return darts[darts.index(t) - 1]

    def face_walk(self, d: int) -> List[int]:
        walk = [d]
        cur = self.face_next(d)
        while cur != d:
            walk.append(cur)
            cur = self.face_next(cur)
        return walk

    def edge_ids(self) -> List[int]:
        return sorted(self._ends)

    def has_edge_between(self, u: int, v: int) -> bool:
        return any(self.head(d) == v for d in self._rotation[u])

    def freeze(
        self,
        outer_dart: Optional[int],
        diagonals: Iterable[int] = (),
        coords: Optional[Mapping[int, Coord]] = None,
        marked: Iterable[int] = (),
    ) -> EmbeddedGraph:
        return EmbeddedGraph(self._ends, self._rotation, outer_dart, diagonals, coords, marked)


def build_graph(
    vertex_count: int,
    edges: Sequence[Tuple[int, int]],
    rotations: Mapping[int, Sequence[int]],
    outer_face: Optional[int] = None,
    marked: Iterable[int] = (),
    coords: Optional[Mapping[int, Coord]] = None,
) -> EmbeddedGraph:
    """
    Validate and build an embedding.

    Edge ids are list positions; rotations list edge ids counterclockwise.
    outer_face is a face id in faces() order; when omitted the largest face
    (smallest id on ties) is used.
    """
    ends: Dict[int, Tuple[int, int]] = {}
    incident: Dict[int, List[int]] = {v: [] for v in range(vertex_count)}
    for e, (u, v) in enumerate(edges):
        for x in (u, v):
            if not 0 <= x < vertex_count:
                raise DanglingEdge(f"edge {e} has endpoint {x} outside 0..{vertex_count - 1}", witness=e)
        if u == v:
            raise SelfLoop(f"edge {e} is a self-loop at vertex {u}", witness=e)
        ends[e] = (u, v)
        incident[u].append(e)
        incident[v].append(e)

    rotation: Dict[int, List[int]] = {}
    for v in range(vertex_count):
        order = list(rotations.get(v, rotations.get(str(v), [])))
        if sorted(order) != sorted(incident[v]):
            raise RotationMismatch(
                f"rotation at vertex {v} is {order}, incident edges are {sorted(incident[v])}",
                witness=v,
            )
        rotation[v] = [2 * e if ends[e][0] == v else 2 * e + 1 for e in order]

    graph = EmbeddedGraph(ends, rotation, outer_dart=None, marked=marked, coords=coords)
    if not graph.euler_ok():
        raise NonPlanarEmbedding("face walks violate Euler's formula")
    faces = graph.faces()
    if not faces:
        return graph
    if outer_face is None:
        outer_face = max(faces, key=lambda f: (f.size, -f.id)).id
    if not 0 <= outer_face < len(faces):
        raise RotationMismatch(f"outer face {outer_face} does not exist ({len(faces)} faces)")
    return graph.with_outer_dart(faces[outer_face].darts[0])


def faces(graph: EmbeddedGraph) -> List[FaceWalk]:
    return graph.faces()


def _fan_vertex_index(walk: Sequence[int], graph_origin) -> Optional[int]:
    counts: Dict[int, int] = {}
    for d in walk:
        v = graph_origin(d)
        counts[v] = counts.get(v, 0) + 1
    for i, d in enumerate(walk):
        if counts[graph_origin(d)] == 1:
            return i
    return None


def triangulate_faces(
    graph: EmbeddedGraph, id_base: Optional[int] = None
) -> Tuple[EmbeddedGraph, FrozenSet[int]]:
    """
    Fan every face of size > 3 from one vertex.

    Returns the triangulated graph and the new diagonal ids, which are
    numbered from id_base (default: one past the largest edge id). The
    outer dart is kept. A graph whose faces all have size 2 or 3 is
    returned unchanged.
    """
    big = [f for f in graph.faces() if f.size > 3]
    if not big:
        return graph, frozenset()

    builder = GraphBuilder.from_graph(graph)
    if id_base is not None:
        builder.reserve_edge_ids(id_base)
    added: List[int] = []

    for face in big:
        walk = list(face.darts)
        start = _fan_vertex_index(walk, graph.origin)
        if start is None:
            added.extend(_clip_ears(builder, walk))
            continue
        walk = walk[start:] + walk[:start]
        v0 = graph.origin(walk[0])
        f = len(walk)
        after_v0 = walk[0]
        for i in range(2, f - 1):
            vi = graph.origin(walk[i])
            e = builder.add_edge(v0, vi, after_u=after_v0, after_v=walk[i])
            after_v0 = 2 * e
            added.append(e)

    result = builder.freeze(
        graph.outer_dart,
        diagonals=graph.diagonals | set(added),
        coords=graph.coords,
        marked=graph.marked,
    )
    logger.debug("triangulated %d faces with %d diagonals", len(big), len(added))
    return result, frozenset(added)


def _clip_ears(builder: GraphBuilder, walk: List[int]) -> List[int]:
    """Split a face walk by chords v_i -> v_{i+2} until only triangles remain"""
    added = []
    while len(walk) > 3:
        f = len(walk)
        for i in range(f):
            a = builder.origin(walk[i])
            c = builder.origin(walk[(i + 2) % f])
            if a != c:
                break
        else:
            raise NonPlanarEmbedding("face walk cannot be triangulated")
        e = builder.add_edge(a, c, after_u=walk[i], after_v=walk[(i + 2) % f])
        added.append(e)
        # remaining face: ..., walk[i-1], a->c, walk[i+2], ...
        rest = [walk[(i + j) % f] for j in range(2, f)]
        walk = [2 * e] + rest
    return added


def validate_cycle(graph: EmbeddedGraph, cycle: SimpleCycle):
    """Raise NonSimpleCycle unless the cycle is simple and its darts exist in graph"""
    n = len(cycle.vertices)
    if n < 2 or len(cycle.darts) != n:
        raise NonSimpleCycle(f"cycle of {n} vertices and {len(cycle.darts)} darts", witness=cycle.vertices)
    if len(set(cycle.vertices)) != n:
        raise NonSimpleCycle("cycle repeats a vertex", witness=cycle.vertices)
    if len(set(cycle.edges)) != n:
        raise NonSimpleCycle("cycle repeats an edge", witness=cycle.darts)
    for i, d in enumerate(cycle.darts):
        if not graph.has_edge(d >> 1):
            raise NonSimpleCycle(f"dart {d} is not in the graph", witness=d)
        if graph.origin(d) != cycle.vertices[i] or graph.head(d) != cycle.vertices[(i + 1) % n]:
            raise NonSimpleCycle(f"dart {d} does not join consecutive cycle vertices", witness=d)


def split_by_cycle(graph: EmbeddedGraph, cycle: SimpleCycle) -> Tuple[Set[int], Set[int]]:
    """
    Two-colour the faces by a dual BFS from the outer face that never crosses
    a cycle edge. Returns (inside face ids, outside face ids).
    """
    validate_cycle(graph, cycle)
    if graph.outer_dart is None:
        raise ValueError("graph has no designated outer face")
    walls = cycle.edges
    outside = {graph.outer_face}
    queue = deque(outside)
    faces_ = graph.faces()
    while queue:
        f = queue.popleft()
        for d in faces_[f].darts:
            if (d >> 1) in walls:
                continue
            g = graph.face_of(d ^ 1)
            if g not in outside:
                outside.add(g)
                queue.append(g)
    inside = {f.id for f in faces_} - outside
    for d in cycle.darts:
        if (graph.face_of(d) in inside) == (graph.face_of(d ^ 1) in inside):
            raise NonSimpleCycle("cycle does not separate its two sides", witness=d)
    return inside, outside


def split_vertices(graph: EmbeddedGraph, cycle: SimpleCycle) -> Tuple[Set[int], Set[int], Set[int]]:
    """(strictly inside, on, strictly outside) vertex sets"""
    inside_faces, _ = split_by_cycle(graph, cycle)
    on = set(cycle.vertices)
    inside: Set[int] = set()
    outside: Set[int] = set()
    for v in graph.vertices:
        if v in on:
            continue
        darts = graph.rotation(v)
        if darts and graph.face_of(darts[0]) in inside_faces:
            inside.add(v)
        else:
            outside.add(v)
    return inside, on, outside


def subgraph_on_side(
    graph: EmbeddedGraph,
    cycle: SimpleCycle,
    side: str,
    original_edges_only: bool = True,
) -> Region:
    """
    Edges lying on the chosen side of the cycle or on the cycle itself.

    With original_edges_only the graph's diagonals are left out, so the
    region is made of edges that existed before triangulation.
    """
    if side not in ("inside", "outside"):
        raise ValueError(f"side must be 'inside' or 'outside', got {side!r}")
    inside_faces, _ = split_by_cycle(graph, cycle)
    on_cycle = cycle.edges
    want_inside = side == "inside"
    edges = set()
    for e in graph.edges:
        if original_edges_only and e in graph.diagonals:
            continue
        if e in on_cycle or (graph.face_of(2 * e) in inside_faces) == want_inside:
            edges.add(e)
    vertices = set()
    for e in edges:
        vertices.update(graph.endpoints(e))
    return Region(edges=frozenset(edges), vertices=frozenset(vertices))


def locate_face(graph: EmbeddedGraph, start_dart: int, keep_edges: FrozenSet[int]) -> int:
    """
    A dart of a kept edge whose left face, once every other edge is removed,
    contains the face left of start_dart.
    """
    if (start_dart >> 1) in keep_edges:
        return start_dart
    faces_ = graph.faces()
    start = graph.face_of(start_dart)
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for d in faces_[f].darts:
            if (d >> 1) in keep_edges:
                return d
        for d in faces_[f].darts:
            g = graph.face_of(d ^ 1)
            if g not in seen:
                seen.add(g)
                queue.append(g)
    raise ValueError("no kept edge borders the start face")


def _direction_cmp(a: Coord, b: Coord) -> int:
    """Counterclockwise order of direction vectors starting at angle 0"""
    def half(v: Coord) -> int:
        return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1
    ha, hb = half(a), half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


def embed_straight_line(
    coords: Mapping[int, Coord],
    edges: Mapping[int, Tuple[int, int]],
    directions: Optional[Mapping[int, Coord]] = None,
    outer_dart: Optional[int] = None,
    marked: Iterable[int] = (),
) -> EmbeddedGraph:
    """
    Embedding induced by exact coordinates.

    Rotations are sorted by the direction of each dart (the straight segment
    unless directions gives a tangent). Without an explicit outer dart the
    outer face is the wedge below the lowest, then leftmost, vertex.
    """
    rotation: Dict[int, List[int]] = {v: [] for v in coords}
    dir_of: Dict[int, Coord] = {}
    for e, (u, v) in edges.items():
        if u == v:
            raise SelfLoop(f"edge {e} is a self-loop at vertex {u}", witness=e)
        for d, (a, b) in ((2 * e, (u, v)), (2 * e + 1, (v, u))):
            if directions is not None and d in directions:
                vec = directions[d]
            else:
                vec = (Fraction(coords[b][0]) - coords[a][0], Fraction(coords[b][1]) - coords[a][1])
            dir_of[d] = vec
            rotation[a].append(d)
    for v, darts in rotation.items():
        darts.sort(key=cmp_to_key(lambda x, y: _direction_cmp(dir_of[x], dir_of[y])))
        for x, y in zip(darts, darts[1:]):
            if _direction_cmp(dir_of[x], dir_of[y]) == 0:
                raise NonPlanarEmbedding(f"darts {x} and {y} leave vertex {v} in the same direction", witness=v)

    if outer_dart is None:
        used = [v for v in coords if rotation[v]]
        if used:
            low = min(used, key=lambda v: (coords[v][1], coords[v][0]))
            outer_dart = rotation[low][-1]

    graph = EmbeddedGraph(dict(edges), rotation, outer_dart, coords=coords, marked=marked)
    if not graph.euler_ok():
        raise NonPlanarEmbedding("straight-line drawing has crossing edges")
    return graph


def require_connected(graph: EmbeddedGraph):
    comps = graph.components()
    if len(comps) > 1:
        raise Disconnected(
            f"graph has {len(comps)} connected components",
            witness=sorted(min(c) for c in comps),
        )
