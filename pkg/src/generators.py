"""
Graph families used by the test suites and the CLI.

Grids are straight-line drawings; random triangulations and digon
multigraphs are built combinatorially by face stacking and edge flips.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import InputError
from .planar import EmbeddedGraph, GraphBuilder, embed_straight_line

logger = logging.getLogger(__name__)


def grid_vertex(k: int, x: int, y: int) -> int:
    return y * k + x


def grid(k: int, diagonals: bool = False) -> EmbeddedGraph:
    """
    k x k grid drawn on integer points; vertex (x, y) has id y*k + x.
    With diagonals every cell gets the edge (x, y)-(x+1, y+1).
    """
    if k < 2:
        raise InputError(f"grid side must be at least 2, got {k}")
    coords = {grid_vertex(k, x, y): (Fraction(x), Fraction(y)) for y in range(k) for x in range(k)}
    edges: Dict[int, Tuple[int, int]] = {}
    for y in range(k):
        for x in range(k - 1):
            edges[len(edges)] = (grid_vertex(k, x, y), grid_vertex(k, x + 1, y))
    for y in range(k - 1):
        for x in range(k):
            edges[len(edges)] = (grid_vertex(k, x, y), grid_vertex(k, x, y + 1))
    if diagonals:
        for y in range(k - 1):
            for x in range(k - 1):
                edges[len(edges)] = (grid_vertex(k, x, y), grid_vertex(k, x + 1, y + 1))
    return embed_straight_line(coords, edges)


def triangulated_grid(k: int) -> EmbeddedGraph:
    return grid(k, diagonals=True)


def random_triangulation(n: int, seed: int = 0, flips: int = -1) -> EmbeddedGraph:
    """
    Random triangulation on n vertices.

    Starts from a triangle (its second face is the outer face), stacks
    vertices into uniformly chosen inner faces, then applies random edge
    flips (n by default) that keep the graph simple and every degree >= 3.
    """
    if n < 3:
        raise InputError(f"a triangulation needs at least 3 vertices, got {n}")
    rng = np.random.default_rng(seed)
    builder = GraphBuilder()
    for v in range(3):
        builder.add_vertex(v)
    frame = {builder.add_edge(0, 1), builder.add_edge(1, 2), builder.add_edge(2, 0)}
    outer_dart = 1

    inner: List[int] = [0]
    for _ in range(n - 3):
        d0 = inner[int(rng.integers(len(inner)))]
        d1 = builder.face_next(d0)
        d2 = builder.face_next(d1)
        a, b, c = builder.origin(d0), builder.origin(d1), builder.origin(d2)
        x = builder.add_vertex()
        ea = builder.add_edge(x, a, after_v=d0)
        eb = builder.add_edge(x, b, after_u=2 * ea, after_v=d1)
        builder.add_edge(x, c, after_u=2 * eb, after_v=d2)
        inner.extend([d1, d2])

    edge_ids = [e for e in builder.edge_ids() if e not in frame]
    attempts = n if flips < 0 else flips
    done = 0
    for _ in range(attempts):
        if not edge_ids:
            break
        slot = int(rng.integers(len(edge_ids)))
        new_edge = _try_flip(builder, edge_ids[slot])
        if new_edge is not None:
            edge_ids[slot] = new_edge
            done += 1
    logger.debug("random triangulation n=%d seed=%d: %d/%d flips applied", n, seed, done, attempts)
    return builder.freeze(outer_dart)


def _try_flip(builder: GraphBuilder, e: int):
    d, t = 2 * e, 2 * e + 1
    d1 = builder.face_next(d)
    d2 = builder.face_next(d1)
    t1 = builder.face_next(t)
    t2 = builder.face_next(t1)
    if builder.face_next(d2) != d or builder.face_next(t2) != t:
        return None
    a, b = builder.origin(d), builder.head(d)
    c, opposite = builder.origin(d2), builder.origin(t2)
    if c == opposite or builder.has_edge_between(c, opposite):
        return None
    if len(builder.rotation(a)) <= 3 or len(builder.rotation(b)) <= 3:
        return None
    builder.remove_edge(e)
    return builder.add_edge(c, opposite, after_u=d2, after_v=t2)


def digon_multigraph(n: int, parallel: int, seed: int = 0) -> EmbeddedGraph:
    """Random triangulation with `parallel` extra edges, each closing a digon face"""
    base = random_triangulation(n, seed)
    rng = np.random.default_rng([seed, 1])
    builder = GraphBuilder.from_graph(base)
    edges = list(base.edges)
    for _ in range(parallel):
        e = edges[int(rng.integers(len(edges)))]
        u, v = builder.origin(2 * e), builder.head(2 * e)
        at_v = builder.rotation(v)
        before = at_v[at_v.index(2 * e + 1) - 1]
        builder.add_edge(u, v, after_u=2 * e, after_v=before)
    return builder.freeze(base.outer_dart)


def random_subset(vertices: Sequence[int], fraction: float, seed: int = 0) -> List[int]:
    """Seeded uniform subset of round(fraction * |V|) vertices, sorted"""
    rng = np.random.default_rng(seed)
    size = int(round(fraction * len(vertices)))
    chosen = rng.choice(np.asarray(sorted(vertices)), size=size, replace=False)
    return sorted(int(v) for v in chosen)
