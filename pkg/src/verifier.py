"""
Independent verification of r-divisions.

Recomputes every region, boundary set and separator side from the input
graph and the recursion tree, and reports each failed guarantee with a
witness instead of raising.
"""

import math
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from .errors import NonSimpleCycle
from .models import (
    CycleStats, DivisionConfig, DivisionReport, Failure, FailureKind, FittedConstants, RegionStats,
)
from .planar import EmbeddedGraph, split_vertices, subgraph_on_side, triangulate_faces, validate_cycle
from .rdivision import Division, TValue, is_infinite, overcount_stats


class DivisionVerifier:
    """Checks a division against the guarantees of the recursive construction"""

    def __init__(self, cfg: Optional[DivisionConfig] = None):
        """
        Initialize the verifier.

        Args:
            cfg: constants the bounds are checked with (c0 and the region ceiling)
        """
        self.cfg = cfg or DivisionConfig()
        self.failures: List[Failure] = []

    def fail(self, kind: FailureKind, witness, detail: str):
        self.failures.append(Failure(kind=kind, witness=witness, detail=detail))

    # Tree bookkeeping

    def node_edges(self, division: Division) -> Dict[int, FrozenSet[int]]:
        """Edge set of every node, as the union of its leaves' edges"""
        tree = division.tree
        edges: Dict[int, FrozenSet[int]] = {}
        for node in reversed(tree.nodes):
            if node.is_leaf:
                edges[node.id] = frozenset(node.edges)
            else:
                merged: Set[int] = set()
                for child in node.children:
                    merged |= edges[child]
                edges[node.id] = frozenset(merged)
        return edges

    # Checks

    def check_coverage(self, host: EmbeddedGraph, division: Division):
        """Every host edge lies in some region, and regions use only host edges"""
        covered: Set[int] = set()
        for i, region in enumerate(division.regions):
            for e in region.edges:
                if not host.has_edge(e):
                    self.fail(FailureKind.UNKNOWN_EDGE, {"region": i, "edge": e}, f"region {i} uses unknown edge {e}")
                covered.add(e)
        for e in host.edges:
            if e not in covered:
                self.fail(FailureKind.EDGE_COVERAGE, e, f"edge {e} lies in no region")

    def check_connectivity(self, host: EmbeddedGraph, division: Division):
        for i, region in enumerate(division.regions):
            g = nx.MultiGraph()
            g.add_edges_from(host.endpoints(e) for e in region.edges if host.has_edge(e))
            if g.number_of_nodes() and not nx.is_connected(g):
                self.fail(
                    FailureKind.REGION_CONNECTIVITY,
                    i,
                    f"region {i} has {nx.number_connected_components(g)} components",
                )

    def region_boundary(self, division: Division) -> FrozenSet[int]:
        """Vertices lying in at least two regions"""
        seen: Set[int] = set()
        twice: Set[int] = set()
        for region in division.regions:
            for v in region.vertices:
                if v in seen:
                    twice.add(v)
                seen.add(v)
        return frozenset(twice)

    def check_boundary(self, boundary: FrozenSet[int], cycle_vertices: FrozenSet[int], division: Division):
        """A vertex is a boundary vertex exactly when it lies on some separator cycle"""
        extra = sorted(boundary - cycle_vertices)
        missing = sorted(cycle_vertices - boundary)
        if extra or missing:
            self.fail(
                FailureKind.BOUNDARY_CHARACTERIZATION,
                {"not_on_cycles": extra[:10], "cycle_not_boundary": missing[:10]},
                f"{len(extra)} boundary vertices off every separator, {len(missing)} cycle vertices in one region",
            )
        if division.boundary != boundary:
            self.fail(
                FailureKind.BOUNDARY_CHARACTERIZATION,
                sorted(division.boundary ^ boundary)[:10],
                "stored boundary differs from the recomputed one",
            )

    def check_regions(
        self,
        division: Division,
        boundary: FrozenSet[int],
        points: FrozenSet[int],
        r: int,
        t: TValue,
    ) -> List[RegionStats]:
        c0 = Fraction(self.cfg.c0)
        stats = []
        for i, region in enumerate(division.regions):
            node = division.tree[division.region_nodes[i]]
            b = len(region.vertices & boundary)
            p = len((region.vertices - boundary) & points)
            n = len(region.vertices)
            stats.append(RegionStats(region=i, vertices=n, boundary=b, interior_points=p))
            if node.forced:
                continue
            if n > c0 * r:
                self.fail(FailureKind.REGION_VERTICES, i, f"region {i} has {n} > {float(c0 * r):g} vertices")
            if b * b > c0 * c0 * r:
                self.fail(FailureKind.REGION_BOUNDARY, i, f"region {i} has {b} > c0*sqrt(r) boundary vertices")
            if not is_infinite(t) and p > c0 * t:
                self.fail(FailureKind.REGION_POINTS, i, f"region {i} has {p} > {float(c0 * t):g} interior points")
        return stats

    def check_tree(
        self,
        host: EmbeddedGraph,
        division: Division,
        points: FrozenSet[int],
        r: int,
        t: TValue,
    ) -> Tuple[List[CycleStats], FrozenSet[int]]:
        """
        Walk the tree top-down, re-triangulating every internal region and
        re-splitting it by its cycle.

        Returns:
            Per-cycle statistics and the union of attached cycle vertices
        """
        tree = division.tree
        c0 = Fraction(self.cfg.c0)
        edges = self.node_edges(division)
        vertices: Dict[int, FrozenSet[int]] = {}
        for x, es in edges.items():
            vs: Set[int] = set()
            for e in es:
                if host.has_edge(e):
                    vs.update(host.endpoints(e))
            vertices[x] = frozenset(vs)

        marked: Dict[int, FrozenSet[int]] = {0: frozenset()}
        attached_all: Set[int] = set()
        cycles: List[CycleStats] = []
        for node in tree.nodes:
            x = node.id
            n = len(vertices[x])
            b_set = marked[x]
            interior = (vertices[x] - b_set) & points
            over = n > c0 * r or len(b_set) ** 2 > c0 * c0 * r or (not is_infinite(t) and len(interior) > c0 * t)

            if node.is_leaf:
                if over and not node.forced:
                    self.fail(FailureKind.LEAF_RULE, x, f"leaf {x} exceeds a threshold (n={n}, b={len(b_set)}, p={len(interior)})")
                continue
            if not over:
                self.fail(FailureKind.LEAF_RULE, x, f"internal node {x} is within every threshold")

            region = host.restrict(edges[x], outer_dart=node.outer_dart)
            tri, _ = triangulate_faces(region)
            try:
                validate_cycle(tri, node.cycle)
                inside, on, _ = split_vertices(tri, node.cycle)
                sides = [subgraph_on_side(tri, node.cycle, side, original_edges_only=True) for side in ("inside", "outside")]
            except (NonSimpleCycle, ValueError) as exc:
                self.fail(FailureKind.CYCLE_INVALID, x, f"cycle of node {x}: {exc}")
                for child in node.children:
                    marked[child] = (b_set & vertices[child])
                continue

            attached = frozenset(set(node.cycle.vertices) & vertices[node.children[0]] & vertices[node.children[1]])
            attached_all |= attached
            for child, side in zip(node.children, sides):
                marked[child] = (b_set | attached) & vertices[child]
                if side.edges != edges[child]:
                    self.fail(FailureKind.CHILD_SPLIT, child, f"node {child} is not a side of the cycle of node {x}")

            x0, x1 = node.children
            length = node.cycle.length
            if len(vertices[x0]) + len(vertices[x1]) > n + length:
                self.fail(FailureKind.CHILD_SPLIT, x, f"children of node {x} overlap beyond its cycle")
            p0 = len((vertices[x0] - marked[x0]) & points)
            p1 = len((vertices[x1] - marked[x1]) & points)
            if p0 + p1 > len(interior):
                self.fail(FailureKind.CHILD_SPLIT, x, f"children of node {x} hold {p0 + p1} > {len(interior)} interior points")

            closed = inside | on
            cv = len(closed)
            cb = len(closed & b_set)
            cp = len(closed & interior)
            prop_v = 8 * cv >= r
            prop_b = 64 * cb * cb >= r
            prop_p = (not is_infinite(t)) and 8 * cp >= t
            cycles.append(CycleStats(
                node=x,
                length=length,
                tag=node.tag,
                inside_or_on_vertices=cv,
                inside_or_on_boundary=cb,
                inside_or_on_points=cp,
                property_vertices=prop_v,
                property_boundary=prop_b,
                property_points=prop_p,
            ))
            if not (prop_v or prop_b or prop_p):
                self.fail(
                    FailureKind.CYCLE_PROPERTY,
                    x,
                    f"cycle of node {x} encloses only {cv} vertices, {cb} boundary vertices, {cp} points",
                )
        return cycles, frozenset(attached_all)

    def check_region_count(self, division: Division, vertex_count: int, point_count: int, r: int, t: TValue) -> Optional[float]:
        scale = Fraction(vertex_count, r)
        if not is_infinite(t):
            scale += Fraction(point_count, int(t))
        count = len(division.regions)
        # a division has at least one region even when r exceeds N
        allowed = max(Fraction(1), Fraction(self.cfg.region_ceiling) * scale)
        if count > allowed:
            self.fail(
                FailureKind.REGION_COUNT,
                count,
                f"{count} regions exceed max(1, {float(self.cfg.region_ceiling):g} * (N/r + |P|/t)) = {float(allowed):.1f}",
            )
        return float(count / scale) if scale else None

    def verify(
        self,
        graph: EmbeddedGraph,
        points: Iterable[int],
        division: Division,
        r: int,
        t: TValue,
    ) -> DivisionReport:
        """
        Run every check and collect a report.

        Args:
            graph: the graph that was divided (triangulated again here)
            points: the prescribed vertex set P
            division: the division under test
            r: region size parameter
            t: point parameter, infinite to disable point checks

        Returns:
            DivisionReport with per-region and per-cycle statistics and failures
        """
        self.failures = []
        points = frozenset(points)
        host, _ = triangulate_faces(graph)

        self.check_coverage(host, division)
        self.check_connectivity(host, division)
        boundary = self.region_boundary(division)
        regions = self.check_regions(division, boundary, points, r, t)
        cycles, attached = self.check_tree(host, division, points, r, t)
        cycle_vertices: Set[int] = set()
        for _, cycle in division.separators:
            cycle_vertices.update(cycle.vertices)
        self.check_boundary(boundary, frozenset(cycle_vertices), division)
        region_constant = self.check_region_count(division, host.num_vertices, len(points), r, t)

        fitted = FittedConstants(
            region_count_constant=region_constant,
            max_vertices_ratio=max((s.vertices / r for s in regions), default=None),
            max_boundary_ratio=max((s.boundary / math.sqrt(r) for s in regions), default=None),
            max_points_ratio=None if is_infinite(t) else max((s.interior_points / t for s in regions), default=None),
            min_cycle_vertices_ratio=min((c.inside_or_on_vertices / r for c in cycles), default=None),
        )

        return DivisionReport(
            vertex_count=host.num_vertices,
            point_count=len(points),
            r=r,
            t=None if is_infinite(t) else int(t),
            region_count=len(division.regions),
            boundary_count=len(boundary),
            boundary_points=len(boundary & points),
            forced_leaves=division.forced_leaves,
            detached_vertices=len(cycle_vertices - attached),
            regions=regions,
            cycles=cycles,
            fitted=fitted,
            overcount=overcount_stats(division),
            failures=list(self.failures),
        )


def verify_division(
    graph: EmbeddedGraph,
    points: Iterable[int],
    division: Division,
    r: int,
    t: TValue,
    cfg: Optional[DivisionConfig] = None,
) -> DivisionReport:
    return DivisionVerifier(cfg or division.config).verify(graph, points, division, r, t)
