"""
Recursive r-divisions of embedded planar graphs.

A node x of the recursion tree holds a region R_x (an edge set of the host
graph) and its boundary b(R_x): the vertices of R_x that lie on an ancestor's
separator cycle and ended up in both children there. A node becomes a leaf
once n(x) <= c0*r, b(x) <= c0*sqrt(r) and p(x) <= c0*t; otherwise its
triangulation R'_x is cut by a simple cycle that balances the parameter the
depth rule selects, and the two children are the region's own edges inside
or on the cycle and outside or on it.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .balancer import BalanceRouter
from .config import Config
from .errors import InputError, NotAntichain, ProgressFailure, RBelowMinimum, SeparatorFailure
from .models import BalanceParam, DivisionConfig, OvercountStats
from .planar import (
    EmbeddedGraph, Region, SimpleCycle, locate_face, require_connected,
    subgraph_on_side, triangulate_faces,
)
from .separator import separate

logger = logging.getLogger(__name__)

INFINITE = math.inf

TValue = Union[int, float]


def is_infinite(t: TValue) -> bool:
    return t is None or t == INFINITE


@dataclass
class RecursionNode:
    """One region of the recursion tree with its counts"""
    id: int
    parent: Optional[int]
    depth: int
    n: int
    b: int
    p: int
    outer_dart: Optional[int]
    children: Tuple[int, ...] = ()
    cycle: Optional[SimpleCycle] = None
    tag: Optional[BalanceParam] = None
    reasoning: str = ""
    forced: bool = False
    attached: FrozenSet[int] = frozenset()
    edges: Optional[FrozenSet[int]] = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


class RecursionTree:
    """Binary recursion tree; only leaves keep their edge sets"""

    def __init__(self, nodes: Sequence[RecursionNode]):
        self.nodes: List[RecursionNode] = list(nodes)

    @property
    def root(self) -> RecursionNode:
        return self.nodes[0]

    def __getitem__(self, x: int) -> RecursionNode:
        return self.nodes[x]

    def __len__(self) -> int:
        return len(self.nodes)

    def leaves(self, x: int = 0) -> List[int]:
        return [y for y in self.subtree(x) if self.nodes[y].is_leaf]

    def internal(self) -> List[int]:
        return [node.id for node in self.nodes if not node.is_leaf]

    def subtree(self, x: int) -> List[int]:
        out = []
        stack = [x]
        while stack:
            y = stack.pop()
            out.append(y)
            stack.extend(reversed(self.nodes[y].children))
        return sorted(out)

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when a is a proper ancestor of b"""
        y = self.nodes[b].parent
        while y is not None:
            if y == a:
                return True
            y = self.nodes[y].parent
        return False

    def region_edges(self, x: int) -> FrozenSet[int]:
        node = self.nodes[x]
        if node.is_leaf:
            return node.edges
        out: Set[int] = set()
        for y in self.leaves(x):
            out |= self.nodes[y].edges
        return frozenset(out)


@dataclass
class Division:
    """Regions of a finished division with the tree that produced them"""
    regions: List[Region]
    region_nodes: List[int]
    boundary: FrozenSet[int]
    separators: List[Tuple[int, SimpleCycle]]
    tree: RecursionTree
    host: EmbeddedGraph
    host_diagonals: FrozenSet[int]
    points: FrozenSet[int]
    r: int
    t: TValue
    refined: bool
    config: DivisionConfig = field(default_factory=DivisionConfig)

    @property
    def forced_leaves(self) -> int:
        return sum(1 for y in self.region_nodes if self.tree[y].forced)

    def parts(self) -> Dict[int, FrozenSet[int]]:
        """Interior P-points of every region, keyed by region index"""
        return {
            i: frozenset((region.vertices - self.boundary) & self.points)
            for i, region in enumerate(self.regions)
        }

    def boundary_points(self) -> FrozenSet[int]:
        return self.boundary & self.points


def _over(n: int, b: int, p: int, r: int, t: TValue, c0: Fraction, refined: bool) -> Dict[BalanceParam, bool]:
    over = {
        BalanceParam.VERTICES: n > c0 * r,
        BalanceParam.BOUNDARY: b * b > c0 * c0 * r,
    }
    if refined:
        over[BalanceParam.POINTS] = (not is_infinite(t)) and p > c0 * t
    return over


@dataclass
class _Split:
    tag: BalanceParam
    reasoning: str
    cycle: SimpleCycle
    inside: Region
    outside: Region
    inside_outer: int
    outside_outer: int


def _split(
    region: EmbeddedGraph,
    boundary: Set[int],
    interior_points: Set[int],
    router: BalanceRouter,
    node_id: int,
    depth: int,
    over: Dict[BalanceParam, bool],
    cfg: DivisionConfig,
) -> Optional[_Split]:
    """
    Cut the region by the shortest balanced cycle that makes progress.

    A cycle makes progress when both sides keep some but not all of the
    region's own edges. Cycles with every vertex on both sides are preferred,
    so that the boundary stays the union of the separator cycles; the first
    progressing cycle with a detached vertex is kept as a last resort.
    """
    tri, _ = triangulate_faces(region)
    size = region.num_edges
    failed: Set[BalanceParam] = set()
    sides: Dict[str, Region] = {}
    current: List[Tuple[BalanceParam, str]] = []
    fallback: List[Tuple[BalanceParam, str, SimpleCycle, Region, Region]] = []

    def progresses(cycle: SimpleCycle) -> bool:
        inside = subgraph_on_side(tri, cycle, "inside", original_edges_only=True)
        if not 0 < len(inside.edges) < size:
            return False
        outside = subgraph_on_side(tri, cycle, "outside", original_edges_only=True)
        if not 0 < len(outside.edges) < size:
            return False
        if not set(cycle.vertices) <= inside.vertices & outside.vertices:
            if not fallback:
                fallback.append((*current[-1], cycle, inside, outside))
            return False
        sides["inside"], sides["outside"] = inside, outside
        return True

    def build(param: BalanceParam, reasoning: str, cycle: SimpleCycle, inside: Region, outside: Region) -> _Split:
        return _Split(
            tag=param,
            reasoning=reasoning,
            cycle=cycle,
            inside=inside,
            outside=outside,
            inside_outer=locate_face(tri, region.outer_dart, inside.edges),
            outside_outer=locate_face(tri, region.outer_dart, outside.edges),
        )

    while True:
        routed = router.route(depth, over, failed)
        if routed is None:
            break
        param, reasoning = routed
        current.append(routed)
        if param == BalanceParam.VERTICES:
            weighted: Iterable[int] = tri.vertices
        elif param == BalanceParam.BOUNDARY:
            weighted = boundary
        else:
            weighted = interior_points
        try:
            result = separate(
                tri,
                {v: 1 for v in weighted},
                balance=cfg.balance,
                seed=[cfg.seed, node_id],
                extra_roots=cfg.separator_roots,
                accept=progresses,
            )
        except SeparatorFailure as e:
            logger.debug("node %d: balancing %s made no progress: %s", node_id, param.value, e)
            failed.add(param)
            continue
        return build(param, reasoning, result.cycle, sides["inside"], sides["outside"])

    if fallback:
        param, reasoning, cycle, inside, outside = fallback[0]
        logger.warning("node %d: every progressing separator leaves a cycle vertex on one side", node_id)
        return build(param, reasoning, cycle, inside, outside)
    return None


def _divide(
    graph: EmbeddedGraph,
    points: Iterable[int],
    r: int,
    t: TValue,
    cfg: Optional[DivisionConfig],
    refined: bool,
) -> Tuple[Division, RecursionTree]:
    cfg = cfg or DivisionConfig()
    if r < cfg.r0:
        raise RBelowMinimum(f"r = {r} is below r0 = {cfg.r0}")
    if not is_infinite(t) and t < 1:
        raise InputError(f"t must be at least 1, got {t}")
    if graph.outer_dart is None:
        raise InputError("graph has no designated outer face")
    require_connected(graph)

    host, host_diagonals = triangulate_faces(graph)
    point_set = frozenset(points)
    missing = [v for v in point_set if not host.has_vertex(v)]
    if missing:
        raise InputError(f"{len(missing)} points are not vertices of the graph", witness=sorted(missing)[:10])

    router = BalanceRouter(refined=refined)
    c0 = Fraction(cfg.c0)
    nodes: List[Optional[RecursionNode]] = [None]
    queue = deque([(0, None, 0, frozenset(host.edges), frozenset(), host.outer_dart)])

    while queue:
        node_id, parent, depth, edges, boundary, outer = queue.popleft()
        region = host.restrict(edges, outer_dart=outer)
        vertices = set(region.vertices)
        interior_points = (vertices - boundary) & point_set
        node = RecursionNode(
            id=node_id,
            parent=parent,
            depth=depth,
            n=len(vertices),
            b=len(boundary),
            p=len(interior_points),
            outer_dart=outer,
        )
        nodes[node_id] = node
        over = _over(node.n, node.b, node.p, r, t, c0, refined)
        if not any(over.values()):
            node.edges = edges
            continue

        split = _split(region, set(boundary), interior_points, router, node_id, depth, over, cfg)
        if split is None:
            if node.n <= cfg.progress_floor:
                logger.warning("node %d (n=%d) forced to a leaf: no separator made progress", node_id, node.n)
                node.forced = True
                node.edges = edges
                continue
            raise ProgressFailure(
                f"no separator shrinks region {node_id} (n={node.n}, b={node.b}, p={node.p})",
                witness=node_id,
            )

        node.cycle = split.cycle
        node.tag = split.tag
        node.reasoning = split.reasoning
        node.attached = frozenset(set(split.cycle.vertices) & split.inside.vertices & split.outside.vertices)
        marked = boundary | node.attached
        child_ids = []
        for part, part_outer in ((split.inside, split.inside_outer), (split.outside, split.outside_outer)):
            child_id = len(nodes)
            nodes.append(None)
            child_ids.append(child_id)
            queue.append((child_id, node_id, depth + 1, part.edges, marked & part.vertices, part_outer))
        node.children = tuple(child_ids)
        logger.debug(
            "node %d depth %d: n=%d b=%d p=%d, %s, |C|=%d",
            node_id, depth, node.n, node.b, node.p, split.tag.value, split.cycle.length,
        )

    tree = RecursionTree(nodes)
    leaf_ids = tree.leaves()
    regions = []
    counts: Dict[int, int] = {}
    for y in leaf_ids:
        edges = tree[y].edges
        verts: Set[int] = set()
        for e in edges:
            verts.update(host.endpoints(e))
        regions.append(Region(edges=edges, vertices=frozenset(verts)))
        for v in verts:
            counts[v] = counts.get(v, 0) + 1
    boundary = frozenset(v for v, c in counts.items() if c >= 2)
    separators = [(x, tree[x].cycle) for x in tree.internal()]

    division = Division(
        regions=regions,
        region_nodes=leaf_ids,
        boundary=boundary,
        separators=separators,
        tree=tree,
        host=host,
        host_diagonals=host_diagonals,
        points=point_set,
        r=r,
        t=t,
        refined=refined,
        config=cfg,
    )
    logger.info(
        "%s division: N=%d r=%d t=%s -> %d regions, %d boundary vertices, %d separators",
        "refined" if refined else "classic", host.num_vertices, r, t,
        len(regions), len(boundary), len(separators),
    )
    return division, tree


def refined_r_division(
    graph: EmbeddedGraph,
    points: Iterable[int],
    r: int,
    t: TValue,
    cfg: Optional[DivisionConfig] = None,
) -> Tuple[Division, RecursionTree]:
    """Division balancing vertices, boundary vertices and P-points by depth mod 3"""
    return _divide(graph, points, r, t, cfg, refined=True)


def classic_r_division(
    graph: EmbeddedGraph,
    r: int,
    cfg: Optional[DivisionConfig] = None,
) -> Tuple[Division, RecursionTree]:
    """Division alternating vertices and boundary vertices by depth mod 2"""
    return _divide(graph, (), r, INFINITE, cfg, refined=False)


def compute_overcount(tree: RecursionTree, x: int, nodes: Iterable[int]) -> int:
    """L(x, S) = -n(x) + sum of n(y) over the antichain S below x"""
    chosen = list(nodes)
    members = set(chosen)
    if len(members) != len(chosen):
        raise NotAntichain("node set repeats a node", witness=chosen)
    for y in chosen:
        if y != x and not tree.is_ancestor(x, y):
            raise NotAntichain(f"node {y} is not in the subtree of {x}", witness=y)
        a = tree[y].parent
        while a is not None and a != tree[x].parent:
            if a in members:
                raise NotAntichain(f"node {a} is an ancestor of {y}", witness=(a, y))
            a = tree[a].parent
    return -tree[x].n + sum(tree[y].n for y in chosen)


def separator_frontier(tree: RecursionTree, x: int, c0: Fraction, r: int) -> List[int]:
    """Descendants y of x with n(y) <= c0*r whose parent has n > c0*r"""
    limit = Fraction(c0) * r
    out = []
    stack = [x]
    while stack:
        y = stack.pop()
        node = tree[y]
        if node.n <= limit or node.is_leaf:
            out.append(y)
        else:
            stack.extend(node.children)
    return sorted(out)


def overcount_stats(division: Division) -> OvercountStats:
    tree = division.tree
    n_total = tree.root.n
    scale = math.sqrt(division.r) / n_total
    leaves = compute_overcount(tree, 0, tree.leaves())
    frontier = separator_frontier(tree, 0, division.config.c0, division.r)
    frontier_l = compute_overcount(tree, 0, frontier)
    return OvercountStats(
        leaves=leaves,
        leaves_fitted_c2=leaves * scale,
        frontier=frontier_l,
        frontier_fitted_c2=frontier_l * scale,
        frontier_size=len(frontier),
    )
