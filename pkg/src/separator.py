"""
Simple-cycle separator for triangulated embedded graphs.

For a BFS tree rooted at r, every non-tree edge closes a fundamental cycle,
and the non-tree edges form a spanning tree of the dual rooted at the outer
face. The faces enclosed by a fundamental cycle are exactly one dual
subtree, so the weight strictly inside every candidate cycle is read off
subtree sums in O(1) after linear preprocessing.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .config import Config
from .errors import (
    InputError, NonSimpleCycle, NotTriangulated, SeparatorFailure, TooSmall, ZeroTotalWeight,
)
from .planar import EmbeddedGraph, SimpleCycle, require_connected, split_vertices, validate_cycle

logger = logging.getLogger(__name__)

Weight = Union[int, Fraction]
Seed = Union[int, Sequence[int]]


@dataclass(frozen=True)
class WeightAssignment:
    """Nonnegative rational vertex weights; missing vertices weigh 0"""
    weights: Mapping[int, Fraction]

    @classmethod
    def of(cls, weights: Mapping[int, Weight]) -> "WeightAssignment":
        converted = {v: Fraction(w) for v, w in weights.items()}
        for v, w in converted.items():
            if w < 0:
                raise InputError(f"negative weight {w} on vertex {v}", witness=v)
        return cls(converted)

    @classmethod
    def unit(cls, vertices) -> "WeightAssignment":
        return cls({v: Fraction(1) for v in vertices})

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def __getitem__(self, v: int) -> Fraction:
        return self.weights.get(v, Fraction(0))


@dataclass(frozen=True)
class SeparatorResult:
    """Chosen cycle with its exact side weights"""
    cycle: SimpleCycle
    inside: Fraction
    on: Fraction
    outside: Fraction
    total: Fraction
    root: int
    edge: int


@dataclass(frozen=True)
class SeparatorCheck:
    """Outcome of the independent post-condition check"""
    simple: bool
    inside: Fraction
    on: Fraction
    outside: Fraction
    balanced: bool
    length: int
    length_ratio: float
    within_ceiling: bool

    @property
    def passed(self) -> bool:
        return self.simple and self.balanced and self.within_ceiling


def _check_input(graph: EmbeddedGraph, weights: WeightAssignment):
    if graph.num_vertices < 3:
        raise TooSmall(f"separator needs at least 3 vertices, got {graph.num_vertices}")
    require_connected(graph)
    for face in graph.faces():
        if face.size > 3:
            raise NotTriangulated(f"face {face.id} has size {face.size}", witness=face.id)
    if graph.outer_dart is None:
        raise InputError("graph has no designated outer face")
    if weights.total == 0:
        raise ZeroTotalWeight("total vertex weight is zero")


def _scaled(graph: EmbeddedGraph, weights: WeightAssignment) -> Dict[int, int]:
    den = 1
    for v in graph.vertices:
        den = lcm(den, weights[v].denominator)
    return {v: int(weights[v] * den) for v in graph.vertices}


class _RootSearch:
    """All fundamental cycles of one BFS tree, evaluated exactly"""

    def __init__(self, graph: EmbeddedGraph, w: Dict[int, int], root: int):
        self.graph = graph
        self.w = w
        self.root = root
        self.total = sum(w.values())
        self._bfs()
        self._lca_table()
        self._dual()

    def _bfs(self):
        g = self.graph
        self.parent_dart: Dict[int, Optional[int]] = {self.root: None}
        self.depth: Dict[int, int] = {self.root: 0}
        self.prefix: Dict[int, int] = {self.root: self.w[self.root]}
        self.order = [self.root]
        self.tree_edges = set()
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for d in g.rotation(v):
                u = g.head(d)
                if u in self.depth:
                    continue
                self.parent_dart[u] = d
                self.depth[u] = self.depth[v] + 1
                self.prefix[u] = self.prefix[v] + self.w[u]
                self.tree_edges.add(d >> 1)
                self.order.append(u)
                queue.append(u)

    def _lca_table(self):
        g = self.graph
        levels = max(1, max(self.depth.values()).bit_length())
        self.up: List[Dict[int, int]] = [{}]
        for v in self.order:
            d = self.parent_dart[v]
            self.up[0][v] = v if d is None else g.origin(d)
        for j in range(1, levels):
            prev = self.up[j - 1]
            self.up.append({v: prev[prev[v]] for v in self.order})

    def lca(self, a: int, b: int) -> int:
        if self.depth[a] < self.depth[b]:
            a, b = b, a
        diff = self.depth[a] - self.depth[b]
        j = 0
        while diff:
            if diff & 1:
                a = self.up[j][a]
            diff >>= 1
            j += 1
        if a == b:
            return a
        for j in range(len(self.up) - 1, -1, -1):
            if self.up[j][a] != self.up[j][b]:
                a, b = self.up[j][a], self.up[j][b]
        return self.up[0][a]

    def _dual(self):
        """Dual BFS tree over non-tree edges, Euler-tour intervals and subtree weights"""
        g = self.graph
        faces = g.faces()
        outer = g.outer_face
        self.child_dart: Dict[int, int] = {}
        parent_face = {outer: None}
        order = [outer]
        queue = deque([outer])
        while queue:
            f = queue.popleft()
            for d in faces[f].darts:
                if (d >> 1) in self.tree_edges:
                    continue
                h = g.face_of(d ^ 1)
                if h in parent_face:
                    continue
                parent_face[h] = f
                self.child_dart[h] = d ^ 1
                order.append(h)
                queue.append(h)

        face_weight = {f: 0 for f in parent_face}
        self.anchor: Dict[int, int] = {}
        for v in self.order:
            d = self.parent_dart[v]
            f = g.face_of(d) if d is not None else g.face_of(g.rotation(v)[0])
            self.anchor[v] = f
            face_weight[f] += self.w[v]

        children: Dict[int, List[int]] = {f: [] for f in parent_face}
        for f in order[1:]:
            children[parent_face[f]].append(f)
        self.subtree = dict(face_weight)
        for f in reversed(order[1:]):
            self.subtree[parent_face[f]] += self.subtree[f]

        self.tin: Dict[int, int] = {}
        self.tout: Dict[int, int] = {}
        clock = 0
        stack = [(outer, False)]
        while stack:
            f, done = stack.pop()
            if done:
                self.tout[f] = clock
                continue
            self.tin[f] = clock
            clock += 1
            stack.append((f, True))
            for h in reversed(children[f]):
                stack.append((h, False))

    def in_subtree(self, f: int, g: int) -> bool:
        return self.tin[g] <= self.tin[f] < self.tout[g]

    def candidates(self):
        """Yield (length, edge, inside, on, dart) for every non-tree edge"""
        for face, d in self.child_dart.items():
            u, v = self.graph.origin(d), self.graph.head(d)
            a = self.lca(u, v)
            inside = self.subtree[face] - (self.prefix[u] - self.prefix[a])
            if self.in_subtree(self.anchor[a], face):
                inside -= self.w[a]
            on = self.prefix[u] + self.prefix[v] - 2 * self.prefix[a] + self.w[a]
            length = self.depth[u] + self.depth[v] - 2 * self.depth[a] + 1
            yield length, d >> 1, inside, on, d

    def cycle(self, d: int) -> SimpleCycle:
        g = self.graph
        u, v = g.origin(d), g.head(d)
        a = self.lca(u, v)
        down: List[int] = []
        x = u
        while x != a:
            down.append(self.parent_dart[x])
            x = g.origin(self.parent_dart[x])
        down.reverse()
        up: List[int] = []
        x = v
        while x != a:
            up.append(self.parent_dart[x] ^ 1)
            x = g.origin(self.parent_dart[x])
        darts = down + [d] + up
        vertices = [g.origin(e) for e in darts]
        return SimpleCycle(vertices=tuple(vertices), darts=tuple(darts))


def _approximate_center(graph: EmbeddedGraph, start: int) -> int:
    """Midpoint of a BFS path between two far-apart vertices"""
    def bfs(src):
        dist = {src: 0}
        parent = {src: None}
        queue = deque([src])
        last = src
        while queue:
            v = queue.popleft()
            last = v
            for u in graph.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
        return last, parent, dist

    far, _, _ = bfs(start)
    other, parent, dist = bfs(far)
    steps = dist[other] // 2
    x = other
    for _ in range(steps):
        x = parent[x]
    return x


def _candidate_roots(graph: EmbeddedGraph, weights: WeightAssignment, seed: Seed, extra: int) -> List[int]:
    vertices = graph.vertices
    heavy = max(vertices, key=lambda v: (weights[v], -v))
    roots = [heavy, _approximate_center(graph, heavy)]
    if extra > 0:
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(vertices), size=min(extra, len(vertices)), replace=False)
        roots.extend(vertices[int(i)] for i in picks)
    seen = set()
    return [r for r in roots if not (r in seen or seen.add(r))]


def _balanced(tree: _RootSearch, total: int, limit: Fraction):
    """Balanced candidates of one BFS tree as ((length, root, edge), dart, inside, on, outside)"""
    for length, edge, inside, on, dart in tree.candidates():
        outside = total - inside - on
        if inside <= limit and outside <= limit:
            yield (length, tree.root, edge), dart, inside, on, outside


def separate(
    graph: EmbeddedGraph,
    weights: Union[WeightAssignment, Mapping[int, Weight]],
    balance: Fraction = Config.BALANCE,
    seed: Seed = Config.SEED,
    extra_roots: int = Config.SEPARATOR_ROOTS,
    roots: Optional[Sequence[int]] = None,
    accept: Optional[Callable[[SimpleCycle], bool]] = None,
) -> SeparatorResult:
    """
    Shortest balanced fundamental cycle over a set of BFS roots.

    Candidates from the default roots are ranked by (length, root, edge id)
    and the first one `accept` admits is returned. When none qualifies every
    other vertex is tried as a root in id order, shortest cycle first, before
    SeparatorFailure is raised.
    """
    if not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)
    _check_input(graph, weights)
    balance = Fraction(balance)
    w = _scaled(graph, weights)
    total = sum(w.values())
    limit = balance * total
    rejected = 0

    def pick(trees: Dict[int, _RootSearch]):
        nonlocal rejected
        ranked = sorted(
            (c for tree in trees.values() for c in _balanced(tree, total, limit)),
            key=lambda c: c[0],
        )
        for key, dart, inside, on, outside in ranked:
            cycle = trees[key[1]].cycle(dart)
            if accept is None or accept(cycle):
                return key, cycle, inside, on, outside
            rejected += 1
        return None

    if roots is None:
        roots = _candidate_roots(graph, weights, seed, extra_roots)
    best = pick({root: _RootSearch(graph, w, root) for root in roots})
    if best is None:
        logger.info("no usable balanced cycle from %d default roots, trying all %d vertices", len(roots), graph.num_vertices)
        tried = set(roots)
        for root in graph.vertices:
            if root in tried:
                continue
            best = pick({root: _RootSearch(graph, w, root)})
            if best is not None:
                break
    if best is None:
        if rejected:
            raise SeparatorFailure(f"all {rejected} balanced fundamental cycles were rejected", witness=rejected)
        raise SeparatorFailure(f"no fundamental cycle achieves balance {balance}")

    (length, root, edge), cycle, inside, on, outside = best
    scale = Fraction(total) / weights.total
    result = SeparatorResult(
        cycle=cycle,
        inside=inside / scale,
        on=on / scale,
        outside=outside / scale,
        total=weights.total,
        root=root,
        edge=edge,
    )
    ratio = length / math.sqrt(graph.num_vertices)
    if ratio > Config.C1_CEILING:
        logger.warning("separator length %d is %.2f * sqrt(N), above ceiling %.2f", length, ratio, Config.C1_CEILING)
    logger.debug("separator root=%d edge=%d |C|=%d in=%s on=%s out=%s", root, edge, length, inside, on, outside)
    return result


def cycle_separator(
    graph: EmbeddedGraph,
    weights: Union[WeightAssignment, Mapping[int, Weight]],
    balance: Fraction = Config.BALANCE,
    seed: Seed = Config.SEED,
) -> SimpleCycle:
    """Simple cycle with at most balance*W strictly inside and strictly outside"""
    return separate(graph, weights, balance=balance, seed=seed).cycle


def check_separator(
    graph: EmbeddedGraph,
    cycle: SimpleCycle,
    weights: Union[WeightAssignment, Mapping[int, Weight]],
    balance: Fraction = Config.BALANCE,
    c1_ceiling: float = Config.C1_CEILING,
) -> SeparatorCheck:
    """Recount the side weights of a cycle by dual BFS, independent of the search"""
    if not isinstance(weights, WeightAssignment):
        weights = WeightAssignment.of(weights)
    try:
        validate_cycle(graph, cycle)
        inside_v, on_v, outside_v = split_vertices(graph, cycle)
        simple = True
    except NonSimpleCycle:
        return SeparatorCheck(False, Fraction(0), Fraction(0), Fraction(0), False, cycle.length, math.inf, False)
    inside = sum((weights[v] for v in inside_v), Fraction(0))
    on = sum((weights[v] for v in on_v), Fraction(0))
    outside = sum((weights[v] for v in outside_v), Fraction(0))
    total = inside + on + outside
    balanced = inside <= balance * total and outside <= balance * total
    ratio = cycle.length / math.sqrt(graph.num_vertices)
    return SeparatorCheck(
        simple=simple,
        inside=inside,
        on=on,
        outside=outside,
        balanced=balanced,
        length=cycle.length,
        length_ratio=ratio,
        within_ceiling=ratio <= c1_ceiling,
    )
