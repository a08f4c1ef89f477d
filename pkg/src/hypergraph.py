"""
Block hypergraph of one division part.

Every block of s consecutive points along a curve plants a complete
(k+1)-uniform hypergraph on its points. Copies planted by different curves
must be edge-disjoint; a shared hyperedge means two curves have k+1 common
points. Copies of the complete hypergraph in the union are then counted and
split into bad ones (k+2 of their points on one curve) and good ones, which
are forbidden configurations.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .config import Config
from .configurations import Witness, complete_sets
from .errors import DisjointnessViolation, InputError
from .incidence import IncidenceStructure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlantedCopy:
    curve: int
    points: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class BlockHypergraph:
    vertices: FrozenSet[int]
    edges: Dict[FrozenSet[int], PlantedCopy]
    planted: Tuple[PlantedCopy, ...]
    curve_count: int
    total_copies: int
    bad_copies: int
    good_copies: int
    truncated: bool
    good_example: Optional[Witness] = None

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def build_block_hypergraph(
    blocks: Mapping[int, Sequence[Tuple[int, ...]]],
    structure: IncidenceStructure,
    k: int,
    s: int,
    part: Optional[Iterable[int]] = None,
    cap: int = Config.HYPERGRAPH_COPY_CAP,
) -> BlockHypergraph:
    """
    Plant one copy per block and count all copies.

    Args:
        blocks: blocks of each curve, each a tuple of s point ids
        structure: incidence structure the points and curves come from
        k: intersection bound; hyperedges have k+1 points
        s: block size
        part: vertex set of the hypergraph (the points of the blocks by default)
        cap: stop counting copies after this many

    Returns:
        BlockHypergraph with planted copies and copy counts
    """
    if s <= k + 1:
        raise InputError(f"need s > k+1, got k={k}, s={s}")
    edges: Dict[FrozenSet[int], PlantedCopy] = {}
    planted: List[PlantedCopy] = []
    vertices: Set[int] = set(part) if part is not None else set()
    for curve in sorted(blocks):
        for block in blocks[curve]:
            if len(block) != s:
                raise InputError(f"block {block} of curve {curve} does not have {s} points")
            copy = PlantedCopy(curve, tuple(block))
            planted.append(copy)
            if part is None:
                vertices.update(block)
            for tup in combinations(sorted(block), k + 1):
                key = frozenset(tup)
                if key in edges:
                    other = edges[key].curve
                    raise DisjointnessViolation(
                        f"curves {other} and {curve} both plant the hyperedge {sorted(key)}",
                        witness={"curves": (other, curve), "edge": sorted(key)},
                    )
                edges[key] = copy

    neighbors: Dict[int, Set[int]] = {}
    for key in edges:
        for u, v in combinations(sorted(key), 2):
            neighbors.setdefault(u, set()).add(v)
            neighbors.setdefault(v, set()).add(u)

    curve_sets = [structure.curve_set(c) for c in structure.curves]
    total = bad = good = 0
    example = None
    for pts in complete_sets(neighbors, edges.__contains__, k, s, limit=cap):
        total += 1
        chosen = set(pts)
        if any(len(chosen & cs) >= k + 2 for cs in curve_sets):
            bad += 1
            continue
        good += 1
        if example is None:
            example = Witness(pts, {tup: edges[frozenset(tup)].curve for tup in combinations(pts, k + 1)})
    truncated = total >= cap
    if truncated:
        logger.warning("copy count stopped at the cap of %d", cap)
    logger.info(
        "hypergraph: %d vertices, %d edges, %d planted, %d copies (%d bad, %d good)",
        len(vertices), len(edges), len(planted), total, bad, good,
    )
    return BlockHypergraph(
        vertices=frozenset(vertices),
        edges=edges,
        planted=tuple(planted),
        curve_count=len({c.curve for c in planted}),
        total_copies=total,
        bad_copies=bad,
        good_copies=good,
        truncated=truncated,
        good_example=example,
    )
