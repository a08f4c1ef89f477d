"""
Forbidden configurations: s points whose (k+1)-tuples lie on pairwise
distinct curves.

Candidate point sets are grown one point at a time through common
neighbourhoods of the point graph (two points are adjacent when some curve
holds both). A candidate is a configuration when the bipartite graph of its
tuples against the curves containing them has a matching that covers every
tuple.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Set, Tuple

import networkx as nx

from .config import Config
from .errors import InputError, InstanceTooLarge
from .incidence import IncidenceStructure

logger = logging.getLogger(__name__)

Combo = Tuple[int, ...]


@dataclass(frozen=True)
class Witness:
    """s points and an injective assignment of curves to their (k+1)-tuples"""
    points: Combo
    assignment: Dict[Combo, int]

    def incidences(self) -> List[Tuple[int, int]]:
        """(curve, point) pairs the witness relies on, sorted"""
        used = {(c, p) for tup, c in self.assignment.items() for p in tup}
        return sorted(used)


def tuple_cover(structure: IncidenceStructure, k: int) -> Dict[FrozenSet[int], List[int]]:
    """Curves containing each (k+1)-tuple of points"""
    cover: Dict[FrozenSet[int], List[int]] = {}
    for c in sorted(structure.curves):
        pts = sorted(structure.curves[c])
        if len(pts) <= k:
            continue
        for tup in combinations(pts, k + 1):
            cover.setdefault(frozenset(tup), []).append(c)
    return cover


def adjacency(structure: IncidenceStructure, k: int) -> Dict[int, Set[int]]:
    """Points sharing a curve with at least k+1 points"""
    nbrs: Dict[int, Set[int]] = {}
    for pts in structure.curves.values():
        if len(pts) <= k:
            continue
        for u, v in combinations(pts, 2):
            nbrs.setdefault(u, set()).add(v)
            nbrs.setdefault(v, set()).add(u)
    return nbrs


def complete_sets(
    neighbors: Mapping[int, Set[int]],
    covered: Callable[[FrozenSet[int]], bool],
    k: int,
    s: int,
    limit: Optional[int] = None,
) -> Iterator[Combo]:
    """
    Sorted s-sets whose pairs are adjacent and whose (k+1)-subsets are all
    covered, in lexicographic order. Stops after `limit` sets.
    """
    found = 0

    def extend(chosen: List[int], candidates: List[int]) -> Iterator[Combo]:
        nonlocal found
        if len(chosen) == s:
            found += 1
            yield tuple(chosen)
            return
        for i, v in enumerate(candidates):
            if limit is not None and found >= limit:
                return
            if k >= 2 and len(chosen) >= k:
                if not all(covered(frozenset(rest + (v,))) for rest in combinations(chosen, k)):
                    continue
            nv = neighbors.get(v, set())
            yield from extend(chosen + [v], [w for w in candidates[i + 1:] if w in nv])

    for u in sorted(neighbors):
        if limit is not None and found >= limit:
            return
        yield from extend([u], sorted(w for w in neighbors[u] if w > u))


def distinct_representatives(points: Combo, cover: Mapping[FrozenSet[int], List[int]], k: int) -> Optional[Dict[Combo, int]]:
    """Injective tuple -> curve assignment via Hopcroft-Karp, or None"""
    tuples = list(combinations(points, k + 1))
    graph = nx.Graph()
    top = [("t", tup) for tup in tuples]
    graph.add_nodes_from(top)
    for tup in tuples:
        curves = cover.get(frozenset(tup), [])
        if not curves:
            return None
        graph.add_edges_from((("t", tup), ("c", c)) for c in curves)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    if any(node not in matching for node in top):
        return None
    return {tup: matching[("t", tup)][1] for tup in tuples}


def _check_ks(k: int, s: int):
    if k < 1 or s <= k + 1:
        raise InputError(f"need s > k+1 >= 2, got k={k}, s={s}")


def iter_configurations(structure: IncidenceStructure, k: int, s: int) -> Iterator[Witness]:
    """Every forbidden configuration of the structure, in lexicographic order of its points"""
    _check_ks(k, s)
    cover = tuple_cover(structure, k)
    nbrs = adjacency(structure, k)
    for pts in complete_sets(nbrs, cover.__contains__, k, s):
        assignment = distinct_representatives(pts, cover, k)
        if assignment is not None:
            yield Witness(pts, assignment)


def validate_witness(structure: IncidenceStructure, k: int, s: int, witness: Witness) -> bool:
    """Direct containment and injectivity check, independent of the matching"""
    pts = witness.points
    if len(pts) != s or len(set(pts)) != s:
        return False
    tuples = set(combinations(sorted(pts), k + 1))
    if set(witness.assignment) != tuples:
        return False
    curves = list(witness.assignment.values())
    if len(set(curves)) != len(curves):
        return False
    for tup, c in witness.assignment.items():
        if c not in structure.curves or not set(tup) <= structure.curve_set(c):
            return False
    return True


def forbidden_config_scan(
    structure: IncidenceStructure,
    k: int,
    s: int,
    cap: int = Config.FORBID_CAP,
    force: bool = False,
) -> Optional[Witness]:
    """
    First forbidden configuration, or None.

    Exhaustive; refuses structures with more than `cap` points unless forced.
    """
    _check_ks(k, s)
    size = len(structure.point_ids)
    if size > cap and not force:
        raise InstanceTooLarge(f"{size} points exceed the scan cap {cap}; use force to scan anyway", witness=size)
    for witness in iter_configurations(structure, k, s):
        if not validate_witness(structure, k, s, witness):
            raise AssertionError(f"matching produced an invalid witness {witness.points}")
        logger.debug("forbidden configuration at points %s", witness.points)
        return witness
    return None
