"""
Incidence structures, incidence counting and the integer lattice
construction with many point-line incidences.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import Config
from .errors import InputError, KViolation, NotACube
from .geometry import Curve, Line, Point
from .models import Provenance

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IncidenceStructure:
    """
    Points and curves, each curve an ordered tuple of point ids.

    Point ids index `points` when labels are given; curve order is the
    order along the curve.
    """
    point_ids: Tuple[int, ...]
    curves: Dict[int, Tuple[int, ...]]
    k: int = 1
    provenance: Provenance = Provenance.GEOMETRIC
    labels: Optional[Dict[int, Point]] = None
    _sets: Dict[int, FrozenSet[int]] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_sets", {c: frozenset(pts) for c, pts in self.curves.items()})

    @classmethod
    def from_geometry(
        cls,
        points: Sequence[Point],
        curves: Sequence[Curve],
        k: int = 1,
    ) -> "IncidenceStructure":
        """Point ids are list positions; each curve lists its points by increasing x"""
        ids = {p: i for i, p in enumerate(points)}
        lists = {}
        for c in curves:
            on = sorted(p for p in points if c.contains(p))
            lists[c.id] = tuple(ids[p] for p in on)
        return cls(tuple(range(len(points))), lists, k, Provenance.GEOMETRIC, dict(enumerate(points)))

    @property
    def incidences(self) -> int:
        return sum(len(pts) for pts in self.curves.values())

    def curve_set(self, c: int) -> FrozenSet[int]:
        return self._sets[c]

    def curves_containing(self, pts: Iterable[int]) -> List[int]:
        want = set(pts)
        return [c for c, s in self._sets.items() if want <= s]

    def incidence_pairs(self) -> List[Tuple[int, int]]:
        """All (curve, point) pairs, sorted"""
        return sorted((c, p) for c, pts in self.curves.items() for p in pts)

    def restricted(self, keep: Mapping[int, Iterable[int]], provenance: Provenance = Provenance.COMBINATORIAL) -> "IncidenceStructure":
        """Same points; curve c keeps only the points in keep[c], in the original order"""
        lists = {}
        for c, pts in self.curves.items():
            chosen = set(keep.get(c, ()))
            lists[c] = tuple(p for p in pts if p in chosen)
        return IncidenceStructure(self.point_ids, lists, self.k, provenance, self.labels)

    def on_points(self, points: Iterable[int]) -> "IncidenceStructure":
        """Sub-structure on a point subset; curves left with no point are dropped"""
        keep = set(points)
        lists = {c: tuple(p for p in pts if p in keep) for c, pts in self.curves.items()}
        lists = {c: pts for c, pts in lists.items() if pts}
        labels = {p: q for p, q in self.labels.items() if p in keep} if self.labels else None
        return IncidenceStructure(tuple(sorted(keep)), lists, self.k, self.provenance, labels)

    def validate_k(self):
        """Raise KViolation if two curves share more than k points"""
        owner: Dict[FrozenSet[int], int] = {}
        for c in sorted(self.curves):
            pts = self.curves[c]
            if len(pts) <= self.k:
                continue
            for tup in combinations(sorted(pts), self.k + 1):
                key = frozenset(tup)
                if key in owner:
                    raise KViolation(
                        f"curves {owner[key]} and {c} share {self.k + 1} points",
                        pair=(owner[key], c),
                        witnesses=list(tup),
                    )
                owner[key] = c


def incidence_count(points: Sequence[Point], curves: Optional[Sequence[Curve]] = None) -> int:
    """
    Number of point-curve incidences.

    Accepts either (points, curves) or a single IncidenceStructure.
    """
    if isinstance(points, IncidenceStructure):
        return points.incidences
    if curves is None:
        raise InputError("curves are required with a point list")
    return sum(1 for c in curves for p in points if c.contains(p))


def pach_sharir_bound(
    point_count: int,
    curve_count: int,
    k: int,
    crossings: Optional[int] = None,
    c_k: float = Config.C_K,
) -> float:
    """
    c_k * (|P|^((k+1)/(2k+1)) * m^(k/(2k+1)) + |P| + |C|).

    Without a crossing count m, uses m = k * C(|C|, 2).
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    m = k * curve_count * (curve_count - 1) // 2 if crossings is None else crossings
    main = point_count ** ((k + 1) / (2 * k + 1)) * m ** (k / (2 * k + 1))
    return c_k * (main + point_count + curve_count)


def integer_cube_root(n: int) -> int:
    root = round(n ** (1 / 3))
    for c in (root - 1, root, root + 1):
        if c >= 1 and c ** 3 == n:
            return c
    raise NotACube(f"{n} is not a perfect cube", witness=n)


@dataclass(frozen=True, eq=False)
class Lattice:
    """
    Points {0..m-1} x {0..m^2-1} and lines y = a*x + b with a < m, b < m^2.

    Point (x, y) has id x*m^2 + y; line (a, b) has id a*m^2 + b.
    """
    n: int
    side: int
    structure: IncidenceStructure

    @property
    def points(self) -> List[Point]:
        m2 = self.side ** 2
        return [Point(Fraction(i // m2), Fraction(i % m2)) for i in range(self.n)]

    @property
    def lines(self) -> List[Line]:
        m2 = self.side ** 2
        return [Line(Fraction(j // m2), Fraction(j % m2), id=j) for j in range(self.n)]

    @property
    def incidences(self) -> int:
        return self.structure.incidences

    @property
    def closed_form(self) -> int:
        m = self.side
        return m ** 4 - (m * (m - 1) // 2) ** 2

    @property
    def density(self) -> float:
        """I / n^(4/3)"""
        return self.incidences / self.side ** 4


def st_lattice(n: int) -> Lattice:
    """Lattice of n points and n lines with about n^(4/3) incidences"""
    m = integer_cube_root(n)
    m2 = m * m
    curves = {}
    for a in range(m):
        for b in range(m2):
            pts = []
            for x in range(m):
                y = a * x + b
                if y >= m2:
                    break
                pts.append(x * m2 + y)
            curves[a * m2 + b] = tuple(pts)
    structure = IncidenceStructure(tuple(range(n)), curves, 1, Provenance.GEOMETRIC)
    lattice = Lattice(n, m, structure)
    logger.debug("lattice n=%d: %d incidences (%.3f n^(4/3))", n, lattice.incidences, lattice.density)
    return lattice


@dataclass(frozen=True)
class PointGraph:
    """Points joined when they share a curve; each curve spans a clique"""
    n: int
    cliques: Tuple[Tuple[int, ...], ...]
    degree: np.ndarray
    max_degree: int
    max_codegree: int
    degree_within: bool
    codegree_bound: float
    codegree_within: bool


def point_graph(
    lattice: Lattice,
    slack: float = Config.CODEGREE_SLACK,
    log_power: float = Config.CODEGREE_LOG_POWER,
) -> PointGraph:
    """
    Point graph of a lattice with its degree and codegree checks.

    Degree is checked exactly against n^(2/3); the largest number of common
    neighbours against slack * n^(1/3) * (log2 n)^log_power.
    """
    structure = lattice.structure
    n = lattice.n
    cliques = tuple(pts for _, pts in sorted(structure.curves.items()) if len(pts) >= 2)
    degree = np.zeros(n, dtype=np.int64)
    adjacency = np.zeros((n, n), dtype=np.float32)
    for pts in cliques:
        idx = np.asarray(pts)
        degree[idx] += len(pts) - 1
        adjacency[np.ix_(idx, idx)] = 1.0
    np.fill_diagonal(adjacency, 0.0)
    common = adjacency @ adjacency
    np.fill_diagonal(common, 0.0)

    max_degree = int(degree.max()) if n else 0
    max_codegree = int(round(float(common.max()))) if n else 0
    degree_within = max_degree ** 3 <= n ** 2
    bound = slack * n ** (1 / 3) * math.log2(n) ** log_power if n > 1 else slack
    if not degree_within:
        logger.warning("point graph degree %d exceeds n^(2/3)", max_degree)
    if max_codegree > bound:
        logger.warning("point graph codegree %d exceeds %.1f", max_codegree, bound)
    return PointGraph(n, cliques, degree, max_degree, max_codegree, degree_within, bound, max_codegree <= bound)
