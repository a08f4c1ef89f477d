"""
Unit tests for incidence structures and the lattice construction.
"""

import pytest

from src.errors import InputError, KViolation, NotACube
from src.geometry import Line, Point
from src.incidence import (
    IncidenceStructure, Lattice, incidence_count, integer_cube_root, pach_sharir_bound, point_graph, st_lattice,
)
from src.models import Provenance


def brute_force_incidences(lattice):
    return sum(1 for line in lattice.lines for p in lattice.points if line.contains(p))


class TestIncidenceCount:
    """Test cases for incidence_count"""

    def test_no_points(self):
        """Test an empty point set has no incidences"""
        assert incidence_count([], [Line(1, 0)]) == 0

    def test_line_through_half(self):
        """Test one line through five of ten points"""
        points = [Point.of(x, x) for x in range(5)] + [Point.of(x, x + 1) for x in range(5)]

        assert incidence_count(points, [Line(1, 0)]) == 5

    def test_structure_argument(self):
        """Test a structure counts its own incidences"""
        structure = IncidenceStructure((0, 1, 2), {0: (0, 1), 1: (1, 2), 2: (2,)})

        assert incidence_count(structure) == 5

    def test_points_without_curves(self):
        """Test a point list needs curves"""
        with pytest.raises(InputError):
            incidence_count([Point.of(0, 0)])


class TestLattice:
    """Test cases for st_lattice"""

    @pytest.mark.parametrize("n,expected", [(8, 15), (64, 220), (512, 3312)])
    def test_incidences(self, n, expected):
        """Test lattice incidences match the closed form"""
        lattice = st_lattice(n)

        assert lattice.incidences == expected
        assert lattice.closed_form == expected

    @pytest.mark.parametrize("n", [8, 64])
    def test_brute_force(self, n):
        """Test the combinatorial lattice agrees with exact geometry"""
        lattice = st_lattice(n)

        assert brute_force_incidences(lattice) == lattice.incidences

    def test_sizes(self):
        """Test the lattice has n points and n lines"""
        lattice = st_lattice(64)

        assert len(lattice.points) == 64
        assert len(lattice.lines) == 64
        assert lattice.side == 4
        assert lattice.points[5] == Point.of(0, 5)
        assert lattice.lines[17] == Line(1, 1, id=17)

    def test_density(self):
        """Test I / n^(4/3) for n = 64 and n = 512"""
        assert st_lattice(64).density == pytest.approx(0.859, abs=1e-3)
        assert st_lattice(512).density == pytest.approx(0.808, abs=1e-3)

    def test_large_closed_form(self):
        """Test the closed form on a larger cube"""
        lattice = st_lattice(4096)

        assert lattice.incidences == lattice.closed_form

    @pytest.mark.parametrize("m", range(2, 33))
    def test_density_floor(self, m):
        """Test every cube n up to 32768 keeps I / n^(4/3) at least 3/4"""
        lattice = Lattice(m ** 3, m, IncidenceStructure((), {}))

        assert lattice.closed_form >= 0.75 * m ** 4

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [4096, 32768])
    def test_density_floor_built(self, n):
        """Test the built lattice reaches the closed form and the 3/4 floor"""
        lattice = st_lattice(n)

        assert lattice.incidences == lattice.closed_form
        assert lattice.density >= 0.75

    def test_not_a_cube(self):
        """Test n must be a perfect cube"""
        with pytest.raises(NotACube):
            st_lattice(10)

    def test_cube_roots(self):
        """Test exact cube roots near float rounding"""
        assert integer_cube_root(1) == 1
        assert integer_cube_root(125) == 5
        assert integer_cube_root(1000 ** 3) == 1000


class TestPachSharirBound:
    """Test cases for pach_sharir_bound"""

    def test_no_points(self):
        """Test only the curve term remains without points"""
        assert pach_sharir_bound(0, 10, 1) == pytest.approx(10)

    def test_no_crossings(self):
        """Test m = 0 leaves |P| + |C|"""
        assert pach_sharir_bound(7, 10, 2, crossings=0) == pytest.approx(17)

    def test_lattice_within_bound(self):
        """Test the n = 512 lattice is within n^(4/3) and the bound"""
        lattice = st_lattice(512)

        assert lattice.incidences <= 4096
        assert lattice.incidences <= pach_sharir_bound(512, 512, 1)

    def test_k_below_one(self):
        """Test k must be positive"""
        with pytest.raises(InputError):
            pach_sharir_bound(1, 1, 0)


class TestPointGraph:
    """Test cases for point_graph"""

    def test_small_lattice(self):
        """Test n = 8 has degree at most 4"""
        pg = point_graph(st_lattice(8))

        assert pg.max_degree <= 4
        assert pg.degree_within

    def test_degree_matches_enumeration(self):
        """Test degree and codegree against all-pairs enumeration"""
        lattice = st_lattice(64)
        pg = point_graph(lattice)

        adjacent = {v: set() for v in range(64)}
        for pts in lattice.structure.curves.values():
            for u in pts:
                adjacent[u].update(w for w in pts if w != u)
        codegree = max(len(adjacent[u] & adjacent[v]) for u in range(64) for v in range(64) if u != v)

        assert pg.max_degree == max(len(s) for s in adjacent.values())
        assert pg.max_degree <= 16
        assert pg.max_codegree == codegree
        assert pg.codegree_within

    @pytest.mark.slow
    def test_codegree_matches_enumeration_512(self):
        """Test n = 512 codegree against all-pairs enumeration"""
        lattice = st_lattice(512)
        pg = point_graph(lattice)

        adjacent = {v: set() for v in range(512)}
        for pts in lattice.structure.curves.values():
            for u in pts:
                adjacent[u].update(w for w in pts if w != u)
        codegree = max(len(adjacent[u] & adjacent[v]) for u in range(512) for v in range(u + 1, 512))

        assert pg.max_codegree == codegree
        assert pg.max_degree ** 3 <= 512 ** 2
        assert pg.codegree_within

    @pytest.mark.slow
    def test_bounds_at_4096(self):
        """Test degree and codegree bounds hold at n = 4096"""
        pg = point_graph(st_lattice(4096))

        assert pg.degree_within
        assert pg.max_degree <= 256
        assert pg.codegree_within
        assert pg.max_codegree <= pg.codegree_bound


class TestIncidenceStructure:
    """Test cases for IncidenceStructure"""

    @pytest.fixture
    def structure(self):
        """Triangle of curves on points 0, 1, 2 plus a long curve"""
        return IncidenceStructure((0, 1, 2, 3), {0: (0, 1), 1: (1, 2), 2: (0, 2), 3: (0, 3)})

    def test_from_geometry(self):
        """Test curves list their points by increasing x"""
        points = [Point.of(2, 2), Point.of(0, 0), Point.of(1, 5)]
        structure = IncidenceStructure.from_geometry(points, [Line(1, 0, id=9)])

        assert structure.curves == {9: (1, 0)}
        assert structure.labels[0] == Point.of(2, 2)

    def test_curves_containing(self, structure):
        """Test curves through a point pair"""
        assert structure.curves_containing([0, 2]) == [2]
        assert sorted(structure.curves_containing([0])) == [0, 2, 3]

    def test_restricted(self, structure):
        """Test restriction keeps curve order and marks the result combinatorial"""
        sub = structure.restricted({0: [1], 3: [3, 0]})

        assert sub.curves == {0: (1,), 1: (), 2: (), 3: (0, 3)}
        assert sub.provenance == Provenance.COMBINATORIAL

    def test_on_points(self, structure):
        """Test curves without points are dropped"""
        sub = structure.on_points([0, 1])

        assert sub.point_ids == (0, 1)
        assert sub.curves == {0: (0, 1), 1: (1,), 2: (0,), 3: (0,)}

    def test_on_points_drops_empty(self, structure):
        """Test a curve with no remaining point is dropped"""
        sub = structure.on_points([3])

        assert sub.curves == {3: (3,)}

    def test_validate_k(self, structure):
        """Test two curves sharing two points violate k = 1"""
        structure.validate_k()
        bad = IncidenceStructure((0, 1), {0: (0, 1), 1: (0, 1)})

        with pytest.raises(KViolation):
            bad.validate_k()

    def test_incidence_pairs(self, structure):
        """Test pairs are sorted by curve then point"""
        assert structure.incidence_pairs()[:3] == [(0, 0), (0, 1), (1, 1)]
