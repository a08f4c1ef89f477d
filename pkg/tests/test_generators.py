"""
Unit tests for the graph generators.
"""

import pytest

from src.errors import InputError
from src.generators import grid, grid_vertex, random_subset, random_triangulation, triangulated_grid


class TestGenerators:
    """Test cases for grids, random triangulations and subsets"""

    def test_grid_vertex_ids(self):
        """Test vertex (x, y) has id y*k + x"""
        assert grid_vertex(5, 0, 0) == 0
        assert grid_vertex(5, 4, 0) == 4
        assert grid_vertex(5, 2, 3) == 17

    def test_grid_too_small(self):
        """Test grids need side at least 2"""
        with pytest.raises(InputError):
            grid(1)

    @pytest.mark.parametrize("k", [2, 5, 8])
    def test_triangulated_grid_counts(self, k):
        """Test cell diagonals leave only the outer face larger than a triangle"""
        g = triangulated_grid(k)
        faces = g.faces()

        assert g.num_edges == 2 * k * (k - 1) + (k - 1) ** 2
        assert len(faces) == 2 * (k - 1) ** 2 + 1
        assert faces[g.outer_face].size == 4 * (k - 1)
        assert sum(1 for f in faces if f.size == 3) == 2 * (k - 1) ** 2

    def test_grid_coordinates(self):
        """Test grids carry their integer coordinates"""
        g = grid(3)

        assert g.coords[grid_vertex(3, 2, 1)] == (2, 1)

    def test_random_triangulation_seeded(self):
        """Test equal seeds give equal rotation systems"""
        a = random_triangulation(30, seed=7)
        b = random_triangulation(30, seed=7)

        assert all(a.rotation(v) == b.rotation(v) for v in a.vertices)
        assert a.outer_dart == b.outer_dart == 1

    def test_random_triangulation_too_small(self):
        """Test fewer than three vertices are rejected"""
        with pytest.raises(InputError):
            random_triangulation(2)

    def test_random_subset(self):
        """Test subsets are sorted, seeded and of the rounded size"""
        chosen = random_subset(range(100), 0.5, seed=3)

        assert len(chosen) == 50
        assert chosen == sorted(set(chosen))
        assert chosen == random_subset(range(100), 0.5, seed=3)
        assert random_subset(range(10), 0.0) == []
