"""
Unit tests for the simple-cycle separator.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.errors import Disconnected, InputError, NotTriangulated, SeparatorFailure, TooSmall, ZeroTotalWeight
from src.generators import digon_multigraph, grid, random_triangulation, triangulated_grid
from src.planar import SimpleCycle, build_graph, triangulate_faces, validate_cycle
from src.separator import WeightAssignment, check_separator, cycle_separator, separate

BALANCE = Fraction(3, 4)


def host_grid(k):
    """Fully triangulated k x k grid, outer face included"""
    return triangulate_faces(triangulated_grid(k))[0]


class TestSeparator:
    """Test cases for cycle_separator and separate"""

    @pytest.mark.parametrize("k", [8, 16])
    def test_grid_balanced(self, k):
        """Test the separator of a triangulated grid is simple, balanced and short"""
        g = host_grid(k)
        weights = WeightAssignment.unit(g.vertices)
        result = separate(g, weights)
        check = check_separator(g, result.cycle, weights)

        assert check.passed
        assert check.inside == result.inside
        assert check.outside == result.outside
        assert result.inside <= BALANCE * result.total
        assert result.outside <= BALANCE * result.total

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(min_value=5, max_value=80), seed=st.integers(min_value=0, max_value=10_000))
    def test_random_triangulations(self, n, seed):
        """Test random triangulations with unit weights"""
        g = random_triangulation(n, seed)
        cycle = cycle_separator(g, {v: 1 for v in g.vertices}, seed=seed)

        validate_cycle(g, cycle)
        check = check_separator(g, cycle, {v: 1 for v in g.vertices})
        assert check.simple
        assert check.balanced


    @pytest.mark.slow
    @pytest.mark.parametrize("k", [32, 64, 128])
    def test_large_grid_balanced(self, k):
        """Test large triangulated grids get a simple, balanced, short separator"""
        g = host_grid(k)
        weights = WeightAssignment.unit(g.vertices)
        result = separate(g, weights)
        check = check_separator(g, result.cycle, weights)

        assert check.passed
        assert check.length_ratio <= 8 * 2 ** 0.5

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [64, 256, 1024])
    def test_random_triangulation_batches(self, n):
        """Test 50 random triangulations per size pass the independent check"""
        for seed in range(50):
            g = random_triangulation(n, seed)
            weights = {v: 1 for v in g.vertices}
            check = check_separator(g, cycle_separator(g, weights, seed=seed), weights)
            assert check.passed, seed

    def test_accept_skips_rejected_cycle(self):
        """Test a rejected shortest cycle gives way to another balanced cycle"""
        g = host_grid(8)
        weights = WeightAssignment.unit(g.vertices)
        first = separate(g, weights)
        seen = []

        def accept(cycle):
            seen.append(cycle)
            return cycle.edges != first.cycle.edges

        second = separate(g, weights, accept=accept)

        assert second.cycle.edges != first.cycle.edges
        assert seen[0].edges == first.cycle.edges
        assert check_separator(g, second.cycle, weights).balanced

    def test_accept_rejects_everything(self):
        """Test a predicate admitting nothing raises SeparatorFailure with the rejection count"""
        g = host_grid(5)

        with pytest.raises(SeparatorFailure) as exc:
            separate(g, {v: 1 for v in g.vertices}, accept=lambda cycle: False)

        assert exc.value.witness > 0
        assert "rejected" in str(exc.value)
    def test_exact_fractional_weights(self):
        """Test side weights are exact for rational weights"""
        g = host_grid(6)
        weights = {v: Fraction(1, 1 + v % 7) for v in g.vertices}
        result = separate(g, weights)

        assert result.inside + result.on + result.outside == result.total
        assert result.total == sum(weights.values(), Fraction(0))
        assert check_separator(g, result.cycle, weights).balanced

    def test_single_heavy_vertex(self):
        """Test all weight on one vertex puts it on the cycle"""
        g = host_grid(5)
        result = separate(g, {12: 1})

        assert 12 in result.cycle.vertices
        assert result.inside == 0
        assert result.outside == 0

    def test_multiple_roots(self):
        """Test a sequence seed is accepted and deterministic"""
        g = random_triangulation(50, seed=1)
        weights = {v: 1 for v in g.vertices}

        first = cycle_separator(g, weights, seed=[4, 9])
        second = cycle_separator(g, weights, seed=[4, 9])
        assert first == second

    def test_digons(self):
        """Test graphs with digon faces are separated"""
        g = digon_multigraph(30, 6, seed=2)
        weights = {v: 1 for v in g.vertices}
        cycle = cycle_separator(g, weights)

        check = check_separator(g, cycle, weights)
        assert check.simple
        assert check.balanced

    def test_not_triangulated(self):
        """Test faces larger than triangles are rejected"""
        g = grid(4)

        with pytest.raises(NotTriangulated):
            cycle_separator(g, {v: 1 for v in g.vertices})

    def test_too_small(self):
        """Test a single edge cannot be separated"""
        g = build_graph(2, [(0, 1)], {0: [0], 1: [0]})

        with pytest.raises(TooSmall):
            cycle_separator(g, {0: 1, 1: 1})

    def test_zero_weight(self):
        """Test an all-zero weighting is rejected"""
        g = random_triangulation(10)

        with pytest.raises(ZeroTotalWeight):
            cycle_separator(g, {})

    def test_disconnected(self):
        """Test two disjoint triangles are rejected"""
        g = build_graph(
            6,
            [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
            {0: [0, 2], 1: [1, 0], 2: [2, 1], 3: [3, 5], 4: [4, 3], 5: [5, 4]},
        )

        with pytest.raises(Disconnected):
            cycle_separator(g, {v: 1 for v in g.vertices})

    def test_negative_weight(self):
        """Test negative weights are rejected"""
        with pytest.raises(InputError):
            WeightAssignment.of({0: -1})


class TestCheckSeparator:
    """Test cases for the independent separator check"""

    def test_invalid_cycle(self):
        """Test a non-cycle fails the check without raising"""
        g = host_grid(4)
        check = check_separator(g, SimpleCycle(vertices=(0, 1, 0), darts=(0, 1, 0)), {v: 1 for v in g.vertices})

        assert not check.simple
        assert not check.passed

    def test_unbalanced_cycle(self):
        """Test a single grid triangle leaves too much outside"""
        g = host_grid(6)
        d = g.rotation(7)[0]
        d2 = g.face_next(d)
        d3 = g.face_next(d2)
        cycle = SimpleCycle(vertices=(7, g.head(d), g.head(d2)), darts=(d, d2, d3))
        check = check_separator(g, cycle, {v: 1 for v in g.vertices})

        assert check.simple
        assert not check.balanced
