"""
Unit tests for the recursive r-division.
"""

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.errors import Disconnected, InputError, NotAntichain, RBelowMinimum
from src.generators import grid, random_subset, random_triangulation, triangulated_grid
from src.models import DivisionConfig
from src.planar import build_graph, triangulate_faces
from src.rdivision import (
    INFINITE, classic_r_division, compute_overcount, is_infinite, overcount_stats,
    refined_r_division, separator_frontier,
)
from src.verifier import verify_division


class TestRefinedDivision:
    """Test cases for refined_r_division"""

    @pytest.fixture
    def grid12(self):
        """Create a triangulated 12 x 12 grid"""
        return triangulated_grid(12)

    def test_huge_r_single_region(self):
        """Test the 5x5 grid with huge r and t is one region"""
        g = grid(5)
        division, tree = refined_r_division(g, g.vertices, 10 ** 6, 10 ** 6)
        host, _ = triangulate_faces(g)

        assert len(division.regions) == 1
        assert division.regions[0].edges == frozenset(host.edges)
        assert division.boundary == frozenset()
        assert len(tree) == 1
        assert division.region_nodes == [0]
        assert division.parts() == {0: frozenset(g.vertices)}
        assert division.separators == []

    def test_r_below_minimum(self, grid12):
        """Test r below r0 is rejected"""
        with pytest.raises(RBelowMinimum):
            refined_r_division(grid12, [], 8, INFINITE)

    def test_t_zero(self, grid12):
        """Test t must be positive"""
        with pytest.raises(InputError):
            refined_r_division(grid12, [], 16, 0)

    def test_points_must_be_vertices(self, grid12):
        """Test unknown points are rejected"""
        with pytest.raises(InputError):
            refined_r_division(grid12, [999], 16, INFINITE)

    def test_disconnected(self):
        """Test disconnected graphs are rejected"""
        g = build_graph(
            6,
            [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
            {0: [0, 2], 1: [1, 0], 2: [2, 1], 3: [3, 5], 4: [4, 3], 5: [5, 4]},
        )

        with pytest.raises(Disconnected):
            refined_r_division(g, [], 16, INFINITE)

    def test_grid_without_points(self, grid12):
        """Test a division with P empty satisfies every check"""
        division, _ = refined_r_division(grid12, [], 16, INFINITE)
        report = verify_division(grid12, [], division, 16, INFINITE)

        assert report.passed, report.failures
        assert len(division.regions) > 1
        assert len(division.regions) <= 48 * 144 / 16

    def test_grid_with_points(self, grid12):
        """Test a division balancing a random half of the vertices as points"""
        points = random_subset(grid12.vertices, 0.5, seed=1)
        division, _ = refined_r_division(grid12, points, 16, 4)
        report = verify_division(grid12, points, division, 16, 4)

        assert report.passed, report.failures
        c0 = Fraction(4)
        for stats, y in zip(report.regions, division.region_nodes):
            if not division.tree[y].forced:
                assert stats.interior_points <= c0 * 4

    def test_all_points(self, grid12):
        """Test P equal to every vertex"""
        division, _ = refined_r_division(grid12, grid12.vertices, 16, 16)
        report = verify_division(grid12, grid12.vertices, division, 16, 16)

        assert report.passed, report.failures

    def test_boundary_is_shared_vertices(self, grid12):
        """Test boundary vertices are exactly those in two or more regions and on some separator"""
        division, _ = refined_r_division(grid12, [], 16, INFINITE)
        counts = Counter(v for region in division.regions for v in region.vertices)

        assert division.boundary == frozenset(v for v, c in counts.items() if c >= 2)
        attached = set()
        for x in division.tree.internal():
            attached |= division.tree[x].attached
        assert division.boundary == frozenset(attached)
        on_cycles = set()
        for _, cycle in division.separators:
            on_cycles.update(cycle.vertices)
        assert division.boundary == frozenset(on_cycles)

    @pytest.mark.parametrize("k", [12, 16])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    @pytest.mark.parametrize("r,t", [(16, 4), (16, 8)])
    def test_half_points_grids(self, k, seed, r, t):
        """Test random half-point sets on triangulated grids divide and verify"""
        g = triangulated_grid(k)
        points = random_subset(g.vertices, 0.5, seed=seed)
        division, _ = refined_r_division(g, points, r, t, DivisionConfig(seed=seed))
        report = verify_division(g, points, division, r, t)

        assert report.passed, report.failures

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [12, 16, 20, 24])
    @pytest.mark.parametrize("r,t", [(16, 4), (16, 8), (32, 4)])
    def test_half_points_sweep(self, k, r, t):
        """Test the half-point sweep over six seeds per grid"""
        g = triangulated_grid(k)
        for seed in range(6):
            points = random_subset(g.vertices, 0.5, seed=seed)
            division, _ = refined_r_division(g, points, r, t, DivisionConfig(seed=seed))
            report = verify_division(g, points, division, r, t)
            assert report.passed, (seed, report.failures)

    def test_tree_structure(self, grid12):
        """Test children point back to their parents one level down"""
        _, tree = refined_r_division(grid12, [], 16, INFINITE)

        assert tree.root.parent is None
        for node in tree.nodes:
            assert len(node.children) in (0, 2)
            for child in node.children:
                assert tree[child].parent == node.id
                assert tree[child].depth == node.depth + 1
            if node.is_leaf:
                assert node.edges is not None
            else:
                assert node.cycle is not None
                assert node.tag is not None

    def test_seeded_determinism(self, grid12):
        """Test equal seeds give equal divisions"""
        cfg = DivisionConfig(seed=11)
        first, _ = refined_r_division(grid12, [], 16, INFINITE, cfg)
        second, _ = refined_r_division(grid12, [], 16, INFINITE, cfg)

        assert [r.edges for r in first.regions] == [r.edges for r in second.regions]
        assert first.boundary == second.boundary

    @settings(max_examples=8, deadline=None)
    @given(n=st.integers(min_value=40, max_value=150), seed=st.integers(min_value=0, max_value=1000))
    def test_random_triangulations(self, n, seed):
        """Test divisions of random triangulations pass verification"""
        g = random_triangulation(n, seed)
        points = random_subset(g.vertices, 0.5, seed=seed)
        division, _ = refined_r_division(g, points, 16, 8, DivisionConfig(seed=seed))
        report = verify_division(g, points, division, 16, 8)

        assert report.passed, report.failures

    @pytest.mark.slow
    @pytest.mark.parametrize("k,r,t", [(32, 64, 16), (32, 256, 64), (32, 1024, 16), (32, 64, None)])
    def test_acceptance_grid(self, k, r, t):
        """Test the acceptance parameter grid on a triangulated grid"""
        g = triangulated_grid(k)
        t = INFINITE if t is None else t
        for points in ([], list(g.vertices), random_subset(g.vertices, 0.5, seed=k)):
            division, _ = refined_r_division(g, points, r, t)
            report = verify_division(g, points, division, r, t)
            assert report.passed, report.failures


class TestClassicDivision:
    """Test cases for classic_r_division"""

    def test_classic_grid(self):
        """Test the two-parameter division passes verification"""
        g = triangulated_grid(12)
        division, tree = classic_r_division(g, 16)
        report = verify_division(g, [], division, 16, INFINITE)

        assert report.passed, report.failures
        assert not division.refined
        assert is_infinite(division.t)
        assert all(tree[x].tag.value != "points" for x in tree.internal())


class TestOvercount:
    """Test cases for compute_overcount and separator_frontier"""

    @pytest.fixture
    def tree(self):
        """Recursion tree of a divided 12 x 12 grid"""
        return refined_r_division(triangulated_grid(12), [], 16, INFINITE)[1]

    def test_root_alone(self, tree):
        """Test L(root, {root}) is zero"""
        assert compute_overcount(tree, 0, [0]) == 0

    def test_leaves(self, tree):
        """Test leaves overcount the root by the shared vertices"""
        leaves = tree.leaves()
        expected = sum(tree[y].n for y in leaves) - tree.root.n

        assert compute_overcount(tree, 0, leaves) == expected
        assert expected >= 0

    def test_children(self, tree):
        """Test the two children overcount by at most the root cycle"""
        a, b = tree.root.children

        assert 0 <= compute_overcount(tree, 0, [a, b]) <= tree.root.cycle.length

    def test_repeated_node(self, tree):
        """Test repeated nodes are rejected"""
        with pytest.raises(NotAntichain):
            compute_overcount(tree, 0, [1, 1])

    def test_ancestor_pair(self, tree):
        """Test a node together with its descendant is rejected"""
        leaf = tree.leaves()[0]

        with pytest.raises(NotAntichain):
            compute_overcount(tree, 0, [0, leaf])

    def test_outside_subtree(self, tree):
        """Test nodes outside the subtree are rejected"""
        with pytest.raises(NotAntichain):
            compute_overcount(tree, 1, [2])

    def test_frontier(self, tree):
        """Test the frontier is an antichain of nodes within c0*r vertices"""
        frontier = separator_frontier(tree, 0, Fraction(4), 16)

        assert frontier
        for y in frontier:
            node = tree[y]
            assert node.n <= 64 or node.is_leaf
            if node.parent is not None:
                assert tree[node.parent].n > 64
        compute_overcount(tree, 0, frontier)

    def test_overcount_stats(self):
        """Test fitted constants scale the overcount by sqrt(r)/N"""
        g = triangulated_grid(12)
        division, _ = refined_r_division(g, [], 16, INFINITE)
        stats = overcount_stats(division)

        assert stats.leaves_fitted_c2 == pytest.approx(stats.leaves * 4 / 144)
        assert stats.frontier_size >= 1

    @pytest.mark.slow
    def test_fitted_c2_stable_across_grids(self):
        """Test the fitted leaf overcount constant stays within a factor two across grid sizes"""
        fitted = []
        for k in (16, 24, 32):
            division, _ = refined_r_division(triangulated_grid(k), [], 16, INFINITE)
            stats = overcount_stats(division)
            assert stats.leaves > 0
            fitted.append(stats.leaves_fitted_c2)

        assert max(fitted) <= 2 * min(fitted)
