"""
Unit tests for the block hypergraph.
"""

import pytest

from src.errors import DisjointnessViolation, InputError
from src.hypergraph import build_block_hypergraph
from src.incidence import IncidenceStructure


def structure_of(curves):
    points = sorted({p for pts in curves.values() for p in pts})
    return IncidenceStructure(tuple(points), dict(curves))


class TestBlockHypergraph:
    """Test cases for build_block_hypergraph"""

    def test_single_block(self):
        """Test one curve with s points plants one complete graph"""
        curves = {0: (0, 1, 2, 3)}
        hg = build_block_hypergraph({0: [(0, 1, 2, 3)]}, structure_of(curves), 1, 4)

        assert hg.edge_count == 6
        assert len(hg.planted) == 1
        assert hg.vertices == frozenset({0, 1, 2, 3})
        assert hg.total_copies == 1
        assert hg.bad_copies == 1
        assert hg.good_copies == 0
        assert hg.good_example is None

    def test_curves_sharing_one_point(self):
        """Test curves meeting in at most k points share no hyperedge"""
        curves = {0: (0, 1, 2), 1: (2, 3, 4)}
        hg = build_block_hypergraph({0: [(0, 1, 2)], 1: [(2, 3, 4)]}, structure_of(curves), 1, 3)

        assert hg.edge_count == 6
        assert {c.curve for c in hg.edges.values()} == {0, 1}
        assert hg.curve_count == 2

    def test_shared_hyperedge(self):
        """Test two curves planting the same pair are rejected"""
        curves = {0: (0, 1, 2), 1: (1, 2, 3)}

        with pytest.raises(DisjointnessViolation) as exc_info:
            build_block_hypergraph({0: [(0, 1, 2)], 1: [(1, 2, 3)]}, structure_of(curves), 1, 3)

        assert exc_info.value.witness == {"curves": (0, 1), "edge": [1, 2]}

    def test_good_copy(self):
        """Test a triangle across three curves is a good copy"""
        curves = {0: (0, 1, 5), 1: (1, 2, 6), 2: (0, 2, 7)}
        blocks = {c: [pts] for c, pts in curves.items()}
        hg = build_block_hypergraph(blocks, structure_of(curves), 1, 3)

        assert hg.total_copies == 4
        assert hg.bad_copies == 3
        assert hg.good_copies == 1
        assert hg.good_example.points == (0, 1, 2)
        assert hg.good_example.assignment == {(0, 1): 0, (0, 2): 2, (1, 2): 1}

    def test_copy_count_equals_blocks(self):
        """Test blocks on disjoint curves give one copy each"""
        curves = {0: (0, 1, 2, 3, 4, 5), 1: (10, 11, 12, 13, 14, 15)}
        blocks = {0: [(0, 1, 2), (3, 4, 5)], 1: [(10, 11, 12), (13, 14, 15)]}
        hg = build_block_hypergraph(blocks, structure_of(curves), 1, 3)

        assert len(hg.planted) == 4
        assert hg.total_copies == 4
        assert hg.bad_copies == 4

    def test_part_sets_vertices(self):
        """Test the part is the vertex set when given"""
        curves = {0: (0, 1, 2)}
        hg = build_block_hypergraph({0: [(0, 1, 2)]}, structure_of(curves), 1, 3, part=[0, 1, 2, 9])

        assert hg.vertices == frozenset({0, 1, 2, 9})

    def test_cap(self):
        """Test counting stops at the cap"""
        curves = {0: (0, 1, 5), 1: (1, 2, 6), 2: (0, 2, 7)}
        blocks = {c: [pts] for c, pts in curves.items()}
        hg = build_block_hypergraph(blocks, structure_of(curves), 1, 3, cap=2)

        assert hg.total_copies == 2
        assert hg.truncated

    def test_three_uniform(self):
        """Test k = 2 plants triples"""
        curves = {0: (0, 1, 2, 3)}
        hg = build_block_hypergraph({0: [(0, 1, 2, 3)]}, structure_of(curves), 2, 4)

        assert hg.edge_count == 4
        assert all(len(e) == 3 for e in hg.edges)
        assert hg.bad_copies == 1

    def test_block_size_mismatch(self):
        """Test every block must have s points"""
        curves = {0: (0, 1, 2, 3)}

        with pytest.raises(InputError):
            build_block_hypergraph({0: [(0, 1)]}, structure_of(curves), 1, 3)

    def test_s_not_above_k_plus_one(self):
        """Test s must exceed k+1"""
        curves = {0: (0, 1)}

        with pytest.raises(InputError):
            build_block_hypergraph({0: [(0, 1)]}, structure_of(curves), 1, 2)
