"""
Unit tests for exact curve geometry.
"""

from fractions import Fraction

import pytest

from src.errors import InputError, KViolation, TangencyUnsupported
from src.geometry import Line, Point, Polyline, curves_through, intersect, validate_k_intersecting


@pytest.fixture
def zigzag():
    """Polyline crossing y = 1 three times"""
    return Polyline(((0, 0), (1, 2), (2, 0), (3, 2)), id=1)


class TestCurves:
    """Test cases for lines and polylines"""

    def test_line_values(self):
        """Test a line evaluates exactly"""
        line = Line(Fraction(1, 3), 2, id=4)

        assert line.at(Fraction(3)) == 3
        assert line.contains(Point.of(6, 4))
        assert not line.contains(Point.of(6, 5))

    def test_polyline_values(self, zigzag):
        """Test a polyline evaluates on each piece and at its ends"""
        assert zigzag.at(Fraction(1, 2)) == 1
        assert zigzag.at(Fraction(1)) == 2
        assert zigzag.at(Fraction(3)) == 2
        assert zigzag.contains(Point.of(2, 0))
        assert not zigzag.contains(Point.of(4, 4))

    def test_polyline_outside_domain(self, zigzag):
        """Test evaluating outside the x-range is an error"""
        with pytest.raises(ValueError):
            zigzag.at(Fraction(-1))

    def test_tangent(self, zigzag):
        """Test leaving directions on either side of a bend"""
        assert zigzag.tangent(Fraction(1), 1) == (1, -2)
        assert zigzag.tangent(Fraction(1), -1) == (-1, -2)

    def test_polyline_too_short(self):
        """Test a single vertex is not a polyline"""
        with pytest.raises(InputError):
            Polyline(((0, 0),), id=2)

    def test_polyline_not_monotone(self):
        """Test x must strictly increase along a polyline"""
        with pytest.raises(InputError):
            Polyline(((0, 0), (2, 1), (1, 3)), id=3)

    def test_curves_through(self):
        """Test curve ids through a point"""
        curves = [Line(1, 0, id=0), Line(-1, 2, id=1), Line(0, 5, id=2)]

        assert curves_through(Point.of(1, 1), curves) == [0, 1]


class TestIntersect:
    """Test cases for pairwise intersection"""

    def test_two_lines(self):
        """Test non-parallel lines meet once at the exact point"""
        assert intersect(Line(1, 0), Line(-1, 2, id=1)) == [Point.of(1, 1)]

    def test_rational_crossing(self):
        """Test the crossing is kept as a fraction"""
        points = intersect(Line(1, 0), Line(Fraction(-1, 2), 1, id=1))

        assert points == [Point(Fraction(2, 3), Fraction(2, 3))]

    def test_parallel_lines(self):
        """Test parallel lines never meet"""
        assert intersect(Line(2, 0), Line(2, 1, id=1)) == []

    def test_coincident_lines(self):
        """Test equal lines are rejected"""
        with pytest.raises(TangencyUnsupported):
            intersect(Line(2, 1), Line(2, 1, id=1))

    def test_polyline_and_line(self, zigzag):
        """Test every piece crossing is found in x order"""
        points = intersect(zigzag, Line(0, 1, id=2))

        assert points == [Point.of(Fraction(1, 2), 1), Point.of(Fraction(3, 2), 1), Point.of(Fraction(5, 2), 1)]

    def test_crossing_at_bend(self):
        """Test a crossing at a polyline vertex counts once"""
        bent = Polyline(((0, 0), (1, 1), (2, 3)), id=1)

        assert intersect(bent, Line(0, 1, id=2)) == [Point.of(1, 1)]

    def test_touching_at_bend(self):
        """Test a peak touching a line is rejected"""
        peak = Polyline(((0, 0), (1, 1), (2, 0)), id=1)

        with pytest.raises(TangencyUnsupported, match="touch"):
            intersect(peak, Line(0, 1, id=2))

    def test_meeting_at_end(self):
        """Test contact at a polyline end is rejected"""
        with pytest.raises(TangencyUnsupported, match="end"):
            intersect(Polyline(((0, 1), (2, 3)), id=1), Line(0, 1, id=2))

    def test_overlap(self):
        """Test a shared segment is rejected"""
        flat = Polyline(((0, 1), (1, 1), (2, 3)), id=1)

        with pytest.raises(TangencyUnsupported, match="overlap"):
            intersect(flat, Line(0, 1, id=2))

    def test_disjoint_domains(self):
        """Test polylines over disjoint x-ranges never meet"""
        f = Polyline(((0, 0), (1, 1)), id=1)
        g = Polyline(((2, 0), (3, 1)), id=2)

        assert intersect(f, g) == []

    def test_symmetric(self, zigzag):
        """Test intersection does not depend on argument order"""
        g = Polyline(((-1, 1), (4, 1)), id=5)

        assert intersect(zigzag, g) == intersect(g, zigzag)


class TestValidateKIntersecting:
    """Test cases for validate_k_intersecting"""

    def test_lines_in_general_position(self):
        """Test three lines give three crossings"""
        lines = [Line(0, 0, id=0), Line(1, 0, id=1), Line(-1, 3, id=2)]
        crossings = validate_k_intersecting(lines, 1)

        assert len(crossings) == 3
        assert {c.curves for c in crossings} == {(0, 1), (0, 2), (1, 2)}

    def test_three_crossings_violate_k2(self, zigzag):
        """Test a pair meeting three times violates k = 2 with three witnesses"""
        flat = Polyline(((-1, 1), (4, 1)), id=2)

        with pytest.raises(KViolation) as exc_info:
            validate_k_intersecting([zigzag, flat], 2)

        assert exc_info.value.pair == (1, 2)
        assert len(exc_info.value.witnesses) == 3

    def test_three_crossings_allowed_for_k3(self, zigzag):
        """Test the same pair passes with k = 3"""
        flat = Polyline(((-1, 1), (4, 1)), id=2)

        assert len(validate_k_intersecting([zigzag, flat], 3)) == 3

    def test_witnesses_truncated(self, zigzag):
        """Test only k + 1 witnesses are kept"""
        with pytest.raises(KViolation) as exc_info:
            validate_k_intersecting([zigzag, Line(0, 1, id=2)], 1)

        assert exc_info.value.witnesses == [Point.of(Fraction(1, 2), 1), Point.of(Fraction(3, 2), 1)]

    def test_k_below_one(self):
        """Test k must be positive"""
        with pytest.raises(InputError):
            validate_k_intersecting([Line(0, 0)], 0)

    def test_duplicate_ids(self):
        """Test curve ids must be distinct"""
        with pytest.raises(InputError):
            validate_k_intersecting([Line(0, 0, id=1), Line(1, 0, id=1)], 1)
