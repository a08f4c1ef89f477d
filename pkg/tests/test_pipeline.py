"""
Tests for the end-to-end incidence experiment.
"""

import math

import pytest
from pydantic import ValidationError

from src.models import ExperimentParams
from src.pipeline import IncidencePipeline, run_pipeline
from src.verifier import verify_division


@pytest.fixture(scope="module")
def params():
    return ExperimentParams(n=64, k=1, s=3, r_override=64, t_override=16, ell_override=3, w_override=1)


@pytest.fixture(scope="module")
def pipeline(params):
    runner = IncidencePipeline(params)
    report = runner.run()
    return runner, report


class TestExperimentParams:
    """Test cases for derived experiment parameters"""

    def test_derived_values(self):
        """Test T, ell and p for n = 4096"""
        params = ExperimentParams(n=4096, k=1, s=3, eps=0.5)

        assert params.T == pytest.approx(16)
        assert params.ell == math.ceil(2 ** 0.5 * 16)
        assert params.p == pytest.approx(2 ** -1.6)
        assert params.p_exponent == pytest.approx(2 / 15)
        assert params.r >= params.r0

    def test_overrides(self, params):
        """Test overrides replace derived values"""
        assert (params.r, params.t, params.ell, params.w) == (64, 16, 3, 1)

    def test_s_must_exceed_k_plus_one(self):
        """Test s <= k+1 is rejected"""
        with pytest.raises(ValidationError):
            ExperimentParams(n=64, k=2, s=3)


class TestPipeline:
    """Test cases for IncidencePipeline"""

    def test_lattice_stage(self, pipeline):
        """Test lattice and truncation counts"""
        runner, report = pipeline

        assert report.lattice_incidences == 220
        assert report.heavy_points == len(runner.truncation.heavy)
        assert report.heavy_incidences + runner.truncation.light_incidences == 220
        assert report.kept_curves + report.dropped_curves == 64

    def test_gadgets_added(self, pipeline):
        """Test every point vertex is ringed"""
        runner, report = pipeline
        arr = runner.arrangement

        assert set(arr.rings) == set(arr.point_vertices)
        assert report.gadget_vertices == sum(2 * arr.passes[p] for p in arr.point_vertices)
        assert arr.graph.euler_ok()

    def test_division_verifies(self, pipeline, params):
        """Test the division of the arrangement passes verification"""
        runner, report = pipeline
        division = runner.division
        result = verify_division(runner.arrangement.graph, runner.arrangement.point_vertices, division, params.r, params.t)

        assert result.passed
        assert report.region_count == len(division.regions)

    def test_blocks_account_for_incidences(self, pipeline):
        """Test blocked and discarded points never exceed the incidences on kept curves"""
        runner, report = pipeline

        assert report.discard_within_bound
        assert report.blocked_incidences + report.discarded <= report.general_position_incidences
        assert report.blocked_incidences % 3 == 0

    def test_hypergraph_counts(self, pipeline):
        """Test copy counts of the densest part"""
        runner, report = pipeline
        if runner.hypergraph is None:
            assert report.densest_part is None
            return

        assert report.bad_copies + report.good_copies == report.total_copies
        assert report.planted_copies <= report.total_copies or report.copies_truncated
        assert report.scan_status == "skipped"

    def test_deterministic(self, params, pipeline):
        """Test identical parameters give an identical report"""
        _, report = pipeline

        assert run_pipeline(params).model_dump() == report.model_dump()

    def test_scan_small_part(self):
        """Test the optional scan reports a status"""
        params = ExperimentParams(n=8, k=1, s=3, r_override=16, t_override=2, ell_override=2, w_override=1)
        report = run_pipeline(params, scan=True)

        assert report.lattice_incidences == 15
        assert report.scan_status in ("skipped", "none", "found", "too large")
