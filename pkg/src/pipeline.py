"""
End-to-end incidence experiment.

Runs the lattice through high-degree truncation, a general-position
subfamily, the arrangement graph with nested cycles around every point, a
refined r-division, block partitions along the curves and the block
hypergraph of the densest part.
"""

import logging
from typing import Dict, List, Optional, Tuple

from .arrangement import (
    ArrangementGraph, BlockPartition, Truncation, VertexKind, add_gadgets, block_partition,
    build_arrangement_graph, general_position_subfamily, high_degree_truncation,
)
from .configurations import forbidden_config_scan
from .errors import InstanceTooLarge
from .hypergraph import BlockHypergraph, build_block_hypergraph
from .incidence import IncidenceStructure, Lattice, st_lattice
from .models import DivisionConfig, ExperimentParams, PipelineReport, Provenance
from .rdivision import Division, refined_r_division

logger = logging.getLogger(__name__)


class IncidencePipeline:
    """Runs the experiment stage by stage, keeping every intermediate result"""

    def __init__(self, params: ExperimentParams, cfg: Optional[DivisionConfig] = None):
        """
        Initialize the pipeline.

        Args:
            params: experiment parameters; r, t, ell and w are derived from them
            cfg: division constants (c0 and seed default to the params)
        """
        self.params = params
        self.cfg = cfg or DivisionConfig(c0=params.c0, seed=params.seed, r0=params.r0)
        self.lattice: Optional[Lattice] = None
        self.truncation: Optional[Truncation] = None
        self.arrangement: Optional[ArrangementGraph] = None
        self.division: Optional[Division] = None
        self.partitions: Dict[int, BlockPartition] = {}
        self.hypergraph: Optional[BlockHypergraph] = None

    def build_arrangement(self) -> Dict[str, int]:
        p = self.params
        self.lattice = st_lattice(p.n)
        points, lines = self.lattice.points, self.lattice.lines
        self.truncation = high_degree_truncation(points, lines, p.ell, k=p.k)
        kept, dropped = general_position_subfamily(lines, self.truncation.light, p.k)
        on_kept = [q for q in self.truncation.light if any(c.contains(q) for c in kept)]
        base = build_arrangement_graph(on_kept, kept, p.k, frame=True)
        before = base.graph.num_vertices
        self.arrangement = add_gadgets(base, base.point_vertices, p.w)
        return {
            "kept_curves": len(kept),
            "dropped_curves": len(dropped),
            "dropped_points": len(self.truncation.light) - len(on_kept),
            "general_position_incidences": sum(base.passes[v] for v in base.point_vertices),
            "arrangement_vertices": before,
            "arrangement_edges": base.graph.num_edges,
            "crossings": base.crossing_count,
            "gadget_vertices": self.arrangement.graph.num_vertices - before,
        }

    def divide(self) -> Division:
        arr = self.arrangement
        self.division, _ = refined_r_division(arr.graph, arr.point_vertices, self.params.r, self.params.t, self.cfg)
        return self.division

    def gadget_boundary(self) -> Tuple[Optional[int], int]:
        """Smallest number of boundary ring vertices around a boundary point, and how many fall below the floor"""
        boundary = self.division.boundary
        counts = []
        for q in sorted(self.division.boundary_points()):
            rings = self.arrangement.rings.get(q, ())
            counts.append(sum(1 for ring in rings for v in ring if v in boundary))
        below = sum(1 for c in counts if c < self.params.gadget_floor)
        return (min(counts) if counts else None), below

    def partition_blocks(self) -> Dict[int, Dict[int, List[Tuple[int, ...]]]]:
        """Blocks of every curve, grouped by part and then by curve"""
        arr = self.arrangement
        parts = self.division.parts()
        part_of = {v: i for i, pts in parts.items() for v in pts}
        points = set(arr.point_vertices)
        grouped: Dict[int, Dict[int, List[Tuple[int, ...]]]] = {}
        for curve, walk in sorted(arr.curve_paths.items()):
            result = block_partition(walk, points, self.division.boundary, self.params.s, part_of, curve=curve)
            self.partitions[curve] = result
            for block in result.blocks:
                grouped.setdefault(part_of[block[0]], {}).setdefault(curve, []).append(block)
        return grouped

    def structure(self) -> IncidenceStructure:
        """Incidence structure on the arrangement's point vertices"""
        arr = self.arrangement
        curves = {c: tuple(v for v in walk if arr.kind[v] == VertexKind.POINT) for c, walk in arr.curve_paths.items()}
        labels = {v: arr.position[v] for v in arr.point_vertices}
        return IncidenceStructure(tuple(arr.point_vertices), curves, self.params.k, Provenance.GEOMETRIC, labels)

    def run(self, scan: bool = False) -> PipelineReport:
        """
        Run every stage.

        Args:
            scan: also scan the densest part exhaustively for a forbidden configuration

        Returns:
            PipelineReport with the counts of every stage
        """
        p = self.params
        stats = self.build_arrangement()
        logger.info("arrangement ready: %d vertices after gadgets", self.arrangement.graph.num_vertices)
        self.divide()
        gadget_min, gadget_below = self.gadget_boundary()
        grouped = self.partition_blocks()
        parts = self.division.parts()

        report = PipelineReport(
            params=p,
            lattice_incidences=self.lattice.incidences,
            lattice_density=self.lattice.density,
            heavy_points=len(self.truncation.heavy),
            heavy_incidences=self.truncation.heavy_incidences,
            truncation_bound=self.truncation.bound,
            truncation_within=self.truncation.within_bound,
            region_count=len(self.division.regions),
            boundary_count=len(self.division.boundary),
            boundary_points=len(self.division.boundary_points()),
            forced_leaves=self.division.forced_leaves,
            gadget_floor=p.gadget_floor,
            gadget_boundary_min=gadget_min,
            gadget_below_floor=gadget_below,
            part_count=sum(1 for pts in parts.values() if pts),
            blocked_incidences=p.s * sum(len(r.blocks) for r in self.partitions.values()),
            discarded=sum(r.discarded for r in self.partitions.values()),
            discard_within_bound=all(r.within_bound for r in self.partitions.values()),
            **stats,
        )
        if not grouped:
            logger.info("no curve has %d consecutive points in one part", p.s)
            return report

        densest = max(sorted(grouped), key=lambda i: sum(len(bs) for bs in grouped[i].values()))
        part = parts[densest]
        structure = self.structure().on_points(part)
        self.hypergraph = build_block_hypergraph(grouped[densest], structure, p.k, p.s, part=part)
        size = len(part)
        report.densest_part = densest
        report.densest_size = size
        report.curves_with_s_points = sum(1 for pts in structure.curves.values() if len(pts) >= p.s)
        report.planted_copies = len(self.hypergraph.planted)
        report.hyperedges = self.hypergraph.edge_count
        report.copy_density = self.hypergraph.curve_count / size ** (p.k + 1)
        report.total_copies = self.hypergraph.total_copies
        report.bad_copies = self.hypergraph.bad_copies
        report.bad_ceiling = float(p.s * size ** (p.s - 1))
        report.good_copies = self.hypergraph.good_copies
        report.copies_truncated = self.hypergraph.truncated

        if scan:
            try:
                witness = forbidden_config_scan(structure, p.k, p.s)
            except InstanceTooLarge:
                report.scan_status = "too large"
            else:
                report.scan_status = "none" if witness is None else "found"
                report.scan_witness = list(witness.points) if witness else None
        return report


def run_pipeline(params: ExperimentParams, scan: bool = False, cfg: Optional[DivisionConfig] = None) -> PipelineReport:
    return IncidencePipeline(params, cfg).run(scan=scan)
