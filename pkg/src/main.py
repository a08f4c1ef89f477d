"""
Command-line interface for the r-division toolkit.

Runs divisions, arrangements, lattice statistics, the deletion lower bound,
forbidden-configuration scans and the end-to-end incidence experiment, and
re-verifies saved divisions. Every output file embeds its run manifest.
"""

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .arrangement import add_gadgets, build_arrangement_graph
from .config import Config
from .configurations import forbidden_config_scan
from .deletion import sample_and_delete, trial_seed
from .errors import ProgressFailure, RDivisionError, SeparatorFailure
from .incidence import point_graph, st_lattice
from .models import DeletionAudit, DivisionConfig, DivisionReport, ExperimentParams, RunManifest
from .pipeline import IncidencePipeline
from .rdivision import INFINITE, TValue, classic_r_division, is_infinite, refined_r_division
from .serialization import (
    canonical_json, division_from_json, division_to_json, file_digest, geometry_from_json,
    graph_from_json, graph_to_json, load_json, read_points, structure_from_json, structure_to_json,
)
from .verifier import verify_division

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

REGION_COLUMNS = ["region", "vertices", "boundary", "interior_points"]
TRIAL_COLUMNS = [
    "trial", "seed", "n", "s", "p", "total_incidences", "selected",
    "bad", "deleted", "surviving", "rounds", "ratio",
]

RDIV_EPILOG = """CSV columns (--format csv), after a '# schema_version=1' line and a '# manifest=' line:
  region           index of the region in the division
  vertices         vertices of the region
  boundary         boundary vertices of the region
  interior_points  P-points of the region that are not boundary vertices"""

LOWER_BOUND_EPILOG = """CSV columns (--format csv), after a '# schema_version=1' line and a '# manifest=' line:
  trial             trial index
  seed              per-trial seed, SeedSequence([seed, trial]) state word
  n                 lattice points
  s                 configuration size
  p                 selection probability
  total_incidences  incidences of the lattice
  selected          incidences kept by sampling
  bad               forbidden configurations after sampling
  deleted           incidences deleted to destroy them
  surviving         incidences left
  rounds            deletion rounds until no configuration remained
  ratio             surviving / (p * total_incidences)"""


def _t_arg(value: str) -> TValue:
    if value.lower() in ("inf", "infinity", "none"):
        return INFINITE
    t = int(value)
    if t < 1:
        raise argparse.ArgumentTypeError("t must be a positive integer or 'inf'")
    return t


@lru_cache(maxsize=4)
def _lattice(n: int):
    return st_lattice(n)


def _run_trial(n: int, s: int, p: float, seed: int, trial: int) -> DeletionAudit:
    return sample_and_delete(_lattice(n), s, p, trial_seed(seed, trial), trial=trial)[1]


class ExperimentRunner:
    """Runs one CLI command and writes its artifacts"""

    def __init__(self, output_dir: str, timing: bool = False):
        """
        Initialize the runner.

        Args:
            output_dir: directory for files written without an explicit path
            timing: record wall-clock timings in the manifest (outputs then differ run to run)
        """
        self.output_dir = Path(output_dir)
        self.timing = timing
        self.timings: Dict[str, float] = {}
        self._started = time.perf_counter()

    # Artifacts

    def manifest(self, command: str, args: argparse.Namespace, inputs: Iterable[str] = (), **extra) -> RunManifest:
        options = {
            k: ("inf" if isinstance(v, float) and is_infinite(v) else v)
            for k, v in sorted(vars(args).items())
            if k not in ("func", "command") and v is not None
        }
        options = json.loads(json.dumps(options, default=str))
        options.update(extra)
        return RunManifest(
            command=command,
            config=options,
            input_digests={Path(p).name: file_digest(p) for p in inputs},
            tool_version=__version__,
            schema_version=SCHEMA_VERSION,
            timing=self.timings or None if self.timing else None,
        )

    def step(self, name: str):
        if self.timing:
            now = time.perf_counter()
            self.timings[name] = round(now - self._started, 6)
            self._started = now

    def path(self, explicit: Optional[str], default_name: str) -> Path:
        if explicit:
            path = Path(explicit)
        else:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            path = self.output_dir / default_name
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def save_json(self, document: Dict[str, Any], path: Path):
        path.write_bytes(canonical_json(document))

    def save_csv(self, columns: Sequence[str], rows: Iterable[Dict[str, Any]], manifest: RunManifest, path: Path):
        compact = json.dumps(manifest.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        with open(path, "w", newline="") as f:
            f.write(f"# schema_version={SCHEMA_VERSION}\n")
            f.write(f"# manifest={compact}\n")
            writer = csv.DictWriter(f, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row)

    # Commands

    def rdiv(self, args: argparse.Namespace) -> int:
        print("Step 1: Loading graph...")
        graph, file_points = graph_from_json(load_json(args.graph))
        points = read_points(args.p, graph, default=file_points)
        print(f"✓ {graph.num_vertices} vertices, {graph.num_edges} edges, |P| = {len(points)}")

        cfg = DivisionConfig(
            c0=args.c0 if args.c0 is not None else Config.C0,
            balance=args.balance if args.balance is not None else Config.BALANCE,
            seed=args.seed,
        )
        kind = "classic" if args.classic else "refined"
        print(f"\nStep 2: Computing {kind} r-division (r={args.r}, t={'inf' if is_infinite(args.t) else args.t})...")
        if args.classic:
            division, _ = classic_r_division(graph, args.r, cfg)
        else:
            division, _ = refined_r_division(graph, points, args.r, args.t, cfg)
        self.step("divide")
        print(f"✓ {len(division.regions)} region(s), {len(division.boundary)} boundary vertices")
        if division.forced_leaves:
            print(f"⚠ {division.forced_leaves} region(s) kept as forced leaves")

        print("\nStep 3: Verifying division...")
        report = verify_division(graph, sorted(division.points), division, args.r, division.t, cfg)
        self.step("verify")
        self._print_check(report)

        manifest = self.manifest("rdiv", args, [args.graph], division=cfg.model_dump(mode="json"))
        division_path = self.path(args.division_out, "division.json")
        self.save_json({"manifest": manifest.model_dump(mode="json"), **division_to_json(division)}, division_path)

        report_path = self.path(args.output, f"rdiv_report.{args.format}")
        if args.format == "csv":
            self.save_csv(REGION_COLUMNS, (r.model_dump() for r in report.regions), manifest, report_path)
        else:
            document = {"manifest": manifest.model_dump(mode="json"), "report": report.model_dump(mode="json")}
            if args.emit_separators:
                document["separators"] = [
                    {
                        "node": x,
                        "tag": division.tree[x].tag.value if division.tree[x].tag else None,
                        "vertices": list(cycle.vertices),
                        "darts": list(cycle.darts),
                    }
                    for x, cycle in division.separators
                ]
            self.save_json(document, report_path)
        print(f"\n✓ Division saved to: {division_path}")
        print(f"✓ Report saved to: {report_path}")
        self.print_summary("R-DIVISION SUMMARY", report)
        return 0 if report.passed else 2

    def arrange(self, args: argparse.Namespace) -> int:
        print("Step 1: Loading geometry...")
        points, curves, k = geometry_from_json(load_json(args.geometry))
        if args.k is not None:
            k = args.k
        print(f"✓ {len(points)} point(s), {len(curves)} curve(s), k = {k}")

        print("\nStep 2: Building arrangement graph...")
        arrangement = build_arrangement_graph(points, curves, k, frame=not args.no_frame)
        print(f"✓ {arrangement.graph.num_vertices} vertices, {arrangement.crossing_count} crossing(s)")
        if args.gadget:
            before = arrangement.graph.num_vertices
            arrangement = add_gadgets(arrangement, arrangement.point_vertices, args.gadget)
            print(f"✓ Nested cycles added: {arrangement.graph.num_vertices - before} vertices")
        self.step("arrange")

        manifest = self.manifest("arrange", args, [args.geometry])
        document = graph_to_json(arrangement.graph, arrangement.point_vertices)
        document["manifest"] = manifest.model_dump(mode="json")
        path = self.path(args.output, "arrangement.json")
        self.save_json(document, path)
        print(f"\n✓ Graph saved to: {path}")
        return 0

    def lattice(self, args: argparse.Namespace) -> int:
        lattice = _lattice(args.n)
        if args.count:
            print(lattice.incidences)
            return 0

        print(f"Step 1: Building lattice for n = {args.n}...")
        print(f"✓ side {lattice.side}, {lattice.incidences} incidences (closed form {lattice.closed_form})")
        print(f"✓ I / n^(4/3) = {lattice.density:.4f}")
        document: Dict[str, Any] = {
            "n": lattice.n,
            "side": lattice.side,
            "incidences": lattice.incidences,
            "closed_form": lattice.closed_form,
            "density": lattice.density,
        }
        if args.point_graph:
            print("\nStep 2: Point graph degrees...")
            pg = point_graph(lattice)
            document.update({
                "max_degree": pg.max_degree,
                "degree_within": pg.degree_within,
                "max_codegree": pg.max_codegree,
                "codegree_bound": pg.codegree_bound,
                "codegree_within": pg.codegree_within,
            })
            mark = "✓" if pg.degree_within and pg.codegree_within else "⚠"
            print(f"{mark} max degree {pg.max_degree}, max codegree {pg.max_codegree} (bound {pg.codegree_bound:.1f})")
        if args.emit_structure:
            document["structure"] = structure_to_json(lattice.structure)
        self.step("lattice")

        document["manifest"] = self.manifest("lattice", args).model_dump(mode="json")
        path = self.path(args.output, "lattice.json")
        self.save_json(document, path)
        print(f"\n✓ Lattice saved to: {path}")
        return 0

    def lower_bound(self, args: argparse.Namespace) -> int:
        params = ExperimentParams(n=args.n, s=args.s, p_mult=args.p_mult, seed=args.seed)
        print(f"Step 1: Sampling with p = {params.p:.4f} over {args.seeds} trial(s)...")
        trials = range(args.seeds)
        jobs = ([args.n] * args.seeds, [args.s] * args.seeds, [params.p] * args.seeds, [args.seed] * args.seeds, trials)
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                audits = list(pool.map(_run_trial, *jobs))
        else:
            audits = list(map(_run_trial, *jobs))
        self.step("trials")
        for audit in audits:
            mark = "✓" if audit.ratio >= 0.5 else "⚠"
            print(f"{mark} trial {audit.trial}: {audit.surviving} surviving of {audit.selected} selected (ratio {audit.ratio:.3f})")

        manifest = self.manifest("lower-bound", args, params=params.model_dump(mode="json"))
        path = self.path(args.output, f"lower_bound.{args.format}")
        if args.format == "csv":
            self.save_csv(TRIAL_COLUMNS, (a.model_dump() for a in audits), manifest, path)
        else:
            self.save_json({
                "manifest": manifest.model_dump(mode="json"),
                "params": params.model_dump(mode="json"),
                "trials": [a.model_dump(mode="json") for a in audits],
            }, path)
        print(f"\n✓ Trials saved to: {path}")
        return 0

    def forbid_scan(self, args: argparse.Namespace) -> int:
        inputs: List[str] = []
        if args.structure:
            structure = structure_from_json(load_json(args.structure))
            inputs.append(args.structure)
        else:
            structure = _lattice(args.n).structure
        k = args.k if args.k is not None else structure.k
        print(f"Step 1: Scanning {len(structure.point_ids)} point(s) for a configuration (k={k}, s={args.s})...")
        witness = forbidden_config_scan(structure, k, args.s, cap=args.cap, force=args.force)
        self.step("scan")
        document: Dict[str, Any] = {"status": "none", "witness": None}
        if witness is None:
            print("✓ No forbidden configuration")
        else:
            print(f"⚠ Forbidden configuration at points {list(witness.points)}")
            document["status"] = "found"
            document["witness"] = {
                "points": list(witness.points),
                "assignment": [{"points": list(tup), "curve": c} for tup, c in sorted(witness.assignment.items())],
            }
        document["manifest"] = self.manifest("forbid-scan", args, inputs).model_dump(mode="json")
        path = self.path(args.output, "forbid_scan.json")
        self.save_json(document, path)
        print(f"\n✓ Result saved to: {path}")
        return 0

    def pipeline(self, args: argparse.Namespace) -> int:
        params = ExperimentParams(
            n=args.n, k=args.k, s=args.s, eps=args.eps, seed=args.seed,
            r_override=args.r, t_override=args.t, ell_override=args.ell, w_override=args.w,
        )
        pipeline = IncidencePipeline(params)
        print(f"Step 1: Arrangement of the truncated lattice (ell={params.ell}, w={params.w})...")
        report = pipeline.run(scan=args.scan)
        self.step("pipeline")
        print(f"✓ {report.arrangement_vertices} arrangement vertices, {report.gadget_vertices} gadget vertices")
        print(f"\nStep 2: Division (r={params.r}, t={params.t})...")
        print(f"✓ {report.region_count} region(s), {report.boundary_points} boundary point(s)")
        if report.gadget_below_floor:
            print(f"⚠ {report.gadget_below_floor} boundary point(s) below the gadget floor {report.gadget_floor:.2f}")
        print("\nStep 3: Block hypergraph of the densest part...")
        if report.densest_part is None:
            print(f"⚠ No curve has {params.s} consecutive points in one part")
        else:
            print(f"✓ part {report.densest_part}: N = {report.densest_size}, {report.planted_copies} planted copies")
            print(f"✓ {report.good_copies} good and {report.bad_copies} bad copies")
        if args.scan:
            print(f"✓ Scan: {report.scan_status}")

        manifest = self.manifest("pipeline", args, params=params.model_dump(mode="json"))
        path = self.path(args.output, "pipeline.json")
        self.save_json({"manifest": manifest.model_dump(mode="json"), "report": report.model_dump(mode="json")}, path)
        print(f"\n✓ Report saved to: {path}")
        return 0

    def verify(self, args: argparse.Namespace) -> int:
        print("Step 1: Loading graph and division...")
        graph, file_points = graph_from_json(load_json(args.graph))
        division = division_from_json(load_json(args.division), graph)
        points = read_points(args.p, graph, default=sorted(division.points) or file_points)
        r = args.r if args.r is not None else division.r
        t = args.t if args.t is not None else division.t
        print(f"✓ {len(division.regions)} region(s) on {graph.num_vertices} vertices")

        print("\nStep 2: Verifying division...")
        report = verify_division(graph, points, division, r, t)
        self.step("verify")
        self._print_check(report)

        manifest = self.manifest("verify", args, [args.graph, args.division])
        path = self.path(args.output, "verify_report.json")
        self.save_json({"manifest": manifest.model_dump(mode="json"), "report": report.model_dump(mode="json")}, path)
        print(f"\n✓ Report saved to: {path}")
        self.print_summary("VERIFICATION SUMMARY", report)
        return 0 if report.passed else 2

    # Output

    def _print_check(self, report: DivisionReport):
        if report.passed:
            print("✓ All checks passed")
            return
        print(f"⚠ {len(report.failures)} check(s) failed:")
        for failure in report.failures[:20]:
            print(f"  - {failure.kind}: {failure.detail} (witness: {failure.witness})")
        if len(report.failures) > 20:
            print(f"  ... {len(report.failures) - 20} more")

    def print_summary(self, title: str, report: DivisionReport):
        """
        Print a formatted summary of a division report.

        Args:
            title: heading line
            report: verification report
        """
        print(f"\n{'='*60}")
        print(title)
        print(f"{'='*60}")
        print(f"Vertices: {report.vertex_count}  Points: {report.point_count}")
        print(f"r = {report.r}  t = {report.t if report.t is not None else 'inf'}")
        print(f"Regions: {report.region_count}  Boundary: {report.boundary_count}  Boundary points: {report.boundary_points}")
        if report.fitted.region_count_constant is not None:
            print(f"Fitted region constant: {report.fitted.region_count_constant:.3f}")
        print(f"\nResult: {'PASSED' if report.passed else 'FAILED'}")
        print(f"\n{'='*60}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="r-division toolkit - divisions of embedded planar graphs and incidence constructions"
    )
    parser.add_argument(
        "--output-dir",
        default=Config.OUTPUT_DIR,
        help=f"Directory for output files (default: RDIV_OUTPUT_DIR or {Config.OUTPUT_DIR})",
    )
    parser.add_argument("--timing", action="store_true", help="Record timings in the manifest")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rdiv", help="Compute and verify an r-division",
                       epilog=RDIV_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--graph", required=True, help="Graph JSON file")
    p.add_argument("--p", help="Prescribed vertices: all, none, or a file of vertex ids (default: the graph's P)")
    p.add_argument("--r", type=int, required=True, help="Region size parameter")
    p.add_argument("--t", type=_t_arg, default=INFINITE, help="Points per region, or 'inf' (default: inf)")
    p.add_argument("--c0", help="Leaf threshold constant (rational)")
    p.add_argument("--balance", help="Separator balance (rational in [1/2, 1))")
    p.add_argument("--seed", type=int, default=Config.SEED, help="Seed")
    p.add_argument("--classic", action="store_true", help="Two-parameter division, ignores P")
    p.add_argument("--format", choices=["json", "csv"], default="json", help="Report format")
    p.add_argument("--emit-separators", action="store_true", help="Include separator cycles in the report")
    p.add_argument("--output", help="Report path")
    p.add_argument("--division-out", help="Division JSON path")
    p.set_defaults(func=ExperimentRunner.rdiv)

    p = sub.add_parser("arrange", help="Build the arrangement graph of points and curves")
    p.add_argument("--geometry", required=True, help="Geometry JSON file")
    p.add_argument("--k", type=int, help="Intersection bound (default: the file's k)")
    p.add_argument("--no-frame", action="store_true", help="Do not join curve ends by a bounding frame")
    p.add_argument("--gadget", type=int, default=0, help="Nested cycles around every point")
    p.add_argument("--output", help="Graph JSON path")
    p.set_defaults(func=ExperimentRunner.arrange)

    p = sub.add_parser("lattice", help="Lattice incidence statistics")
    p.add_argument("--n", type=int, required=True, help="Number of points, a perfect cube")
    p.add_argument("--count", action="store_true", help="Only print the incidence count")
    p.add_argument("--point-graph", action="store_true", help="Also check point graph degrees")
    p.add_argument("--emit-structure", action="store_true", help="Include the incidence structure")
    p.add_argument("--output", help="Output path")
    p.set_defaults(func=ExperimentRunner.lattice)

    p = sub.add_parser("lower-bound", help="Sample-and-delete trials on the lattice",
                       epilog=LOWER_BOUND_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, required=True, help="Number of points, a perfect cube")
    p.add_argument("--s", type=int, required=True, help="Configuration size, at least 3")
    p.add_argument("--p-mult", type=float, default=1.0, help="Multiplier of the selection probability")
    p.add_argument("--seeds", type=int, default=1, help="Number of trials")
    p.add_argument("--seed", type=int, default=Config.SEED, help="Base seed")
    p.add_argument("--workers", type=int, default=1, help="Worker processes")
    p.add_argument("--format", choices=["json", "csv"], default="csv", help="Output format")
    p.add_argument("--output", help="Output path")
    p.set_defaults(func=ExperimentRunner.lower_bound)

    p = sub.add_parser("forbid-scan", help="Exhaustive forbidden-configuration scan")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--structure", help="Incidence structure JSON file")
    source.add_argument("--n", type=int, help="Scan the lattice of n points")
    p.add_argument("--k", type=int, help="Intersection bound (default: the structure's k)")
    p.add_argument("--s", type=int, required=True, help="Configuration size")
    p.add_argument("--cap", type=int, default=Config.FORBID_CAP, help="Largest point count scanned without --force")
    p.add_argument("--force", action="store_true", help="Scan above the cap")
    p.add_argument("--output", help="Output path")
    p.set_defaults(func=ExperimentRunner.forbid_scan)

    p = sub.add_parser("pipeline", help="Truncation, gadget, division and block hypergraph experiment")
    p.add_argument("--n", type=int, required=True, help="Lattice size, a perfect cube")
    p.add_argument("--k", type=int, default=1, help="Intersection bound")
    p.add_argument("--s", type=int, default=3, help="Configuration size")
    p.add_argument("--eps", type=float, default=0.5, help="Density parameter in (0, 1]")
    p.add_argument("--seed", type=int, default=Config.SEED, help="Seed")
    p.add_argument("--r", type=int, help="Override r")
    p.add_argument("--t", type=int, help="Override t")
    p.add_argument("--ell", type=int, help="Override the truncation degree")
    p.add_argument("--w", type=int, help="Override the number of nested cycles")
    p.add_argument("--scan", action="store_true", help="Scan the densest part for a configuration")
    p.add_argument("--output", help="Output path")
    p.set_defaults(func=ExperimentRunner.pipeline)

    p = sub.add_parser("verify", help="Re-check a saved division")
    p.add_argument("--graph", required=True, help="Graph JSON file")
    p.add_argument("--division", required=True, help="Division JSON file")
    p.add_argument("--p", help="Prescribed vertices: all, none, or a file (default: the division's P)")
    p.add_argument("--r", type=int, help="r (default: the division's)")
    p.add_argument("--t", type=_t_arg, help="t (default: the division's)")
    p.add_argument("--output", help="Report path")
    p.set_defaults(func=ExperimentRunner.verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for CLI"""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=Config.LOG_LEVEL)
    Config.validate()

    runner = ExperimentRunner(args.output_dir, timing=args.timing)
    try:
        return args.func(runner, args)
    except RDivisionError as e:
        witness = f" (witness: {e.witness})" if e.witness is not None else ""
        print(f"Error: {type(e).__name__}: {e}{witness}")
        # the division itself broke down on valid input
        if isinstance(e, (ProgressFailure, SeparatorFailure)):
            return 2
        return 1
    except ValidationError as e:
        print(f"Error: invalid parameters: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
