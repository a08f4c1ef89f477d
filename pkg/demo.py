"""
Demo script showing the r-division toolkit on generated inputs.

This demonstrates the complete workflow without reading or writing any files.
"""

from src.config import Config
from src.deletion import deletion_probability, run_trials
from src.generators import triangulated_grid
from src.incidence import point_graph, st_lattice
from src.models import ExperimentParams
from src.pipeline import run_pipeline
from src.rdivision import INFINITE, classic_r_division, refined_r_division
from src.verifier import verify_division


def demo_divisions():
    """Divide a triangulated grid three ways and verify each result"""
    graph = triangulated_grid(12)
    points = list(range(0, graph.num_vertices, 3))
    cases = [
        ("classic, r=16", lambda: classic_r_division(graph, 16)[0], [], 16, INFINITE),
        ("refined, r=16, t=inf", lambda: refined_r_division(graph, [], 16, INFINITE)[0], [], 16, INFINITE),
        ("refined, r=64, t=8", lambda: refined_r_division(graph, points, 64, 8)[0], points, 64, 8),
    ]

    for name, divide, pts, r, t in cases:
        division = divide()
        report = verify_division(graph, pts, division, r, t)
        mark = "✓" if report.passed else "⚠"
        print(f"{mark} {name}: {report.region_count} region(s), {report.boundary_count} boundary vertices")
        for failure in report.failures[:3]:
            print(f"    - {failure.kind}: {failure.detail}")


def demo_lattice():
    """Lattice incidence counts and point graph degrees"""
    for n in (8, 64, 512):
        lattice = st_lattice(n)
        print(f"✓ n={n}: {lattice.incidences} incidences, I / n^(4/3) = {lattice.density:.3f}")

    pg = point_graph(st_lattice(64))
    print(f"✓ n=64 point graph: max degree {pg.max_degree}, max codegree {pg.max_codegree}")


def demo_lower_bound():
    """Sample-and-delete trials on the n=512 lattice"""
    lattice = st_lattice(512)
    p = deletion_probability(512, 3)
    for audit in run_trials(lattice, 3, p, seed=Config.SEED, trials=3):
        print(f"✓ trial {audit.trial}: {audit.surviving} of {audit.selected} survive (ratio {audit.ratio:.3f})")


def demo_pipeline():
    """End-to-end run on a small lattice"""
    params = ExperimentParams(n=64, k=1, s=3, r_override=64, t_override=16, ell_override=3, w_override=1)
    report = run_pipeline(params)
    print(f"✓ {report.arrangement_vertices} arrangement vertices, {report.region_count} region(s)")
    if report.densest_part is None:
        print("⚠ No part holds a full block")
    else:
        print(f"✓ part {report.densest_part}: {report.good_copies} good, {report.bad_copies} bad copies")


def main():
    print(f"\n{'='*60}")
    print("R-DIVISION TOOLKIT - DEMO")
    print(f"{'='*60}\n")

    sections = [
        ("Divisions of a 12x12 triangulated grid", demo_divisions),
        ("Szemerédi-Trotter lattice", demo_lattice),
        ("Deletion lower bound", demo_lower_bound),
        ("Incidence pipeline", demo_pipeline),
    ]
    for i, (title, run) in enumerate(sections, 1):
        print(f"\n{'─'*60}")
        print(f"Demo {i}: {title}")
        print(f"{'─'*60}")
        run()

    print(f"\n{'='*60}")
    print("Demo complete")
    print(f"{'='*60}\n")


if __name__ == "__main__":
    main()
