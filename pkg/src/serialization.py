"""
JSON documents for graphs, geometry, incidence structures and divisions.

Rationals are written as "num/den" strings. Output is canonical: sorted
keys, two-space indent and a trailing newline, so equal documents are equal
bytes.
"""

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from .errors import InputError
from .geometry import Curve, Line, Point, Polyline
from .incidence import IncidenceStructure
from .models import BalanceParam, DivisionConfig, Provenance, format_rational, parse_rational
from .planar import EmbeddedGraph, Region, SimpleCycle, build_graph, triangulate_faces
from .rdivision import INFINITE, Division, RecursionNode, RecursionTree, TValue, is_infinite


def _default(value: Any):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def canonical_json(document: Any) -> bytes:
    return (json.dumps(document, sort_keys=True, indent=2, default=_default) + "\n").encode("utf-8")


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def file_digest(path: Union[str, Path]) -> str:
    return digest(Path(path).read_bytes())


def load_json(path: Union[str, Path]) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def _pair(value) -> Tuple[Fraction, Fraction]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InputError(f"expected a coordinate pair, got {value!r}")
    return parse_rational(value[0]), parse_rational(value[1])


# Graph JSON

def graph_to_json(graph: EmbeddedGraph, points: Iterable[int] = ()) -> Dict[str, Any]:
    """Graph document with vertices and edges renumbered 0..n-1 in id order"""
    vertex_id = {v: i for i, v in enumerate(graph.vertices)}
    edge_id = {e: i for i, e in enumerate(graph.edges)}
    edges = [[vertex_id[u], vertex_id[v]] for u, v in (graph.endpoints(e) for e in graph.edges)]
    rotations = {str(vertex_id[v]): [edge_id[d >> 1] for d in graph.rotation(v)] for v in graph.vertices}

    outer_face = None
    if graph.outer_dart is not None:
        ends = {i: tuple(pair) for i, pair in enumerate(edges)}
        rotation = {
            vertex_id[v]: [2 * edge_id[d >> 1] + (d & 1) for d in graph.rotation(v)]
            for v in graph.vertices
        }
        compact = EmbeddedGraph(ends, rotation, 2 * edge_id[graph.outer_dart >> 1] + (graph.outer_dart & 1))
        outer_face = compact.outer_face

    document: Dict[str, Any] = {
        "n": graph.num_vertices,
        "edges": edges,
        "rotations": rotations,
        "outer_face": outer_face,
        "P": sorted(vertex_id[v] for v in points),
    }
    if graph.coords:
        document["coords"] = {
            str(vertex_id[v]): [format_rational(Fraction(x)), format_rational(Fraction(y))]
            for v, (x, y) in graph.coords.items()
        }
    return document


def graph_from_json(document: Dict[str, Any]) -> Tuple[EmbeddedGraph, List[int]]:
    try:
        n = int(document["n"])
        edges = [tuple(int(x) for x in pair) for pair in document["edges"]]
        rotations = {int(v): [int(e) for e in order] for v, order in document["rotations"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph document: {exc}") from exc
    points = [int(v) for v in document.get("P", [])]
    for v in points:
        if not 0 <= v < n:
            raise InputError(f"point {v} is not a vertex", witness=v)
    coords = None
    if document.get("coords"):
        coords = {int(v): _pair(xy) for v, xy in document["coords"].items()}
    graph = build_graph(n, edges, rotations, outer_face=document.get("outer_face"), marked=points, coords=coords)
    return graph, points


# Geometry JSON

def _point_json(p: Point) -> List[str]:
    return [format_rational(p.x), format_rational(p.y)]


def geometry_to_json(points: Sequence[Point], curves: Sequence[Curve], k: int) -> Dict[str, Any]:
    out = []
    for c in curves:
        if isinstance(c, Line):
            out.append({"id": c.id, "a": format_rational(c.a), "b": format_rational(c.b)})
        else:
            out.append({"id": c.id, "polyline": [_point_json(v) for v in c.vertices]})
    return {"k": k, "points": [_point_json(p) for p in points], "curves": out}


def geometry_from_json(document: Dict[str, Any]) -> Tuple[List[Point], List[Curve], int]:
    try:
        points = [Point(*_pair(xy)) for xy in document.get("points", [])]
        curves: List[Curve] = []
        for i, spec in enumerate(document["curves"]):
            cid = int(spec.get("id", i))
            if "polyline" in spec:
                curves.append(Polyline(tuple(Point(*_pair(xy)) for xy in spec["polyline"]), id=cid))
            else:
                curves.append(Line(parse_rational(spec["a"]), parse_rational(spec["b"]), id=cid))
        k = int(document.get("k", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed geometry document: {exc}") from exc
    return points, curves, k


# Incidence structure JSON

def structure_to_json(structure: IncidenceStructure) -> Dict[str, Any]:
    return {
        "k": structure.k,
        "provenance": structure.provenance.value,
        "points": list(structure.point_ids),
        "curves": {str(c): list(pts) for c, pts in sorted(structure.curves.items())},
    }


def structure_from_json(document: Dict[str, Any]) -> IncidenceStructure:
    try:
        points = tuple(int(p) for p in document["points"])
        curves = {int(c): tuple(int(p) for p in pts) for c, pts in document["curves"].items()}
        provenance = Provenance(document.get("provenance", Provenance.GEOMETRIC.value))
        k = int(document.get("k", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed structure document: {exc}") from exc
    known = set(points)
    for c, pts in curves.items():
        missing = [p for p in pts if p not in known]
        if missing:
            raise InputError(f"curve {c} lists unknown points {missing[:5]}", witness=c)
    return IncidenceStructure(points, curves, k, provenance)


# Division JSON

def _t_json(t: TValue):
    return "inf" if is_infinite(t) else int(t)


def _t_value(value) -> TValue:
    return INFINITE if value in (None, "inf") else int(value)


def division_to_json(division: Division) -> Dict[str, Any]:
    nodes = []
    for node in division.tree.nodes:
        nodes.append({
            "id": node.id,
            "parent": node.parent,
            "depth": node.depth,
            "n": node.n,
            "b": node.b,
            "p": node.p,
            "outer_dart": node.outer_dart,
            "children": list(node.children),
            "cycle": None if node.cycle is None else {
                "vertices": list(node.cycle.vertices),
                "darts": list(node.cycle.darts),
            },
            "tag": None if node.tag is None else node.tag.value,
            "reasoning": node.reasoning,
            "forced": node.forced,
            "attached": sorted(node.attached),
            "edges": None if node.edges is None else sorted(node.edges),
        })
    return {
        "r": division.r,
        "t": _t_json(division.t),
        "refined": division.refined,
        "config": division.config.model_dump(mode="json"),
        "points": sorted(division.points),
        "regions": [sorted(region.edges) for region in division.regions],
        "region_nodes": list(division.region_nodes),
        "boundary": sorted(division.boundary),
        "separators": [x for x, _ in division.separators],
        "host_diagonals": sorted(division.host_diagonals),
        "tree": nodes,
    }


def division_from_json(document: Dict[str, Any], graph: EmbeddedGraph) -> Division:
    """Rebuild a division on the graph it was computed for"""
    host, diagonals = triangulate_faces(graph)
    try:
        nodes = []
        for item in document["tree"]:
            cycle = item.get("cycle")
            nodes.append(RecursionNode(
                id=int(item["id"]),
                parent=item["parent"],
                depth=int(item["depth"]),
                n=int(item["n"]),
                b=int(item["b"]),
                p=int(item["p"]),
                outer_dart=item.get("outer_dart"),
                children=tuple(item.get("children", ())),
                cycle=None if cycle is None else SimpleCycle(tuple(cycle["vertices"]), tuple(cycle["darts"])),
                tag=None if item.get("tag") is None else BalanceParam(item["tag"]),
                reasoning=item.get("reasoning", ""),
                forced=bool(item.get("forced", False)),
                attached=frozenset(item.get("attached", ())),
                edges=None if item.get("edges") is None else frozenset(item["edges"]),
            ))
        regions = []
        for edges in document["regions"]:
            vertices = set()
            for e in edges:
                if host.has_edge(e):
                    vertices.update(host.endpoints(e))
            regions.append(Region(edges=frozenset(edges), vertices=frozenset(vertices)))
        tree = RecursionTree(nodes)
        division = Division(
            regions=regions,
            region_nodes=[int(x) for x in document["region_nodes"]],
            boundary=frozenset(document["boundary"]),
            separators=[(x, tree[x].cycle) for x in document.get("separators", [])],
            tree=tree,
            host=host,
            host_diagonals=frozenset(document.get("host_diagonals", diagonals)),
            points=frozenset(document.get("points", ())),
            r=int(document["r"]),
            t=_t_value(document.get("t")),
            refined=bool(document.get("refined", True)),
            config=DivisionConfig(**document.get("config", {})),
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"malformed division document: {exc}") from exc
    return division


def read_points(spec: Optional[str], graph: EmbeddedGraph, default: Sequence[int] = ()) -> List[int]:
    """--p value: 'all', 'none', a file of whitespace-separated ids, or the graph file's P"""
    if spec is None:
        return list(default)
    if spec == "all":
        return list(graph.vertices)
    if spec == "none":
        return []
    try:
        text = Path(spec).read_text()
    except OSError as exc:
        raise InputError(f"{spec}: {exc.strerror}") from exc
    points = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        for token in line.split():
            try:
                points.append(int(token))
            except ValueError:
                raise InputError(f"{spec}: line {line_no}: {token!r} is not a vertex id") from None
    return points
