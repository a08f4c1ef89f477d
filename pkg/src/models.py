"""
Data models for divisions, reports and experiments.

Defines Pydantic models for everything that is serialised: configuration
snapshots, verification reports, audit logs and run manifests. Rationals are
carried as Fraction and written as "num/den" strings.
"""

import math
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, computed_field, field_validator

from .config import Config


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator()
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    raise ValueError(f"cannot read {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]


class BalanceParam(str, Enum):
    """Parameter a separator step balances"""
    VERTICES = "vertices"
    BOUNDARY = "boundary"
    POINTS = "points"


class FailureKind(str, Enum):
    """Verification checks"""
    EDGE_COVERAGE = "EdgeCoverage"
    UNKNOWN_EDGE = "UnknownEdge"
    REGION_CONNECTIVITY = "RegionConnectivity"
    BOUNDARY_CHARACTERIZATION = "BoundaryCharacterization"
    REGION_VERTICES = "RegionVertices"
    REGION_BOUNDARY = "RegionBoundary"
    REGION_POINTS = "RegionPoints"
    CYCLE_INVALID = "CycleInvalid"
    CHILD_SPLIT = "ChildSplit"
    CYCLE_PROPERTY = "CycleProperty"
    REGION_COUNT = "RegionCount"
    LEAF_RULE = "LeafRule"


class Provenance(str, Enum):
    """Where an incidence structure came from"""
    GEOMETRIC = "geometric"
    COMBINATORIAL = "combinatorial-after-deletion"


class DivisionConfig(BaseModel):
    """Constants of one division run"""
    c0: Rational = Config.C0
    balance: Rational = Config.BALANCE
    seed: int = Config.SEED
    r0: int = Config.R0
    progress_floor: int = Config.PROGRESS_FLOOR
    region_ceiling: Rational = Config.REGION_CEILING
    c1_ceiling: float = Config.C1_CEILING
    separator_roots: int = Config.SEPARATOR_ROOTS

    @field_validator("balance")
    @classmethod
    def balance_range(cls, v: Fraction) -> Fraction:
        if not Fraction(1, 2) <= v < 1:
            raise ValueError("balance must lie in [1/2, 1)")
        return v

    @field_validator("c0")
    @classmethod
    def c0_positive(cls, v: Fraction) -> Fraction:
        if v <= 0:
            raise ValueError("c0 must be positive")
        return v


class Failure(BaseModel):
    """One failed assertion with its witness"""
    kind: FailureKind
    witness: Any = None
    detail: str = ""

    model_config = ConfigDict(use_enum_values=True)


class RegionStats(BaseModel):
    """Size of one region"""
    region: int
    vertices: int
    boundary: int
    interior_points: int


class CycleStats(BaseModel):
    """Inside-or-on counts of one separator cycle in its triangulated region"""
    node: int
    length: int
    tag: Optional[BalanceParam] = None
    inside_or_on_vertices: int
    inside_or_on_boundary: int
    inside_or_on_points: int
    property_vertices: bool
    property_boundary: bool
    property_points: bool

    model_config = ConfigDict(use_enum_values=True)


class FittedConstants(BaseModel):
    """Measured constants of a division"""
    region_count_constant: Optional[float] = None
    max_vertices_ratio: Optional[float] = None
    max_boundary_ratio: Optional[float] = None
    max_points_ratio: Optional[float] = None
    min_cycle_vertices_ratio: Optional[float] = None


class OvercountStats(BaseModel):
    """L(root, S) for the leaf set and the separator frontier"""
    leaves: int
    leaves_fitted_c2: float
    frontier: int
    frontier_fitted_c2: float
    frontier_size: int


class DivisionReport(BaseModel):
    """Verification result of a division"""
    vertex_count: int
    point_count: int
    r: int
    t: Optional[int] = None
    region_count: int
    boundary_count: int
    boundary_points: int = Field(0, description="|Q'|: P-points that are boundary vertices")
    forced_leaves: int = 0
    detached_vertices: int = 0
    regions: List[RegionStats] = Field(default_factory=list)
    cycles: List[CycleStats] = Field(default_factory=list)
    fitted: FittedConstants = Field(default_factory=FittedConstants)
    overcount: Optional[OvercountStats] = None
    failures: List[Failure] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return not self.failures


class DeletionAudit(BaseModel):
    """Counts of one sample-and-delete trial"""
    trial: int = 0
    seed: int
    n: int
    s: int
    p: float
    total_incidences: int
    selected: int
    bad: int
    deleted: int
    surviving: int
    rounds: int

    @computed_field
    @property
    def ratio(self) -> float:
        """surviving / (p * I); the deletion argument aims for at least 1/2"""
        expected = self.p * self.total_incidences
        return self.surviving / expected if expected else 0.0


class ExperimentParams(BaseModel):
    """
    Parameters of the truncation / gadget / division / hypergraph experiment.

    Derived values are recomputed from (n, k, s, eps) and the constants.
    With point_count and curve_count set, T uses |C|^2/|P| in place of n.
    """
    n: int = Field(..., ge=1)
    k: int = Field(1, ge=1)
    s: int = Field(3, ge=3)
    eps: float = Field(0.5, gt=0, le=1)
    point_count: Optional[int] = None
    curve_count: Optional[int] = None
    c0: Rational = Config.C0
    c1: float = Config.C1_CEILING
    c4: float = Config.C4
    c5: float = Config.C5
    c6: float = Config.C6
    r0: int = Config.R0
    p_mult: float = Field(1.0, ge=0)
    seed: int = Config.SEED
    r_override: Optional[int] = None
    t_override: Optional[int] = None
    ell_override: Optional[int] = None
    w_override: Optional[int] = None

    @field_validator("s")
    @classmethod
    def s_above_k(cls, v: int, info) -> int:
        k = info.data.get("k", 1)
        if v <= k + 1:
            raise ValueError(f"s must exceed k+1 (k={k})")
        return v

    @computed_field
    @property
    def T(self) -> float:
        points = self.point_count or self.n
        curves = self.curve_count or self.n
        return (curves * curves / points) ** (1.0 / (2 * self.k + 1))

    @computed_field
    @property
    def ell(self) -> int:
        if self.ell_override is not None:
            return self.ell_override
        k = self.k
        return max(2, math.ceil(self.c4 * self.eps ** (-k / (k + 1)) * self.T ** k))

    @computed_field
    @property
    def w(self) -> int:
        if self.w_override is not None:
            return self.w_override
        k = self.k
        return max(1, math.floor(self.eps ** ((2 * k + 1) / k) * self.T ** (2 * k + 1) / self.ell))

    @computed_field
    @property
    def r(self) -> int:
        if self.r_override is not None:
            return self.r_override
        k, s = self.k, self.s
        return max(self.r0, math.ceil(self.c5 * k * k * s * s / self.eps ** 2 * self.T ** (2 * k + 2)))

    @computed_field
    @property
    def t(self) -> int:
        if self.t_override is not None:
            return self.t_override
        k, s = self.k, self.s
        return max(1, math.ceil(self.c5 * k * s * s / self.eps ** 2 * self.T))

    @computed_field
    @property
    def p_exponent(self) -> float:
        s = self.s
        return (s - 1) / (3 * (s * s - s - 1))

    @computed_field
    @property
    def p(self) -> float:
        return min(1.0, self.n ** (-self.p_exponent) * self.p_mult)

    @computed_field
    @property
    def gadget_floor(self) -> float:
        """c6 * T^(k+1): boundary gadget vertices expected around each point of Q'"""
        return self.c6 * self.T ** (self.k + 1)


class RunManifest(BaseModel):
    """Provenance embedded in every output file"""
    command: str
    config: Dict[str, Any]
    input_digests: Dict[str, str] = Field(default_factory=dict)
    tool_version: str
    schema_version: int = 1
    timing: Optional[Dict[str, float]] = None


class PipelineReport(BaseModel):
    """Counts from every stage of the truncation / gadget / division / hypergraph experiment"""
    params: ExperimentParams

    # lattice and truncation
    lattice_incidences: int
    lattice_density: float
    heavy_points: int
    heavy_incidences: int
    truncation_bound: float
    truncation_within: bool
    kept_curves: int
    dropped_curves: int
    dropped_points: int
    general_position_incidences: int

    # arrangement and gadget
    arrangement_vertices: int
    arrangement_edges: int
    crossings: int
    gadget_vertices: int

    # division
    region_count: int
    boundary_count: int
    boundary_points: int
    forced_leaves: int
    gadget_floor: float
    gadget_boundary_min: Optional[int] = None
    gadget_below_floor: int = 0

    # blocks and hypergraph
    part_count: int
    densest_part: Optional[int] = None
    densest_size: int = 0
    blocked_incidences: int = 0
    discarded: int = 0
    discard_within_bound: bool = True
    curves_with_s_points: int = 0
    planted_copies: int = 0
    hyperedges: int = 0
    copy_density: Optional[float] = None
    total_copies: int = 0
    bad_copies: int = 0
    bad_ceiling: Optional[float] = None
    good_copies: int = 0
    copies_truncated: bool = False

    # optional exhaustive scan of the densest part
    scan_status: str = "skipped"
    scan_witness: Optional[List[int]] = None
