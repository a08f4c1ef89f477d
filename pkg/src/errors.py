"""
Error hierarchy for the r-division toolkit.

Every failure a library operation can signal is a subclass of
RDivisionError. The CLI maps InputError and the validation errors to exit
code 1; failed verification is reported separately with exit code 2.
"""

from typing import Any, Optional


class RDivisionError(Exception):
    """Base class for all toolkit errors"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class InputError(RDivisionError):
    """Malformed input file, flag or argument"""


# Embedding errors

class SelfLoop(RDivisionError):
    """An edge joins a vertex to itself"""


class DanglingEdge(RDivisionError):
    """An edge endpoint is not a vertex of the graph"""


class RotationMismatch(RDivisionError):
    """A rotation is not a permutation of the incident edges"""


class NonPlanarEmbedding(RDivisionError):
    """Face walks violate Euler's formula"""


class NonSimpleCycle(RDivisionError):
    """A cycle repeats a vertex or uses non-adjacent consecutive vertices"""


# Separator errors

class NotTriangulated(RDivisionError):
    """A face of size greater than 3 was found"""


class ZeroTotalWeight(RDivisionError):
    """All vertex weights are zero"""


class TooSmall(RDivisionError):
    """Fewer than three vertices"""


class Disconnected(RDivisionError):
    """The graph has more than one connected component"""


class SeparatorFailure(RDivisionError):
    """No balanced fundamental cycle exists for any tried root"""


# Division errors

class RBelowMinimum(RDivisionError):
    """Requested r is below the configured minimum r0"""


class ProgressFailure(RDivisionError):
    """A separator step did not shrink either child region"""


class NotAntichain(RDivisionError):
    """Node set contains an ancestor-descendant pair or leaves the subtree"""


# Geometry and arrangement errors

class KViolation(RDivisionError):
    """Two curves meet in more than k points"""

    def __init__(self, message: str, pair: tuple, witnesses: list):
        super().__init__(message, witness={"pair": pair, "points": witnesses})
        self.pair = pair
        self.witnesses = witnesses


class TangencyUnsupported(RDivisionError):
    """Curves touch or overlap instead of crossing transversally"""


class TripleCrossing(RDivisionError):
    """Three or more curves share a point outside the marked point set"""


class IsolatedPoint(RDivisionError):
    """A marked point lies on no curve"""


class DegreeMismatch(RDivisionError):
    """Vertex degree differs from twice its number of curve passages"""


class UnorderedInput(RDivisionError):
    """Points are not listed in strictly increasing order along the curve"""


class BoundViolation(RDivisionError):
    """A checked inequality failed"""


# Construction errors

class NotACube(RDivisionError):
    """Lattice size is not a perfect cube"""


class InstanceTooLarge(RDivisionError):
    """Exhaustive scan requested above the configured cap"""


class DisjointnessViolation(RDivisionError):
    """Two curves planted the same hyperedge"""
