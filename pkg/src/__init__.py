"""
r-division toolkit

Refined r-divisions of embedded planar graphs with a prescribed vertex set,
and the incidence-geometry constructions built on them.
"""

__version__ = "1.0.0"
