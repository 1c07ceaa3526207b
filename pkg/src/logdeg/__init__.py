"""Exact intersection-theory engine for the degree of the logarithmic
component L(1,1,1) of degree-1 foliations on P^n."""

from .degree import DegreeResult, degree_L111, table
from .ring import GradedClass, RingSpec, make_ring

__version__ = "0.1.0"

__all__ = ["DegreeResult", "GradedClass", "RingSpec", "degree_L111", "make_ring", "table", "__version__"]
