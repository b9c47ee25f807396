"""Modified Euler-Maclaurin summation in one and two dimensions with certified remainder bounds."""

from .errors import MemfError
from .families import ExpCos, Gaussian, Polynomial, Product2D, RationalDecay, Ridge2D, SmoothFunction1D, SmoothFunction2D
from .memf1d import CutParams, SummationEstimate, memf_sum_finite, memf_sum_infinite
from .memf2d import CutParams2D, GridRegion, memf_sum_rectangle, memf_sum_region, trace_boundary

__version__ = "0.1.0"

__all__ = [
    "CutParams",
    "CutParams2D",
    "ExpCos",
    "Gaussian",
    "GridRegion",
    "MemfError",
    "Polynomial",
    "Product2D",
    "RationalDecay",
    "Ridge2D",
    "SmoothFunction1D",
    "SmoothFunction2D",
    "SummationEstimate",
    "memf_sum_finite",
    "memf_sum_infinite",
    "memf_sum_rectangle",
    "memf_sum_region",
    "trace_boundary",
]
