"""Exact computations for linear systems of plane curves, blow-up lattices and
double/bidouble cover invariants of surfaces."""

__version__ = "0.1.0"
