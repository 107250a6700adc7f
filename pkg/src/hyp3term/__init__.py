"""Exact three-term relation coefficients for the Gauss hypergeometric
function, their two 96-element symmetry groups, and high-precision checks."""

__version__ = "0.1.0"
