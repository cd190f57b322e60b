"""
JordanCone — Euclidean Jordan algebras, their cone geometry, and the
isometries of Hilbert's projective metric and the variation norm.
"""
__version__ = "1.0.0"
