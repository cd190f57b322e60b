"""
tolerances.py — Numerical thresholds shared by the core modules
"""

# Idempotency residual ‖p∘p − p‖ (order-unit norm) accepted for a projection.
TOL_IDEM = 1e-8

# Eigenvalues closer than TOL_CLUSTER * max(1, ‖x‖) merge into one idempotent.
TOL_CLUSTER = 1e-9

# Interior test and log domain: eigenvalues must exceed this.
TOL_BOUNDARY = 1e-12

# Ray equality on normalized representatives, relative to max(1, ‖r‖).
TOL_RAY = 1e-9

# |φ(e)| accepted as "φ ∈ e^⊥", relative to max(1, ‖a‖).
TOL_HYPERPLANE = 1e-10

# Quotient classes are equal when the variation seminorm of the difference is below this.
TOL_CLASS = 1e-9

# Positivity of a representer: min eigenvalue ≥ −TOL_POSITIVE * max(1, ‖a‖).
TOL_POSITIVE = 1e-9
