"""
cone.py — Cone interior, rays, Hilbert's projective metric and the inversion map for JordanCone
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from jordan_cone.core.algebra import (
    AlgebraDescriptor,
    Element,
    Variant,
    jordan_frame,
    quadratic_rep,
    require_same_algebra,
    trace,
    unit,
)
from jordan_cone.core.errors import BoundaryError, InvalidDescriptor, NonPositive
from jordan_cone.core.sampling import Rng, sample_interior
from jordan_cone.core.spectral import (
    ElementClass,
    class_of,
    exp_el,
    log_el,
    max_eigenvalue,
    min_eigenvalue,
    order_unit_norm,
    power,
)
from jordan_cone.core.tolerances import TOL_BOUNDARY, TOL_RAY

log = logging.getLogger(__name__)

# Relative least-squares residual below which a vector counts as lying in a span.
SPAN_TOL = 1e-8


@dataclass(frozen=True)
class Ray:
    """A ray of the cone interior, normalized so that ⟨x, e⟩ = ⟨e, e⟩."""
    representative: Element

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.representative.algebra

    def to_dict(self) -> dict:
        return {"ray": self.representative.to_dict()}


# ── Interior and gauges ───────────────────────────────────────────────────────

def in_cone_interior(x: Element) -> bool:
    return min_eigenvalue(x) > TOL_BOUNDARY


def _require_interior(x: Element, name: str) -> None:
    if not in_cone_interior(x):
        raise BoundaryError(f"{name} is not in the cone interior (min eigenvalue {min_eigenvalue(x):.3e})")


def upper_gauge(x: Element, y: Element) -> float:
    """M(x/y) = inf{β > 0 : x ≤ βy} = max σ(U_{y^{-1/2}} x)."""
    require_same_algebra(x, y)
    _require_interior(y, "y")
    return max_eigenvalue(quadratic_rep(power(y, -0.5), x))


def hilbert_distance(x: Element, y: Element) -> float:
    """d_H(x, y) = log M(x/y) + log M(y/x)."""
    require_same_algebra(x, y)
    _require_interior(x, "x")
    _require_interior(y, "y")
    distance = math.log(upper_gauge(x, y)) + math.log(upper_gauge(y, x))
    return max(0.0, distance)


# ── Rays ──────────────────────────────────────────────────────────────────────

def ray_of(x: Element) -> Ray:
    tr = trace(x)
    if tr <= 0:
        raise NonPositive(f"⟨x, e⟩ = {tr:.3e} is not positive")
    _require_interior(x, "x")
    return Ray(x * (x.algebra.rank / tr))


def ray_equal(r1: Ray, r2: Ray) -> bool:
    gap = order_unit_norm(r1.representative - r2.representative)
    return gap <= TOL_RAY * max(1.0, order_unit_norm(r1.representative))


def ray_distance(r1: Ray, r2: Ray) -> float:
    return hilbert_distance(r1.representative, r2.representative)


def log_ray(r: Ray) -> ElementClass:
    """x̄ ↦ [log x]."""
    return class_of(log_el(r.representative))


def exp_class(q: ElementClass) -> Ray:
    """[x] ↦ exp(x)‾."""
    return ray_of(exp_el(q.representative))


def inversion(r: Ray) -> Ray:
    """ι: x̄ ↦ x̄^{-1}."""
    return ray_of(power(r.representative, -1))


# ── Is ι linear up to scale? ──────────────────────────────────────────────────

def _span_residual(target: np.ndarray, first: np.ndarray, second: np.ndarray) -> tuple[float, np.ndarray]:
    """Relative residual of target against span{first, second}, and the fitted coefficients."""
    basis = np.column_stack((first, second))
    coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
    residual = np.linalg.norm(basis @ coeffs - target) / max(np.linalg.norm(target), 1e-300)
    return float(residual), coeffs


def _inverse_in_cone_span(x: Element, y: Element) -> bool:
    """Does (x+y)^{-1} lie in the positive span of x^{-1} and y^{-1}?"""
    target = power(x + y, -1).coords
    residual, coeffs = _span_residual(target, power(x, -1).coords, power(y, -1).coords)
    return residual <= SPAN_TOL and bool(np.all(coeffs >= -SPAN_TOL * np.max(np.abs(coeffs))))


def three_point_witness(algebra: AlgebraDescriptor) -> float | None:
    """
    Residual of ι(f + e) against span{ι(f), ι(e)} for f with eigenvalues 1, 2, 3
    on three orthogonal idempotents. None when the rank is below 3.
    """
    if algebra.rank < 3:
        return None
    frame = jordan_frame(algebra)
    c1, c2 = frame[0].element, frame[1].element
    c3 = unit(algebra) - c1 - c2
    f = c1 + 2.0 * c2 + 3.0 * c3
    e = unit(algebra)
    residual, _ = _span_residual(power(f + e, -1).coords, power(f, -1).coords, e.coords)
    return residual


def inversion_is_linear_up_to_scale(algebra: AlgebraDescriptor, samples: int = 16, seed: int = 0) -> bool:
    """
    Empirical test of whether ι(x) = c(x)·L(x) for a linear L. Random interior
    pairs must satisfy ι(x+y) ∈ cone{ι(x), ι(y)}; on rank ≥ 3 the deterministic
    1-2-3 witness decides.
    """
    if samples < 3:
        raise ValueError("samples must be at least 3")
    witness = three_point_witness(algebra)
    if witness is not None and witness > SPAN_TOL:
        log.debug("%s: three-point witness residual %.3e", algebra.label, witness)
        return False

    rng = Rng(seed)
    for _ in range(samples):
        x, y = sample_interior(algebra, rng), sample_interior(algebra, rng)
        if not _inverse_in_cone_span(x, y):
            return False
    return True


def inversion_closed_form(x: Element) -> Element:
    """
    x^{-1} by the rank-2 formulas: ι(λ, μ) = (λμ)^{-1}(μ, λ) on Diagonal(2) and
    ι(v, λ) = (λ² − ⟨v, v⟩)^{-1}(−v, λ) on Spin(n).
    """
    algebra = x.algebra
    a = x.coords
    if algebra.variant is Variant.DIAGONAL and algebra.n == 2:
        return Element(algebra, np.array([a[1], a[0]]) / (a[0] * a[1]))
    if algebra.variant is Variant.SPIN:
        v, lam = a[:-1], a[-1]
        return Element(algebra, np.concatenate((-v, [lam])) / (lam * lam - v @ v))
    raise InvalidDescriptor(f"no closed-form inversion for {algebra.label}")
