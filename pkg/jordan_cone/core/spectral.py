"""
spectral.py — Spectral decomposition, functional calculus and norms for JordanCone
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from jordan_cone.core.algebra import (
    AlgebraDescriptor,
    Element,
    Projection,
    Variant,
    sym_pack,
    sym_unpack,
    trace,
    unit,
)
from jordan_cone.core.errors import DomainError
from jordan_cone.core.tolerances import TOL_BOUNDARY, TOL_CLASS, TOL_CLUSTER


@dataclass(frozen=True)
class SpectralDecomposition:
    """x = Σ λ_i c_i with ascending distinct λ_i and orthogonal idempotents c_i summing to e."""
    eigenvalues: tuple[float, ...]
    idempotents: tuple[Projection, ...]

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.idempotents[0].algebra

    def reconstruct(self) -> Element:
        coords = sum(lam * c.element.coords for lam, c in zip(self.eigenvalues, self.idempotents))
        return Element(self.algebra, coords)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(lam) for lam in self.eigenvalues],
            "idempotents": [c.element.to_dict() for c in self.idempotents],
        }


# ── Primitive eigenpairs ──────────────────────────────────────────────────────

def _primitive(algebra: AlgebraDescriptor, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues with multiplicity and a row stack of matching primitive idempotents."""
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        return a.copy(), np.eye(algebra.n)

    if variant is Variant.SPIN:
        v, lam = a[:-1], a[-1]
        radius = float(np.linalg.norm(v))
        if radius <= TOL_CLUSTER * max(1.0, abs(lam) + radius):
            direction = np.zeros(algebra.n)
            direction[0] = 1.0
            values = np.array([lam, lam])
        else:
            direction = v / radius
            values = np.array([lam - radius, lam + radius])
        frames = np.array([
            np.concatenate((-0.5 * direction, [0.5])),
            np.concatenate((0.5 * direction, [0.5])),
        ])
        return values, frames

    if variant is Variant.SYM:
        values, vectors = np.linalg.eigh(sym_unpack(a, algebra.n))
        frames = np.array([sym_pack(np.outer(vectors[:, k], vectors[:, k])) for k in range(algebra.n)])
        return values, frames

    all_values, all_frames = [], []
    for part, (lo, hi) in zip(algebra.summands, algebra.offsets):
        values, frames = _primitive(part, a[lo:hi])
        padded = np.zeros((frames.shape[0], algebra.dim))
        padded[:, lo:hi] = frames
        all_values.append(values)
        all_frames.append(padded)
    return np.concatenate(all_values), np.vstack(all_frames)


def primitive_eigenvalues(x: Element) -> np.ndarray:
    """Eigenvalues of x repeated by multiplicity (unsorted)."""
    return _primitive(x.algebra, x.coords)[0]


def primitive_frame(x: Element) -> list[tuple[float, Projection]]:
    """x = Σ λ_k u_k over a Jordan frame of atoms u_k, ascending in λ."""
    values, frames = _primitive(x.algebra, x.coords)
    order = np.argsort(values, kind="stable")
    return [(float(values[k]), Projection.trusted(Element(x.algebra, frames[k]), 1)) for k in order]


# ── Decomposition ─────────────────────────────────────────────────────────────

def spectral_decomposition(x: Element) -> SpectralDecomposition:
    values, frames = _primitive(x.algebra, x.coords)
    order = np.argsort(values, kind="stable")
    values, frames = values[order], frames[order]
    tol = TOL_CLUSTER * max(1.0, float(np.max(np.abs(values))))

    groups: list[list[int]] = [[0]]
    for k in range(1, len(values)):
        if values[k] - values[k - 1] > tol:
            groups.append([k])
        else:
            groups[-1].append(k)

    eigenvalues, idempotents = [], []
    for group in groups:
        eigenvalues.append(float(np.mean(values[group])))
        element = Element(x.algebra, frames[group].sum(axis=0))
        idempotents.append(Projection.trusted(element, len(group)))
    return SpectralDecomposition(tuple(eigenvalues), tuple(idempotents))


def spectrum(x: Element) -> list[float]:
    """σ(x), ascending, equal eigenvalues merged."""
    return list(spectral_decomposition(x).eigenvalues)


def min_eigenvalue(x: Element) -> float:
    return float(np.min(primitive_eigenvalues(x)))


def max_eigenvalue(x: Element) -> float:
    return float(np.max(primitive_eigenvalues(x)))


# ── Functional calculus ───────────────────────────────────────────────────────

def functional_calculus(x: Element, f: Callable[[float], float]) -> Element:
    """Σ f(λ_i) c_i."""
    values, frames = _primitive(x.algebra, x.coords)
    mapped = np.array([f(float(lam)) for lam in values], dtype=float)
    if not np.all(np.isfinite(mapped)):
        raise DomainError("function is not finite on the spectrum")
    return Element(x.algebra, mapped @ frames)


def _require_positive(x: Element, what: str) -> None:
    low = min_eigenvalue(x)
    if low <= TOL_BOUNDARY:
        raise DomainError(f"{what} needs a positive spectrum, min eigenvalue is {low:.3e}")


def exp_el(x: Element) -> Element:
    return functional_calculus(x, np.exp)


def log_el(x: Element) -> Element:
    _require_positive(x, "log")
    return functional_calculus(x, np.log)


def power(x: Element, alpha: float) -> Element:
    """x^α; non-integer or negative α needs x in the cone interior."""
    alpha = float(alpha)
    if alpha.is_integer() and alpha >= 0:
        return functional_calculus(x, lambda lam: lam ** int(alpha))
    _require_positive(x, f"power {alpha:g}")
    return functional_calculus(x, lambda lam: lam ** alpha)


def inverse(x: Element) -> Element:
    values = primitive_eigenvalues(x)
    if np.min(np.abs(values)) <= TOL_BOUNDARY:
        raise DomainError("element is not invertible: 0 is in the spectrum")
    return functional_calculus(x, lambda lam: 1.0 / lam)


def sqrt_el(x: Element) -> Element:
    return power(x, 0.5)


# ── Norms ─────────────────────────────────────────────────────────────────────

def order_unit_norm(x: Element) -> float:
    """‖x‖ = max |λ_i|."""
    return float(np.max(np.abs(primitive_eigenvalues(x))))


def variation_seminorm(x: Element) -> float:
    """‖x‖_v = diam σ(x)."""
    values = primitive_eigenvalues(x)
    return float(np.max(values) - np.min(values))


def quotient_norm(x: Element) -> float:
    """inf_μ ‖x − μe‖, which is ‖x‖_v / 2."""
    return 0.5 * variation_seminorm(x)


def maximal_deviation(x: Element) -> float:
    """
    sup over states φ of (φ(x²) − φ(x)²)^{1/2}. A state's variance of x is
    largest when it splits its mass evenly between the extreme eigenvalues,
    which gives ½ diam σ(x).
    """
    return 0.5 * variation_seminorm(x)


def quotient_norm_bruteforce(x: Element) -> float:
    """Minimize μ ↦ ‖x − μe‖ numerically (oracle for quotient_norm)."""
    values = primitive_eigenvalues(x)
    low, high = float(np.min(values)), float(np.max(values))
    if high - low <= 0.0:
        return 0.0
    result = minimize_scalar(
        lambda mu: float(np.max(np.abs(values - mu))),
        bounds=(low, high),
        method="bounded",
        options={"xatol": 1e-12 * max(1.0, high - low)},
    )
    return float(result.fun)


# ── Quotient classes ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ElementClass:
    """[x] ∈ A / ℝe, held by its trace-centred representative (tr = 0)."""
    representative: Element

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.representative.algebra

    @property
    def norm(self) -> float:
        """Variation norm of the class."""
        return variation_seminorm(self.representative)

    def equals(self, other: "ElementClass", tol: float = TOL_CLASS) -> bool:
        gap = variation_seminorm(self.representative - other.representative)
        return gap <= tol * max(1.0, self.norm)

    def to_dict(self) -> dict:
        return {"class_of": self.representative.to_dict()}


def class_of(x: Element) -> ElementClass:
    e = unit(x.algebra)
    return ElementClass(x - (trace(x) / x.algebra.rank) * e)


def round_to_projection(x: Element) -> Projection:
    """
    Projection whose class is nearest to [x]: shift σ(x) to start at 0,
    rescale to end at 1, keep the eigenvalues above ½.
    """
    decomposition = spectral_decomposition(x)
    low, high = decomposition.eigenvalues[0], decomposition.eigenvalues[-1]
    width = high - low
    coords = np.zeros(x.algebra.dim)
    rank = 0
    if width > 0:
        for lam, c in zip(decomposition.eigenvalues, decomposition.idempotents):
            if (lam - low) / width > 0.5:
                coords += c.element.coords
                rank += c.rank
    return Projection.trusted(Element(x.algebra, coords), rank)


def is_quotient_extreme_point(cls: ElementClass, tol: float = TOL_CLASS) -> bool:
    """Extreme points of the variation-norm unit ball are classes of nontrivial projections."""
    if abs(cls.norm - 1.0) > tol:
        return False
    p = round_to_projection(cls.representative)
    if p.is_trivial:
        return False
    return class_of(p.element).equals(cls, tol)
