"""
factorization.py — Recovering (ε, J), (ε, y, J) and (ε, J, φ) from black-box isometries for JordanCone

Variation isometries are factored by atom matching. The class of an atom u is
an extreme point of the quotient unit ball, so S[u] rounds to the class of a
projection q. For ε = +1 that projection is θ(u) = J(u), for ε = −1 it is
the complement. The sign is read off a Jordan frame (the images of orthogonal
atoms must again be orthogonal atoms), J is fitted on the atom images by
least squares and re-projected onto an exact automorphism, and the result is
checked against the supplied map.

Hilbert isometries are reduced to variation isometries through
g = U_{f(ē)^{-1/2}} ∘ f and S = log ∘ g ∘ exp.
"""
from __future__ import annotations

import logging
from typing import Callable, Union

import numpy as np
from scipy.linalg import polar

from jordan_cone.core.algebra import (
    AlgebraDescriptor,
    Element,
    Projection,
    Variant,
    atom_spanning_set,
    basis,
    jordan_frame,
    jordan_product,
    quadratic_rep,
    sym_unpack,
    trace,
    trace_weights,
    unit,
)
from jordan_cone.core.cone import Ray, exp_class, hilbert_distance, log_ray, ray_distance, ray_of
from jordan_cone.core.dual import Functional
from jordan_cone.core.errors import EvaluationBudgetExceeded, FactorizationFailed, NotAnIsometry
from jordan_cone.core.isometry import (
    AffineVariationIsometry,
    BlackBoxLinearMap,
    BlackBoxRayMap,
    HilbertIsometry,
    JordanIsomorphism,
    VariationIsometry,
)
from jordan_cone.core.sampling import Rng, sample_element, sample_interior
from jordan_cone.core.spectral import (
    class_of,
    order_unit_norm,
    power,
    round_to_projection,
    variation_seminorm,
)

log = logging.getLogger(__name__)

PRECHECK_TOL = 1e-8
LINEARITY_TOL = 1e-7
RECONSTRUCTION_TOL = 1e-6
HAMHALTER_TOL = 1e-7

LinearMapLike = Union[np.ndarray, VariationIsometry, AffineVariationIsometry, BlackBoxLinearMap]
RayMapLike = Union[HilbertIsometry, BlackBoxRayMap, Callable[[Ray], Ray]]


# ── Input normalization ───────────────────────────────────────────────────────

def as_matrix(S: LinearMapLike, algebra: AlgebraDescriptor) -> np.ndarray:
    """Coordinate matrix of a linear map given in any of the accepted forms."""
    if isinstance(S, (VariationIsometry, AffineVariationIsometry)):
        matrix = S.matrix
    elif isinstance(S, BlackBoxLinearMap):
        matrix = S.materialize()
    else:
        matrix = np.asarray(S, dtype=float)
    if matrix.shape != (algebra.dim, algebra.dim):
        raise FactorizationFailed(f"map has shape {matrix.shape}, expected {algebra.dim}×{algebra.dim}")
    return matrix


def as_ray_map(f: RayMapLike, algebra: AlgebraDescriptor) -> BlackBoxRayMap:
    if isinstance(f, BlackBoxRayMap):
        return f
    return BlackBoxRayMap(f, algebra)


def _require_same_algebra(algebra_a: AlgebraDescriptor, algebra_b: AlgebraDescriptor) -> None:
    if algebra_a != algebra_b:
        raise FactorizationFailed(
            f"isomorphisms are recovered between equal descriptors only: {algebra_a.label} vs {algebra_b.label}"
        )


def _apply(matrix: np.ndarray, algebra: AlgebraDescriptor, x: Element) -> Element:
    return Element(algebra, matrix @ x.coords)


# ── Projecting a fitted matrix onto an automorphism ───────────────────────────

def iso_from_matrix(algebra: AlgebraDescriptor, matrix: np.ndarray) -> JordanIsomorphism:
    """Nearest representable Jordan automorphism to a coordinate matrix that approximates one."""
    variant = algebra.variant

    if variant is Variant.DIAGONAL:
        perm = tuple(int(k) for k in np.argmax(matrix, axis=0))
        if sorted(perm) != list(range(algebra.n)):
            raise FactorizationFailed("atom images do not form a permutation")
        return JordanIsomorphism(algebra, perm=perm)

    if variant is Variant.SPIN:
        n = algebra.n
        orth, _ = polar(matrix[:n, :n])
        return JordanIsomorphism(algebra, orth=orth)

    if variant is Variant.SYM:
        n = algebra.n
        frame = jordan_frame(algebra)
        columns = []
        for atom in frame:
            image = sym_unpack(matrix @ atom.element.coords, n)
            _, vectors = np.linalg.eigh(image)
            columns.append(vectors[:, -1])
        # Fix relative signs through the images of E_0j + E_j0.
        for j in range(1, n):
            image = sym_unpack(matrix @ _pack_offdiag(algebra, j), n)
            if columns[0] @ image @ columns[j] < 0:
                columns[j] = -columns[j]
        orth, _ = polar(np.column_stack(columns))
        return JordanIsomorphism(algebra, orth=orth)

    offsets = algebra.offsets
    summands = algebra.summands
    mapping = []
    for i, part in enumerate(summands):
        lo, hi = offsets[i]
        local_unit = np.zeros(algebra.dim)
        local_unit[lo:hi] = unit(part).coords
        image = matrix @ local_unit
        weights = [np.linalg.norm(image[a:b]) for a, b in offsets]
        j = int(np.argmax(weights))
        if summands[j] != part:
            raise FactorizationFailed(f"summand {part.label} is sent onto {summands[j].label}")
        mapping.append(j)
    if sorted(mapping) != list(range(len(summands))):
        raise FactorizationFailed("summand images do not form a bijection")
    components = []
    for i, j in enumerate(mapping):
        lo, hi = offsets[i]
        dst_lo, dst_hi = offsets[j]
        components.append(iso_from_matrix(summands[i], matrix[dst_lo:dst_hi, lo:hi]))
    return JordanIsomorphism(algebra, summand_map=tuple(mapping), components=tuple(components))


def _pack_offdiag(algebra: AlgebraDescriptor, j: int) -> np.ndarray:
    """Packed coordinates of E_0j + E_j0 (the (0, j) entry is stored once)."""
    coords = np.zeros(algebra.dim)
    coords[j] = 1.0
    return coords


# ── Variation isometries ──────────────────────────────────────────────────────

def _precheck_variation(matrix: np.ndarray, algebra: AlgebraDescriptor, samples: int, rng: Rng) -> None:
    e = unit(algebra)
    scale = max(1.0, float(np.max(np.abs(matrix))))
    drift = variation_seminorm(_apply(matrix, algebra, e))
    if drift > PRECHECK_TOL * scale:
        raise NotAnIsometry(f"[e] is not mapped to [e] (variation {drift:.3e})")
    for _ in range(samples):
        x = sample_element(algebra, rng)
        before = variation_seminorm(x)
        after = variation_seminorm(_apply(matrix, algebra, x))
        if abs(after - before) > PRECHECK_TOL * max(1.0, before):
            raise NotAnIsometry(f"variation seminorm {before:.6g} mapped to {after:.6g}")


def _atom_images(matrix: np.ndarray, algebra: AlgebraDescriptor, atoms: list[Projection]) -> list[Projection]:
    return [round_to_projection(_apply(matrix, algebra, u.element)) for u in atoms]


def _frame_consistent(images: list[Projection]) -> bool:
    """Images of a Jordan frame are pairwise orthogonal atoms."""
    if not all(q.is_atom for q in images):
        return False
    for i, p in enumerate(images):
        for q in images[i + 1:]:
            if order_unit_norm(jordan_product(p.element, q.element)) > 1e-6:
                return False
    return True


def _choose_sign(matrix: np.ndarray, algebra: AlgebraDescriptor) -> int:
    rounded = _atom_images(matrix, algebra, jordan_frame(algebra))
    plus_ok = _frame_consistent(rounded)
    minus_ok = _frame_consistent([q.complement() for q in rounded])
    log.debug("%s: sign candidates +1=%s -1=%s", algebra.label, plus_ok, minus_ok)
    if plus_ok:
        return 1
    if minus_ok:
        return -1
    raise FactorizationFailed("no sign makes the frame images orthogonal atoms")


def factor_variation_isometry(S: LinearMapLike, algebra_a: AlgebraDescriptor, algebra_b: AlgebraDescriptor,
                              samples: int = 1000, seed: int = 0) -> tuple[int, JordanIsomorphism]:
    """Recover (ε, J) with S[x] = ε[Jx]; ε = +1 is preferred when both signs fit."""
    _require_same_algebra(algebra_a, algebra_b)
    algebra = algebra_a
    matrix = as_matrix(S, algebra)
    rng = Rng(seed)
    _precheck_variation(matrix, algebra, min(samples, 64), rng.spawn("precheck"))

    epsilon = _choose_sign(matrix, algebra)
    atoms = atom_spanning_set(algebra)
    rounded = _atom_images(matrix, algebra, atoms)
    images = rounded if epsilon == 1 else [q.complement() for q in rounded]
    source = np.column_stack([u.element.coords for u in atoms])
    target = np.column_stack([q.element.coords for q in images])
    fitted = target @ np.linalg.pinv(source)
    log.debug("%s: atom fit residual %.3e", algebra.label, float(np.max(np.abs(fitted @ source - target))))

    J = iso_from_matrix(algebra, fitted)

    check = rng.spawn("verify")
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, check)
        gap = variation_seminorm(_apply(matrix, algebra, x) - epsilon * J.apply(x))
        worst = max(worst, gap / max(1.0, variation_seminorm(x)))
    log.debug("%s: factorization residual %.3e (ε=%+d)", algebra.label, worst, epsilon)
    if worst > RECONSTRUCTION_TOL:
        raise FactorizationFailed(f"reconstruction residual {worst:.3e} exceeds {RECONSTRUCTION_TOL:.0e}")
    return epsilon, J


# ── Hilbert isometries ────────────────────────────────────────────────────────

def unitalized_map(f: RayMapLike, algebra: AlgebraDescriptor) -> tuple[Element, Callable[[Ray], Ray]]:
    """(w, g) with w = f(ē)'s representative and g = U_{w^{-1/2}} ∘ f, so that g(ē) = ē."""
    ray_map = as_ray_map(f, algebra)
    w = ray_map(ray_of(unit(algebra))).representative
    w_inv_sqrt = power(w, -0.5)

    def g(r: Ray) -> Ray:
        return ray_of(quadratic_rep(w_inv_sqrt, ray_map(r).representative))

    return w, g


def variation_isometry_from_hilbert(f: RayMapLike, algebra: AlgebraDescriptor,
                                    samples: int = 64, seed: int = 0) -> VariationIsometry:
    """S = log ∘ g ∘ exp assembled column by column, then certified linear and norm preserving."""
    _, g = unitalized_map(f, algebra)

    def S(x: Element) -> Element:
        return log_ray(g(exp_class(class_of(x)))).representative

    matrix = np.column_stack([S(b).coords for b in basis(algebra)])

    rng = Rng(seed)
    for _ in range(samples):
        x = sample_element(algebra, rng, scale=0.5)
        scale = max(1.0, variation_seminorm(x))
        linear = _apply(matrix, algebra, x)
        gap = variation_seminorm(S(x) - linear)
        if gap > LINEARITY_TOL * scale:
            raise NotAnIsometry(f"log∘g∘exp is not linear (residual {gap:.3e})")
        drift = abs(variation_seminorm(linear) - variation_seminorm(x))
        if drift > LINEARITY_TOL * scale:
            raise NotAnIsometry(f"variation seminorm not preserved (drift {drift:.3e})")
    return VariationIsometry(matrix, algebra)


def _precheck_hilbert(ray_map: BlackBoxRayMap, algebra: AlgebraDescriptor, samples: int, rng: Rng) -> None:
    for _ in range(samples):
        r1, r2 = ray_of(sample_interior(algebra, rng)), ray_of(sample_interior(algebra, rng))
        before = ray_distance(r1, r2)
        after = ray_distance(ray_map(r1), ray_map(r2))
        if abs(after - before) > PRECHECK_TOL * max(1.0, before):
            raise NotAnIsometry(f"d_H {before:.6g} mapped to {after:.6g}")


def factor_hilbert_isometry(f: RayMapLike, algebra_a: AlgebraDescriptor, algebra_b: AlgebraDescriptor,
                            samples: int = 1000, seed: int = 0) -> HilbertIsometry:
    """Recover (ε, y, J) with f(x̄) = U_y J(x^ε)‾; y is the square root of f(ē)'s representative."""
    _require_same_algebra(algebra_a, algebra_b)
    algebra = algebra_a
    if isinstance(f, BlackBoxRayMap):
        ray_map = f
    else:
        # own wrapper: the default budget plus one evaluation per verification ray
        ray_map = BlackBoxRayMap(f, algebra)
        ray_map.budget += samples
    rng = Rng(seed)
    _precheck_hilbert(ray_map, algebra, min(samples, 32), rng.spawn("precheck"))

    w, _ = unitalized_map(ray_map, algebra)
    y = power(w, 0.5)
    S = variation_isometry_from_hilbert(ray_map, algebra, min(samples, 32), seed)
    epsilon, J = factor_variation_isometry(S, algebra, algebra, min(samples, 200), seed)
    candidate = HilbertIsometry(epsilon, y, J)

    check = rng.spawn("verify")
    checked = min(samples, ray_map.budget - ray_map.evaluations)
    if checked <= 0:
        raise EvaluationBudgetExceeded(f"no evaluations left to verify the candidate (budget {ray_map.budget})")
    if checked < samples:
        log.warning("%s: budget allows %d of %d verification rays", algebra.label, checked, samples)
    worst = 0.0
    for _ in range(checked):
        r = ray_of(sample_interior(algebra, check))
        worst = max(worst, hilbert_distance(ray_map(r).representative, candidate(r).representative))
    log.debug("%s: hilbert reconstruction residual %.3e over %d rays", algebra.label, worst, checked)
    if worst > RECONSTRUCTION_TOL:
        raise FactorizationFailed(f"reconstructed isometry is off by d_H = {worst:.3e}")
    return candidate


# ── Affine (Hamhalter) form ───────────────────────────────────────────────────

def hamhalter_decompose(T: LinearMapLike, algebra: AlgebraDescriptor,
                        samples: int = 200, seed: int = 0) -> AffineVariationIsometry:
    """Write a variation-seminorm isometry as Tx = εJx + φ(x)e."""
    matrix = as_matrix(T, algebra)
    try:
        epsilon, J = factor_variation_isometry(matrix, algebra, algebra, samples, seed)
    except FactorizationFailed as exc:
        raise NotAnIsometry(f"no (ε, J) fits the induced quotient map: {exc}") from exc

    e = unit(algebra)
    remainder = matrix - epsilon * J.matrix
    coefficients = np.array([trace(Element(algebra, col)) for col in remainder.T]) / algebra.rank
    phi = Functional(Element(algebra, coefficients / trace_weights(algebra)))
    result = AffineVariationIsometry(epsilon, J, phi)

    rng = Rng(seed).spawn("hamhalter")
    for _ in range(samples):
        x = sample_element(algebra, rng)
        gap = order_unit_norm(_apply(matrix, algebra, x) - result.apply(x))
        if gap > HAMHALTER_TOL * max(1.0, order_unit_norm(x)):
            raise NotAnIsometry(f"T − εJ does not map into ℝe (residual {gap:.3e})")
    log.debug("%s: hamhalter form ε=%+d, |φ| = %.3e", algebra.label, epsilon, order_unit_norm(phi.representer))
    return result


# ── Group law ─────────────────────────────────────────────────────────────────

def _quadratic_matrix(y: Element) -> np.ndarray:
    return np.column_stack([quadratic_rep(y, b).coords for b in basis(y.algebra)])


def compose_hilbert(f: HilbertIsometry, g: HilbertIsometry) -> HilbertIsometry:
    """
    f∘g in normal form. f∘g(x̄) = U_a U_b J_f J_g x^{ε_f ε_g} with a = y_f and
    b = J_f(y_g^{ε_f}); U_a U_b = U_c K with c = (U_a b²)^{1/2} and K a Jordan
    automorphism, which is recovered from its matrix.
    """
    if f.algebra != g.algebra:
        raise FactorizationFailed(f"cannot compose maps on {f.algebra.label} and {g.algebra.label}")
    algebra = f.algebra
    a = f.y
    b = f.J.apply(g.y if f.epsilon == 1 else power(g.y, -1))
    c = power(quadratic_rep(a, jordan_product(b, b)), 0.5)
    K = np.linalg.solve(_quadratic_matrix(c), _quadratic_matrix(a) @ _quadratic_matrix(b))
    J = iso_from_matrix(algebra, K @ f.J.compose(g.J).matrix)
    return HilbertIsometry(f.epsilon * g.epsilon, c, J)
