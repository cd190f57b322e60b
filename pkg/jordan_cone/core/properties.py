"""
properties.py — Catalogue of property checks behind the verification suites of JordanCone

A check receives an algebra, a seeded Rng and a sample count, and returns the
largest residual it observed. Checks that compare two verdicts return the
number of disagreements and carry tolerance 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from jordan_cone.core.algebra import (
    AlgebraDescriptor,
    Element,
    Projection,
    Variant,
    atom_spanning_set,
    jordan_frame,
    jordan_product,
    quadratic_rep,
    square,
    trace,
    trace_inner_product,
    unit,
)
from jordan_cone.core.cone import (
    exp_class,
    hilbert_distance,
    in_cone_interior,
    inversion,
    inversion_closed_form,
    inversion_is_linear_up_to_scale,
    log_ray,
    ray_distance,
    ray_equal,
    ray_of,
)
from jordan_cone.core.dual import (
    FaceDescriptor,
    Functional,
    attains_norm_on_face,
    diameter_witness,
    dual_ball_vertices_diagonal,
    dual_norm,
    dual_norm_bruteforce_diagonal,
    every_orthogonal_pair,
    every_projection,
    extreme_point_check,
    face_contains,
    functionals_orthogonal,
    maximal_face,
    norming_class_of_face,
    orthogonal_by_norm,
    orthogonal_decomposition,
    projection_join,
    projection_leq,
    sample_face_element,
    sample_positive_functional,
    sample_state_on,
    sampled_face_diameter,
    sampled_maximal_deviation,
    support_projection,
)
from jordan_cone.core.errors import UnknownSuite
from jordan_cone.core.factorization import (
    compose_hilbert,
    factor_hilbert_isometry,
    factor_variation_isometry,
    hamhalter_decompose,
    unitalized_map,
    variation_isometry_from_hilbert,
)
from jordan_cone.core.isometry import (
    IsometryGroupClass,
    VariationIsometry,
    atom_coatom_criterion,
    classify_isometry_group,
    conjugated_projectivity,
    inversion_isometry,
    jordan_iso_residual,
    max_spectrum_size,
    sample_affine_isometry,
    sample_hilbert_isometry,
    sample_jordan_iso,
    two_atoms_join_to_unit,
)
from jordan_cone.core.sampling import Rng, sample_element, sample_interior, sample_projection
from jordan_cone.core.spectral import (
    class_of,
    exp_el,
    is_quotient_extreme_point,
    log_el,
    maximal_deviation,
    order_unit_norm,
    power,
    primitive_frame,
    quotient_norm,
    quotient_norm_bruteforce,
    round_to_projection,
    spectral_decomposition,
    variation_seminorm,
)

SUITES = ("algebra", "spectral", "cone", "dual", "isometry")

CheckFn = Callable[[AlgebraDescriptor, Rng, int], float]

# Random ray pairs checked against each sampled Hilbert isometry.
HILBERT_PAIRS_PER_MAP = 100


@dataclass(frozen=True)
class PropertyCheck:
    """One named property: nominal sample count, acceptance tolerance, target algebras."""
    suite: str
    name: str
    fn: CheckFn
    samples: int
    tolerance: float
    algebras: tuple[str, ...] = ()
    applies: Callable[[AlgebraDescriptor], bool] | None = None

    def targets(self, run_algebras: list[AlgebraDescriptor]) -> list[AlgebraDescriptor]:
        """Fixed algebras when the check names its own, else the applicable run algebras."""
        if self.algebras:
            return [AlgebraDescriptor.parse(text) for text in self.algebras]
        return [a for a in run_algebras if self.applies is None or self.applies(a)]


PROPERTIES: dict[str, PropertyCheck] = {}


def register(suite: str, samples: int, tolerance: float, algebras: tuple[str, ...] = (),
             applies: Callable[[AlgebraDescriptor], bool] | None = None):
    def decorator(fn: CheckFn) -> CheckFn:
        name = fn.__name__.removeprefix("check_")
        PROPERTIES[name] = PropertyCheck(suite, name, fn, samples, tolerance, tuple(algebras), applies)
        return fn
    return decorator


def checks_for(suite: str) -> list[PropertyCheck]:
    if suite == "all":
        return list(PROPERTIES.values())
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; choose one of {', '.join(SUITES)} or all")
    return [check for check in PROPERTIES.values() if check.suite == suite]


# ── Helpers ───────────────────────────────────────────────────────────────────

def _gap(x: Element, y: Element) -> float:
    """‖x − y‖ relative to max(1, ‖y‖)."""
    return order_unit_norm(x - y) / max(1.0, order_unit_norm(y))


def _random_ray(algebra: AlgebraDescriptor, rng: Rng):
    return ray_of(sample_interior(algebra, rng))


def _child_seed(rng: Rng) -> int:
    return int(rng.integers(0, 2 ** 62))


def _orthogonal_partner(p: Projection, rng: Rng) -> Projection:
    """A random nonzero projection under p^⊥ built from a frame of p^⊥."""
    atoms = [u for lam, u in primitive_frame(p.complement().element) if lam > 0.5]
    keep = [u for u in atoms if rng.coin()] or [atoms[int(rng.integers(0, len(atoms)))]]
    coords = sum(u.element.coords for u in keep)
    return Projection.trusted(Element(p.algebra, coords), len(keep))


def _is_diagonal(algebra: AlgebraDescriptor) -> bool:
    return algebra.variant is Variant.DIAGONAL


def _has_closed_form_inverse(algebra: AlgebraDescriptor) -> bool:
    return algebra.variant is Variant.SPIN or (algebra.variant is Variant.DIAGONAL and algebra.n == 2)


# ── algebra ───────────────────────────────────────────────────────────────────

@register("algebra", samples=1000, tolerance=1e-9)
def check_jordan_identity(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        x, y = sample_element(algebra, rng), sample_element(algebra, rng)
        x2 = square(x)
        lhs = jordan_product(x, jordan_product(y, x2))
        rhs = jordan_product(jordan_product(x, y), x2)
        scale = max(1.0, order_unit_norm(x) ** 3 * order_unit_norm(y))
        worst = max(worst, order_unit_norm(lhs - rhs) / scale)
    return worst


@register("algebra", samples=200, tolerance=1e-12)
def check_product_axioms(algebra, rng, samples):
    e = unit(algebra)
    worst = 0.0
    for _ in range(samples):
        x, y = sample_element(algebra, rng), sample_element(algebra, rng)
        worst = max(
            worst,
            order_unit_norm(jordan_product(x, y) - jordan_product(y, x)),
            _gap(jordan_product(e, x), x),
        )
    return worst


@register("algebra", samples=200, tolerance=1e-9)
def check_trace_form_associative(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        x, y, z = (sample_element(algebra, rng) for _ in range(3))
        lhs = trace_inner_product(jordan_product(x, y), z)
        rhs = trace_inner_product(y, jordan_product(x, z))
        scale = max(1.0, algebra.rank * order_unit_norm(x) * order_unit_norm(y) * order_unit_norm(z))
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


@register("algebra", samples=100, tolerance=1e-9)
def check_fundamental_formula(algebra, rng, samples):
    """U_{U_y x} = U_y U_x U_y."""
    worst = 0.0
    for _ in range(samples):
        x, y, z = (sample_element(algebra, rng, scale=0.5) for _ in range(3))
        lhs = quadratic_rep(quadratic_rep(y, x), z)
        rhs = quadratic_rep(y, quadratic_rep(x, quadratic_rep(y, z)))
        scale = max(1.0, order_unit_norm(y) ** 4 * order_unit_norm(x) ** 2 * order_unit_norm(z))
        worst = max(worst, order_unit_norm(lhs - rhs) / scale)
    return worst


@register("algebra", samples=1000, tolerance=1e-10)
def check_jb_norm_axioms(algebra, rng, samples):
    """‖x∘y‖ ≤ ‖x‖‖y‖, ‖x²‖ = ‖x‖² and ‖x²‖ ≤ ‖x² + y²‖."""
    worst = 0.0
    for _ in range(samples):
        x, y = sample_element(algebra, rng), sample_element(algebra, rng)
        nx, ny = order_unit_norm(x), order_unit_norm(y)
        x2, y2 = square(x), square(y)
        scale = max(1.0, nx * ny, nx ** 2 + ny ** 2)
        worst = max(
            worst,
            max(0.0, order_unit_norm(jordan_product(x, y)) - nx * ny) / scale,
            abs(order_unit_norm(x2) - nx ** 2) / scale,
            max(0.0, order_unit_norm(x2) - order_unit_norm(x2 + y2)) / scale,
        )
    return worst


@register("algebra", samples=1, tolerance=1e-12)
def check_frames_and_atoms(algebra, rng, samples):
    frame = jordan_frame(algebra)
    e = unit(algebra)
    total = Element(algebra, sum(c.element.coords for c in frame))
    worst = order_unit_norm(total - e)
    for i, c in enumerate(frame):
        worst = max(worst, abs(trace(c.element) - 1.0), order_unit_norm(square(c.element) - c.element))
        for d in frame[i + 1:]:
            worst = max(worst, order_unit_norm(jordan_product(c.element, d.element)))
    atoms = atom_spanning_set(algebra)
    for u in atoms:
        worst = max(worst, order_unit_norm(square(u.element) - u.element), abs(trace(u.element) - 1.0))
    if np.linalg.matrix_rank(np.column_stack([u.element.coords for u in atoms])) != algebra.dim:
        worst = max(worst, 1.0)
    return worst


# ── spectral ──────────────────────────────────────────────────────────────────

@register("spectral", samples=200, tolerance=1e-9)
def check_spectral_reconstruction(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        decomposition = spectral_decomposition(x)
        worst = max(worst, _gap(decomposition.reconstruct(), x))
        blocks = decomposition.idempotents
        for i, c in enumerate(blocks):
            worst = max(worst, order_unit_norm(square(c.element) - c.element))
            for d in blocks[i + 1:]:
                worst = max(worst, order_unit_norm(jordan_product(c.element, d.element)))
    return worst


@register("spectral", samples=1000, tolerance=1e-6)
def check_quotient_norm_identity(algebra, rng, samples):
    """Closed form ‖x‖_v / 2 against a 1-D minimization over μ."""
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        worst = max(worst, abs(quotient_norm(x) - quotient_norm_bruteforce(x)))
    return worst


@register("spectral", samples=200, tolerance=1e-9)
def check_exp_log_inverse(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        worst = max(worst, _gap(log_el(exp_el(x)), x))
    return worst


@register("spectral", samples=200, tolerance=1e-9)
def check_power_law(algebra, rng, samples):
    """x^a ∘ x^b = x^{a+b} on the cone interior."""
    worst = 0.0
    for _ in range(samples):
        x = sample_interior(algebra, rng)
        a, b = rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)
        worst = max(worst, _gap(jordan_product(power(x, a), power(x, b)), power(x, a + b)))
    return worst


@register("spectral", samples=200, tolerance=1e-9)
def check_variation_kernel(algebra, rng, samples):
    """‖x + te‖_v = ‖x‖_v and 2‖[x]‖_q = ‖x‖_v."""
    e = unit(algebra)
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        t = float(rng.normal())
        v = variation_seminorm(x)
        worst = max(worst, abs(variation_seminorm(x + t * e) - v) / max(1.0, v), abs(2 * quotient_norm(x) - v))
    return worst


@register("spectral", samples=1000, tolerance=1e-12)
def check_variation_bound(algebra, rng, samples):
    """‖x‖_v ≤ 2‖x‖."""
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        norm = order_unit_norm(x)
        worst = max(worst, max(0.0, variation_seminorm(x) - 2.0 * norm) / max(1.0, norm))
    return worst


@register("spectral", samples=200, tolerance=1e-9)
def check_maximal_deviation_states(algebra, rng, samples):
    """No sampled state beats ½ diam σ(x), and the witness state reaches it."""
    worst = 0.0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        exact = maximal_deviation(x)
        sampled = sampled_maximal_deviation(x, samples=8, seed=_child_seed(rng))
        worst = max(worst, abs(sampled - exact) / max(1.0, exact))
    return worst


@register("spectral", samples=200, tolerance=0.0)
def check_quotient_extreme_points(algebra, rng, samples):
    """Classes of nontrivial projections are extreme; normalized random classes are extreme only in rank 2."""
    e = unit(algebra)
    mismatches = 0
    for _ in range(samples):
        p = sample_projection(algebra, rng)
        alpha, beta = rng.uniform(0.5, 3.0), float(rng.normal())
        if order_unit_norm(round_to_projection(alpha * p.element + beta * e).element - p.element) > 1e-9:
            mismatches += 1
        if not is_quotient_extreme_point(class_of(p.element)):
            mismatches += 1
        x = sample_element(algebra, rng)
        normalized = class_of(x / variation_seminorm(x))
        if is_quotient_extreme_point(normalized) != (algebra.rank == 2):
            mismatches += 1
    return float(mismatches)


# ── cone ──────────────────────────────────────────────────────────────────────

@register("cone", samples=1000, tolerance=1e-9)
def check_metric_axioms(algebra, rng, samples):
    """Symmetry (exact), nonnegativity, indiscernibles and the triangle inequality."""
    worst = 0.0
    for _ in range(samples):
        r1, r2, r3 = (_random_ray(algebra, rng) for _ in range(3))
        d12, d21 = ray_distance(r1, r2), ray_distance(r2, r1)
        d13, d23 = ray_distance(r1, r3), ray_distance(r2, r3)
        worst = max(worst, abs(d12 - d21), max(0.0, -d12), max(0.0, d13 - d12 - d23))
        scaled = ray_of(r1.representative * float(rng.uniform(0.1, 10.0)))
        worst = max(worst, ray_distance(r1, scaled))
        if not ray_equal(r1, scaled):
            worst = max(worst, 1.0)
        if ray_equal(r1, r2) != (d12 <= 1e-9):
            worst = max(worst, 1.0)
    return worst


@register("cone", samples=200, tolerance=1e-9)
def check_ray_bijection(algebra, rng, samples):
    """exp∘log and log∘exp are identities on rays and classes."""
    worst = 0.0
    for _ in range(samples):
        r = _random_ray(algebra, rng)
        back = exp_class(log_ray(r))
        worst = max(worst, _gap(back.representative, r.representative))
        q = class_of(sample_element(algebra, rng))
        again = log_ray(exp_class(q))
        worst = max(worst, variation_seminorm(again.representative - q.representative) / max(1.0, q.norm))
    return worst


@register("cone", samples=1000, tolerance=1e-10, applies=_has_closed_form_inverse)
def check_inversion_closed_form(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        x = sample_interior(algebra, rng)
        closed = inversion_closed_form(x)
        worst = max(worst, order_unit_norm(power(x, -1) - closed) / order_unit_norm(closed))
    return worst


@register("cone", samples=200, tolerance=1e-8)
def check_inversion_is_isometry(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        r1, r2 = _random_ray(algebra, rng), _random_ray(algebra, rng)
        before = ray_distance(r1, r2)
        after = ray_distance(inversion(r1), inversion(r2))
        worst = max(worst, abs(after - before) / max(1.0, before))
    return worst


@register("cone", samples=1000, tolerance=0.0)
def check_quadratic_rep_preserves_interior(algebra, rng, samples):
    """min σ(U_y x) > 0 for interior x, y."""
    failures = 0
    for _ in range(samples):
        y, x = sample_interior(algebra, rng), sample_interior(algebra, rng)
        if not in_cone_interior(quadratic_rep(y, x)):
            failures += 1
    return float(failures)


@register("cone", samples=1000, tolerance=1e-8)
def check_projective_invariance(algebra, rng, samples):
    """d_H(U_y x, U_y z) = d_H(x, z)."""
    worst = 0.0
    for _ in range(samples):
        y = exp_el(sample_element(algebra, rng, scale=0.5))
        x, z = sample_interior(algebra, rng), sample_interior(algebra, rng)
        before = hilbert_distance(x, z)
        after = hilbert_distance(quadratic_rep(y, x), quadratic_rep(y, z))
        worst = max(worst, abs(after - before) / max(1.0, before))
    return worst


# ── dual ──────────────────────────────────────────────────────────────────────

@register("dual", samples=200, tolerance=1e-9, applies=_is_diagonal)
def check_dual_norm_bruteforce(algebra, rng, samples):
    """Spectral base norm against max φ(2p − e) over all projections."""
    worst = 0.0
    for _ in range(samples):
        phi = Functional(sample_element(algebra, rng))
        exact = dual_norm(phi)
        worst = max(worst, abs(exact - dual_norm_bruteforce_diagonal(phi)) / max(1.0, exact))
    return worst


@register("dual", samples=200, tolerance=1e-8)
def check_orthogonal_decomposition(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        phi = Functional(sample_element(algebra, rng))
        plus, minus = orthogonal_decomposition(phi)
        norm = dual_norm(phi)
        worst = max(
            worst,
            _gap((plus - minus).representer, phi.representer),
            abs(norm - dual_norm(plus) - dual_norm(minus)) / max(1.0, norm),
        )
        if plus.representer.coords.any() and minus.representer.coords.any():
            if not functionals_orthogonal(plus, minus):
                worst = max(worst, 1.0)
    return worst


@register("dual", samples=200, tolerance=1e-8)
def check_decomposition_uniqueness(algebra, rng, samples):
    """Any split a = b − c with b, c positive on orthogonal supports is (a⁺, a⁻)."""
    worst = 0.0
    for _ in range(samples):
        p = sample_projection(algebra, rng)
        b = quadratic_rep(p.element, sample_interior(algebra, rng))
        c = quadratic_rep(p.complement().element, sample_interior(algebra, rng))
        plus, minus = orthogonal_decomposition(Functional(b - c))
        worst = max(worst, _gap(plus.representer, b), _gap(minus.representer, c))
    return worst


@register("dual", samples=1000, tolerance=1e-8)
def check_support_projections(algebra, rng, samples):
    """s(φ) ≤ s(φ+ψ), s(φ+ψ) = s(φ) ∨ s(ψ), φ(s(φ)) = ‖φ‖ and s(φ) is minimal."""
    worst = 0.0
    for _ in range(samples):
        phi, psi = sample_positive_functional(algebra, rng), sample_positive_functional(algebra, rng)
        s_phi, s_psi = support_projection(phi), support_projection(psi)
        s_sum = support_projection(phi + psi)
        if not projection_leq(s_phi, s_sum):
            worst = max(worst, 1.0)
        worst = max(worst, order_unit_norm(s_sum.element - projection_join(s_phi, s_psi).element))
        norm = dual_norm(phi)
        worst = max(worst, abs(phi(s_phi.element) - norm) / max(1.0, norm))
        decomposition = spectral_decomposition(phi.representer)
        for lam, c in zip(decomposition.eigenvalues, decomposition.idempotents):
            if lam > 1e-9 * max(1.0, norm) and phi(s_phi.element - c.element) >= norm:
                worst = max(worst, 1.0)
    return worst


def _orthogonality_draws(algebra: AlgebraDescriptor, rng: Rng) -> tuple[Functional, Functional, Functional]:
    p = sample_projection(algebra, rng)
    phi = sample_state_on(p, rng)

    def partner() -> Functional:
        if rng.coin():
            return sample_state_on(_orthogonal_partner(p, rng), rng)
        return sample_positive_functional(algebra, rng)

    return phi, partner(), partner()


@register("dual", samples=1000, tolerance=0.0)
def check_orthogonality_additivity(algebra, rng, samples):
    """[φ⊥ψ and φ⊥ρ] ⟺ φ⊥(ψ+ρ)."""
    mismatches = 0
    for _ in range(samples):
        phi, psi, rho = _orthogonality_draws(algebra, rng)
        both = functionals_orthogonal(phi, psi) and functionals_orthogonal(phi, rho)
        if both != functionals_orthogonal(phi, psi + rho):
            mismatches += 1
    return float(mismatches)


@register("dual", samples=1000, tolerance=0.0)
def check_orthogonality_norm_test(algebra, rng, samples):
    """Support orthogonality agrees with ‖φ − ψ‖ = ‖φ‖ + ‖ψ‖."""
    mismatches = 0
    for _ in range(samples):
        phi, psi, rho = _orthogonality_draws(algebra, rng)
        for other in (psi, rho, psi + rho):
            if functionals_orthogonal(phi, other) != orthogonal_by_norm(phi, other):
                mismatches += 1
    return float(mismatches)


@register("dual", samples=200, tolerance=0.0)
def check_hyperplane_characterization(algebra, rng, samples):
    """φ(e) = 0 ⟺ ‖φ⁺‖ = ‖φ⁻‖."""
    mismatches = 0
    for _ in range(samples):
        x = sample_element(algebra, rng)
        for phi in (Functional(x), Functional(class_of(x).representative)):
            plus, minus = orthogonal_decomposition(phi)
            balanced = abs(dual_norm(plus) - dual_norm(minus)) <= 1e-9 * max(1.0, dual_norm(phi))
            in_hyperplane = abs(phi.at_unit()) <= 1e-10 * max(1.0, order_unit_norm(phi.representer))
            if balanced != in_hyperplane:
                mismatches += 1
    return float(mismatches)


@register("dual", samples=100, tolerance=0.0)
def check_face_convexity(algebra, rng, samples):
    """Convex combinations of sampled points of F_p − F_q stay in F_p − F_q."""
    mismatches = 0
    for _ in range(samples):
        p = sample_projection(algebra, rng)
        fd = FaceDescriptor(p, _orthogonal_partner(p, rng))
        first, second = sample_face_element(fd, rng), sample_face_element(fd, rng)
        t = float(rng.uniform())
        for phi in (first, second, t * first + (1.0 - t) * second):
            if not face_contains(fd, phi):
                mismatches += 1
    return float(mismatches)


@register("dual", samples=100, tolerance=0.0, algebras=("diag:4", "sym:3"))
def check_face_diameter(algebra, rng, samples):
    """diam(F_p − F_q) ≤ 2 exactly when p or q is an atom; the split witness sits at distance 4."""
    if algebra.variant is Variant.DIAGONAL:
        pairs = every_orthogonal_pair(algebra)
    else:
        pairs = []
        for _ in range(samples):
            p = sample_projection(algebra, rng)
            pairs.append((p, _orthogonal_partner(p, rng)))
    mismatches = 0
    for p, q in pairs:
        fd = FaceDescriptor(p, q)
        verdict = p.is_atom or q.is_atom
        sampled = sampled_face_diameter(fd, samples=8, seed=_child_seed(rng))
        if (sampled <= 2.0 + 1e-8) != verdict:
            mismatches += 1
        witness = diameter_witness(fd)
        if witness is not None and abs(dual_norm(witness[0] - witness[1]) - 4.0) > 1e-8:
            mismatches += 1
    return float(mismatches)


@register("dual", samples=16, tolerance=0.0, algebras=("diag:3",))
def check_norming_class_uniqueness(algebra, rng, samples):
    """[p] is the only projection class with value 1 on all of G_p."""
    projections = every_projection(algebra)
    mismatches = 0
    for p in projections:
        fd = maximal_face(p)
        if not norming_class_of_face(fd).equals(class_of(p.element)):
            mismatches += 1
        for q in projections:
            expected = bool(np.array_equal(q.element.coords, p.element.coords))
            if attains_norm_on_face(q, fd, samples=samples, seed=_child_seed(rng)) != expected:
                mismatches += 1
    return float(mismatches)


@register("dual", samples=1, tolerance=0.0, algebras=("diag:3", "diag:4"))
def check_extreme_points_vertex_enumeration(algebra, rng, samples):
    """The spectral extreme-point predicate marks exactly the vertices δ_i − δ_j of 2B_{e^⊥}."""
    n = algebra.n
    vertices = dual_ball_vertices_diagonal(n)
    mismatches = abs(len(vertices) - n * (n - 1))
    for phi in vertices:
        if not extreme_point_check(phi):
            mismatches += 1
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            coords = np.zeros(n)
            coords[i], coords[j] = 1.0, -1.0
            if not any(np.allclose(v.representer.coords, coords, atol=1e-9) for v in vertices):
                mismatches += 1
    for first in vertices:
        for second in vertices:
            midpoint = 0.5 * (first + second)
            if not np.allclose(first.representer.coords, second.representer.coords) and \
                    dual_norm(midpoint) > 1e-12 and extreme_point_check(midpoint):
                mismatches += 1
    return float(mismatches)


@register("dual", samples=100, tolerance=0.0)
def check_extreme_point_spectral(algebra, rng, samples):
    """J(u − v) is extreme for orthogonal atoms; a normalized random point of e^⊥ is extreme only in rank 2."""
    frame = jordan_frame(algebra)
    mismatches = 0
    for _ in range(samples):
        J = sample_jordan_iso(algebra, rng)
        i, j = (int(k) for k in rng.permutation(len(frame))[:2])
        if not extreme_point_check(Functional(J.apply(frame[i].element - frame[j].element))):
            mismatches += 1
        a = class_of(sample_element(algebra, rng)).representative
        phi = Functional(a * (2.0 / dual_norm(Functional(a))))
        if extreme_point_check(phi) != (algebra.rank == 2):
            mismatches += 1
    return float(mismatches)


# ── isometry ──────────────────────────────────────────────────────────────────

@register("isometry", samples=100, tolerance=1e-9)
def check_jordan_iso_sampled(algebra, rng, samples):
    """Sampled isomorphisms fix e, are multiplicative, and invert exactly."""
    worst = 0.0
    identity = np.eye(algebra.dim)
    for _ in range(samples):
        J = sample_jordan_iso(algebra, rng)
        unit_gap, product_gap = jordan_iso_residual(J, samples=4, seed=_child_seed(rng))
        round_trip = float(np.max(np.abs(J.inverse().compose(J).matrix - identity)))
        worst = max(worst, unit_gap, product_gap, round_trip)
    return worst


@register("isometry", samples=100, tolerance=1e-8)
def check_hilbert_isometry_soundness(algebra, rng, samples):
    """f = U_y J(·)^ε preserves d_H (relative to max(1, d))."""
    pairs = HILBERT_PAIRS_PER_MAP
    worst = 0.0
    for _ in range(samples):
        f = sample_hilbert_isometry(algebra, rng)
        for _ in range(pairs):
            r1, r2 = _random_ray(algebra, rng), _random_ray(algebra, rng)
            before = ray_distance(r1, r2)
            after = ray_distance(f(r1), f(r2))
            worst = max(worst, abs(after - before) / max(1.0, before))
    return worst


@register("isometry", samples=100, tolerance=1e-10)
def check_variation_isometry_soundness(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        S = VariationIsometry.from_canonical(rng.sign(), sample_jordan_iso(algebra, rng))
        x = sample_element(algebra, rng)
        before = variation_seminorm(x)
        after = S.apply(class_of(x)).norm
        worst = max(worst, abs(after - before) / max(1.0, before))
    return worst


def _sign_policy_violation(algebra: AlgebraDescriptor, original: int, recovered: int) -> bool:
    """Rank 2 must report ε = +1; elsewhere the sign is rigid."""
    if algebra.rank == 2:
        return recovered != 1
    return recovered != original


@register("isometry", samples=50, tolerance=1e-6)
def check_factor_variation_round_trip(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        epsilon = rng.sign()
        J = sample_jordan_iso(algebra, rng)
        S = VariationIsometry.from_canonical(epsilon, J)
        seed = _child_seed(rng)
        eps_hat, J_hat = factor_variation_isometry(S, algebra, algebra, samples=16, seed=seed)
        if _sign_policy_violation(algebra, epsilon, eps_hat):
            worst = max(worst, 1.0)
        for _ in range(8):
            x = sample_element(algebra, rng)
            gap = variation_seminorm(Element(algebra, S.matrix @ x.coords) - eps_hat * J_hat.apply(x))
            worst = max(worst, gap / max(1.0, variation_seminorm(x)))
    return worst


@register("isometry", samples=50, tolerance=1e-6)
def check_factor_hilbert_round_trip(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        f = sample_hilbert_isometry(algebra, rng, spread=0.5)
        g = factor_hilbert_isometry(f, algebra, algebra, samples=16, seed=_child_seed(rng))
        if _sign_policy_violation(algebra, f.epsilon, g.epsilon):
            worst = max(worst, 1.0)
        for _ in range(8):
            r = _random_ray(algebra, rng)
            worst = max(worst, ray_distance(f(r), g(r)))
    return worst


@register("isometry", samples=50, tolerance=1e-8)
def check_hamhalter_round_trip(algebra, rng, samples):
    worst = 0.0
    for _ in range(samples):
        T = sample_affine_isometry(algebra, rng)
        recovered = hamhalter_decompose(T.matrix, algebra, samples=16, seed=_child_seed(rng))
        scale = max(1.0, float(np.max(np.abs(T.matrix))))
        worst = max(worst, float(np.max(np.abs(recovered.matrix - T.matrix))) / scale)
    return worst


@register("isometry", samples=200, tolerance=1e-9)
def check_affine_isometry_preserves_deviation(algebra, rng, samples):
    """εJ + φ(·)e leaves the maximal deviation unchanged."""
    worst = 0.0
    for _ in range(samples):
        T = sample_affine_isometry(algebra, rng)
        x = sample_element(algebra, rng)
        before = maximal_deviation(x)
        worst = max(worst, abs(maximal_deviation(T.apply(x)) - before) / max(1.0, before))
    return worst


@register("isometry", samples=20, tolerance=1e-8)
def check_conjugation_identity(algebra, rng, samples):
    """ι∘τ∘ι = (+1, y^{-1}, J) pointwise, measured in d_H."""
    iota = inversion_isometry(algebra)
    worst = 0.0
    for _ in range(samples):
        tau = sample_hilbert_isometry(algebra, rng, epsilon=1)
        conjugate = conjugated_projectivity(tau)
        for _ in range(50):
            r = _random_ray(algebra, rng)
            worst = max(worst, ray_distance(iota(tau(iota(r))), conjugate(r)))
    return worst


@register("isometry", samples=20, tolerance=1e-7)
def check_variation_hilbert_correspondence(algebra, rng, samples):
    """exp∘S∘log agrees with g = U_{f(ē)^{-1/2}}∘f."""
    worst = 0.0
    for _ in range(samples):
        f = sample_hilbert_isometry(algebra, rng, spread=0.5)
        S = variation_isometry_from_hilbert(f, algebra, samples=8, seed=_child_seed(rng))
        _, g = unitalized_map(f, algebra)
        for _ in range(10):
            r = _random_ray(algebra, rng)
            via_classes = exp_class(S.apply(log_ray(r)))
            worst = max(worst, ray_distance(via_classes, g(r)))
    return worst


@register("isometry", samples=20, tolerance=1e-7)
def check_group_law(algebra, rng, samples):
    """compose_hilbert matches pointwise composition; ι² = id; conjugating twice is the identity."""
    iota = inversion_isometry(algebra)
    worst = 0.0
    for _ in range(samples):
        f = sample_hilbert_isometry(algebra, rng, spread=0.5)
        g = sample_hilbert_isometry(algebra, rng, spread=0.5)
        h = compose_hilbert(f, g)
        tau = sample_hilbert_isometry(algebra, rng, epsilon=1, spread=0.5)
        twice = conjugated_projectivity(conjugated_projectivity(tau))
        for _ in range(5):
            r = _random_ray(algebra, rng)
            worst = max(
                worst,
                ray_distance(h(r), f(g(r))),
                ray_distance(iota(iota(r)), r),
                ray_distance(twice(r), tau(r)),
            )
    return worst


@register("isometry", samples=16, tolerance=0.0)
def check_dichotomy(algebra, rng, samples):
    """The group verdict, the inversion-linearity test and the atom criteria coincide."""
    expected = classify_isometry_group(algebra) is IsometryGroupClass.PROJECTIVITIES_ONLY
    verdicts = [
        inversion_is_linear_up_to_scale(algebra, samples=max(3, samples), seed=_child_seed(rng)),
        atom_coatom_criterion(algebra),
        two_atoms_join_to_unit(algebra),
        max_spectrum_size(algebra) == 2,
    ]
    return float(sum(v != expected for v in verdicts))
