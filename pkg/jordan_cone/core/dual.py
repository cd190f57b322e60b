"""
dual.py — Functionals, states, support projections and faces of the dual ball for JordanCone

Every functional is stored by its trace representer a, acting as φ(x) = ⟨a, x⟩.
The base norm, the positive/negative split and the support projection are all
read off the spectral decomposition of a.

Faces: for orthogonal nonzero projections p, q the set F_p − F_q lies in the
scaled dual-ball slice 2B_{e^⊥}, where F_p is the set of states with φ(p) = 1.
The maximal proper faces are G_p = F_p − F_{p^⊥}.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.spatial import HalfspaceIntersection

from jordan_cone.core.algebra import (
    AlgebraDescriptor,
    Element,
    Projection,
    Variant,
    jordan_product,
    quadratic_rep,
    square,
    trace,
    trace_inner_product,
    unit,
    zero,
)
from jordan_cone.core.errors import InvalidFace, InvariantViolation, NotInHyperplane, NotPositive
from jordan_cone.core.sampling import Rng, sample_interior, sample_projection
from jordan_cone.core.spectral import (
    ElementClass,
    class_of,
    maximal_deviation,
    min_eigenvalue,
    order_unit_norm,
    primitive_eigenvalues,
    primitive_frame,
    spectral_decomposition,
)
from jordan_cone.core.tolerances import TOL_BOUNDARY, TOL_HYPERPLANE, TOL_IDEM, TOL_POSITIVE

log = logging.getLogger(__name__)

# Agreement tolerance for the norm-based orthogonality test and sampled diameters.
NORM_TOL = 1e-8

# Eigenvalues of a representer treated as zero in the extreme-point test.
_EXTREME_TOL = 1e-9


# ── Types ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Functional:
    """φ(x) = ⟨a, x⟩ for the representer a."""
    representer: Element

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.representer.algebra

    def __call__(self, x: Element) -> float:
        return trace_inner_product(self.representer, x)

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.representer + other.representer)

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(self.representer - other.representer)

    def __mul__(self, scalar: float) -> "Functional":
        return Functional(self.representer * scalar)

    __rmul__ = __mul__

    def at_unit(self) -> float:
        """φ(e)."""
        return trace(self.representer)

    def to_dict(self) -> dict:
        return {"representer": self.representer.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "Functional":
        if isinstance(data, dict) and "representer" in data:
            return cls(Element.from_dict(data["representer"]))
        return cls(Element.from_dict(data))

    @classmethod
    def zero(cls, algebra: AlgebraDescriptor) -> "Functional":
        return cls(zero(algebra))


@dataclass(frozen=True)
class StateDescriptor:
    """A positive functional with φ(e) = 1; pure iff its representer is an atom."""
    functional: Functional
    is_pure: bool

    def to_dict(self) -> dict:
        return {**self.functional.to_dict(), "is_pure": self.is_pure}


def state_of(phi: Functional, tol: float = 1e-9) -> StateDescriptor:
    """Certify φ as a state and decide purity."""
    _require_positive(phi)
    value = phi.at_unit()
    if abs(value - 1.0) > tol:
        raise NotPositive(f"a state needs φ(e) = 1, got {value:.12g}")
    decomposition = spectral_decomposition(phi.representer)
    support = [c for lam, c in zip(decomposition.eigenvalues, decomposition.idempotents) if lam > _support_cut(phi)]
    return StateDescriptor(phi, len(support) == 1 and support[0].is_atom)


@dataclass(frozen=True)
class FaceDescriptor:
    """F_p − F_q for orthogonal nonzero projections p, q."""
    p: Projection
    q: Projection

    def __post_init__(self):
        if self.p.algebra != self.q.algebra:
            raise InvalidFace(f"p in {self.p.algebra.label}, q in {self.q.algebra.label}")
        if self.p.rank == 0 or self.q.rank == 0:
            raise InvalidFace("both projections of a face must be nonzero")
        overlap = order_unit_norm(jordan_product(self.p.element, self.q.element))
        if overlap > TOL_IDEM:
            raise InvalidFace(f"p and q are not orthogonal (‖p∘q‖ = {overlap:.3e})")

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.p.algebra

    @property
    def maximal(self) -> bool:
        """q = p^⊥, i.e. this is G_p."""
        return self.p.rank + self.q.rank == self.algebra.rank

    def to_dict(self) -> dict:
        return {"p": self.p.element.to_dict(), "q": self.q.element.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "FaceDescriptor":
        if not isinstance(data, dict) or "p" not in data:
            raise InvalidFace("face must be an object with 'p' and optionally 'q'")
        p = Projection.certify(Element.from_dict(data["p"]))
        if data.get("q") is None:
            return maximal_face(p)
        return cls(p, Projection.certify(Element.from_dict(data["q"])))


# ── Norm and decomposition ────────────────────────────────────────────────────

def dual_norm(phi: Functional) -> float:
    """Base norm: Σ |μ_k| over the eigenvalues of the representer, with multiplicity."""
    return float(np.sum(np.abs(primitive_eigenvalues(phi.representer))))


def orthogonal_decomposition(phi: Functional) -> tuple[Functional, Functional]:
    """φ = φ⁺ − φ⁻ with positive parts on orthogonal supports."""
    algebra = phi.algebra
    positive, negative = np.zeros(algebra.dim), np.zeros(algebra.dim)
    decomposition = spectral_decomposition(phi.representer)
    for lam, c in zip(decomposition.eigenvalues, decomposition.idempotents):
        if lam > 0:
            positive += lam * c.element.coords
        elif lam < 0:
            negative -= lam * c.element.coords
    return Functional(Element(algebra, positive)), Functional(Element(algebra, negative))


def is_positive(phi: Functional) -> bool:
    a = phi.representer
    return min_eigenvalue(a) >= -TOL_POSITIVE * max(1.0, order_unit_norm(a))


def _require_positive(phi: Functional) -> None:
    if not is_positive(phi):
        raise NotPositive(f"representer has min eigenvalue {min_eigenvalue(phi.representer):.3e}")


def _support_cut(phi: Functional) -> float:
    return TOL_BOUNDARY * max(1.0, order_unit_norm(phi.representer))


def support_projection(phi: Functional) -> Projection:
    """s(φ): the sum of the spectral idempotents of the representer with μ > 0."""
    _require_positive(phi)
    cut = _support_cut(phi)
    coords = np.zeros(phi.algebra.dim)
    rank = 0
    decomposition = spectral_decomposition(phi.representer)
    for lam, c in zip(decomposition.eigenvalues, decomposition.idempotents):
        if lam > cut:
            coords += c.element.coords
            rank += c.rank
    return Projection.trusted(Element(phi.algebra, coords), rank)


def functionals_orthogonal(phi: Functional, psi: Functional) -> bool:
    """φ ⊥ ψ, decided by s(φ)∘s(ψ) = 0."""
    product = jordan_product(support_projection(phi).element, support_projection(psi).element)
    return order_unit_norm(product) <= TOL_IDEM


def orthogonal_by_norm(phi: Functional, psi: Functional, tol: float = NORM_TOL) -> bool:
    """φ ⊥ ψ, decided by ‖φ − ψ‖ = ‖φ‖ + ‖ψ‖."""
    gap = dual_norm(phi) + dual_norm(psi) - dual_norm(phi - psi)
    return abs(gap) <= tol * max(1.0, dual_norm(phi) + dual_norm(psi))


def extreme_point_check(phi: Functional) -> bool:
    """Is φ ∈ e^⊥ an extreme point of 2B_{e^⊥}, i.e. u − v for orthogonal atoms?"""
    a = phi.representer
    scale = max(1.0, order_unit_norm(a))
    if abs(phi.at_unit()) > TOL_HYPERPLANE * scale:
        raise NotInHyperplane(f"φ(e) = {phi.at_unit():.3e} is not zero")
    decomposition = spectral_decomposition(a)
    blocks = [
        (lam, c) for lam, c in zip(decomposition.eigenvalues, decomposition.idempotents)
        if abs(lam) > _EXTREME_TOL * scale
    ]
    if len(blocks) != 2:
        return False
    (low, c_low), (high, c_high) = blocks
    return (
        c_low.is_atom and c_high.is_atom
        and abs(low + 1.0) <= _EXTREME_TOL and abs(high - 1.0) <= _EXTREME_TOL
    )


# ── Projection lattice ────────────────────────────────────────────────────────

def projection_join(p: Projection, q: Projection) -> Projection:
    """p ∨ q as the support of p + q."""
    return support_projection(Functional(p.element + q.element))


def projection_leq(p: Projection, q: Projection, tol: float = TOL_IDEM) -> bool:
    """p ≤ q ⟺ p∘q = p."""
    return order_unit_norm(jordan_product(p.element, q.element) - p.element) <= tol


def complement(p: Projection) -> Projection:
    return p.complement()


# ── State samplers ────────────────────────────────────────────────────────────

def sample_state_on(p: Projection, rng: Rng) -> Functional:
    """A random state in F_p: representer U_p(w) / ⟨U_p(w), e⟩ for interior w."""
    if p.rank == 0:
        raise InvalidFace("F_0 is empty")
    compressed = quadratic_rep(p.element, sample_interior(p.algebra, rng))
    return Functional(compressed / trace(compressed))


def sample_positive_functional(algebra: AlgebraDescriptor, rng: Rng) -> Functional:
    """A random positive functional; half the draws are compressed onto a random projection."""
    w = sample_interior(algebra, rng)
    if rng.coin():
        w = quadratic_rep(sample_projection(algebra, rng).element, w)
    return Functional(w)


def pure_state(u: Projection) -> Functional:
    """û: the pure state supported on the atom u."""
    if not u.is_atom:
        raise InvalidFace("pure states live on atoms")
    return Functional(u.element)


# ── Deviation ─────────────────────────────────────────────────────────────────

def deviation_under(phi: Functional, x: Element) -> float:
    """(φ(x²) − φ(x)²)^{1/2} for a state φ."""
    _require_positive(phi)
    # centred form: φ((x − φ(x)e)²) equals the variance when φ(e) = 1
    centred = x - phi(x) * unit(x.algebra)
    return float(np.sqrt(max(phi(square(centred)), 0.0)))


def deviation_witness(x: Element) -> Functional:
    """½(û_min + û_max) over atoms of the extreme eigenvalues; attains the maximal deviation."""
    frame = primitive_frame(x)
    low, high = frame[0][1], frame[-1][1]
    return Functional(0.5 * (low.element + high.element))


def sampled_maximal_deviation(x: Element, samples: int = 64, seed: int = 0) -> float:
    """Largest deviation over random states and the witness state; cross-check for maximal_deviation."""
    rng = Rng(seed)
    whole = Projection.trusted(unit(x.algebra), x.algebra.rank)
    best = deviation_under(deviation_witness(x), x)
    for _ in range(samples):
        best = max(best, deviation_under(sample_state_on(whole, rng), x))
    exact = maximal_deviation(x)
    if best > exact + NORM_TOL * max(1.0, order_unit_norm(x)):
        raise InvariantViolation(f"a state reaches deviation {best:.12g} above the closed form {exact:.12g}")
    return best


# ── Faces ─────────────────────────────────────────────────────────────────────

def maximal_face(p: Projection) -> FaceDescriptor:
    """G_p = F_p − F_{p^⊥}; p must be nontrivial."""
    if p.is_trivial:
        raise InvalidFace("G_p needs a nontrivial projection")
    return FaceDescriptor(p, p.complement())


def is_maximal_face(fd: FaceDescriptor) -> bool:
    return fd.maximal


def sample_face_element(fd: FaceDescriptor, rng: Rng) -> Functional:
    return sample_state_on(fd.p, rng) - sample_state_on(fd.q, rng)


def face_contains(fd: FaceDescriptor, phi: Functional, tol: float = 1e-8) -> bool:
    """φ ∈ F_p − F_q: the positive part lives under p, the negative under q, both of mass 1."""
    positive, negative = orthogonal_decomposition(phi)
    scale = max(1.0, order_unit_norm(phi.representer))
    a_pos, a_neg = positive.representer, negative.representer
    inside_p = order_unit_norm(quadratic_rep(fd.p.element, a_pos) - a_pos) <= tol * scale
    inside_q = order_unit_norm(quadratic_rep(fd.q.element, a_neg) - a_neg) <= tol * scale
    masses = abs(trace(a_pos) - 1.0) <= tol * scale and abs(trace(a_neg) - 1.0) <= tol * scale
    return inside_p and inside_q and masses


def _atom_split(p: Projection) -> tuple[Projection, Projection]:
    """p = u + (p − u) with u an atom."""
    atoms = [u for lam, u in primitive_frame(p.element) if lam > 0.5]
    u = atoms[-1]
    return u, Projection.trusted(p.element - u.element, p.rank - 1)


def diameter_witness(fd: FaceDescriptor) -> tuple[Functional, Functional] | None:
    """
    Two points of F_p − F_q at base-norm distance 4, or None when p or q is an atom.
    Split p = p₁ + p₂, q = q₁ + q₂ and take φ_i, ψ_i states on p_i, q_i: then
    (φ₁ − ψ₁) − (φ₂ − ψ₂) = (φ₁ + ψ₂) − (φ₂ + ψ₁) has orthogonal parts of mass 2.
    """
    if fd.p.is_atom or fd.q.is_atom:
        return None
    p1, p2 = _atom_split(fd.p)
    q1, q2 = _atom_split(fd.q)

    def state(c: Projection) -> Functional:
        return Functional(c.element / c.rank)

    return state(p1) - state(q1), state(p2) - state(q2)


def sampled_face_diameter(fd: FaceDescriptor, samples: int = 64, seed: int = 0) -> float:
    """Largest base-norm distance among sampled points of F_p − F_q (witness included)."""
    rng = Rng(seed)
    diameter = 0.0
    witness = diameter_witness(fd)
    if witness is not None:
        diameter = dual_norm(witness[0] - witness[1])
    for _ in range(samples):
        first, second = sample_face_element(fd, rng), sample_face_element(fd, rng)
        diameter = max(diameter, dual_norm(first - second))
    return diameter


def face_diameter_le_2(fd: FaceDescriptor, samples: int = 64, seed: int = 0) -> bool:
    """diam(F_p − F_q) ≤ 2 ⟺ p or q is an atom. Raises InvariantViolation when sampling disagrees."""
    verdict = fd.p.is_atom or fd.q.is_atom
    sampled = sampled_face_diameter(fd, samples, seed)
    log.debug("face diameter: verdict %s, sampled %.6f", verdict, sampled)
    if (sampled <= 2.0 + NORM_TOL) != verdict:
        raise InvariantViolation(
            f"face diameter: structural verdict {verdict} but sampled diameter {sampled:.6f} "
            f"(p rank {fd.p.rank}, q rank {fd.q.rank})"
        )
    return verdict


def norming_class_of_face(fd: FaceDescriptor) -> ElementClass:
    """[p]: the unique projection class with value 1 on all of G_p."""
    if not fd.maximal:
        raise InvalidFace("the norming class is defined for maximal faces G_p")
    if fd.p.is_trivial:
        raise InvalidFace("G_p needs a nontrivial projection")
    return class_of(fd.p.element)


def face_value(q: Projection, phi: Functional) -> float:
    """φ(½(q − q^⊥))."""
    e = unit(q.algebra)
    return phi(q.element - 0.5 * e)


def attains_norm_on_face(q: Projection, fd: FaceDescriptor, samples: int = 64, seed: int = 0,
                         tol: float = 1e-9) -> bool:
    """Does [q] evaluate to 1 on sampled points of the face (pure-state corners included)?"""
    rng = Rng(seed)
    points = []
    for p_atom in (lam_u[1] for lam_u in primitive_frame(fd.p.element) if lam_u[0] > 0.5):
        for q_atom in (lam_u[1] for lam_u in primitive_frame(fd.q.element) if lam_u[0] > 0.5):
            points.append(pure_state(p_atom) - pure_state(q_atom))
    points.extend(sample_face_element(fd, rng) for _ in range(samples))
    return all(abs(face_value(q, phi) - 1.0) <= tol for phi in points)


# ── Exhaustive oracles on Diagonal(n) ─────────────────────────────────────────

def _sign_vectors(n: int) -> np.ndarray:
    d = np.arange(2 ** n)
    return 2 * ((d[:, None] & (1 << np.arange(n))) > 0).astype(int) - 1


def dual_norm_bruteforce_diagonal(phi: Functional) -> float:
    """max φ(2p − e) over all 2ⁿ projections of Diagonal(n)."""
    algebra = phi.algebra
    if algebra.variant is not Variant.DIAGONAL:
        raise ValueError("the brute-force oracle only covers Diagonal(n)")
    return float(np.max(_sign_vectors(algebra.n) @ phi.representer.coords))


def dual_ball_vertices_diagonal(n: int) -> list[Functional]:
    """
    Vertices of 2B_{e^⊥} ⊂ Diagonal(n)* by halfspace intersection, for n ≤ 4.
    The slice {a : Σ a_k = 0, Σ |a_k| ≤ 2} is written in an orthonormal basis of
    e^⊥ with one halfspace s·a ≤ 2 per sign vector s.
    """
    if not 2 <= n <= 4:
        raise ValueError("vertex enumeration is limited to Diagonal(2..4)")
    algebra = AlgebraDescriptor.diagonal(n)
    basis = null_space(np.ones((1, n)))

    if n == 2:
        # e^⊥ is a line; the segment's ends are ±(δ₁ − δ₂).
        endpoint = basis[:, 0] * (2.0 / np.sum(np.abs(basis[:, 0])))
        points = [endpoint, -endpoint]
    else:
        normals = _sign_vectors(n) @ basis
        keep = np.linalg.norm(normals, axis=1) > 1e-12
        halfspaces = np.hstack((normals[keep], np.full((int(keep.sum()), 1), -2.0)))
        intersection = HalfspaceIntersection(halfspaces, np.zeros(n - 1))
        points = [basis @ t for t in intersection.intersections]

    unique: list[np.ndarray] = []
    for point in points:
        if not any(np.allclose(point, seen, atol=1e-9) for seen in unique):
            unique.append(point)
    unique.sort(key=lambda a: tuple(np.round(a, 9)))
    return [Functional(Element(algebra, np.round(a, 12) + 0.0)) for a in unique]


def every_orthogonal_pair(algebra: AlgebraDescriptor) -> list[tuple[Projection, Projection]]:
    """All ordered pairs (p, q) of nonzero orthogonal diagonal projections of Diagonal(n)."""
    if algebra.variant is not Variant.DIAGONAL:
        raise ValueError("exhaustive pair enumeration only covers Diagonal(n)")
    n = algebra.n
    pairs = []
    for labels in itertools.product((0, 1, 2), repeat=n):
        p = np.array([1.0 if k == 1 else 0.0 for k in labels])
        q = np.array([1.0 if k == 2 else 0.0 for k in labels])
        if p.any() and q.any():
            pairs.append((
                Projection.trusted(Element(algebra, p), int(p.sum())),
                Projection.trusted(Element(algebra, q), int(q.sum())),
            ))
    return pairs


def every_projection(algebra: AlgebraDescriptor) -> list[Projection]:
    """All 2ⁿ − 2 nontrivial projections of Diagonal(n)."""
    if algebra.variant is not Variant.DIAGONAL:
        raise ValueError("exhaustive projection enumeration only covers Diagonal(n)")
    result = []
    for bits in itertools.product((0.0, 1.0), repeat=algebra.n):
        rank = int(sum(bits))
        if 0 < rank < algebra.n:
            result.append(Projection.trusted(Element(algebra, np.array(bits)), rank))
    return result
