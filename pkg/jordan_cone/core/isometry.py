"""
isometry.py — Jordan isomorphisms and the isometry types built on them for JordanCone

    JordanIsomorphism        automorphism of one algebra (permutation, orthogonal
                             action on the vector part, orthogonal conjugation,
                             or a summand bijection with component isomorphisms)
    HilbertIsometry          f(x̄) = U_y J(x^ε) on rays of the cone interior
    VariationIsometry        linear map acting on classes modulo ℝe
    AffineVariationIsometry  Tx = εJx + φ(x)e

Factorization of black-box maps lives in factorization.py.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable

import numpy as np

from jordan_cone.core.algebra import (
    AlgebraDescriptor,
    Element,
    Variant,
    atom_spanning_set,
    basis,
    jordan_frame,
    jordan_product,
    quadratic_rep,
    sym_pack,
    sym_unpack,
    trace_weights,
    unit,
)
from jordan_cone.core.cone import Ray, in_cone_interior, ray_of
from jordan_cone.core.dual import Functional, projection_join
from jordan_cone.core.errors import AlgebraMismatch, EvaluationBudgetExceeded, InvalidIsometry
from jordan_cone.core.sampling import Rng, sample_element
from jordan_cone.core.spectral import (
    ElementClass,
    class_of,
    exp_el,
    order_unit_norm,
    power,
    primitive_eigenvalues,
)

log = logging.getLogger(__name__)

_ORTH_TOL = 1e-9


def _check_sign(epsilon) -> int:
    if epsilon not in (1, -1):
        raise InvalidIsometry(f"ε must be +1 or -1, got {epsilon!r}")
    return int(epsilon)


# ── Jordan isomorphisms ───────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class JordanIsomorphism:
    """
    Automorphism of *algebra*. Exactly one payload is set, by variant:
    perm (Diagonal; coordinate i moves to perm[i]), orth (Spin: acts on the
    vector part; SymMatrix: X ↦ u X uᵀ), or summand_map + components
    (DirectSum: summand i goes to summand_map[i] through components[i]).
    """
    algebra: AlgebraDescriptor
    perm: tuple[int, ...] | None = None
    orth: np.ndarray | None = None
    summand_map: tuple[int, ...] | None = None
    components: tuple["JordanIsomorphism", ...] = ()

    def __post_init__(self):
        variant = self.algebra.variant
        if variant is Variant.DIAGONAL:
            if self.perm is None or sorted(self.perm) != list(range(self.algebra.n)):
                raise InvalidIsometry(f"{self.algebra.label} needs a permutation of 0..{self.algebra.n - 1}")
            object.__setattr__(self, "perm", tuple(int(k) for k in self.perm))
        elif variant in (Variant.SPIN, Variant.SYM):
            if self.orth is None:
                raise InvalidIsometry(f"{self.algebra.label} needs an orthogonal matrix")
            orth = np.array(self.orth, dtype=float)
            n = self.algebra.n
            if orth.shape != (n, n):
                raise InvalidIsometry(f"orthogonal matrix must be {n}×{n}, got {orth.shape}")
            if np.max(np.abs(orth.T @ orth - np.eye(n))) > _ORTH_TOL:
                raise InvalidIsometry("matrix is not orthogonal")
            orth.flags.writeable = False
            object.__setattr__(self, "orth", orth)
        else:
            summands = self.algebra.summands
            mapping = tuple(int(k) for k in (self.summand_map or ()))
            if sorted(mapping) != list(range(len(summands))):
                raise InvalidIsometry("summand_map must be a bijection of summand positions")
            for i, j in enumerate(mapping):
                if summands[i] != summands[j]:
                    raise InvalidIsometry(
                        f"summand {i} ({summands[i].label}) cannot map to {j} ({summands[j].label})"
                    )
            if len(self.components) != len(summands) or any(
                c.algebra != part for c, part in zip(self.components, summands)
            ):
                raise InvalidIsometry("one component isomorphism per summand is required")
            object.__setattr__(self, "summand_map", mapping)
            object.__setattr__(self, "components", tuple(self.components))

    # ── Construction ──────────────────────────────────────────────────────────

    @classmethod
    def identity(cls, algebra: AlgebraDescriptor) -> "JordanIsomorphism":
        variant = algebra.variant
        if variant is Variant.DIAGONAL:
            return cls(algebra, perm=tuple(range(algebra.n)))
        if variant in (Variant.SPIN, Variant.SYM):
            return cls(algebra, orth=np.eye(algebra.n))
        return cls(
            algebra,
            summand_map=tuple(range(len(algebra.summands))),
            components=tuple(cls.identity(part) for part in algebra.summands),
        )

    # ── Action ────────────────────────────────────────────────────────────────

    def apply_coords(self, a: np.ndarray) -> np.ndarray:
        variant = self.algebra.variant
        if variant is Variant.DIAGONAL:
            out = np.empty_like(a)
            out[list(self.perm)] = a
            return out
        if variant is Variant.SPIN:
            return np.concatenate((self.orth @ a[:-1], a[-1:]))
        if variant is Variant.SYM:
            x = sym_unpack(a, self.algebra.n)
            return sym_pack(self.orth @ x @ self.orth.T)
        out = np.empty_like(a)
        offsets = self.algebra.offsets
        for i, (j, comp) in enumerate(zip(self.summand_map, self.components)):
            lo, hi = offsets[i]
            dst_lo, dst_hi = offsets[j]
            out[dst_lo:dst_hi] = comp.apply_coords(a[lo:hi])
        return out

    def apply(self, x: Element) -> Element:
        if x.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra.label} isomorphism applied to {x.algebra.label}")
        return Element(self.algebra, self.apply_coords(x.coords))

    @cached_property
    def matrix(self) -> np.ndarray:
        """Coordinate matrix of J (columns are images of the standard basis)."""
        return np.column_stack([self.apply_coords(b.coords) for b in basis(self.algebra)])

    def inverse(self) -> "JordanIsomorphism":
        variant = self.algebra.variant
        if variant is Variant.DIAGONAL:
            inv = [0] * self.algebra.n
            for i, j in enumerate(self.perm):
                inv[j] = i
            return JordanIsomorphism(self.algebra, perm=tuple(inv))
        if variant in (Variant.SPIN, Variant.SYM):
            return JordanIsomorphism(self.algebra, orth=self.orth.T.copy())
        inv_map = [0] * len(self.summand_map)
        inv_components = [None] * len(self.summand_map)
        for i, j in enumerate(self.summand_map):
            inv_map[j] = i
            inv_components[j] = self.components[i].inverse()
        return JordanIsomorphism(self.algebra, summand_map=tuple(inv_map), components=tuple(inv_components))

    def compose(self, other: "JordanIsomorphism") -> "JordanIsomorphism":
        """self ∘ other."""
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra.label} vs {other.algebra.label}")
        variant = self.algebra.variant
        if variant is Variant.DIAGONAL:
            return JordanIsomorphism(self.algebra, perm=tuple(self.perm[k] for k in other.perm))
        if variant in (Variant.SPIN, Variant.SYM):
            return JordanIsomorphism(self.algebra, orth=self.orth @ other.orth)
        mapping, comps = [], []
        for i, j in enumerate(other.summand_map):
            mapping.append(self.summand_map[j])
            comps.append(self.components[j].compose(other.components[i]))
        return JordanIsomorphism(self.algebra, summand_map=tuple(mapping), components=tuple(comps))

    # ── Serialization ─────────────────────────────────────────────────────────

    def to_dict(self) -> dict:
        data = {"variant": self.algebra.variant.value, "algebra": self.algebra.to_dict()}
        variant = self.algebra.variant
        if variant is Variant.DIAGONAL:
            data["perm"] = list(self.perm)
        elif variant in (Variant.SPIN, Variant.SYM):
            data["orth"] = self.orth.tolist()
        else:
            data["summand_map"] = list(self.summand_map)
            data["components"] = [c.to_dict() for c in self.components]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "JordanIsomorphism":
        if not isinstance(data, dict) or "algebra" not in data:
            raise InvalidIsometry("jordan isomorphism must be an object with 'algebra'")
        algebra = AlgebraDescriptor.from_dict(data["algebra"])
        if data.get("variant", algebra.variant.value) != algebra.variant.value:
            raise InvalidIsometry(f"variant {data['variant']!r} disagrees with {algebra.label}")
        if algebra.variant is Variant.DIAGONAL:
            return cls(algebra, perm=tuple(data.get("perm") or ()))
        if algebra.variant in (Variant.SPIN, Variant.SYM):
            return cls(algebra, orth=np.array(data.get("orth"), dtype=float))
        return cls(
            algebra,
            summand_map=tuple(data.get("summand_map") or ()),
            components=tuple(cls.from_dict(c) for c in data.get("components") or ()),
        )


def apply_jordan_iso(J: JordanIsomorphism, x: Element) -> Element:
    return J.apply(x)


def jordan_iso_residual(J: JordanIsomorphism, samples: int = 32, seed: int = 0) -> tuple[float, float]:
    """(‖J(e) − e‖, max relative ‖J(x∘y) − J(x)∘J(y)‖ over random pairs)."""
    e = unit(J.algebra)
    unit_gap = order_unit_norm(J.apply(e) - e)
    rng = Rng(seed)
    worst = 0.0
    for _ in range(samples):
        x, y = sample_element(J.algebra, rng), sample_element(J.algebra, rng)
        gap = order_unit_norm(J.apply(jordan_product(x, y)) - jordan_product(J.apply(x), J.apply(y)))
        worst = max(worst, gap / max(1.0, order_unit_norm(x) * order_unit_norm(y)))
    return unit_gap, worst


def verify_jordan_iso(J: JordanIsomorphism, samples: int = 32, seed: int = 0) -> bool:
    """J(e) = e within 1e-12 and J(x∘y) = J(x)∘J(y) within 1e-9 on random pairs."""
    unit_gap, product_gap = jordan_iso_residual(J, samples, seed)
    log.debug("%s: J(e) gap %.1e, product gap %.1e", J.algebra.label, unit_gap, product_gap)
    return unit_gap <= 1e-12 and product_gap <= 1e-9


def sample_jordan_iso(algebra: AlgebraDescriptor, rng: Rng) -> JordanIsomorphism:
    """Random permutation or Haar orthogonal factor per variant; isomorphic summands are shuffled."""
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        return JordanIsomorphism(algebra, perm=tuple(int(k) for k in rng.permutation(algebra.n)))
    if variant in (Variant.SPIN, Variant.SYM):
        return JordanIsomorphism(algebra, orth=rng.orthogonal(algebra.n))

    summands = algebra.summands
    mapping = [0] * len(summands)
    for part in dict.fromkeys(summands):
        positions = [k for k, other in enumerate(summands) if other == part]
        shuffled = [positions[k] for k in rng.permutation(len(positions))]
        for src, dst in zip(positions, shuffled):
            mapping[src] = dst
    components = tuple(sample_jordan_iso(part, rng) for part in summands)
    return JordanIsomorphism(algebra, summand_map=tuple(mapping), components=components)


# ── Hilbert-metric isometries ─────────────────────────────────────────────────

@dataclass(frozen=True)
class HilbertIsometry:
    """f(x̄) = U_y J(x^ε)‾."""
    epsilon: int
    y: Element
    J: JordanIsomorphism

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _check_sign(self.epsilon))
        if self.y.algebra != self.J.algebra:
            raise AlgebraMismatch(f"y in {self.y.algebra.label}, J on {self.J.algebra.label}")
        if not in_cone_interior(self.y):
            raise InvalidIsometry("y must lie in the cone interior")

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.J.algebra

    def __call__(self, r: Ray) -> Ray:
        return apply_hilbert_isometry(self, r)

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "y": self.y.to_dict(), "J": self.J.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "HilbertIsometry":
        try:
            return cls(data["epsilon"], Element.from_dict(data["y"]), JordanIsomorphism.from_dict(data["J"]))
        except (KeyError, TypeError) as exc:
            raise InvalidIsometry(f"hilbert isometry needs epsilon, y and J: {exc}") from None


def apply_hilbert_isometry(f: HilbertIsometry, r: Ray) -> Ray:
    if r.algebra != f.algebra:
        raise AlgebraMismatch(f"{f.algebra.label} isometry applied to a ray of {r.algebra.label}")
    x = r.representative
    if f.epsilon == -1:
        x = power(x, -1)
    return ray_of(quadratic_rep(f.y, f.J.apply(x)))


def inversion_isometry(algebra: AlgebraDescriptor) -> HilbertIsometry:
    """ι = (−1, e, id), the generator of the C₂ factor."""
    return HilbertIsometry(-1, unit(algebra), JordanIsomorphism.identity(algebra))


def conjugated_projectivity(tau: HilbertIsometry) -> HilbertIsometry:
    """ι∘τ∘ι for a projectivity τ = (+1, y, J) is (+1, y^{-1}, J)."""
    if tau.epsilon != 1:
        raise InvalidIsometry("conjugation by ι is defined here for projectivities (ε = +1)")
    return HilbertIsometry(1, power(tau.y, -1), tau.J)


def sample_hilbert_isometry(algebra: AlgebraDescriptor, rng: Rng, epsilon: int | None = None,
                            spread: float = 1.0) -> HilbertIsometry:
    """Random (ε, y, J); y = exp of a normal element scaled by *spread*."""
    sign = rng.sign() if epsilon is None else _check_sign(epsilon)
    y = exp_el(sample_element(algebra, rng, scale=spread))
    return HilbertIsometry(sign, y, sample_jordan_iso(algebra, rng))


# ── Variation-norm isometries ─────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class VariationIsometry:
    """Linear map on coordinates, read on classes modulo ℝe; canonical when (ε, J) is known."""
    matrix: np.ndarray
    algebra: AlgebraDescriptor
    canonical: tuple[int, JordanIsomorphism] | None = None

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.shape != (self.algebra.dim, self.algebra.dim):
            raise InvalidIsometry(f"matrix must be {self.algebra.dim}×{self.algebra.dim}, got {matrix.shape}")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_canonical(cls, epsilon: int, J: JordanIsomorphism) -> "VariationIsometry":
        sign = _check_sign(epsilon)
        return cls(sign * J.matrix, J.algebra, (sign, J))

    def apply(self, cls_: ElementClass) -> ElementClass:
        return class_of(Element(self.algebra, self.matrix @ cls_.representative.coords))

    def to_dict(self) -> dict:
        data = {"algebra": self.algebra.to_dict(), "matrix": self.matrix.tolist()}
        if self.canonical is not None:
            data["epsilon"] = self.canonical[0]
            data["J"] = self.canonical[1].to_dict()
        return data


@dataclass(frozen=True)
class AffineVariationIsometry:
    """Tx = εJx + φ(x)e."""
    epsilon: int
    J: JordanIsomorphism
    phi: Functional

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _check_sign(self.epsilon))
        if self.phi.algebra != self.J.algebra:
            raise AlgebraMismatch(f"φ on {self.phi.algebra.label}, J on {self.J.algebra.label}")

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.J.algebra

    def apply(self, x: Element) -> Element:
        return self.epsilon * self.J.apply(x) + self.phi(x) * unit(self.algebra)

    @property
    def matrix(self) -> np.ndarray:
        algebra = self.algebra
        row = trace_weights(algebra) * self.phi.representer.coords
        return self.epsilon * self.J.matrix + np.outer(unit(algebra).coords, row)

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "J": self.J.to_dict(), "phi": self.phi.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "AffineVariationIsometry":
        try:
            return cls(data["epsilon"], JordanIsomorphism.from_dict(data["J"]), Functional.from_dict(data["phi"]))
        except (KeyError, TypeError) as exc:
            raise InvalidIsometry(f"affine isometry needs epsilon, J and phi: {exc}") from None


def sample_affine_isometry(algebra: AlgebraDescriptor, rng: Rng, epsilon: int | None = None) -> AffineVariationIsometry:
    sign = rng.sign() if epsilon is None else _check_sign(epsilon)
    J = sample_jordan_iso(algebra, rng)
    return AffineVariationIsometry(sign, J, Functional(sample_element(algebra, rng)))


# ── Black-box maps ────────────────────────────────────────────────────────────

class BlackBoxRayMap:
    """A ray map known only through evaluations, with an evaluation budget."""

    def __init__(self, fn: Callable[[Ray], Ray], algebra: AlgebraDescriptor, budget: int | None = None):
        self.fn = fn
        self.algebra = algebra
        self.budget = budget if budget is not None else algebra.dim ** 2 + 1000
        self.evaluations = 0

    def __call__(self, r: Ray) -> Ray:
        self.evaluations += 1
        if self.evaluations > self.budget:
            raise EvaluationBudgetExceeded(f"ray map evaluated more than {self.budget} times")
        return self.fn(r)


class BlackBoxLinearMap:
    """A linear map on coordinates known only through evaluations, with an evaluation budget."""

    def __init__(self, fn: Callable[[Element], Element], algebra: AlgebraDescriptor, budget: int | None = None):
        self.fn = fn
        self.algebra = algebra
        self.budget = budget if budget is not None else algebra.dim ** 2 + 1000
        self.evaluations = 0

    def __call__(self, x: Element) -> Element:
        self.evaluations += 1
        if self.evaluations > self.budget:
            raise EvaluationBudgetExceeded(f"linear map evaluated more than {self.budget} times")
        return self.fn(x)

    def materialize(self) -> np.ndarray:
        """Coordinate matrix from one evaluation per basis vector."""
        return np.column_stack([self(b).coords for b in basis(self.algebra)])


# ── Isometry group ────────────────────────────────────────────────────────────

class IsometryGroupClass(str, Enum):
    PROJECTIVITIES_ONLY = "ProjectivitiesOnly"
    SEMIDIRECT_WITH_C2  = "SemidirectWithC2"


def classify_isometry_group(algebra: AlgebraDescriptor) -> IsometryGroupClass:
    """
    Isom = Proj(A₊) exactly for ℝ² and spin factors (the rank-2 algebras,
    SymMatrix(2) included); otherwise Proj(A₊) ⋊ C₂ with C₂ generated by ι.
    """
    if algebra.rank == 2:
        return IsometryGroupClass.PROJECTIVITIES_ONLY
    return IsometryGroupClass.SEMIDIRECT_WITH_C2


def max_spectrum_size(algebra: AlgebraDescriptor) -> int:
    """max #σ(x): attained by Σ k·c_k over a Jordan frame."""
    frame = jordan_frame(algebra)
    x = Element(algebra, sum(k * c.element.coords for k, c in enumerate(frame, start=1)))
    return len(np.unique(np.round(primitive_eigenvalues(x), 9)))


def atom_coatom_criterion(algebra: AlgebraDescriptor) -> bool:
    """Is there an atom u whose complement u^⊥ is also an atom?"""
    for u in atom_spanning_set(algebra):
        values = primitive_eigenvalues(u.complement().element)
        if int(np.sum(values > 0.5)) == 1:
            return True
    return False


def two_atoms_join_to_unit(algebra: AlgebraDescriptor) -> bool:
    """Are there distinct atoms u ≠ v with u ∨ v = e?"""
    atoms = jordan_frame(algebra)
    for i, u in enumerate(atoms):
        for v in atoms[i + 1:]:
            if projection_join(u, v).rank == algebra.rank:
                return True
    return False


def simple_factors(algebra: AlgebraDescriptor) -> tuple[tuple[str, int], ...]:
    """
    Canonical multiset of simple factors: ("R", 1) per diagonal coordinate,
    ("Spin", n) for spin factors and SymMatrix(2), ("Sym", n) for n ≥ 3.
    """
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        return tuple(("R", 1) for _ in range(algebra.n))
    if variant is Variant.SPIN or (variant is Variant.SYM and algebra.n == 2):
        return (("Spin", algebra.n),)
    if variant is Variant.SYM:
        return (("Sym", algebra.n),)
    return tuple(sorted(f for part in algebra.summands for f in simple_factors(part)))


def are_jordan_isomorphic(a: AlgebraDescriptor, b: AlgebraDescriptor) -> bool:
    """Jordan isomorphic algebras, equivalently isometric Hilbert-metric cones."""
    return sorted(simple_factors(a)) == sorted(simple_factors(b))
