"""
algebra.py — Algebra descriptors, elements, products and projections for JordanCone

Supported Euclidean Jordan algebras:
    Diagonal(n)   ℝⁿ with the entrywise product
    Spin(n)       H ⊕ ℝ with H = ℝⁿ, (u,α)∘(v,β) = (βu + αv, ⟨u,v⟩ + αβ)
    SymMatrix(n)  real symmetric n×n matrices, X∘Y = (XY + YX)/2
    DirectSum     componentwise product on concatenated coordinates

SymMatrix coordinates are the upper triangle in row-major order, each
off-diagonal entry stored once. The trace form is normalized so that every
primitive idempotent has trace 1 (Spin carries a factor 2).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

import numpy as np

from jordan_cone.core.errors import AlgebraMismatch, InvalidDescriptor, NotAProjection
from jordan_cone.core.tolerances import TOL_IDEM


class Variant(str, Enum):
    DIAGONAL = "diagonal"
    SPIN     = "spin"
    SYM      = "sym"
    SUM      = "sum"


_LABELS = {
    Variant.DIAGONAL: "Diagonal",
    Variant.SPIN:     "Spin",
    Variant.SYM:      "SymMatrix",
    Variant.SUM:      "DirectSum",
}

_SHORTHAND = {
    "diag":      Variant.DIAGONAL,
    "diagonal":  Variant.DIAGONAL,
    "spin":      Variant.SPIN,
    "sym":       Variant.SYM,
    "symmatrix": Variant.SYM,
    "sum":       Variant.SUM,
    "directsum": Variant.SUM,
}


# ── Descriptor ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class AlgebraDescriptor:
    """Which Euclidean Jordan algebra, and its size."""
    variant: Variant
    n: int = 0
    summands: tuple["AlgebraDescriptor", ...] = ()

    def __post_init__(self):
        try:
            variant = Variant(self.variant)
        except ValueError:
            raise InvalidDescriptor(f"unknown variant {self.variant!r}") from None
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "summands", tuple(self.summands))

        if variant is Variant.SUM:
            if not self.summands:
                raise InvalidDescriptor("a direct sum needs at least one summand")
            for part in self.summands:
                if not isinstance(part, AlgebraDescriptor):
                    raise InvalidDescriptor(f"summand {part!r} is not a descriptor")
            object.__setattr__(self, "n", len(self.summands))
            return

        if self.summands:
            raise InvalidDescriptor(f"{variant.value} takes no summands")
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise InvalidDescriptor(f"n must be an integer, got {self.n!r}")
        if self.n < 2:
            raise InvalidDescriptor(f"{_LABELS[variant]} needs n >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    # ── Constructors ──────────────────────────────────────────────────────────

    @classmethod
    def diagonal(cls, n: int) -> "AlgebraDescriptor":
        return cls(Variant.DIAGONAL, n)

    @classmethod
    def spin(cls, n: int) -> "AlgebraDescriptor":
        return cls(Variant.SPIN, n)

    @classmethod
    def sym(cls, n: int) -> "AlgebraDescriptor":
        return cls(Variant.SYM, n)

    @classmethod
    def direct_sum(cls, *parts: "AlgebraDescriptor") -> "AlgebraDescriptor":
        return cls(Variant.SUM, 0, tuple(parts))

    # ── Shape ─────────────────────────────────────────────────────────────────

    @cached_property
    def dim(self) -> int:
        """Total real dimension (length of the coordinate vector)."""
        if self.variant is Variant.DIAGONAL:
            return self.n
        if self.variant is Variant.SPIN:
            return self.n + 1
        if self.variant is Variant.SYM:
            return self.n * (self.n + 1) // 2
        return sum(part.dim for part in self.summands)

    @cached_property
    def rank(self) -> int:
        """Number of atoms in a Jordan frame (max number of distinct eigenvalues)."""
        if self.variant is Variant.SPIN:
            return 2
        if self.variant is Variant.SUM:
            return sum(part.rank for part in self.summands)
        return self.n

    @cached_property
    def offsets(self) -> tuple[tuple[int, int], ...]:
        """(start, stop) coordinate slices of the summands of a direct sum."""
        if self.variant is not Variant.SUM:
            return ((0, self.dim),)
        spans, start = [], 0
        for part in self.summands:
            spans.append((start, start + part.dim))
            start += part.dim
        return tuple(spans)

    @property
    def label(self) -> str:
        if self.variant is Variant.SUM:
            return f"DirectSum({','.join(part.label for part in self.summands)})"
        return f"{_LABELS[self.variant]}({self.n})"

    def __str__(self) -> str:
        return self.label

    # ── Serialization ─────────────────────────────────────────────────────────

    def to_dict(self) -> dict:
        data = {"variant": self.variant.value, "n": self.n}
        if self.variant is Variant.SUM:
            data["summands"] = [part.to_dict() for part in self.summands]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraDescriptor":
        if not isinstance(data, dict) or "variant" not in data:
            raise InvalidDescriptor(f"descriptor must be an object with 'variant': {data!r}")
        if data["variant"] == Variant.SUM.value:
            parts = data.get("summands") or []
            return cls.direct_sum(*(cls.from_dict(part) for part in parts))
        return cls(data["variant"], data.get("n", 0))

    @classmethod
    def parse(cls, text: str) -> "AlgebraDescriptor":
        """
        Parse the shorthand grammar: diag:3, spin:2, sym:3, sum(diag:2,spin:3).
        The labels produced by `label` (Diagonal(3), DirectSum(...)) parse too.
        """
        source = re.sub(r"\s+", "", text)
        desc, end = _parse_at(source, 0)
        if end != len(source):
            raise InvalidDescriptor(f"trailing input in algebra {text!r}")
        return desc


_NAME_RE = re.compile(r"[A-Za-z]+")
_SIZE_RE = re.compile(r":(\d+)|\((\d+)\)")


def _parse_at(source: str, pos: int) -> tuple[AlgebraDescriptor, int]:
    match = _NAME_RE.match(source, pos)
    if not match or match.group(0).lower() not in _SHORTHAND:
        raise InvalidDescriptor(f"expected an algebra name at {source[pos:]!r}")
    variant = _SHORTHAND[match.group(0).lower()]
    pos = match.end()

    if variant is Variant.SUM:
        if not source.startswith("(", pos):
            raise InvalidDescriptor("expected '(' after sum")
        pos += 1
        parts = []
        while True:
            part, pos = _parse_at(source, pos)
            parts.append(part)
            if source.startswith(",", pos):
                pos += 1
            elif source.startswith(")", pos):
                return AlgebraDescriptor.direct_sum(*parts), pos + 1
            else:
                raise InvalidDescriptor(f"expected ',' or ')' at {source[pos:]!r}")

    size = _SIZE_RE.match(source, pos)
    if not size:
        raise InvalidDescriptor(f"expected a size after {match.group(0)!r}")
    return AlgebraDescriptor(variant, int(size.group(1) or size.group(2))), size.end()


# ── Element ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Element:
    """A point of an algebra: a read-only coordinate vector tied to its descriptor."""
    algebra: AlgebraDescriptor
    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 1 or coords.shape[0] != self.algebra.dim:
            raise InvalidDescriptor(
                f"{self.algebra.label} needs {self.algebra.dim} coordinates, got shape {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise InvalidDescriptor("element coordinates must be finite")
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected an Element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"{self.algebra.label} vs {other.algebra.label}")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coords)

    def __mul__(self, scalar: float) -> "Element":
        return Element(self.algebra, float(scalar) * self.coords)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "Element":
        return Element(self.algebra, self.coords / float(scalar))

    def __repr__(self) -> str:
        return f"Element({self.algebra.label}, {np.array2string(self.coords, precision=6)})"

    def to_dict(self) -> dict:
        return {"algebra": self.algebra.to_dict(), "coords": [float(c) for c in self.coords]}

    @classmethod
    def from_dict(cls, data: dict) -> "Element":
        if not isinstance(data, dict) or "algebra" not in data or "coords" not in data:
            raise InvalidDescriptor("element must be an object with 'algebra' and 'coords'")
        return cls(AlgebraDescriptor.from_dict(data["algebra"]), data["coords"])


def require_same_algebra(*elements: Element) -> AlgebraDescriptor:
    """Return the common algebra of *elements* or raise AlgebraMismatch."""
    algebra = elements[0].algebra
    for other in elements[1:]:
        if other.algebra != algebra:
            raise AlgebraMismatch(f"{algebra.label} vs {other.algebra.label}")
    return algebra


# ── Symmetric-matrix packing ──────────────────────────────────────────────────

@lru_cache(maxsize=None)
def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n)


def sym_pack(matrix: np.ndarray) -> np.ndarray:
    """Upper triangle of a symmetric matrix, row-major."""
    rows, cols = _triu(matrix.shape[0])
    return matrix[rows, cols].copy()


def sym_unpack(coords: np.ndarray, n: int) -> np.ndarray:
    """Symmetric matrix from packed upper-triangle coordinates."""
    rows, cols = _triu(n)
    matrix = np.zeros((n, n))
    matrix[rows, cols] = coords
    matrix[cols, rows] = coords
    return matrix


# ── Coordinate kernels ────────────────────────────────────────────────────────

def _product(algebra: AlgebraDescriptor, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        return a * b
    if variant is Variant.SPIN:
        u, alpha = a[:-1], a[-1]
        v, beta = b[:-1], b[-1]
        return np.concatenate((beta * u + alpha * v, [u @ v + alpha * beta]))
    if variant is Variant.SYM:
        x = sym_unpack(a, algebra.n)
        y = sym_unpack(b, algebra.n)
        return sym_pack((x @ y + y @ x) / 2.0)
    return np.concatenate([
        _product(part, a[lo:hi], b[lo:hi])
        for part, (lo, hi) in zip(algebra.summands, algebra.offsets)
    ])


@lru_cache(maxsize=None)
def _unit_coords(algebra: AlgebraDescriptor) -> np.ndarray:
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        coords = np.ones(algebra.n)
    elif variant is Variant.SPIN:
        coords = np.zeros(algebra.n + 1)
        coords[-1] = 1.0
    elif variant is Variant.SYM:
        coords = sym_pack(np.eye(algebra.n))
    else:
        coords = np.concatenate([_unit_coords(part) for part in algebra.summands])
    coords.flags.writeable = False
    return coords


@lru_cache(maxsize=None)
def trace_weights(algebra: AlgebraDescriptor) -> np.ndarray:
    """Diagonal Gram weights w with ⟨x, y⟩ = Σ w_i x_i y_i."""
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        weights = np.ones(algebra.n)
    elif variant is Variant.SPIN:
        weights = np.full(algebra.n + 1, 2.0)
    elif variant is Variant.SYM:
        rows, cols = _triu(algebra.n)
        weights = np.where(rows == cols, 1.0, 2.0)
    else:
        weights = np.concatenate([trace_weights(part) for part in algebra.summands])
    weights.flags.writeable = False
    return weights


# ── Operations ────────────────────────────────────────────────────────────────

def unit(algebra: AlgebraDescriptor) -> Element:
    """The unit e: all-ones, (0, 1) or the identity matrix."""
    return Element(algebra, _unit_coords(algebra))


def zero(algebra: AlgebraDescriptor) -> Element:
    return Element(algebra, np.zeros(algebra.dim))


def basis(algebra: AlgebraDescriptor) -> list[Element]:
    """Standard coordinate basis."""
    return [Element(algebra, row) for row in np.eye(algebra.dim)]


def jordan_product(x: Element, y: Element) -> Element:
    algebra = require_same_algebra(x, y)
    return Element(algebra, _product(algebra, x.coords, y.coords))


def square(x: Element) -> Element:
    return Element(x.algebra, _product(x.algebra, x.coords, x.coords))


def triple_product(x: Element, y: Element, z: Element) -> Element:
    """{x,y,z} = (x∘y)∘z + (z∘y)∘x − (x∘z)∘y."""
    algebra = require_same_algebra(x, y, z)
    a, b, c = x.coords, y.coords, z.coords
    coords = (
        _product(algebra, _product(algebra, a, b), c)
        + _product(algebra, _product(algebra, c, b), a)
        - _product(algebra, _product(algebra, a, c), b)
    )
    return Element(algebra, coords)


def quadratic_rep(y: Element, x: Element) -> Element:
    """U_y x = {y,x,y} = 2 y∘(y∘x) − y²∘x."""
    algebra = require_same_algebra(y, x)
    a, b = y.coords, x.coords
    coords = 2.0 * _product(algebra, a, _product(algebra, a, b)) - _product(
        algebra, _product(algebra, a, a), b
    )
    return Element(algebra, coords)


def trace_inner_product(x: Element, y: Element) -> float:
    algebra = require_same_algebra(x, y)
    return float(np.sum(trace_weights(algebra) * x.coords * y.coords))


def trace(x: Element) -> float:
    """tr(x) = ⟨x, e⟩; equals the rank on projections."""
    return float(np.sum(trace_weights(x.algebra) * _unit_coords(x.algebra) * x.coords))


def embed(algebra: AlgebraDescriptor, index: int, part: Element) -> Element:
    """Place an element of summand *index* into the direct sum, zero elsewhere."""
    if algebra.variant is not Variant.SUM:
        raise InvalidDescriptor(f"{algebra.label} is not a direct sum")
    if part.algebra != algebra.summands[index]:
        raise AlgebraMismatch(f"{part.algebra.label} is not summand {index} of {algebra.label}")
    lo, hi = algebra.offsets[index]
    coords = np.zeros(algebra.dim)
    coords[lo:hi] = part.coords
    return Element(algebra, coords)


def component(x: Element, index: int) -> Element:
    """Summand *index* of a direct-sum element."""
    algebra = x.algebra
    if algebra.variant is not Variant.SUM:
        raise InvalidDescriptor(f"{algebra.label} is not a direct sum")
    lo, hi = algebra.offsets[index]
    return Element(algebra.summands[index], x.coords[lo:hi])


# ── Projections ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Projection:
    """An element certified idempotent, with its rank (= trace)."""
    element: Element
    rank: int
    is_atom: bool

    def __post_init__(self):
        if self.is_atom != (self.rank == 1):
            raise NotAProjection(f"atom flag {self.is_atom} disagrees with rank {self.rank}")

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.element.algebra

    @classmethod
    def trusted(cls, element: Element, rank: int) -> "Projection":
        """Wrap an element already known to be idempotent (spectral output, frames)."""
        return cls(element, rank, rank == 1)

    @classmethod
    def certify(cls, element: Element, tol: float = TOL_IDEM) -> "Projection":
        """Check ‖p∘p − p‖ ≤ tol and read the rank off the trace."""
        from jordan_cone.core.spectral import order_unit_norm

        residual = order_unit_norm(square(element) - element)
        if residual > tol:
            raise NotAProjection(f"idempotency residual {residual:.3e} exceeds {tol:.1e}")
        rank = int(round(trace(element)))
        return cls(element, rank, rank == 1)

    def complement(self) -> "Projection":
        """p^⊥ = e − p."""
        return Projection.trusted(unit(self.algebra) - self.element, self.algebra.rank - self.rank)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 or self.rank == self.algebra.rank


def jordan_frame(algebra: AlgebraDescriptor) -> list[Projection]:
    """A complete set of pairwise orthogonal atoms summing to e."""
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        rows = list(np.eye(algebra.n))
    elif variant is Variant.SPIN:
        lower = np.zeros(algebra.n + 1)
        lower[0], lower[-1] = -0.5, 0.5
        upper = np.zeros(algebra.n + 1)
        upper[0], upper[-1] = 0.5, 0.5
        rows = [lower, upper]
    elif variant is Variant.SYM:
        rows = []
        for i in range(algebra.n):
            matrix = np.zeros((algebra.n, algebra.n))
            matrix[i, i] = 1.0
            rows.append(sym_pack(matrix))
    else:
        return [
            Projection.trusted(embed(algebra, index, atom.element), 1)
            for index, part in enumerate(algebra.summands)
            for atom in jordan_frame(part)
        ]
    return [Projection.trusted(Element(algebra, row), 1) for row in rows]


def atom_spanning_set(algebra: AlgebraDescriptor) -> list[Projection]:
    """Atoms whose coordinates span the whole algebra."""
    variant = algebra.variant
    if variant is Variant.DIAGONAL:
        return jordan_frame(algebra)
    if variant is Variant.SPIN:
        rows = []
        for k in range(algebra.n):
            for sign in (1.0, -1.0):
                row = np.zeros(algebra.n + 1)
                row[k], row[-1] = 0.5 * sign, 0.5
                rows.append(row)
        return [Projection.trusted(Element(algebra, row), 1) for row in rows]
    if variant is Variant.SYM:
        atoms = jordan_frame(algebra)
        for i in range(algebra.n):
            for j in range(i + 1, algebra.n):
                vec = np.zeros(algebra.n)
                vec[i] = vec[j] = 1.0 / np.sqrt(2.0)
                atoms.append(Projection.trusted(Element(algebra, sym_pack(np.outer(vec, vec))), 1))
        return atoms
    return [
        Projection.trusted(embed(algebra, index, atom.element), 1)
        for index, part in enumerate(algebra.summands)
        for atom in atom_spanning_set(part)
    ]
