"""
sampling.py — Seeded random generators for elements and projections in JordanCone

All randomness flows through an explicit Rng; there is no module-level state.
The generator is numpy's PCG64 (integer based, platform independent). Uniform
floats are built by filling a 53-bit mantissa from the 64-bit output, which is
what numpy's Generator.random does.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import ortho_group

from jordan_cone.core.algebra import AlgebraDescriptor, Element, Projection
from jordan_cone.core.spectral import exp_el, spectral_decomposition
from jordan_cone.core.utils import derive_seed

_MASK64 = (1 << 64) - 1


@dataclass
class Rng:
    """A seeded PCG64 stream that counts the variates it has produced."""
    seed: int
    algorithm: str = "PCG64"
    position: int = 0
    _generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.seed = int(self.seed) & _MASK64
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    @property
    def generator(self) -> np.random.Generator:
        """Underlying numpy Generator (for scipy samplers taking random_state)."""
        return self._generator

    def _advance(self, size) -> None:
        self.position += int(np.prod(size)) if size is not None else 1

    def normal(self, size=None) -> np.ndarray:
        self._advance(size)
        return self._generator.standard_normal(size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        self._advance(size)
        return self._generator.uniform(low, high, size)

    def integers(self, low: int, high: int, size=None):
        self._advance(size)
        return self._generator.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        self._advance(n)
        return self._generator.permutation(n)

    def orthogonal(self, n: int) -> np.ndarray:
        """Haar-distributed n×n orthogonal matrix."""
        self._advance((n, n))
        return ortho_group.rvs(n, random_state=self._generator)

    def coin(self) -> bool:
        return bool(self.integers(0, 2))

    def sign(self) -> int:
        return 1 if self.coin() else -1

    def spawn(self, label: str) -> "Rng":
        """Independent child stream: seed XOR a stable hash of *label*."""
        return Rng(derive_seed(self.seed, label))

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm, "seed": self.seed, "position": self.position}


# ── Samplers ──────────────────────────────────────────────────────────────────

def sample_element(algebra: AlgebraDescriptor, rng: Rng, scale: float = 1.0) -> Element:
    """Coordinatewise standard-normal element."""
    return Element(algebra, scale * rng.normal(algebra.dim))


def sample_interior(algebra: AlgebraDescriptor, rng: Rng) -> Element:
    """exp of a coordinatewise standard-normal element; always in the cone interior."""
    return exp_el(sample_element(algebra, rng))


def sample_projection(algebra: AlgebraDescriptor, rng: Rng) -> Projection:
    """
    Threshold a random element at its median eigenvalue. A coin decides whether
    the median block itself is kept, so every nontrivial rank can appear.
    """
    decomposition = spectral_decomposition(sample_element(algebra, rng))
    expanded = np.repeat(decomposition.eigenvalues, [c.rank for c in decomposition.idempotents])
    median = float(np.median(expanded))
    keep_median = rng.coin()

    coords = np.zeros(algebra.dim)
    rank = 0
    for lam, c in zip(decomposition.eigenvalues, decomposition.idempotents):
        if lam > median or (keep_median and lam == median):
            coords += c.element.coords
            rank += c.rank
    if rank == algebra.rank:
        # Only possible with a degenerate draw; drop the top block to stay nontrivial.
        coords -= decomposition.idempotents[-1].element.coords
        rank -= decomposition.idempotents[-1].rank
    if rank == 0:
        top = decomposition.idempotents[-1]
        coords, rank = top.element.coords.copy(), top.rank
    return Projection.trusted(Element(algebra, coords), rank)
